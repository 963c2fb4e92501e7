#include "gsobolev/builtins.hpp"
#include "gsobolev/gross.hpp"
#include "gsobolev/harness.hpp"
#include "gsobolev/sobolev.hpp"
#include "gsobolev/truncation.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace gsobolev;

namespace {

McBudget budget_of(std::size_t samples, std::uint64_t seed)
{
    McBudget b;
    b.samples = samples;
    b.rng = RngStream{seed, 0};
    return b;
}

py::dict estimate(const McEstimate& e)
{
    py::dict d;
    d["value"] = e.value;
    d["stderr"] = e.std_error;
    d["n"] = e.n;
    return d;
}

RunConfig config_of(const std::map<std::string, std::string>& options)
{
    RunConfig cfg;
    for (const auto& [k, v] : options)
        apply_config_value(cfg, k, v);
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Gaussian Sobolev checks on truncated l2";

    py::class_<WeightSequence>(m, "Weights")
        .def_static("standard", &WeightSequence::standard, py::arg("dim"))
        .def_static("geometric", &WeightSequence::geometric, py::arg("ratio"), py::arg("scale"), py::arg("dim"))
        .def_static("from_values", &WeightSequence::from_values, py::arg("values"))
        .def_property_readonly("dim", &WeightSequence::dim)
        .def("values", [](const WeightSequence& w) { return std::vector<double>(w.values().begin(), w.values().end()); })
        .def("__len__", &WeightSequence::dim)
        .def("__getitem__", [](const WeightSequence& w, int i) {
            if (i < 0 || i >= w.dim())
                throw py::index_error();
            return w[i];
        });

    py::class_<FunctionRep>(m, "Function")
        .def(py::init([](const std::string& spec, const WeightSequence& w) { return builtin::make(spec, w); }),
             py::arg("spec"), py::arg("weights"))
        .def_property_readonly("name", &FunctionRep::name)
        .def_property_readonly("dim", &FunctionRep::dim)
        .def_property_readonly("bounded", &FunctionRep::bounded)
        .def("__call__", [](const FunctionRep& f, const std::vector<double>& x) {
            if (static_cast<int>(x.size()) != f.dim())
                throw py::value_error("point has the wrong dimension");
            return f.value(x);
        })
        .def("gradient", [](const FunctionRep& f, const std::vector<double>& x) {
            if (static_cast<int>(x.size()) != f.dim())
                throw py::value_error("point has the wrong dimension");
            std::vector<double> g(x.size());
            f.value_gradient(x, g);
            return g;
        });

    m.def("sharpness_closed_form", &sharpness_closed_form, py::arg("n"), py::arg("p"), py::arg("s") = 0.0);

    m.def(
        "sobolev_norm",
        [](const FunctionRep& f, int order, double p, const WeightSequence& w, std::size_t samples, std::uint64_t seed) {
            py::gil_scoped_release nogil;
            const auto r = sobolev_norm(f, order, p, w, {}, budget_of(samples, seed));
            py::gil_scoped_acquire gil;
            py::dict d;
            d["total"] = r.total;
            d["per_order"] = r.per_order;
            d["per_order_stderr"] = r.per_order_stderr;
            d["stderr"] = r.estimator_error;
            d["n"] = r.n;
            return d;
        },
        py::arg("f"), py::arg("m"), py::arg("p"), py::arg("weights"), py::arg("samples") = 20000,
        py::arg("seed") = 1);

    m.def(
        "hs_bound_check",
        [](const FunctionRep& f, const std::vector<double>& x, const WeightSequence& w, std::size_t samples,
           std::uint64_t seed) {
            HsCheck c;
            {
                py::gil_scoped_release nogil;
                c = hs_bound_check(f, x, w, budget_of(samples, seed));
            }
            py::dict d;
            d["lhs"] = estimate(c.lhs);
            d["rhs"] = estimate(c.rhs);
            d["pass"] = c.pass;
            return d;
        },
        py::arg("f"), py::arg("x"), py::arg("weights"), py::arg("samples") = 20000, py::arg("seed") = 1);

    m.def(
        "truncation_n1",
        [](const WeightSequence& w, std::size_t inner, std::uint64_t seed) {
            py::gil_scoped_release nogil;
            return TruncationSequence::create(w, inner, RngStream{seed, 0xc0})->calibrate();
        },
        py::arg("weights"), py::arg("inner") = 100000, py::arg("seed") = 1);

    m.def("commands", &commands);

    m.def(
        "run",
        [](const std::string& command, const std::map<std::string, std::string>& options) {
            const auto cfg = config_of(options);
            py::gil_scoped_release nogil;
            return run(command, cfg).render();
        },
        py::arg("command"), py::arg("options") = std::map<std::string, std::string>{},
        "Runs a harness command and returns the rendered report (csv or json per options['format']).");
}
