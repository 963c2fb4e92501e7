#include "gsobolev/harness.hpp"

#include "gsobolev/builtins.hpp"
#include "gsobolev/charts.hpp"
#include "gsobolev/gross.hpp"
#include "gsobolev/pipeline.hpp"
#include "gsobolev/quadrature.hpp"
#include "gsobolev/sobolev.hpp"
#include "gsobolev/truncation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gsobolev {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || trim(v.substr(pos)) != "")
        throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
    return x;
}

long long parse_int(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || trim(v.substr(pos)) != "")
        throw std::invalid_argument("config: " + key + " expects an integer, got '" + v + "'");
    return x;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!trim(item).empty())
            out.push_back(trim(item));
    return out;
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

WeightSequence WeightSpec::build(int dim) const
{
    if (kind == "standard")
        return WeightSequence::standard(dim);
    if (kind == "geometric")
        return WeightSequence::geometric(ratio, scale, dim);
    if (kind == "values") {
        if (static_cast<int>(values.size()) < dim)
            throw std::invalid_argument("config: weights.values lists fewer than dim entries");
        return WeightSequence::from_values(std::vector<double>(values.begin(), values.begin() + dim));
    }
    throw std::invalid_argument("config: unknown weights.kind '" + kind + "'");
}

void RunConfig::validate() const
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("config: dim must lie in [1, " + std::to_string(kMaxDim) + "]");
    if (samples < 1)
        throw std::invalid_argument("config: samples must be positive");
    if (!(multiplier >= 2.0))
        throw std::invalid_argument("config: multiplier must be >= 2");
    if (format != "csv" && format != "json")
        throw std::invalid_argument("config: format must be csv or json");
    if (weights.kind == "geometric" && !(weights.ratio > 0.0 && weights.ratio < 1.0 && weights.scale > 0.0))
        throw std::invalid_argument("config: geometric weights need 0 < ratio < 1 and scale > 0");
    (void)weights.build(dim);
}

McBudget RunConfig::budget(std::uint64_t stream) const
{
    McBudget b;
    b.samples = samples;
    b.rng = RngStream{seed, stream};
    b.workers = workers;
    return b;
}

std::string RunConfig::text(const std::string& key, const std::string& def) const
{
    const auto it = params.find(key);
    return it == params.end() ? def : it->second;
}

double RunConfig::number(const std::string& key, double def) const
{
    const auto it = params.find(key);
    return it == params.end() ? def : parse_double(key, it->second);
}

int RunConfig::integer(const std::string& key, int def) const
{
    const auto it = params.find(key);
    return it == params.end() ? def : static_cast<int>(parse_int(key, it->second));
}

std::vector<double> RunConfig::numbers(const std::string& key, const std::vector<double>& def) const
{
    const auto it = params.find(key);
    if (it == params.end())
        return def;
    std::vector<double> out;
    for (const auto& s : split(it->second, ','))
        out.push_back(parse_double(key, s));
    if (out.empty())
        throw std::invalid_argument("config: " + key + " is empty");
    return out;
}

std::vector<int> RunConfig::integers(const std::string& key, const std::vector<int>& def) const
{
    const auto it = params.find(key);
    if (it == params.end())
        return def;
    std::vector<int> out;
    for (const auto& s : split(it->second, ','))
        out.push_back(static_cast<int>(parse_int(key, s)));
    if (out.empty())
        throw std::invalid_argument("config: " + key + " is empty");
    return out;
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value)
{
    const std::string v = trim(value);
    if (key == "dim")
        cfg.dim = static_cast<int>(parse_int(key, v));
    else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(parse_int(key, v));
    else if (key == "samples") {
        const auto s = parse_int(key, v);
        if (s < 1)
            throw std::invalid_argument("config: samples must be positive");
        cfg.samples = static_cast<std::size_t>(s);
    } else if (key == "weights.kind")
        cfg.weights.kind = v;
    else if (key == "weights.ratio")
        cfg.weights.ratio = parse_double(key, v);
    else if (key == "weights.scale")
        cfg.weights.scale = parse_double(key, v);
    else if (key == "weights.values") {
        cfg.weights.values.clear();
        for (const auto& s : split(v, ','))
            cfg.weights.values.push_back(parse_double(key, s));
    } else if (key == "multiplier")
        cfg.multiplier = parse_double(key, v);
    else if (key == "format")
        cfg.format = v;
    else if (key == "output")
        cfg.output = v;
    else if (key == "workers")
        cfg.workers = static_cast<unsigned>(parse_int(key, v));
    else if (key.empty())
        throw std::invalid_argument("config: empty key");
    else
        cfg.params[key] = v;
}

void apply_config_text(RunConfig& cfg, const std::string& text)
{
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        try {
            apply_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

bool RunReport::ok() const
{
    return count("FAIL") == 0;
}

std::size_t RunReport::count(const std::string& verdict) const
{
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [&](const ReportRow& r) { return r.verdict == verdict; }));
}

std::string RunReport::to_csv() const
{
    std::string out = "check_id,value,stderr,n,reference,provenance,verdict\n";
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s)
            q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    for (const auto& r : rows)
        out += quote(r.check_id) + "," + num(r.value) + "," + num(r.std_error) + "," + std::to_string(r.n) + "," +
               quote(r.reference) + "," + r.provenance + "," + r.verdict + "\n";
    return out;
}

nlohmann::ordered_json to_json(const McEstimate& e)
{
    nlohmann::ordered_json j;
    j["value"] = e.value;
    j["stderr"] = e.std_error;
    j["n"] = e.n;
    return j;
}

nlohmann::ordered_json config_json(const RunConfig& cfg)
{
    nlohmann::ordered_json j;
    j["dim"] = cfg.dim;
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    j["weights"] = {{"kind", cfg.weights.kind}, {"ratio", cfg.weights.ratio}, {"scale", cfg.weights.scale}};
    if (cfg.weights.kind == "values")
        j["weights"]["values"] = cfg.weights.values;
    j["multiplier"] = cfg.multiplier;
    j["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.params)
        j["params"][k] = v;
    return j;
}

std::string RunReport::to_json() const
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config"] = config_json(config);
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["check_id"] = r.check_id;
        row["value"] = r.value;
        row["stderr"] = r.std_error;
        row["n"] = r.n;
        row["reference"] = r.reference;
        row["provenance"] = r.provenance;
        row["verdict"] = r.verdict;
        j["rows"].push_back(row);
    }
    for (const auto& [k, v] : extra.items())
        j[k] = v;
    j["summary"] = {{"pass", count("PASS")}, {"fail", count("FAIL")}, {"inconclusive", count("INCONCLUSIVE")}};
    return j.dump(2) + "\n";
}

std::string RunReport::render() const
{
    return config.format == "json" ? to_json() : to_csv();
}

namespace {

struct Rows {
    std::vector<ReportRow>& v;
    double k;

    void add(std::string id, double value, double se, std::size_t n, std::string ref, std::string prov, bool pass)
    {
        v.push_back({std::move(id), value, se, n, std::move(ref), std::move(prov), pass ? "PASS" : "FAIL"});
    }
    void add(std::string id, const McEstimate& e, std::string ref, std::string prov, bool pass)
    {
        add(std::move(id), e.value, e.std_error, e.n, std::move(ref), std::move(prov), pass);
    }
    // |e - ref| <= k se, with a relative floor for exact estimates
    bool near(double value, double se, double ref) const
    {
        return std::abs(value - ref) <= k * se + 1e-12 * std::max(1.0, std::abs(ref));
    }
    void against(std::string id, const McEstimate& e, double ref, std::string prov)
    {
        add(std::move(id), e, num(ref), std::move(prov), near(e.value, e.std_error, ref));
    }
};

Point head_point(int d, std::initializer_list<double> head)
{
    Point x(static_cast<std::size_t>(d), 0.0);
    std::size_t i = 0;
    for (double v : head)
        if (i < x.size())
            x[i++] = v;
    return x;
}

std::string mi_name(const MultiIndex& mi)
{
    return "D" + mi.to_string();
}

// ---------------------------------------------------------------- sharpness

void cmd_sharpness(const RunConfig& cfg, Rows& out, nlohmann::ordered_json&)
{
    const auto n_list = cfg.integers("n", {1, 4, 16});
    const auto p_list = cfg.numbers("p", {1.0, 2.0, 3.0});
    const int dim = std::max(cfg.dim, *std::max_element(n_list.begin(), n_list.end()));
    const auto w = cfg.weights.build(dim);
    const auto rows = sharpness_experiment(n_list, p_list, w, cfg.budget(0x5a), cfg.integer("random_points", 0));
    for (const auto& r : rows)
        out.against("sharpness/p=" + num(r.p) + "/n=" + std::to_string(r.n) + "/x=" + r.point +
                        (r.point == "0" ? "" : "/s=" + num(r.s)),
                    r.mc, r.closed_form, "closed-form");
    for (double p : p_list) {
        std::vector<const SharpnessRow*> at0;
        for (const auto& r : rows)
            if (r.p == p && r.point == "0")
                at0.push_back(&r);
        std::sort(at0.begin(), at0.end(), [](auto* a, auto* b) { return a->n < b->n; });
        for (std::size_t i = 1; i < at0.size(); ++i) {
            const auto& a = *at0[i - 1];
            const auto& b = *at0[i];
            const std::string pair = "n=" + std::to_string(a.n) + "->" + std::to_string(b.n);
            const double ratio = b.mc.value / a.mc.value;
            const double rse = ratio * std::hypot(a.mc.std_error / a.mc.value, b.mc.std_error / b.mc.value);
            const std::string base = "sharpness/p=" + num(p) + "/";
            if (p < 2.0 && b.n == 4 * a.n)
                out.add(base + "growth/" + pair, ratio, rse, b.mc.n, ">= 1.8", "property", ratio >= 1.8);
            if (p == 1.0 && b.n == 4 * a.n)
                out.add(base + "ratio/" + pair, ratio, rse, b.mc.n, "2 +- 10%", "closed-form",
                        std::abs(ratio - 2.0) <= 0.2);
            if (p >= 2.0) {
                const double diff = b.mc.value - a.mc.value;
                const double dse = std::hypot(a.mc.std_error, b.mc.std_error);
                out.add(base + "nonincreasing/" + pair, diff, dse, b.mc.n, "<= 0", "property",
                        diff <= out.k * dse + 1e-12);
            }
        }
    }

    // first-order Hilbert-Schmidt bound at random points
    const int hs_points = cfg.integer("hs_points", 20);
    if (hs_points <= 0)
        return;
    const McBudget hb = cfg.budget(0x5b);
    const McBudget hs_budget{static_cast<std::size_t>(cfg.integer("hs_samples", 20000)), hb.rng, hb.batches, hb.workers};
    const std::vector<FunctionRep> bounded{builtin::gaussian_bump(dim, head_point(dim, {0.1, 0.05}), 0.3, 3),
                                           builtin::radial_bump(dim, {}, 0.1, 0.6),
                                           builtin::step(dim, 1, -0.1, 0.2),
                                           builtin::sgn_sum(w, 4),
                                           builtin::indicator_halfspace(dim, 0, 0.1)};
    const auto xs = sample(ProductGaussian::P(w), RngStream{cfg.seed, 0x5c}, static_cast<std::size_t>(hs_points));
    std::uint64_t stream = 0;
    for (const auto& f : bounded)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            McBudget b = hs_budget;
            b.rng = hs_budget.rng.substream(stream++);
            const auto c = hs_bound_check(f, xs.row(j), w, b);
            out.add("sharpness/hs_bound/" + f.name() + "/x=" + std::to_string(j), c.lhs, "<= " + num(c.rhs.value),
                    "bound", c.pass);
        }
}

// ---------------------------------------------------------- translate-check

std::vector<FunctionRep> translation_family(int d)
{
    return {builtin::gaussian_bump(d, head_point(d, {0.1, 0.05}), 0.25, std::min(d, 3)),
            builtin::radial_bump(d, head_point(d, {0.05}), 0.1, 0.6),
            builtin::monomial(d, {0, std::min(1, d - 1)}),
            builtin::exp_coord(d, 0, 0.5),
            builtin::step(d, 0, -0.2, 0.3)};
}

void cmd_translate(const RunConfig& cfg, Rows& out, nlohmann::ordered_json&)
{
    const auto w = cfg.weights.build(cfg.dim);
    const auto ts = cfg.numbers("t", {0.1, 0.25});
    const auto ps = cfg.numbers("p", {1.0, 2.0});
    const auto fs = translation_family(cfg.dim);
    std::uint64_t stream = 0x70;
    for (const auto& f : fs)
        for (double t : ts)
            for (double p : ps) {
                const auto c = translation_pushforward_check(f, t, p, w, cfg.budget(stream++));
                const double ratio = c.lhs.value / c.rhs.value;
                const double se = c.difference.std_error / std::abs(c.rhs.value);
                out.add("translate-check/" + f.name() + "/t=" + num(t) + "/p=" + num(p), ratio, se, c.lhs.n, "1",
                        "exact", std::abs(c.difference.value) <= out.k * c.difference.std_error + 1e-12 * std::abs(c.rhs.value));
            }
}

// --------------------------------------------------------------- norm-ratio

void cmd_norm_ratio(const RunConfig& cfg, Rows& out, nlohmann::ordered_json&)
{
    const auto w = cfg.weights.build(cfg.dim);
    const double t = cfg.number("t", 0.25);
    const double p = cfg.number("p", 2.0);
    const double wd = cfg.number("width", 0.15);
    const int m = cfg.integer("m", 0);
    const auto centers = cfg.numbers("centers", {-0.6, -0.3, 0.0, 0.3, 0.6});
    const double a = w[0];
    const double v = wd * wd / p + a * a;
    std::vector<double> vals;
    bool monotone = true;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double c = centers[i];
        const auto u = builtin::gaussian_bump(cfg.dim, head_point(cfg.dim, {c}), wd, 1);
        const auto r = translation_norm_ratio(u, t, p, w, cfg.budget(0x80), m);
        const std::string id = "norm-ratio/c=" + num(c);
        if (m == 0) {
            const double exact = std::exp(((c * c) - (c - t) * (c - t)) / (2 * v * p));
            out.against(id, r, exact, "closed-form");
        } else {
            out.add(id, r, "", "none", std::isfinite(r.value));
        }
        if (!vals.empty() && !(r.value > vals.back()))
            monotone = false;
        vals.push_back(r.value);
    }
    const double spread = vals.back() / vals.front();
    out.add("norm-ratio/spread", spread, 0.0, 0, ">= 5 and monotone", "property", monotone && spread >= 5.0);
}

// ------------------------------------------------------------ adjoint-check

void cmd_adjoint(const RunConfig& cfg, Rows& out, nlohmann::ordered_json&)
{
    const int d = cfg.dim;
    if (d < 3)
        throw std::invalid_argument("adjoint-check: dim must be at least 3");
    const auto w = cfg.weights.build(d);
    const auto tests = standard_test_battery(d);
    const std::vector<FunctionRep> fs{product(builtin::monomial(d, {0}), builtin::gaussian_bump(d, {}, 0.4, 2)),
                                      builtin::gaussian_bump(d, head_point(d, {0.1, 0.05}), 0.3, 3),
                                      builtin::radial_bump(d, {}, 0.1, 0.6),
                                      builtin::step(d, 1, -0.1, 0.2),
                                      builtin::monomial(d, {0, 1})};
    const double delta = cfg.number("perturbation", 0.1);
    std::uint64_t stream = 0x90;
    for (const auto& f : fs)
        for (const MultiIndex mi : {MultiIndex{0}, MultiIndex{1}, MultiIndex{0, 1}}) {
            const auto b = cfg.budget(stream++);
            const auto g = derivative(f, mi);
            auto zmax = [](const ResidualReport& r) {
                double z = 0.0;
                for (const auto& e : r.residuals)
                    z = std::max(z, e.std_error > 0.0 ? std::abs(e.value) / e.std_error
                                                      : (e.value == 0.0 ? 0.0 : HUGE_VAL));
                return z;
            };
            const auto good = weak_derivative_residual(f, g, mi, tests, w, {}, b);
            const auto bad = weak_derivative_residual(f, g + constant(d, delta), mi, tests, w, {}, b);
            const std::string base = "adjoint-check/" + f.name() + "/" + mi_name(mi);
            out.add(base + "/analytic", zmax(good), 0.0, b.samples, "all |r|/se <= 4", "exact", good.all_pass);
            out.add(base + "/perturbed", zmax(bad), 0.0, b.samples, "some |r|/se > 4", "exact", !bad.all_pass);
        }
}

// ------------------------------------------------------------- sobolev-norm

void cmd_sobolev(const RunConfig& cfg, Rows& out, nlohmann::ordered_json& extra)
{
    const auto w = cfg.weights.build(cfg.dim);
    const auto f = builtin::make(cfg.text("function", "bump_x1:c1=0.2,w=0.3,n=2"), w);
    const int m = cfg.integer("m", 1);
    const double p = cfg.number("p", 2.0);
    const auto rep = sobolev_norm(f, m, p, w, {}, cfg.budget(0xa0));
    for (int k = 0; k <= m; ++k)
        out.add("sobolev-norm/order=" + std::to_string(k), rep.per_order[static_cast<std::size_t>(k)],
                rep.per_order_stderr[static_cast<std::size_t>(k)], rep.n, "", "none",
                std::isfinite(rep.per_order[static_cast<std::size_t>(k)]));
    const std::uint64_t deps = f.deps_mask();
    if (deps != 0 && deps < (1u << 4)) {
        int q = 0;
        while ((deps >> q) != 0)
            ++q;
        const auto mu = ProductGaussian::marginal(w, 0, q);
        const double T = quadrature_oracle(
            [&](std::span<const double> y) {
                Point x(static_cast<std::size_t>(cfg.dim), 0.0);
                std::copy(y.begin(), y.end(), x.begin());
                double s = 0.0;
                for (int k = 0; k <= m; ++k)
                    s += weighted_derivative_sum(f, k, p, w, x);
                return s;
            },
            mu, cfg.integer("nodes", 40));
        out.against("sobolev-norm/total", McEstimate{rep.total, rep.estimator_error, rep.n}, std::pow(T, 1.0 / p),
                    "quadrature");
    } else {
        out.add("sobolev-norm/total", rep.total, rep.estimator_error, rep.n, "", "none", std::isfinite(rep.total));
    }
    extra["norm"] = to_json(McEstimate{rep.total, rep.estimator_error, rep.n});
}

// --------------------------------------------------------- bogachev-compare

void cmd_bogachev(const RunConfig& cfg, Rows& out, nlohmann::ordered_json&)
{
    const int d = cfg.dim;
    const auto w = cfg.weights.build(d);
    const auto f = cfg.params.count("function")
                       ? builtin::make(cfg.text("function", ""), w)
                       : product(builtin::radial_bump(d, {}, 0.1, 0.6), builtin::monomial(d, {0}) + constant(d, 0.5));
    for (int m : cfg.integers("m", {1, 2}))
        for (double p : cfg.numbers("p", {1.0, 1.5, 2.0, 3.0, 4.0})) {
            const auto c = bogachev_norm_compare(f, m, p, w, cfg.budget(0xb0));
            const std::string ref = p <= 2.0 ? "<= " + num((m + 1) * c.mixed_outside.value)
                                             : ">= " + num(c.mixed_outside.value);
            out.add("bogachev-compare/m=" + std::to_string(m) + "/p=" + num(p), c.mixed_inside, ref, "bound", c.verdict);
        }
}

// --------------------------------------------------------------- truncation

void cmd_truncation(const RunConfig& cfg, Rows& out, nlohmann::ordered_json& extra)
{
    const int d = cfg.dim;
    const auto w = cfg.weights.build(d);
    const auto seq = TruncationSequence::create(w, static_cast<std::size_t>(cfg.integer("inner", 100000)),
                                                RngStream{cfg.seed, 0xc0});
    const int n1 = seq->calibrate();
    if (cfg.weights.kind == "standard")
        out.add("truncation/N1", n1, 0.0, seq->inner_samples(), "2", "golden", n1 == 2);
    else
        out.add("truncation/N1", n1, 0.0, seq->inner_samples(), "", "none", n1 > 0);
    const auto mass = seq->pprime_mass(n1);
    out.add("truncation/pprime_mass/K_N1", mass.back(), ">= 0.8", "bound",
            mass.back().value >= 0.8 + out.k * mass.back().std_error);
    extra["N1"] = n1;

    const int n = cfg.integer("n", 1);
    const double outer = n + 2.0 * n1;
    const auto& fam = seq->family();

    // range and plateau dichotomy on radial probes
    const std::size_t nprobe = static_cast<std::size_t>(cfg.integer("probes", 1000));
    const auto dirs = sample(ProductGaussian::Pprime(w), RngStream{cfg.seed, 0xc1}, nprobe);
    std::size_t out_of_range = 0, inside = 0, outside = 0, shell = 0, broken = 0;
    std::vector<Point> plateau_pts;
    for (std::size_t j = 0; j < nprobe; ++j) {
        Point x(dirs.row(j).begin(), dirs.row(j).end());
        const double r = std::sqrt(fam.norm_sq(x));
        const double rho = (outer + 1.0) * (static_cast<double>(j) + 0.5) / static_cast<double>(nprobe);
        for (auto& v : x)
            v *= rho / r;
        const double X = seq->xn_value(n, x);
        if (!(X >= 0.0 && X <= 1.0))
            ++out_of_range;
        if (fam.contains(x, n)) {
            ++inside;
            broken += X != 1.0;
            plateau_pts.push_back(x);
        } else if (!fam.contains(x, outer)) {
            ++outside;
            broken += X != 0.0;
            plateau_pts.push_back(x);
        } else {
            ++shell;
        }
    }
    out.add("truncation/range", static_cast<double>(out_of_range), 0.0, nprobe, "0 outside [0,1]", "exact",
            out_of_range == 0);
    out.add("truncation/plateau", static_cast<double>(broken), 0.0, inside + outside,
            "0 violations (" + std::to_string(inside) + " in K_n, " + std::to_string(outside) + " outside K_n+2N1, " +
                std::to_string(shell) + " in the shell)",
            "exact", broken == 0 && inside > 0 && outside > 0);

    // derivative bounds at shell probes
    std::vector<double> levels;
    for (int i = 0; i <= 10; ++i)
        levels.push_back(0.25 + 0.05 * i);
    std::vector<Point> directions{head_point(d, {1.0}), head_point(d, {0.0, 1.0}), Point(static_cast<std::size_t>(d), 1.0)};
    const auto rnd = sample(ProductGaussian::P(w), RngStream{cfg.seed, 0xc2}, 3);
    for (std::size_t j = 0; j < rnd.size(); ++j)
        directions.emplace_back(rnd.row(j).begin(), rnd.row(j).end());
    const auto probes = seq->shell_probes(n, levels, directions);
    for (int k : {1, 2})
        for (double p : {1.0, 2.0}) {
            std::size_t conclusive = 0;
            for (std::size_t j = 0; j < probes.size(); ++j) {
                const auto row = seq->derivative_bound(n, k, p, probes[j], j);
                const std::string id = "truncation/bound/k=" + std::to_string(k) + "/p=" + num(p) + "/probe=" +
                                       std::to_string(j);
                out.v.push_back({id, row.lhs, row.lhs_stderr, seq->inner_samples(), "<= " + num(row.rhs), "bound",
                                 row.verdict});
                conclusive += row.verdict != "INCONCLUSIVE";
            }
            // same statistic for g_{n+N1} at the same points
            for (std::size_t j = 0; j < probes.size(); ++j) {
                const auto row = seq->derivative_bound(n, k, p, probes[j], j, true);
                const std::string id = "truncation/bound_g/k=" + std::to_string(k) + "/p=" + num(p) + "/probe=" +
                                       std::to_string(j);
                out.v.push_back({id, row.lhs, row.lhs_stderr, seq->inner_samples(), "<= " + num(row.rhs), "bound",
                                 row.verdict});
            }
            double worst = 0.0;
            for (std::size_t j = 0; j < plateau_pts.size(); j += 10)
                worst = std::max(worst, seq->derivative_bound(n, k, p, plateau_pts[j], j).lhs);
            out.add("truncation/bound/k=" + std::to_string(k) + "/p=" + num(p) + "/plateaus", worst, 0.0,
                    (plateau_pts.size() + 9) / 10, "0", "exact", worst == 0.0);
        }

    // ||X_k f - f|| for the gaussian bump
    const auto f = builtin::gaussian_bump(d, Point(static_cast<std::size_t>(d), 0.0), cfg.number("width", 0.5), d);
    const auto ks = cfg.integers("k", {1, 2, 3});
    const auto b = cfg.budget(0xc3);
    const auto norm = sobolev_norm(f, 1, 2.0, w, {}, b);
    const auto rows = truncate_function(f, ks, 1, 2.0, *seq, {}, b);
    bool decreasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i].diff;
        out.add("truncation/golden/k=" + std::to_string(rows[i].k), r.total, r.estimator_error, r.n, "", "none",
                std::isfinite(r.total));
        if (i > 0) {
            const auto& q = rows[i - 1].diff;
            decreasing = decreasing && r.total <= q.total + out.k * (r.estimator_error + q.estimator_error);
        }
    }
    out.add("truncation/golden/decreasing", decreasing ? 1.0 : 0.0, 0.0, rows.size(), "1", "property", decreasing);
    const double last = rows.back().diff.total;
    out.add("truncation/golden/final", last / norm.total, rows.back().diff.estimator_error / norm.total, b.samples,
            "< 0.01 (relative)", "bound", last < 1e-2 * norm.total);
}

// ------------------------------------------------------------------ project

void cmd_project(const RunConfig& cfg, Rows& out, nlohmann::ordered_json&)
{
    const int d = cfg.dim;
    const auto w = cfg.weights.build(d);
    const auto f = builtin::make(cfg.text("function", "gaussian_bump:c1=0.1,c2=0.05,w=0.2"), w);
    const double p = cfg.number("p", 2.0);
    const std::size_t tail = static_cast<std::size_t>(cfg.integer("tail", 256));
    std::vector<int> grid;
    for (int n = 1; n <= d; ++n)
        grid.push_back(n);
    grid = cfg.integers("n", grid);
    const auto rows = projection_convergence(f, grid, p, w, cfg.budget(0xd0), tail);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string base = "project/n=" + std::to_string(r.n);
        out.add(base + "/gap", r.lp_gap, "", "none", std::isfinite(r.lp_gap.value));
        out.add(base + "/contraction", r.norm_excess, "<= 0", "bound", r.contraction);
        out.add(base + "/moment", r.moment_gap, "", "none", std::isfinite(r.moment_gap.value));
        if (i > 0) {
            const auto& q = rows[i - 1].lp_gap;
            out.add(base + "/monotone", r.lp_gap.value - q.value, std::hypot(r.lp_gap.std_error, q.std_error), r.lp_gap.n,
                    "<= 0", "property",
                    r.lp_gap.value <= q.value + out.k * (r.lp_gap.std_error + q.std_error) + 1e-12);
        }
        if (r.n == d)
            out.add("project/full", r.lp_gap, "0", "exact", r.lp_gap.value <= out.k * r.lp_gap.std_error);
    }
    if (d >= 2) {
        const int n = d / 2;
        const Point x0(static_cast<std::size_t>(d), 0.0);
        const double sd_lin = w[n] / std::sqrt(static_cast<double>(tail));
        const auto fl = projected(builtin::monomial(d, {n}), n, w, tail, RngStream{cfg.seed, 0xd1});
        out.against("project/oracle/linear_tail", McEstimate{fl.value(x0), sd_lin, tail}, 0.0, "closed-form");
        const double a2 = w[n] * w[n];
        const auto fe = projected(builtin::exp_coord(d, n, 1.0), n, w, tail, RngStream{cfg.seed, 0xd2});
        const double sd_exp = std::sqrt((std::exp(2 * a2) - std::exp(a2)) / static_cast<double>(tail));
        out.against("project/oracle/exp_tail", McEstimate{fe.value(x0), sd_exp, tail}, std::exp(a2 / 2), "closed-form");
    }
}

// -------------------------------------------------------------- chart-check

void cmd_charts(const RunConfig& cfg, Rows& out, nlohmann::ordered_json&)
{
    const int d = cfg.dim;
    if (d < 4)
        throw std::invalid_argument("chart-check: dim must be at least 4");
    const auto w = cfg.weights.build(d);
    auto e = [d](int i, double s) {
        Point p(static_cast<std::size_t>(d), 0.0);
        p[static_cast<std::size_t>(i)] = s;
        return p;
    };
    struct Named {
        std::string name;
        BoundaryChart chart;
    };
    std::vector<Named> charts;
    for (int i : {0, 1})
        charts.push_back({"ball/i0=" + std::to_string(i + 1),
                          BoundaryChart::make(Domain::ball(e(i, -0.9), 1.0), e(i, 0.1), w)});
    const auto annulus = Domain::annulus(Point(static_cast<std::size_t>(d), 0.0), 0.3, 0.9);
    charts.push_back({"annulus", BoundaryChart::make(annulus, e(0, 0.3), w, 0.2, 0.18)});

    const auto budget = cfg.budget(0xe0);
    std::uint64_t stream = 0xe1;
    for (const auto& [name, ch] : charts) {
        const std::string base = "chart-check/" + name;
        const auto jb = jacobian_bounds_check(ch, static_cast<std::size_t>(cfg.integer("probes", 1000)),
                                              RngStream{cfg.seed, stream++});
        const auto& bd = ch.bounds();
        out.add(base + "/roundtrip", jb.max_roundtrip, 0.0, 0, "<= 1e-8", "exact", jb.max_roundtrip <= 1e-8);
        out.add(base + "/jacobian_product", jb.max_product_error, 0.0, 0, "<= 1e-8", "exact",
                jb.max_product_error <= 1e-8);
        out.add(base + "/log_jacobian_min", std::min(jb.log_j_min, jb.log_j1_min), 0.0, 0, ">= " + num(bd.log_C1),
                "bound", std::min(jb.log_j_min, jb.log_j1_min) >= bd.log_C1);
        out.add(base + "/log_jacobian_max", std::max(jb.log_j_max, jb.log_j1_max), 0.0, 0, "<= " + num(bd.log_C2),
                "bound", std::max(jb.log_j_max, jb.log_j1_max) <= bd.log_C2);
        out.add(base + "/halfspace_transport", jb.halfspace_transport ? 1.0 : 0.0, 0.0, 0, "1", "exact",
                jb.halfspace_transport);

        Point c = ch.x0();
        c[2] += 0.05;
        std::vector<FunctionRep> fs{constant(d, 1.0), builtin::gaussian_bump(d, ch.x0(), 0.2, d)};
        if (ch.domain().kind() == Domain::Kind::Ball)
            fs.push_back(builtin::monomial(d, {ch.i0() == 0 ? 1 : 0}));
        for (const auto& f : fs) {
            const auto cv = change_of_variables_check(ch, f, budget);
            out.add(base + "/change_of_variables/" + f.name(), cv.difference, "0", "exact", cv.pass);
        }

        const auto f = builtin::gaussian_bump(d, c, 0.3, d) + builtin::monomial(d, {0, 1});
        std::vector<Point> hat;
        for (const Point& x : ch.sample_ball(0.7 * ch.r1(), 20, RngStream{cfg.seed, stream++}))
            hat.push_back(ch.psi(x));
        double e1 = 0.0, e2 = 0.0;
        for (int k = 0; k < d; ++k)
            e1 = std::max(e1, chain_rule_check(ch, f, MultiIndex{k}, hat).max_rel_error);
        for (const MultiIndex& mi : {MultiIndex{0, 0}, MultiIndex{0, 1}, MultiIndex{1, 1}, MultiIndex{2, 3}})
            e2 = std::max(e2, chain_rule_check(ch, f, mi, hat).max_rel_error);
        out.add(base + "/chain_rule/order=1", e1, 0.0, hat.size(), "<= 1e-5", "exact", e1 <= 1e-5);
        out.add(base + "/chain_rule/order=2", e2, 0.0, hat.size(), "<= 1e-4", "exact", e2 <= 1e-4);

        const auto g = builtin::radial_bump(d, ch.x0(), 0.05, 0.5 * ch.r1());
        for (int m : {1, 2}) {
            const auto ne = norm_equivalence_check(ch, g, m, 2.0, budget);
            const std::string id = base + "/norm_equivalence/m=" + std::to_string(m);
            const double ratio = ne.norm_H.total / ne.norm_O.total;
            out.add(id, ratio, 0.0, ne.norm_O.n, "in [exp(-" + num(ne.log_C_tilde) + "), exp(" + num(ne.log_C_tilde) + ")]",
                    "bound", ne.verdict);
        }
    }
    const auto nc = annulus_nonconvexity(annulus);
    out.add("chart-check/annulus/nonconvex", nc.pass ? 1.0 : 0.0, 0.0, 0, "1", "exact", nc.pass);
}

// ----------------------------------------------------------------- pipeline

void cmd_pipeline(const RunConfig& cfg, Rows& out, nlohmann::ordered_json& extra)
{
    const int d = cfg.dim;
    const auto w = cfg.weights.build(d);
    const std::string dom = cfg.text("domain", "half_space");
    std::vector<std::string> domains = dom == "both" ? std::vector<std::string>{"half_space", "ball"}
                                                     : std::vector<std::string>{dom};
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    for (const auto& name : domains) {
        PipelineConfig pc;
        if (name == "half_space")
            pc = golden_halfspace(d, w, cfg.seed, cfg.samples);
        else if (name == "ball")
            pc = golden_ball(d, w, cfg.seed, cfg.samples);
        else
            throw std::invalid_argument("pipeline: domain must be half_space, ball or both");
        pc.budget.workers = cfg.workers;
        if (cfg.params.count("function"))
            pc.f = builtin::make(cfg.text("function", ""), w);
        pc.m = cfg.integer("m", pc.m);
        pc.p = cfg.number("p", pc.p);
        pc.epsilon = cfg.number("epsilon", pc.epsilon);
        pc.tail_samples = static_cast<std::size_t>(cfg.integer("tail", static_cast<int>(pc.tail_samples)));
        pc.inner_samples = static_cast<std::size_t>(cfg.integer("inner", static_cast<int>(pc.inner_samples)));
        const auto rep = approximate(pc);
        const std::string base = "pipeline/" + name;
        for (const auto& s : rep.sequence)
            out.add(base + "/k=" + std::to_string(s.k), s.gap, s.std_error, pc.budget.samples, "", "none",
                    std::isfinite(s.gap));
        out.add(base + "/monotone", rep.monotone ? 1.0 : 0.0, 0.0, rep.sequence.size(), "1", "property", rep.monotone);
        for (const auto& s : rep.stages)
            out.add(base + "/stage/" + s.name, s.gap, s.std_error, pc.budget.samples, "finite", "none",
                    std::isfinite(s.gap));
        out.add(base + "/total", rep.total_gap / rep.norm_f, rep.total_stderr / rep.norm_f, pc.budget.samples,
                "< " + num(pc.epsilon) + " (relative)", "bound", rep.reached);

        nlohmann::ordered_json j;
        j["domain"] = name;
        j["norm_f"] = rep.norm_f;
        j["N1"] = rep.N1;
        j["stages"] = nlohmann::ordered_json::array();
        for (const auto& s : rep.stages)
            j["stages"].push_back({{"name", s.name}, {"gap", s.gap}, {"stderr", s.std_error}});
        j["sequence"] = nlohmann::ordered_json::array();
        for (const auto& s : rep.sequence)
            j["sequence"].push_back({{"k", s.k}, {"n", s.n}, {"gap", s.gap}, {"stderr", s.std_error}});
        j["total_gap"] = rep.total_gap;
        j["total_stderr"] = rep.total_stderr;
        j["epsilon"] = pc.epsilon;
        all.push_back(j);
    }
    if (all.size() == 1) {
        for (const auto& [k, v] : all[0].items())
            extra[k] = v;
    } else {
        extra["pipelines"] = all;
    }
}

using Handler = void (*)(const RunConfig&, Rows&, nlohmann::ordered_json&);

const std::vector<std::pair<std::string, Handler>>& handlers()
{
    static const std::vector<std::pair<std::string, Handler>> h{
        {"sharpness", cmd_sharpness},     {"translate-check", cmd_translate},   {"norm-ratio", cmd_norm_ratio},
        {"adjoint-check", cmd_adjoint},   {"sobolev-norm", cmd_sobolev},        {"bogachev-compare", cmd_bogachev},
        {"truncation", cmd_truncation},   {"project", cmd_project},             {"chart-check", cmd_charts},
        {"pipeline", cmd_pipeline}};
    return h;
}

} // namespace

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, h] : handlers())
            v.push_back(name);
        v.push_back("all");
        return v;
    }();
    return names;
}

RunReport run(const std::string& command, const RunConfig& cfg)
{
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.command = command;
    rep.config = cfg;
    Rows rows{rep.rows, cfg.multiplier};
    bool found = false;
    for (const auto& [name, h] : handlers()) {
        if (command == name) {
            h(cfg, rows, rep.extra);
            found = true;
        } else if (command == "all") {
            nlohmann::ordered_json sub = nlohmann::ordered_json::object();
            h(cfg, rows, sub);
            if (!sub.empty())
                rep.extra[name] = sub;
            found = true;
        }
    }
    if (!found)
        throw std::invalid_argument("unknown command '" + command + "'");
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace gsobolev
