#include "gsobolev/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace {

struct ParamOpt {
    const char* name;
    const char* help;
};

// command-specific options, stored in RunConfig::params
const std::map<std::string, std::vector<ParamOpt>>& param_table()
{
    static const std::map<std::string, std::vector<ParamOpt>> t{
        {"sharpness", {{"n,n-list", "comma list of n"}, {"p,p-list", "comma list of p"}, {"random_points", "extra points x ~ P"}, {"hs_points", "points for the Hilbert-Schmidt bound"}, {"hs_samples", "samples per Hilbert-Schmidt check"}}},
        {"translate-check", {{"t", "comma list of shifts"}, {"p", "comma list of p"}}},
        {"norm-ratio", {{"t", "shift"}, {"p", "exponent"}, {"m", "order"}, {"width", "bump width"}, {"centers", "comma list of bump centres"}}},
        {"adjoint-check", {{"perturbation", "constant added to the false candidate"}}},
        {"sobolev-norm", {{"function", "builtin spec, e.g. gaussian_bump:w=0.3,c1=0.1"}, {"m", "order"}, {"p", "exponent"}, {"nodes", "quadrature nodes per axis"}}},
        {"bogachev-compare", {{"function", "builtin spec"}, {"m", "comma list of orders"}, {"p", "comma list of p"}}},
        {"truncation", {{"n", "truncation index"}, {"inner", "P' samples"}, {"probes", "radial probes"}, {"k", "comma list of k"}, {"width", "bump width"}}},
        {"project", {{"function", "builtin spec"}, {"n", "comma list of n"}, {"p", "exponent"}, {"tail", "frozen tail samples"}}},
        {"chart-check", {{"probes", "Jacobian probes"}}},
        {"pipeline", {{"domain", "half_space, ball or both"}, {"function", "builtin spec"}, {"m", "order (0 or 1)"}, {"p", "exponent"}, {"epsilon", "target gap relative to the norm"}, {"tail", "frozen tail samples"}, {"inner", "P' samples"}}},
        {"all", {}},
    };
    return t;
}

struct Common {
    std::string config;
    std::optional<int> dim;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::string> weights_kind;
    std::optional<double> weights_ratio;
    std::optional<double> weights_scale;
    std::optional<std::string> weights_values;
    std::optional<double> multiplier;
    std::optional<std::string> format;
    std::optional<std::string> output;
    std::optional<unsigned> workers;
    std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config, "plain-text config file (key = value)");
    app->add_option("--dim", c.dim, "truncation dimension d");
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--samples", c.samples, "Monte Carlo samples");
    app->add_option("--weights-kind", c.weights_kind, "standard, geometric or values");
    app->add_option("--weights-ratio", c.weights_ratio, "geometric ratio");
    app->add_option("--weights-scale", c.weights_scale, "geometric scale");
    app->add_option("--weights-values", c.weights_values, "comma list of weights");
    app->add_option("--multiplier", c.multiplier, "tolerance in standard errors");
    app->add_option("--format", c.format, "csv or json");
    app->add_option("--output,-o", c.output, "report path (default stdout)");
    app->add_option("--workers", c.workers, "threads (0: all)");
    app->add_option("--set", c.sets, "extra key=value option")->take_all();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gaussian Sobolev checks on truncated l2"};
    app.require_subcommand(1);
    Common common;
    std::map<std::string, std::map<std::string, std::string>> given;
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : gsobolev::commands()) {
        auto* sub = app.add_subcommand(name);
        add_common(sub, common);
        // "key,alias" -> --key,--alias stored under key
        for (const auto& opt : param_table().at(name)) {
            const std::string spec = opt.name;
            const std::string key = spec.substr(0, spec.find(','));
            std::string flags = "--" + key;
            if (key.size() < spec.size())
                flags += ",--" + spec.substr(key.size() + 1);
            sub->add_option_function<std::string>(
                flags, [&given, name, key](const std::string& v) { given[name][key] = v; }, opt.help);
        }
        subs[name] = sub;
    }
    CLI11_PARSE(app, argc, argv);

    std::string command;
    for (const auto& [name, sub] : subs)
        if (sub->parsed())
            command = name;

    gsobolev::RunConfig cfg;
    try {
        if (!common.config.empty())
            gsobolev::apply_config_file(cfg, common.config);
        auto set = [&](const char* key, const auto& v) {
            if (v) {
                std::ostringstream ss;
                ss.precision(17);
                ss << *v;
                gsobolev::apply_config_value(cfg, key, ss.str());
            }
        };
        set("dim", common.dim);
        set("seed", common.seed);
        set("samples", common.samples);
        set("weights.kind", common.weights_kind);
        set("weights.ratio", common.weights_ratio);
        set("weights.scale", common.weights_scale);
        set("weights.values", common.weights_values);
        set("multiplier", common.multiplier);
        set("format", common.format);
        set("output", common.output);
        set("workers", common.workers);
        for (const auto& kv : common.sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
            gsobolev::apply_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        for (const auto& [k, v] : given[command])
            cfg.params[k] = v;

        const auto rep = gsobolev::run(command, cfg);
        const std::string text = rep.render();
        if (cfg.output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(cfg.output, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write '" + cfg.output + "'");
            out << text;
        }
        std::fprintf(stderr, "%s: %zu PASS, %zu FAIL, %zu INCONCLUSIVE, wall time %.1f s\n", command.c_str(),
                     rep.count("PASS"), rep.count("FAIL"), rep.count("INCONCLUSIVE"), rep.wall_seconds);
        return rep.ok() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
