#pragma once

#include "gsobolev/measure.hpp"
#include "gsobolev/montecarlo.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gsobolev {

struct WeightSpec {
    std::string kind = "standard"; // standard | geometric | values
    double ratio = 0.5;
    double scale = 0.5;
    std::vector<double> values;

    WeightSequence build(int dim) const;
};

struct RunConfig {
    int dim = 8;
    std::uint64_t seed = 1;
    std::size_t samples = 20000;
    WeightSpec weights;
    double multiplier = 4.0; // verdict tolerance in standard errors
    std::string format = "csv";
    std::string output;      // empty: stdout
    unsigned workers = 0;
    // command options, e.g. "p" -> "1,2,3"
    std::map<std::string, std::string> params;

    void validate() const;
    McBudget budget(std::uint64_t stream = 0) const;

    std::string text(const std::string& key, const std::string& def) const;
    double number(const std::string& key, double def) const;
    int integer(const std::string& key, int def) const;
    std::vector<double> numbers(const std::string& key, const std::vector<double>& def) const;
    std::vector<int> integers(const std::string& key, const std::vector<int>& def) const;
};

// "key = value" lines; '#' starts a comment. Known keys: dim, seed, samples,
// weights.kind, weights.ratio, weights.scale, weights.values, multiplier,
// format, output, workers. Other keys go to params. Throws
// std::invalid_argument on malformed lines or values.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::string& path);
// Single assignment with the same rules.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

struct ReportRow {
    std::string check_id;
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::string reference;
    std::string provenance; // closed-form, quadrature, bound, exact, golden, property, none
    std::string verdict;    // PASS, FAIL or INCONCLUSIVE
};

struct RunReport {
    std::string command;
    RunConfig config;
    std::vector<ReportRow> rows;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
    double wall_seconds = 0.0; // not part of the rendered report

    bool ok() const;
    std::size_t count(const std::string& verdict) const;
    std::string to_csv() const;
    std::string to_json() const;
    std::string render() const; // per config.format
};

nlohmann::ordered_json to_json(const McEstimate& e);
nlohmann::ordered_json config_json(const RunConfig& cfg);

const std::vector<std::string>& commands();

// Throws std::invalid_argument for an unknown command.
RunReport run(const std::string& command, const RunConfig& cfg);

} // namespace gsobolev
