#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rcdlab/models.hpp"

namespace rcdlab {

// ---------------------------------------------------------------------------
// Minimal TOML subset: [table], [[array-of-tables]], key = value with
// strings, numbers, booleans and single-line arrays. Enough for scenario
// files; rejects anything else loudly.
// ---------------------------------------------------------------------------
struct TomlValue {
    enum class Kind { String, Number, Bool, Array, Table };
    Kind kind = Kind::Table;
    std::string str;
    double num = 0.0;
    bool flag = false;
    std::vector<TomlValue> array;
    std::map<std::string, TomlValue> table;

    bool has(const std::string& key) const { return table.count(key) > 0; }
    const TomlValue& at(const std::string& key) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key) const;
};

TomlValue parse_toml(const std::string& text);
TomlValue parse_toml_file(const std::string& path);

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------
struct ScenarioStep {
    std::string op;
    TomlValue params;  // table
};

struct Scenario {
    std::string name;
    std::optional<ModelSpec> model;
    std::vector<double> resolutions;  // strictly decreasing when present
    std::vector<ScenarioStep> steps;
    std::map<std::string, double> thresholds;
};

Scenario scenario_from_toml(const TomlValue& root);
Scenario load_scenario(const std::string& path);

struct CheckOutcome {
    std::string step;
    std::string check;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

struct Report {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<CheckOutcome> checks;
    std::string error_code;  // empty on success
    std::string error_message;
    std::map<std::string, std::string> provenance;
    bool all_passed() const;
};

/// Executes the steps in order with all randomness drawn from the seed.
/// Unknown operations and malformed threshold keys fail validation before
/// any compute; hard errors short-circuit with a machine-readable code.
Report run_scenario(const Scenario& scenario, std::uint64_t seed);

std::string report_to_json(const Report& report);

/// Names of the operations the step registry knows, and the threshold keys
/// each accepts (used for validation and by the CLI listing).
std::vector<std::string> known_operations();
std::vector<std::string> operation_thresholds(const std::string& op);

/// Runs every scenario file in the directory (sorted by filename), printing
/// one line per check. Returns the number of failed checks.
int run_acceptance(const std::string& scenario_dir, std::uint64_t seed, bool verbose = true);

}  // namespace rcdlab
