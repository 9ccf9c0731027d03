#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opshift/core/types.hpp"

namespace opshift {

enum class ExperimentKind { sylvester_bench, riccati_solve, blockdiag, ssf_split, friedrichs, sharpness, homotopy };

std::string kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& name);

/// How B (or Y) is scaled against the hypothesis thresholds.
///   sylvester-bench: |Y| = value (default 1)
///   riccati-solve:   strong: |B| = |D|_E = fraction d/2;  weak: |B| = |D| = fraction d/pi;
///                    value: |B| = |D| = value
///   block kinds:     henorm: |B01| min(E-norms) = fraction d^2/4;  hbpi: |B01| = fraction d/pi;
///                    hadl / none / value: |B01| = value (default 2d)
struct NormTarget {
    std::string hypothesis;
    double fraction = 0.9;
    std::optional<double> value;
};

/// Default tolerances; every key can be overridden from the config or the command line.
std::map<std::string, double> default_tolerances();

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::sylvester_bench;
    std::uint64_t seed = 0;
    int trials = 1;
    Index n0 = 4;  // dim A (or A0)
    Index n1 = 4;  // dim C (or A1)
    double gap_lo = 1.0;
    double gap_hi = 1.0;
    double spread = 3.0;           // width of each spectrum
    std::string layout = "mixed";  // below | above | surrounding | mixed
    NormTarget target;
    std::map<std::string, double> tolerances = default_tolerances();
    std::string method = "auto";
    bool override_hypothesis = false;
    int t_count = 11;
    int grid_points = 10000;
    int regular_points = 20;
    int bump_count = 5;

    // friedrichs and sharpness
    double d = 1.0;
    std::vector<double> c_values{1.2};
    std::vector<double> b_norms{1.0};
    std::string coupling = "lorentzian";  // lorentzian | constant | sharpness
    std::string support = "gap";          // gap | line
    double epsilon = 0.01;
    int nodes = 10000;
    double truncation = 50.0;
    int eps_count = 17;
    double sharpness_margin = 0.1;

    /// Explicit matrices replacing the random generator.
    std::optional<nlohmann::json> instance;
    /// Expected metric values: name -> {value, tol}.
    std::map<std::string, std::pair<double, double>> expect;

    std::filesystem::path out = "out";
    bool write_matrices = true;

    double tol(const std::string& key) const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// "key=value" from the command line.
void apply_tolerance_override(ExperimentConfig& cfg, const std::string& assignment);

/// Matrix literal: nested real array, {"diag": [...]}, or {"re": [[...]], "im": [[...]]}.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace opshift
