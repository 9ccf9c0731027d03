#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "opshift/cli/config.hpp"
#include "opshift/core/matrix_io.hpp"

namespace opshift {

struct NamedMatrix {
    std::string name;
    ComplexMatrix entries;
    MatrixKind kind = MatrixKind::dense;
};

/// One generated (or explicitly given) problem. The manifest records every
/// input that determines it; matrices are stored next to it in the shared
/// matrix text format.
struct Instance {
    int trial = 0;
    std::uint64_t trial_seed = 0;
    std::string layout;
    double target_gap = 0.0;
    std::vector<NamedMatrix> matrices;
    nlohmann::json manifest;

    const ComplexMatrix& get(const std::string& name) const;
};

/// Deterministic in (cfg, trial). Throws PreconditionError for infeasible
/// targets, e.g. a hypothesis-relative norm with a zero gap.
Instance generate_instance(const ExperimentConfig& cfg, int trial);

struct Check {
    std::string name;
    double value = 0.0;
    std::string relation;  // "<=", ">=", "<", ">", "=="
    double limit = 0.0;
    bool pass = false;

    bool operator==(const Check&) const = default;
};

Check make_check(std::string name, double value, const std::string& relation, double limit);

struct MethodRecord {
    std::string method;
    std::string status;  // pass | fail | not_applicable | error
    std::map<std::string, double> metrics;
    std::vector<Check> checks;
    std::string message;

    bool operator==(const MethodRecord&) const = default;
};

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    std::string status;  // pass | fail | skipped | error
    std::string route;
    std::string message;
    nlohmann::json inputs;
    std::map<std::string, double> metrics;
    std::vector<Check> checks;
    std::vector<MethodRecord> methods;

    bool operator==(const TrialRecord&) const = default;
};

struct Aggregate {
    int trials = 0;
    int passed = 0;
    int failed = 0;
    int skipped = 0;
    int errors = 0;
    double max_residual = 0.0;
    double min_margin = 0.0;
    int failure_count = 0;  // failed + errors

    bool operator==(const Aggregate&) const = default;
};

struct Timing {
    double total_seconds = 0.0;
    std::vector<double> trial_seconds;

    bool operator==(const Timing&) const = default;
};

struct CampaignReport {
    std::string kind;
    nlohmann::json config;
    nlohmann::json environment;
    std::vector<TrialRecord> records;
    Aggregate aggregate;
    Timing timing;  // the only nondeterministic part

    bool operator==(const CampaignReport&) const = default;
};

Aggregate aggregate_records(const std::vector<TrialRecord>& records);

/// Runs every trial of the configured kind. When write_files is set, the
/// manifests and matrices of each trial go under cfg.out/trials/.
CampaignReport run_experiment(const ExperimentConfig& cfg, bool write_files = true);

/// Exit status of a campaign: 0 iff no trial failed or raised.
int exit_status(const CampaignReport& r);

nlohmann::json to_json(const CampaignReport& r);
CampaignReport report_from_json(const nlohmann::json& j);

/// Fixed header of the flat per-trial table.
extern const char* const kReportCsvHeader;
void write_report_csv(std::ostream& out, const CampaignReport& r);

/// report.json and report.csv in dir.
void emit_report(const CampaignReport& r, const std::filesystem::path& dir);

}  // namespace opshift
