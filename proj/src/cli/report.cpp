#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "opshift/cli/campaign.hpp"

namespace opshift {

namespace {

nlohmann::json number(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    if (std::isnan(x)) {
        return "nan";
    }
    return x > 0 ? "inf" : "-inf";
}

double number_from(const nlohmann::json& j)
{
    if (j.is_number()) {
        return j.get<double>();
    }
    const auto s = j.get<std::string>();
    if (s == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    if (s == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    throw ParseError("report: bad number '" + s + "'");
}

nlohmann::json metrics_json(const std::map<std::string, double>& m)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : m) {
        j[k] = number(v);
    }
    return j;
}

std::map<std::string, double> metrics_from(const nlohmann::json& j)
{
    std::map<std::string, double> m;
    for (const auto& [k, v] : j.items()) {
        m[k] = number_from(v);
    }
    return m;
}

nlohmann::json checks_json(const std::vector<Check>& checks)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : checks) {
        j.push_back({{"name", c.name},
                     {"value", number(c.value)},
                     {"relation", c.relation},
                     {"limit", number(c.limit)},
                     {"pass", c.pass}});
    }
    return j;
}

std::vector<Check> checks_from(const nlohmann::json& j)
{
    std::vector<Check> out;
    for (const auto& c : j) {
        Check k;
        k.name = c.at("name").get<std::string>();
        k.value = number_from(c.at("value"));
        k.relation = c.at("relation").get<std::string>();
        k.limit = number_from(c.at("limit"));
        k.pass = c.at("pass").get<bool>();
        out.push_back(k);
    }
    return out;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return q + "\"";
}

std::string csv_number(const std::map<std::string, double>& m, const std::string& key)
{
    const auto it = m.find(key);
    if (it == m.end()) {
        return "";
    }
    std::ostringstream s;
    s << std::setprecision(17) << it->second;
    return s.str();
}

}  // namespace

Check make_check(std::string name, double value, const std::string& relation, double limit)
{
    Check c{std::move(name), value, relation, limit, false};
    if (relation == "<=") {
        c.pass = value <= limit;
    } else if (relation == ">=") {
        c.pass = value >= limit;
    } else if (relation == "<") {
        c.pass = value < limit;
    } else if (relation == ">") {
        c.pass = value > limit;
    } else if (relation == "==") {
        c.pass = value == limit;
    } else {
        throw PreconditionError("make_check: unknown relation " + relation);
    }
    return c;
}

Aggregate aggregate_records(const std::vector<TrialRecord>& records)
{
    Aggregate a;
    a.trials = static_cast<int>(records.size());
    bool have_margin = false;
    for (const auto& r : records) {
        if (r.status == "pass") {
            ++a.passed;
        } else if (r.status == "fail") {
            ++a.failed;
        } else if (r.status == "skipped") {
            ++a.skipped;
        } else {
            ++a.errors;
        }
        if (auto it = r.metrics.find("max_residual"); it != r.metrics.end()) {
            a.max_residual = std::max(a.max_residual, it->second);
        }
        if (auto it = r.metrics.find("min_margin"); it != r.metrics.end()) {
            a.min_margin = have_margin ? std::min(a.min_margin, it->second) : it->second;
            have_margin = true;
        }
    }
    a.failure_count = a.failed + a.errors;
    return a;
}

int exit_status(const CampaignReport& r)
{
    return r.aggregate.failure_count == 0 ? 0 : 1;
}

nlohmann::json to_json(const CampaignReport& r)
{
    nlohmann::json j;
    j["kind"] = r.kind;
    j["config"] = r.config;
    j["environment"] = r.environment;
    nlohmann::json records = nlohmann::json::array();
    for (const auto& t : r.records) {
        nlohmann::json m = nlohmann::json::array();
        for (const auto& mr : t.methods) {
            m.push_back({{"method", mr.method},
                         {"status", mr.status},
                         {"metrics", metrics_json(mr.metrics)},
                         {"checks", checks_json(mr.checks)},
                         {"message", mr.message}});
        }
        records.push_back({{"trial", t.trial},
                           {"seed", t.seed},
                           {"status", t.status},
                           {"route", t.route},
                           {"message", t.message},
                           {"inputs", t.inputs},
                           {"metrics", metrics_json(t.metrics)},
                           {"checks", checks_json(t.checks)},
                           {"methods", m}});
    }
    j["records"] = records;
    const Aggregate& a = r.aggregate;
    j["aggregate"] = {{"trials", a.trials},
                      {"passed", a.passed},
                      {"failed", a.failed},
                      {"skipped", a.skipped},
                      {"errors", a.errors},
                      {"max_residual", number(a.max_residual)},
                      {"min_margin", number(a.min_margin)},
                      {"failure_count", a.failure_count}};
    nlohmann::json trial_seconds = nlohmann::json::array();
    for (double s : r.timing.trial_seconds) {
        trial_seconds.push_back(number(s));
    }
    j["timing"] = {{"total_seconds", number(r.timing.total_seconds)}, {"trial_seconds", trial_seconds}};
    return j;
}

CampaignReport report_from_json(const nlohmann::json& j)
{
    CampaignReport r;
    try {
        r.kind = j.at("kind").get<std::string>();
        r.config = j.at("config");
        r.environment = j.at("environment");
        for (const auto& t : j.at("records")) {
            TrialRecord rec;
            rec.trial = t.at("trial").get<int>();
            rec.seed = t.at("seed").get<std::uint64_t>();
            rec.status = t.at("status").get<std::string>();
            rec.route = t.at("route").get<std::string>();
            rec.message = t.at("message").get<std::string>();
            rec.inputs = t.at("inputs");
            rec.metrics = metrics_from(t.at("metrics"));
            rec.checks = checks_from(t.at("checks"));
            for (const auto& m : t.at("methods")) {
                MethodRecord mr;
                mr.method = m.at("method").get<std::string>();
                mr.status = m.at("status").get<std::string>();
                mr.metrics = metrics_from(m.at("metrics"));
                mr.checks = checks_from(m.at("checks"));
                mr.message = m.at("message").get<std::string>();
                rec.methods.push_back(mr);
            }
            r.records.push_back(rec);
        }
        const auto& a = j.at("aggregate");
        r.aggregate.trials = a.at("trials").get<int>();
        r.aggregate.passed = a.at("passed").get<int>();
        r.aggregate.failed = a.at("failed").get<int>();
        r.aggregate.skipped = a.at("skipped").get<int>();
        r.aggregate.errors = a.at("errors").get<int>();
        r.aggregate.max_residual = number_from(a.at("max_residual"));
        r.aggregate.min_margin = number_from(a.at("min_margin"));
        r.aggregate.failure_count = a.at("failure_count").get<int>();
        const auto& t = j.at("timing");
        r.timing.total_seconds = number_from(t.at("total_seconds"));
        for (const auto& s : t.at("trial_seconds")) {
            r.timing.trial_seconds.push_back(number_from(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
    return r;
}

const char* const kReportCsvHeader =
    "trial,seed,status,route,gap,b_norm,max_residual,max_deviation,min_margin,checks_passed,checks_total,message";

void write_report_csv(std::ostream& out, const CampaignReport& r)
{
    out << kReportCsvHeader << '\n';
    for (const auto& t : r.records) {
        int passed = 0;
        int total = 0;
        auto count = [&](const std::vector<Check>& checks) {
            for (const auto& c : checks) {
                ++total;
                passed += c.pass ? 1 : 0;
            }
        };
        count(t.checks);
        for (const auto& m : t.methods) {
            count(m.checks);
        }
        out << t.trial << ',' << t.seed << ',' << t.status << ',' << csv_field(t.route) << ','
            << csv_number(t.metrics, "gap") << ',' << csv_number(t.metrics, "b_norm") << ','
            << csv_number(t.metrics, "max_residual") << ',' << csv_number(t.metrics, "max_deviation") << ','
            << csv_number(t.metrics, "min_margin") << ',' << passed << ',' << total << ',' << csv_field(t.message)
            << '\n';
    }
}

void emit_report(const CampaignReport& r, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "report.json");
        if (!out) {
            throw Error("cannot write " + (dir / "report.json").string());
        }
        out << to_json(r).dump(2) << '\n';
    }
    std::ofstream csv(dir / "report.csv");
    if (!csv) {
        throw Error("cannot write " + (dir / "report.csv").string());
    }
    write_report_csv(csv, r);
}

}  // namespace opshift
