#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opshift/cli/campaign.hpp"
#include "opshift/cli/config.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"opshift: Sylvester, Riccati and block diagonalization experiments"};
    std::string kind;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> out;
    std::vector<std::string> tol;
    bool quiet = false;

    app.add_option("kind", kind, "sylvester-bench | riccati-solve | blockdiag | ssf-split | friedrichs | sharpness | homotopy")
        ->required();
    app.add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out, "output directory");
    app.add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
    app.add_option("--tol", tol, "tolerance override KEY=VALUE (repeatable)");
    app.add_flag("-q,--quiet", quiet, "print only the summary line");
    CLI11_PARSE(app, argc, argv);

    try {
        opshift::ExperimentConfig cfg = opshift::load_config(config_path);
        if (opshift::parse_kind(kind) != cfg.kind) {
            std::cerr << "opshift: kind '" << kind << "' does not match config kind '"
                      << opshift::kind_name(cfg.kind) << "'\n";
            return 2;
        }
        if (seed) {
            cfg.seed = *seed;
        }
        if (trials) {
            cfg.trials = *trials;
        }
        if (out) {
            cfg.out = *out;
        }
        for (const auto& t : tol) {
            opshift::apply_tolerance_override(cfg, t);
        }

        const opshift::CampaignReport report = opshift::run_experiment(cfg);
        opshift::emit_report(report, cfg.out);

        if (!quiet) {
            for (const auto& r : report.records) {
                std::printf("trial %3d  %-7s  %s%s%s\n", r.trial, r.status.c_str(), r.route.c_str(),
                            r.message.empty() ? "" : "  ", r.message.c_str());
                for (const auto& c : r.checks) {
                    if (!c.pass) {
                        std::printf("    FAIL %s: %.6g %s %.6g\n", c.name.c_str(), c.value, c.relation.c_str(), c.limit);
                    }
                }
                for (const auto& m : r.methods) {
                    for (const auto& c : m.checks) {
                        if (!c.pass) {
                            std::printf("    FAIL %s/%s: %.6g %s %.6g\n", m.method.c_str(), c.name.c_str(), c.value,
                                        c.relation.c_str(), c.limit);
                        }
                    }
                }
            }
        }
        const auto& a = report.aggregate;
        std::printf("%s: %d trials, %d passed, %d failed, %d skipped, %d errors; max residual %.3g; report in %s\n",
                    report.kind.c_str(), a.trials, a.passed, a.failed, a.skipped, a.errors, a.max_residual,
                    cfg.out.string().c_str());
        return opshift::exit_status(report);
    } catch (const std::exception& e) {
        std::cerr << "opshift: " << e.what() << '\n';
        return 2;
    }
}
