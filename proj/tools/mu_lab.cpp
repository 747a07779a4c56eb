#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mulab/analysis.hpp"
#include "mulab/errors.hpp"
#include "mulab/lambda_structure.hpp"
#include "mulab/liftlab.hpp"

using namespace mulab;

namespace {

int run_analyze(const std::string& curves, RunConfig cfg, const std::string& config_path, const CLI::App& sub) {
    // Flags given on the command line override the config file.
    RunConfig flags = cfg;
    if (!config_path.empty()) {
        apply_config_file(config_path, cfg);
        if (sub.count("--p")) cfg.p = flags.p;
        if (sub.count("--precision")) cfg.precision = flags.precision;
        if (sub.count("--layers")) cfg.layers = flags.layers;
        if (sub.count("--ell-bound")) cfg.ell_bound = flags.ell_bound;
        if (sub.count("--format")) cfg.format = flags.format;
        if (sub.count("--cache")) cfg.cache_dir = flags.cache_dir;
        if (sub.count("--verify-cache")) cfg.verify_cache = true;
    }
    if (cfg.verify_cache && cfg.cache_dir.empty()) throw Error("InvalidParameter", "--verify-cache needs --cache");
    auto recs = ingest(curves);
    auto rep = analyze_all(recs, cfg);
    for (const auto& c : rep.curves)
        for (const auto& e : c.cache_events) std::cerr << "cache: " << e << "\n";
    std::cout << report(rep, cfg.format);
    if (!rep.violations.empty()) {
        std::cerr << rep.violations.size() << " invariant violation(s)\n";
        return 2;
    }
    return 0;
}

int run_lambda(const std::string& path) {
    auto P = load_presentation(path);
    auto prof = mu_profile(P);
    auto q = graded_ranks(P);
    nlohmann::ordered_json j;
    j["p"] = P.p;
    j["N"] = P.N;
    j["MT"] = P.MT;
    j["graded_ranks"] = q;
    j["mu_vector"] = prof.mu_vector;
    j["mu"] = prof.mu;
    j["t"] = prof.t;
    j["r"] = prof.r;
    j["torsion_certified"] = torsion_certified(P);
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mu-lab: residual representations, Iwasawa invariants and lifting experiments"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string curves, config_path;
    auto* analyze_cmd = app.add_subcommand("analyze", "Classify residual representations and compute analytic mu, lambda");
    analyze_cmd->add_option("--curves", curves, "JSON curve list")->required();
    analyze_cmd->add_option("--p", cfg.p, "Default prime for records without one");
    analyze_cmd->add_option("--precision", cfg.precision, "p-adic precision N");
    analyze_cmd->add_option("--layers", cfg.layers, "Highest cyclotomic layer n");
    analyze_cmd->add_option("--ell-bound", cfg.ell_bound, "Largest prime used in trace congruences");
    analyze_cmd->add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}));
    analyze_cmd->add_option("--cache", cfg.cache_dir, "Directory for cached Mazur-Tate elements");
    analyze_cmd->add_flag("--verify-cache", cfg.verify_cache, "Recompute and compare every cached element");
    analyze_cmd->add_option("--config", config_path, "key = value configuration file");

    std::string presentation;
    auto* lambda_cmd = app.add_subcommand("lambda-invariants", "Refined mu-invariants of a presented Lambda-module");
    lambda_cmd->add_option("--presentation", presentation, "JSON presentation")->required();

    std::string scenario;
    auto* lift_cmd = app.add_subcommand("lift-lab", "Deformation experiments on finite group models");
    lift_cmd->require_subcommand(1);
    auto* run_cmd = lift_cmd->add_subcommand("run", "Run a JSON scenario");
    run_cmd->add_option("scenario", scenario, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    }
    try {
        if (*analyze_cmd) return run_analyze(curves, cfg, config_path, *analyze_cmd);
        if (*lambda_cmd) return run_lambda(presentation);
        if (*run_cmd) {
            std::string out = run_scenario_file(scenario);
            std::cout << out << "\n";
            auto j = nlohmann::json::parse(out);
            std::string status = j.value("status", "");
            if (status == "error") return exit_code_for(Error(j.value("error", "Error"), ""));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "mu-lab: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "mu-lab: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
