#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bnrobot/attractors.hpp"
#include "bnrobot/config.hpp"
#include "bnrobot/coupling.hpp"
#include "bnrobot/errors.hpp"
#include "bnrobot/harness.hpp"
#include "bnrobot/objective.hpp"
#include "bnrobot/parallel.hpp"
#include "bnrobot/search.hpp"

namespace fs = std::filesystem;
using namespace bnr;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitCapacity = 4;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string run_file_name(const char* prefix, std::uint32_t run, const char* suffix) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%03u%s", prefix, run, suffix);
    return buf;
}

int cmd_design(const std::string& config_path, const std::string& out_dir,
               std::uint64_t seed_override, bool have_seed, unsigned parallelism,
               const std::string& format) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (have_seed) cfg.master_seed = seed_override;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    fs::create_directories(fs::path(out_dir) / "networks", ec);
    fs::create_directories(fs::path(out_dir) / "logs", ec);
    fs::create_directories(fs::path(out_dir) / "checkpoints", ec);
    if (ec) throw IoError("cannot create output subdirectories: " + ec.message());

    std::cerr << "design: " << cfg.runs << " run(s), " << cfg.search.total_iterations
              << " iterations each, parallelism " << parallelism << "\n";
    const ExperimentResult result = run_experiment(cfg, parallelism, [](const RunSummary& s) {
        char line[128];
        std::snprintf(line, sizeof line, "run %u done: train %.4f, test median %.4f%s\n",
                      s.run_id, s.final_train_error, s.test_median,
                      s.success ? " [success]" : "");
        std::cerr << line;
    });

    const fs::path out(out_dir);
    const std::string summary_name = format == "json" ? "summary.json" : "summary.csv";
    {
        std::ofstream s(out / summary_name, std::ios::binary);
        if (!s) throw IoError("cannot open for writing: " + (out / summary_name).string());
        if (format == "json")
            write_summary_json(s, result.summaries);
        else
            write_summary_csv(s, result.summaries);
    }
    {
        std::ofstream t(out / "test_trials.csv", std::ios::binary);
        if (!t) throw IoError("cannot open for writing: " + (out / "test_trials.csv").string());
        write_test_trials_csv(t, result, cfg);
    }
    for (std::uint32_t run = 0; run < cfg.runs; ++run) {
        const SearchResult& sr = result.searches[run];
        save_network(sr.best_network, (out / "networks" / run_file_name("run_", run, ".json")).string());
        std::ofstream log(out / "logs" / run_file_name("run_", run, "_search.csv"),
                          std::ios::binary);
        if (!log) throw IoError("cannot open search log for run " + std::to_string(run));
        write_search_log(log, sr.records);
        save_checkpoint(sr.final_checkpoint(cfg.search.total_iterations),
                        (out / "checkpoints" / run_file_name("run_", run, ".json")).string());
    }

    nlohmann::ordered_json manifest;
    manifest["format"] = "bnrobot-manifest";
    manifest["format_version"] = 1;
    manifest["created_utc"] = utc_timestamp();
    manifest["master_seed"] = cfg.master_seed;
    manifest["parallelism"] = parallelism;
    manifest["output_format"] = format;
    manifest["outputs"] = {{"summary", summary_name},
                           {"test_trials", "test_trials.csv"},
                           {"networks_dir", "networks"},
                           {"logs_dir", "logs"},
                           {"checkpoints_dir", "checkpoints"}};
    manifest["elapsed_seconds"] = result.elapsed_seconds;
    manifest["throughput_trials_per_second"] = result.trials_per_second;
    manifest["config"] = nlohmann::ordered_json::parse(serialize_experiment_config(cfg));
    write_text_file(out / "manifest.json", manifest.dump(2) + "\n");

    unsigned successes = 0;
    double best_test = 1.0;
    for (const RunSummary& s : result.summaries) {
        successes += s.success;
        best_test = std::min(best_test, s.test_median);
    }
    char line[256];
    std::snprintf(line, sizeof line,
                  "designed %u network(s): %u successful (test median < %.2f); best test median "
                  "%.4f; %.0f trials/s; outputs in %s\n",
                  cfg.runs, successes, kSuccessThreshold, best_test, result.trials_per_second,
                  out_dir.c_str());
    std::cout << line;
    return 0;
}

int cmd_simulate(const std::string& network_path, std::uint64_t seed, std::uint32_t horizon,
                 std::int64_t clap_step, bool no_clap, std::uint32_t perturb_step,
                 double perturb_angle, double alpha, const CLI::Option* sx,
                 const CLI::Option* sy, const CLI::Option* sh, double start_x, double start_y,
                 double start_heading, const std::string& out_path,
                 const std::string& config_path) {
    BooleanNetwork net = load_network(network_path);
    const NodeRoles roles = NodeRoles::from_network(net);

    ArenaConfig arena;
    if (!config_path.empty()) arena = load_experiment_config(config_path).arena;

    TrialSpec spec;
    spec.horizon = horizon;
    spec.stage = no_clap ? Stage::phototaxis_only : Stage::full;
    if (no_clap && clap_step >= 0)
        throw ValidationError("--t-c conflicts with --no-clap");
    if (spec.stage == Stage::full) {
        if (clap_step >= 0) {
            if (clap_step < 1 || static_cast<std::uint32_t>(clap_step) >= horizon)
                throw ValidationError("--t-c (" + std::to_string(clap_step) +
                                      ") must lie in (0, T=" + std::to_string(horizon) + ")");
            spec.clap_step = static_cast<std::uint32_t>(clap_step);
        } else {
            spec.clap_step = horizon / 2; // default: halfway
        }
    }
    spec.perturb_step = perturb_step;
    spec.perturb_angle = perturb_angle;

    Rng rng(derive_seed(seed, "simulate"));
    spec.start = sample_start_pose(rng, arena);
    if (sx->count()) spec.start.x = start_x;
    if (sy->count()) spec.start.y = start_y;
    if (sh->count()) spec.start.heading = wrap_angle(start_heading);

    std::vector<TrialStepRow> rows;
    const TrialTrace trace = run_trial(net, roles, spec, arena, &rows);
    const ErrorReport rep = trial_error(trace, alpha);

    char line[256];
    std::snprintf(line, sizeof line,
                  "E = %.6f (phototaxis %.6f, antiphototaxis %.6f, alpha %.3f)\n"
                  "start (%.4f, %.4f, %.4f), T %u, t_c %u, perturb step %u angle %.4f\n",
                  rep.error, rep.phototaxis_term, rep.antiphototaxis_term, rep.alpha,
                  spec.start.x, spec.start.y, spec.start.heading, spec.horizon, spec.clap_step,
                  spec.perturb_step, spec.perturb_angle);
    std::cout << line;

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + out_path);
        write_trajectory_csv(out, rows);
    }
    return 0;
}

int cmd_analyze(const std::string& network_path) {
    const BooleanNetwork net = load_network(network_path);
    const AttractorAnalysis analysis = analyze_attractors(net);
    std::cout << "nodes: " << net.n() << "\n";
    std::cout << "attractors: " << analysis.attractors.size() << "\n";
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < analysis.attractors.size(); ++i) {
        const AttractorInfo& a = analysis.attractors[i];
        total += a.basin_size;
        std::cout << "attractor " << (i + 1) << ": period " << a.period() << ", basin "
                  << a.basin_size << ", cycle";
        for (const NetworkState& s : a.cycle) std::cout << " " << s.display();
        std::cout << "\n";
    }
    std::cout << "basin total: " << total << " / " << (std::uint64_t{1} << net.n()) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boolean-network robot controllers: stochastic-descent design, "
                 "simulation and attractor analysis"};
    app.require_subcommand(1);

    // design
    auto* design = app.add_subcommand("design", "Run the full design experiment from a config");
    std::string config_path, out_dir, format = "csv";
    std::uint64_t seed_override = 0;
    unsigned parallelism = default_parallelism();
    design->add_option("--config", config_path, "Config or manifest JSON")->required();
    design->add_option("--out", out_dir, "Output directory")->envname("BNROBOT_OUT")->required();
    auto* seed_opt =
        design->add_option("--seed", seed_override, "Master seed override")->envname("BNROBOT_SEED");
    design->add_option("--parallelism", parallelism,
                       "Max concurrent runs (results are identical for any value)");
    design->add_option("--format", format, "Summary format")
        ->check(CLI::IsMember({"csv", "json"}));

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run one trial with a designed network");
    std::string net_path, traj_out, sim_config;
    std::uint64_t sim_seed = 1;
    std::uint32_t horizon = 1000, perturb_step = 1;
    std::int64_t clap_step = -1;
    bool no_clap = false;
    double perturb_angle = 0.0, alpha = 0.5;
    double start_x = 0, start_y = 0, start_heading = 0;
    simulate->add_option("--network", net_path, "Network JSON file")->required();
    simulate->add_option("--seed", sim_seed, "Seed for the sampled start pose")
        ->envname("BNROBOT_SEED");
    simulate->add_option("--T", horizon, "Trial horizon in steps");
    simulate->add_option("--t-c", clap_step, "Clap step (default: T/2)");
    simulate->add_flag("--no-clap", no_clap, "Phototaxis-only trial (no clap)");
    simulate->add_option("--perturb-step", perturb_step, "Perturbation step (default 1)");
    simulate->add_option("--perturb-angle", perturb_angle, "Perturbation angle in rad [-pi, pi]");
    simulate->add_option("--alpha", alpha, "Error weight");
    auto* sx = simulate->add_option("--start-x", start_x, "Start x (overrides the sampled pose)");
    auto* sy = simulate->add_option("--start-y", start_y, "Start y");
    auto* sh = simulate->add_option("--start-heading", start_heading, "Start heading (rad)");
    simulate->add_option("--out", traj_out, "Trajectory CSV path");
    simulate->add_option("--config", sim_config, "Config JSON supplying the arena section");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Enumerate attractors and basins of a network");
    std::string analyze_path;
    analyze->add_option("--network", analyze_path, "Network JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (design->parsed())
            return cmd_design(config_path, out_dir, seed_override, seed_opt->count() > 0,
                              parallelism, format);
        if (simulate->parsed())
            return cmd_simulate(net_path, sim_seed, horizon, clap_step, no_clap, perturb_step,
                                perturb_angle, alpha, sx, sy, sh, start_x, start_y, start_heading,
                                traj_out, sim_config);
        if (analyze->parsed()) return cmd_analyze(analyze_path);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
