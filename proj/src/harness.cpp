#include "bnrobot/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <ostream>

#include "bnrobot/coupling.hpp"
#include "bnrobot/errors.hpp"
#include "bnrobot/objective.hpp"
#include "bnrobot/parallel.hpp"
#include "json.hpp"

namespace bnr {

void ExperimentConfig::validate() const {
    if (runs < 1) throw ValidationError("experiment.runs must be >= 1");
    if (test_set_size < 1) throw ValidationError("experiment.test_set_size must be >= 1");
    search.validate();
    arena.validate();
}

Quartiles summarize(std::vector<double> values) {
    if (values.empty()) throw ValidationError("summarize: empty value list");
    std::sort(values.begin(), values.end());
    const auto quantile = [&](double p) {
        const double h = static_cast<double>(values.size() - 1) * p;
        const std::size_t i = static_cast<std::size_t>(h);
        if (i + 1 >= values.size()) return values.back();
        const double frac = h - static_cast<double>(i);
        return values[i] + frac * (values[i + 1] - values[i]);
    };
    return Quartiles{quantile(0.5), quantile(0.25), quantile(0.75)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned parallelism,
                                const RunProgress& on_run) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const std::uint64_t train_seed = derive_seed(cfg.master_seed, "training-set");
    const std::uint64_t test_seed = derive_seed(cfg.master_seed, "test-set");

    SearchConfig base = cfg.search;
    base.train_seed = train_seed;

    ExperimentResult result;
    result.training_set = stage2_training_set(base, cfg.arena);
    result.test_set = build_training_set(test_seed, cfg.test_set_size, Stage::full,
                                         cfg.search.stage2_horizon, cfg.search.clap_window,
                                         cfg.arena);
    for (const TrialSpec& train : result.training_set)
        for (const TrialSpec& test : result.test_set)
            if (train == test)
                throw ValidationError("run_experiment: training and test sets overlap; "
                                      "seed streams must be separated");

    result.summaries.resize(cfg.runs);
    result.searches.resize(cfg.runs);
    const NodeRoles roles = NodeRoles::standard();
    std::mutex progress_mutex;

    parallel_for(cfg.runs, parallelism, [&](std::size_t run) {
        SearchConfig sc = base;
        sc.seed = derive_seed(cfg.master_seed, "run", run);
        SearchResult sr = stochastic_descent(sc, cfg.arena);

        RunSummary& summary = result.summaries[run];
        summary.run_id = static_cast<std::uint32_t>(run);
        summary.final_train_error = sr.best_error;
        summary.train_median =
            summarize(per_trial_errors(sr.best_network, roles, result.training_set, cfg.arena,
                                       cfg.search.alpha))
                .median;
        summary.test_errors = per_trial_errors(sr.best_network, roles, result.test_set, cfg.arena,
                                               cfg.search.alpha);
        const Quartiles q = summarize(summary.test_errors);
        summary.test_median = q.median;
        summary.test_q1 = q.q1;
        summary.test_q3 = q.q3;
        summary.success = summary.test_median < kSuccessThreshold;
        result.searches[run] = std::move(sr);
        if (on_run) {
            std::lock_guard lock(progress_mutex);
            on_run(summary);
        }
    });

    std::sort(result.summaries.begin(), result.summaries.end(),
              [](const RunSummary& a, const RunSummary& b) {
                  if (a.train_median != b.train_median) return a.train_median < b.train_median;
                  return a.run_id < b.run_id;
              });

    const auto t1 = std::chrono::steady_clock::now();
    result.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
    // Trials simulated per run: the initial evaluation, one evaluation per
    // iteration, the stage-boundary re-evaluation, plus the per-trial test and
    // training sweeps afterwards.
    const SearchConfig& s = cfg.search;
    const std::uint64_t per_run =
        std::uint64_t{s.training_set_size} *
            (1 + s.total_iterations + (s.total_iterations > s.stage1_iterations ? 1 : 0)) +
        cfg.test_set_size + s.training_set_size;
    const double total_trials = static_cast<double>(per_run) * cfg.runs;
    result.trials_per_second =
        result.elapsed_seconds > 0 ? total_trials / result.elapsed_seconds : 0.0;
    return result;
}

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& summaries) {
    out << "run,train_median,test_median,test_q1,test_q3,success\n";
    for (const RunSummary& s : summaries) {
        out << s.run_id << ',' << fmt_g(s.train_median) << ',' << fmt_g(s.test_median) << ','
            << fmt_g(s.test_q1) << ',' << fmt_g(s.test_q3) << ',' << (s.success ? 1 : 0) << '\n';
    }
}

void write_summary_json(std::ostream& out, const std::vector<RunSummary>& summaries) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const RunSummary& s : summaries) {
        nlohmann::ordered_json o;
        o["run"] = s.run_id;
        o["train_median"] = s.train_median;
        o["final_train_error"] = s.final_train_error;
        o["test_median"] = s.test_median;
        o["test_q1"] = s.test_q1;
        o["test_q3"] = s.test_q3;
        o["success"] = s.success;
        o["test_errors"] = s.test_errors;
        arr.push_back(std::move(o));
    }
    out << arr.dump(2) << "\n";
}

void write_test_trials_csv(std::ostream& out, const ExperimentResult& result,
                           const ExperimentConfig& cfg) {
    const std::uint64_t test_seed = derive_seed(cfg.master_seed, "test-set");
    const NodeRoles roles = NodeRoles::standard();
    out << "run,trial,seed,error,phototaxis_term,antiphototaxis_term,t_c\n";
    for (std::size_t run = 0; run < result.searches.size(); ++run) {
        const BooleanNetwork& net = result.searches[run].best_network;
        for (std::size_t i = 0; i < result.test_set.size(); ++i) {
            const TrialSpec& spec = result.test_set[i];
            const ErrorReport rep =
                trial_error(run_trial(net, roles, spec, cfg.arena), cfg.search.alpha);
            out << run << ',' << i << ',' << test_seed << ',' << fmt_g(rep.error) << ','
                << fmt_g(rep.phototaxis_term) << ',' << fmt_g(rep.antiphototaxis_term) << ','
                << spec.clap_step << '\n';
        }
    }
}

} // namespace bnr
