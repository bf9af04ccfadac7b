#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bnrobot/arena.hpp"
#include "bnrobot/search.hpp"

namespace bnr {

// A designed network counts as successful when its held-out test median error
// is below this threshold.
inline constexpr double kSuccessThreshold = 0.11;

struct ExperimentConfig {
    std::uint32_t runs = 30;
    std::uint32_t test_set_size = 30;
    std::uint64_t master_seed = 1;
    SearchConfig search{};
    ArenaConfig arena{};

    void validate() const;
};

struct Quartiles {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

// Median and quartiles by linear interpolation between order statistics
// (h = (n-1)p): the same convention as numpy's default quantile.
Quartiles summarize(std::vector<double> values);

struct RunSummary {
    std::uint32_t run_id = 0;
    double final_train_error = 1.0; // incumbent's mean training error at the end of the search
    double train_median = 1.0;      // median per-trial error on the stage-2 training set
    std::vector<double> test_errors; // per held-out trial, trial order
    double test_median = 1.0;
    double test_q1 = 1.0;
    double test_q3 = 1.0;
    bool success = false; // test_median < kSuccessThreshold
};

struct ExperimentResult {
    // Sorted by train_median ascending (ties by run id); run_id keys each row.
    std::vector<RunSummary> summaries;
    // Search results indexed by run id (not by the sorted order above).
    std::vector<SearchResult> searches;
    std::vector<TrialSpec> training_set; // shared stage-2 training set
    std::vector<TrialSpec> test_set;     // shared held-out set
    double elapsed_seconds = 0.0;
    double trials_per_second = 0.0;
};

// The full protocol: `runs` independent descents (distinct per-run seed
// streams, one shared training set), each best network evaluated on the
// shared held-out test set. Deterministic for a given master seed regardless
// of `parallelism`. `on_run` (optional) fires as each run completes, in
// completion order, serialized by a mutex; it must not touch the result.
using RunProgress = std::function<void(const RunSummary&)>;
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned parallelism = 1,
                                const RunProgress& on_run = {});

// Summary table: run,train_median,test_median,test_q1,test_q3,success.
void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& summaries);
void write_summary_json(std::ostream& out, const std::vector<RunSummary>& summaries);

// Per-test-trial details: run,trial,seed,error,phototaxis_term,antiphototaxis_term,t_c.
void write_test_trials_csv(std::ostream& out, const ExperimentResult& result,
                           const ExperimentConfig& cfg);

} // namespace bnr
