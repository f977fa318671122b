#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "persona/adam.hpp"
#include "persona/head.hpp"
#include "persona/memory.hpp"
#include "persona/metrics.hpp"
#include "persona/pipeline.hpp"

namespace persona {

struct RunConfig {
    int epochs = 50;
    int minibatch = 32;  // users per optimizer step
    uint64_t seed = 1;
    TrainTask task = TrainTask::dims;
    // Non-improving validation epochs tolerated before stopping; 0 stops at
    // the first one.
    int patience = 10;
    int n_runs = 10;
    AdamConfig adam;
};

struct EpochStats {
    int epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_macro_f1 = 0.0;
    // Cumulative store counters at epoch end.
    uint64_t recomputes = 0;
    uint64_t hits_exact = 0;
    uint64_t hits_similar = 0;
};

struct RunResult {
    HeadParams best_params;  // checkpoint with the best validation metric
    std::vector<EpochStats> history;
    double best_val_metric = 0.0;
    int best_epoch = 0;
};

// One seeded run: per epoch, shuffled minibatch gradient steps over the
// training users, then validation scoring; keeps the best-validation
// checkpoint and stops early after `patience` non-improving epochs. All
// embedding fetches flow through the store, so an unevicted second epoch
// performs zero recomputes. The dims task trains the four axis classifiers
// jointly on the shared trunk with summed losses; type16 trains the 16-way
// classifier.
RunResult train_one_run(const EmbeddedDataset& train, const EmbeddedDataset& validation,
                        MemoryStore& store, const HeadConfig& head_config,
                        const RunConfig& run);

struct MetricStat {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
};

struct MultiRunResult {
    // Test-set metrics per run, flattened names as in report_scalar_metrics.
    std::vector<std::map<std::string, double>> per_run;
    std::map<std::string, MetricStat> aggregated;
    // The run with the highest validation metric (lowest index on ties);
    // its checkpoint is what the train command persists.
    RunResult best_run;
    int best_run_index = 0;
};

// n_runs independent runs differing only in seed (base seed + run index),
// each scored on the test part with its best checkpoint.
MultiRunResult multi_run(const EmbeddedDataset& train, const EmbeddedDataset& validation,
                         const EmbeddedDataset& test, MemoryStore& store,
                         const HeadConfig& head_config, const RunConfig& run);

// CSV with columns epoch, train_loss, val_macro_f1, recomputes, hits_exact,
// hits_similar.
void write_history_csv(const std::string& path, const std::vector<EpochStats>& history);

}  // namespace persona
