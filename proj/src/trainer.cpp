#include "persona/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "persona/error.hpp"
#include "persona/loss.hpp"
#include "persona/report.hpp"
#include "persona/rng.hpp"

namespace persona {

namespace {

void fetch_part(MemoryStore& store, const EmbeddedDataset& data,
                std::vector<std::vector<Embedding>>& sequences, std::vector<MbtiLabel>& labels) {
    sequences.clear();
    labels.clear();
    sequences.reserve(data.users.size());
    labels.reserve(data.users.size());
    for (size_t u = 0; u < data.users.size(); ++u) {
        sequences.push_back(fetch_sequence(store, data, u));
        labels.push_back(data.users[u].label);
    }
}

void accumulate(HeadParams& acc, const HeadParams& delta) {
    auto at = tensor_list(acc);
    auto dt = tensor_list(delta);
    for (size_t i = 0; i < at.size(); ++i) {
        for (size_t j = 0; j < at[i]->size(); ++j) {
            (*at[i])[j] += (*dt[i])[j];
        }
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunResult train_one_run(const EmbeddedDataset& train, const EmbeddedDataset& validation,
                        MemoryStore& store, const HeadConfig& head_config,
                        const RunConfig& run) {
    if (train.users.empty() || validation.users.empty()) {
        throw InputError("train_one_run: empty dataset part");
    }
    if (train.dim != static_cast<size_t>(head_config.input_dim) ||
        validation.dim != train.dim) {
        throw InputError("train_one_run: embedding dim " + std::to_string(train.dim) +
                         " does not match head input_dim " +
                         std::to_string(head_config.input_dim));
    }
    if (run.epochs < 1 || run.minibatch < 1 || run.patience < 0) {
        throw InputError("train_one_run: epochs and minibatch must be >= 1, patience >= 0");
    }

    // The run seed drives everything random in a run: parameter init, epoch
    // shuffles and dropout masks. The head config's own seed field is not
    // consulted here so that multi_run varies all of it per run.
    Rng run_rng(run.seed);
    HeadConfig hc = head_config;
    hc.seed = run_rng.next_u64();
    HeadParams params = init_head(hc);
    AdamState adam(params, run.adam);

    RunResult result;
    result.best_val_metric = -1.0;
    int stall = 0;

    std::vector<size_t> order(train.users.size());
    std::iota(order.begin(), order.end(), size_t{0});

    for (int epoch = 1; epoch <= run.epochs; ++epoch) {
        run_rng.shuffle(order);
        double loss_sum = 0.0;
        const size_t mb = static_cast<size_t>(run.minibatch);
        for (size_t start = 0; start < order.size(); start += mb) {
            const size_t end = std::min(order.size(), start + mb);
            const double inv = 1.0 / static_cast<double>(end - start);
            HeadParams grads = zeros_like(params);
            for (size_t k = start; k < end; ++k) {
                const size_t u = order[k];
                const std::vector<Embedding> sequence = fetch_sequence(store, train, u);
                ForwardResult fwd =
                    head_forward(params, sequence, HeadMode::train, run_rng.next_u64());

                std::vector<std::pair<ClsTask, std::vector<double>>> dlogits;
                if (run.task == TrainTask::dims) {
                    for (size_t a = 0; a < 4; ++a) {
                        const auto task = static_cast<ClsTask>(a);
                        auto logits = classifier_forward(params, fwd.h_final, task);
                        auto ce = cross_entropy(logits, train.users[u].label.axis(
                                                            static_cast<Axis>(a)));
                        loss_sum += ce.loss;
                        for (double& g : ce.grad) {
                            g *= inv;
                        }
                        dlogits.emplace_back(task, std::move(ce.grad));
                    }
                } else {
                    auto logits = classifier_forward(params, fwd.h_final, ClsTask::type16);
                    auto ce = cross_entropy(logits, type16_index(train.users[u].label));
                    loss_sum += ce.loss;
                    for (double& g : ce.grad) {
                        g *= inv;
                    }
                    dlogits.emplace_back(ClsTask::type16, std::move(ce.grad));
                }
                accumulate(grads, head_backward(params, *fwd.trace, dlogits));
            }
            adam.step(params, grads);
        }

        std::vector<std::vector<Embedding>> val_sequences;
        std::vector<MbtiLabel> val_labels;
        fetch_part(store, validation, val_sequences, val_labels);
        const MetricsReport val_report = evaluate(params, val_sequences, val_labels, run.task);
        const double metric = val_report.primary_metric();

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = loss_sum / static_cast<double>(train.users.size());
        stats.val_macro_f1 = metric;
        const StoreStats counters = store.stats();
        stats.recomputes = counters.recomputes;
        stats.hits_exact = counters.hits_exact;
        stats.hits_similar = counters.hits_similar;
        result.history.push_back(stats);

        if (metric > result.best_val_metric) {
            result.best_val_metric = metric;
            result.best_epoch = epoch;
            result.best_params = params;
            stall = 0;
        } else {
            ++stall;
            if (stall > run.patience) {
                break;
            }
        }
    }
    return result;
}

MultiRunResult multi_run(const EmbeddedDataset& train, const EmbeddedDataset& validation,
                         const EmbeddedDataset& test, MemoryStore& store,
                         const HeadConfig& head_config, const RunConfig& run) {
    if (run.n_runs < 1) {
        throw InputError("multi_run: n_runs must be >= 1");
    }
    if (test.users.empty()) {
        throw InputError("multi_run: empty test part");
    }
    MultiRunResult result;
    for (int i = 0; i < run.n_runs; ++i) {
        RunConfig rc = run;
        rc.seed = run.seed + static_cast<uint64_t>(i);
        RunResult r = train_one_run(train, validation, store, head_config, rc);

        std::vector<std::vector<Embedding>> sequences;
        std::vector<MbtiLabel> labels;
        fetch_part(store, test, sequences, labels);
        const MetricsReport report = evaluate(r.best_params, sequences, labels, run.task);
        result.per_run.push_back(report_scalar_metrics(report));

        if (i == 0 || r.best_val_metric > result.best_run.best_val_metric) {
            result.best_run = std::move(r);
            result.best_run_index = i;
        }
    }

    const double n = static_cast<double>(result.per_run.size());
    for (const auto& [name, first_value] : result.per_run.front()) {
        (void)first_value;
        double sum = 0.0;
        for (const auto& metrics : result.per_run) {
            sum += metrics.at(name);
        }
        const double mean = sum / n;
        double var = 0.0;
        for (const auto& metrics : result.per_run) {
            const double d = metrics.at(name) - mean;
            var += d * d;
        }
        result.aggregated[name] = {mean, std::sqrt(var / n)};
    }
    return result;
}

void write_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw InputError("cannot open history file for writing: " + path);
    }
    out << "epoch,train_loss,val_macro_f1,recomputes,hits_exact,hits_similar\n";
    for (const EpochStats& e : history) {
        out << e.epoch << ',' << format_double(e.train_loss) << ','
            << format_double(e.val_macro_f1) << ',' << e.recomputes << ',' << e.hits_exact << ','
            << e.hits_similar << '\n';
    }
    if (!out) {
        throw InputError("write failed: " + path);
    }
}

}  // namespace persona
