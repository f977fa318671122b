#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "persona/embedding.hpp"
#include "persona/head.hpp"
#include "persona/mbti.hpp"

namespace persona {

enum class TrainTask { dims, type16 };

// Rows are true classes, columns are predicted classes.
struct ConfusionMatrix {
    size_t classes = 0;
    std::vector<uint64_t> counts;  // row-major

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(size_t c) : classes(c), counts(c * c, 0) {}

    uint64_t& at(size_t t, size_t p) { return counts[t * classes + p]; }
    uint64_t at(size_t t, size_t p) const { return counts[t * classes + p]; }
    uint64_t total() const;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& preds, const std::vector<int>& labels,
                                 int classes);

struct MacroMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Unweighted class means; per-class 0/0 cases count as 0.
MacroMetrics macro_metrics(const ConfusionMatrix& cm);

struct MetricsReport {
    TrainTask task = TrainTask::dims;
    // dims task: one binary matrix per axis in EI, SN, TF, JP order, plus
    // the mean of the four macro-F1 values.
    std::array<ConfusionMatrix, 4> axis_cm;
    std::array<MacroMetrics, 4> axis;
    double avg_macro_f1 = 0.0;
    // type16 task
    ConfusionMatrix type16_cm;
    MacroMetrics type16;

    // Headline value used for early stopping and run summaries: avg_macro_f1
    // for dims, the 16-way macro-F1 for type16.
    double primary_metric() const {
        return task == TrainTask::dims ? avg_macro_f1 : type16.f1;
    }
};

// Deterministic eval-mode scoring of one dataset part. sequences[i] is user
// i's ordered embeddings; labels[i] the true type.
MetricsReport evaluate(const HeadParams& params,
                       const std::vector<std::vector<Embedding>>& sequences,
                       const std::vector<MbtiLabel>& labels, TrainTask task);

}  // namespace persona
