#include "persona/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace persona {

uint64_t ConfusionMatrix::total() const {
    uint64_t sum = 0;
    for (uint64_t c : counts) {
        sum += c;
    }
    return sum;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& preds, const std::vector<int>& labels,
                                 int classes) {
    if (classes < 1) {
        throw std::invalid_argument("confusion_matrix: classes must be >= 1");
    }
    if (preds.size() != labels.size()) {
        throw std::invalid_argument("confusion_matrix: prediction and label counts differ");
    }
    ConfusionMatrix cm(static_cast<size_t>(classes));
    for (size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] < 0 || preds[i] >= classes || labels[i] < 0 || labels[i] >= classes) {
            throw std::invalid_argument("confusion_matrix: index out of range");
        }
        ++cm.at(static_cast<size_t>(labels[i]), static_cast<size_t>(preds[i]));
    }
    return cm;
}

MacroMetrics macro_metrics(const ConfusionMatrix& cm) {
    const uint64_t total = cm.total();
    if (cm.classes == 0 || total == 0) {
        throw std::invalid_argument("macro_metrics: empty confusion matrix");
    }
    MacroMetrics m;
    uint64_t trace = 0;
    double psum = 0.0;
    double rsum = 0.0;
    double fsum = 0.0;
    for (size_t c = 0; c < cm.classes; ++c) {
        const double tp = static_cast<double>(cm.at(c, c));
        trace += cm.at(c, c);
        double pred_c = 0.0;  // column sum: TP + FP
        double true_c = 0.0;  // row sum: TP + FN
        for (size_t i = 0; i < cm.classes; ++i) {
            pred_c += static_cast<double>(cm.at(i, c));
            true_c += static_cast<double>(cm.at(c, i));
        }
        const double p = pred_c > 0.0 ? tp / pred_c : 0.0;
        const double r = true_c > 0.0 ? tp / true_c : 0.0;
        const double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
        psum += p;
        rsum += r;
        fsum += f;
    }
    const double n = static_cast<double>(cm.classes);
    m.accuracy = static_cast<double>(trace) / static_cast<double>(total);
    m.precision = psum / n;
    m.recall = rsum / n;
    m.f1 = fsum / n;
    return m;
}

namespace {

int argmax(const std::vector<double>& v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

MetricsReport evaluate(const HeadParams& params,
                       const std::vector<std::vector<Embedding>>& sequences,
                       const std::vector<MbtiLabel>& labels, TrainTask task) {
    if (sequences.empty()) {
        throw std::invalid_argument("evaluate: empty evaluation set");
    }
    if (sequences.size() != labels.size()) {
        throw std::invalid_argument("evaluate: sequence and label counts differ");
    }

    std::vector<std::vector<double>> finals;
    finals.reserve(sequences.size());
    for (const auto& seq : sequences) {
        finals.push_back(head_forward(params, seq, HeadMode::eval, 0).h_final);
    }

    MetricsReport report;
    report.task = task;
    if (task == TrainTask::dims) {
        double fsum = 0.0;
        for (size_t a = 0; a < 4; ++a) {
            std::vector<int> preds;
            std::vector<int> truth;
            preds.reserve(finals.size());
            truth.reserve(finals.size());
            for (size_t i = 0; i < finals.size(); ++i) {
                const auto logits =
                    classifier_forward(params, finals[i], static_cast<ClsTask>(a));
                preds.push_back(argmax(logits));
                truth.push_back(labels[i].axis(static_cast<Axis>(a)));
            }
            report.axis_cm[a] = confusion_matrix(preds, truth, 2);
            report.axis[a] = macro_metrics(report.axis_cm[a]);
            fsum += report.axis[a].f1;
        }
        report.avg_macro_f1 = fsum / 4.0;
    } else {
        std::vector<int> preds;
        std::vector<int> truth;
        preds.reserve(finals.size());
        truth.reserve(finals.size());
        for (size_t i = 0; i < finals.size(); ++i) {
            const auto logits = classifier_forward(params, finals[i], ClsTask::type16);
            preds.push_back(argmax(logits));
            truth.push_back(type16_index(labels[i]));
        }
        report.type16_cm = confusion_matrix(preds, truth, 16);
        report.type16 = macro_metrics(report.type16_cm);
    }
    return report;
}

}  // namespace persona
