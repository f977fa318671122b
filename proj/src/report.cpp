#include "persona/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace persona {

namespace {

const char* kRowNames[4] = {"accuracy", "precision", "recall", "macro_f1"};

double metric_row(const MacroMetrics& m, int row) {
    switch (row) {
        case 0: return m.accuracy;
        case 1: return m.precision;
        case 2: return m.recall;
        default: return m.f1;
    }
}

std::string cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%8.4f", v);
    return buf;
}

nlohmann::ordered_json metrics_json(const MacroMetrics& m) {
    nlohmann::ordered_json j;
    j["accuracy"] = m.accuracy;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["macro_f1"] = m.f1;
    return j;
}

nlohmann::ordered_json matrix_json(const ConfusionMatrix& cm) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (size_t t = 0; t < cm.classes; ++t) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (size_t p = 0; p < cm.classes; ++p) {
            row.push_back(cm.at(t, p));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string report_text(const MetricsReport& report) {
    std::string out;
    char buf[64];
    if (report.task == TrainTask::dims) {
        std::snprintf(buf, sizeof buf, "%-10s", "metric");
        out += buf;
        for (const char* name : kAxisNames) {
            std::snprintf(buf, sizeof buf, "%8s", name);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, "%8s", "Avg");
        out += buf;
        out += '\n';
        for (int row = 0; row < 4; ++row) {
            std::snprintf(buf, sizeof buf, "%-10s", kRowNames[row]);
            out += buf;
            double sum = 0.0;
            for (size_t a = 0; a < 4; ++a) {
                const double v = metric_row(report.axis[a], row);
                sum += v;
                out += cell(v);
            }
            out += cell(sum / 4.0);
            out += '\n';
        }
    } else {
        std::snprintf(buf, sizeof buf, "%-10s%8s\n", "metric", "value");
        out += buf;
        for (int row = 0; row < 4; ++row) {
            std::snprintf(buf, sizeof buf, "%-10s", kRowNames[row]);
            out += buf;
            out += cell(metric_row(report.type16, row));
            out += '\n';
        }
    }
    return out;
}

std::string report_json(const MetricsReport& report) {
    nlohmann::ordered_json j;
    if (report.task == TrainTask::dims) {
        j["task"] = "dims";
        nlohmann::ordered_json axes;
        for (size_t a = 0; a < 4; ++a) {
            nlohmann::ordered_json entry = metrics_json(report.axis[a]);
            entry["confusion"] = matrix_json(report.axis_cm[a]);
            axes[kAxisNames[a]] = std::move(entry);
        }
        j["axes"] = std::move(axes);
        j["avg_macro_f1"] = report.avg_macro_f1;
    } else {
        j["task"] = "type16";
        nlohmann::ordered_json entry = metrics_json(report.type16);
        entry["confusion"] = matrix_json(report.type16_cm);
        j["type16"] = std::move(entry);
    }
    return j.dump(2) + "\n";
}

std::map<std::string, double> report_scalar_metrics(const MetricsReport& report) {
    std::map<std::string, double> out;
    if (report.task == TrainTask::dims) {
        for (size_t a = 0; a < 4; ++a) {
            const std::string prefix = std::string(kAxisNames[a]) + ".";
            out[prefix + "accuracy"] = report.axis[a].accuracy;
            out[prefix + "precision"] = report.axis[a].precision;
            out[prefix + "recall"] = report.axis[a].recall;
            out[prefix + "macro_f1"] = report.axis[a].f1;
        }
        out["avg_macro_f1"] = report.avg_macro_f1;
    } else {
        out["accuracy"] = report.type16.accuracy;
        out["precision"] = report.type16.precision;
        out["recall"] = report.type16.recall;
        out["macro_f1"] = report.type16.f1;
    }
    return out;
}

}  // namespace persona
