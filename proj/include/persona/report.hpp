#pragma once

#include <map>
#include <string>

#include "persona/metrics.hpp"

namespace persona {

// Aligned plain-text table: dims reports run one column per axis plus Avg;
// type16 reports a single metric column.
std::string report_text(const MetricsReport& report);

// Machine-readable form; identical inputs give identical bytes.
std::string report_json(const MetricsReport& report);

// Flat metric name -> value in stable alphabetical order. Shared by the
// multi-run aggregator and the JSON emitter.
std::map<std::string, double> report_scalar_metrics(const MetricsReport& report);

}  // namespace persona
