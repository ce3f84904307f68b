#pragma once

// JSON and flat-CSV views of the result types. Non-finite numbers become
// JSON null.

#include <nlohmann/json.hpp>
#include <ostream>

#include "wstat/estimation.hpp"
#include "wstat/geometry.hpp"
#include "wstat/montecarlo.hpp"

namespace wstat {

nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const MetricTensor& tensor);
nlohmann::json to_json(const EuclideanReport& report);
nlohmann::json to_json(const StatisticSummary& summary);
nlohmann::json to_json(const EstimatorReport& report);
nlohmann::json to_json(const SimReport& report);
nlohmann::json to_json(const SweepReport& report);

/// Header plus one row per (n, estimator, parameter, statistic):
///   n,estimator,parameter,statistic,value
void write_csv(std::ostream& out, const SimReport& report, bool header = true);
void write_csv(std::ostream& out, const SweepReport& report);

}  // namespace wstat
