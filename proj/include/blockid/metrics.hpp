#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace blockid {

struct MetricResult {
    double nrmse_fit = 0.0;   // percent, may be negative
    double scaled_rms = 0.0;  // percent of max |output|
    std::size_t n_samples = 0;
};

/// NRMSE fit in percent: 100 * (1 - ||y-yhat|| / ||y-mean(y)||).
/// 100 means a perfect prediction, 0 no better than the signal mean.
/// Throws ShapeError on length mismatch, UndefinedMetricError on constant y.
double nrmse_fit(std::span<const double> y, std::span<const double> yhat);

/// RMS error scaled by the maximum absolute output, in percent:
/// (100 / max|y|) * sqrt(sum (y-yhat)^2 / N).
/// Throws UndefinedMetricError when max|y| is zero.
double scaled_rms(std::span<const double> y, std::span<const double> yhat);

MetricResult evaluate_metrics(std::span<const double> y, std::span<const double> yhat);

struct AggregateStats {
    double mean_fit = 0.0;
    double fit_se = 0.0;  // sample standard deviation / sqrt(k); 0 for k == 1
    double mean_rms = 0.0;
    double rms_se = 0.0;
    std::size_t count = 0;
};

AggregateStats aggregate(std::span<const MetricResult> results);

double mean(std::span<const double> values);
double standard_error(std::span<const double> values);

}  // namespace blockid
