#include "blockid/metrics.hpp"

#include <cmath>

#include "blockid/errors.hpp"

namespace blockid {

double nrmse_fit(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) {
        throw ShapeError("nrmse_fit: sequence lengths differ");
    }
    if (y.size() < 2) {
        throw DomainError("nrmse_fit: needs at least 2 samples");
    }
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());

    double err2 = 0.0;
    double dev2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - yhat[i];
        const double d = y[i] - ybar;
        err2 += e * e;
        dev2 += d * d;
    }
    if (dev2 == 0.0) {
        throw UndefinedMetricError("nrmse_fit: output is constant, fit undefined");
    }
    return 100.0 * (1.0 - std::sqrt(err2) / std::sqrt(dev2));
}

double scaled_rms(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) {
        throw ShapeError("scaled_rms: sequence lengths differ");
    }
    if (y.empty()) {
        throw DomainError("scaled_rms: needs at least 1 sample");
    }
    double scale = 0.0;
    double err2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        scale = std::max(scale, std::abs(y[i]));
        const double e = y[i] - yhat[i];
        err2 += e * e;
    }
    if (scale <= 0.0) {
        throw UndefinedMetricError("scaled_rms: max output is zero, scale undefined");
    }
    return 100.0 / scale * std::sqrt(err2 / static_cast<double>(y.size()));
}

MetricResult evaluate_metrics(std::span<const double> y, std::span<const double> yhat) {
    MetricResult r;
    r.nrmse_fit = nrmse_fit(y, yhat);
    r.scaled_rms = scaled_rms(y, yhat);
    r.n_samples = y.size();
    return r;
}

double mean(std::span<const double> values) {
    if (values.empty()) throw DomainError("mean: empty input");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double standard_error(std::span<const double> values) {
    if (values.empty()) throw DomainError("standard_error: empty input");
    const std::size_t k = values.size();
    if (k == 1) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(k - 1));
    return sd / std::sqrt(static_cast<double>(k));
}

AggregateStats aggregate(std::span<const MetricResult> results) {
    if (results.empty()) throw DomainError("aggregate: needs at least one result");
    std::vector<double> fits;
    std::vector<double> rmss;
    fits.reserve(results.size());
    rmss.reserve(results.size());
    for (const MetricResult& r : results) {
        fits.push_back(r.nrmse_fit);
        rmss.push_back(r.scaled_rms);
    }
    AggregateStats out;
    out.mean_fit = mean(fits);
    out.fit_se = standard_error(fits);
    out.mean_rms = mean(rmss);
    out.rms_se = standard_error(rmss);
    out.count = results.size();
    return out;
}

}  // namespace blockid
