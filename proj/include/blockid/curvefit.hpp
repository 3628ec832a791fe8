#pragma once

#include <span>
#include <utility>
#include <vector>

namespace blockid {

/// p_f = C * (1 - phi/100)^n, fitted in log-log space.
struct PowerLawFit {
    double c = 0.0;
    double n = 0.0;
    double r_squared = 0.0;  // computed on the original (non-log) scale

    double eval(double phi_percent) const;
};

/// y = a * exp(b x), fitted on log|y|.
struct ExponentialFit {
    double a = 0.0;
    double b = 0.0;
    double r_squared = 0.0;

    double eval(double x) const;
};

using Point = std::pair<double, double>;

/// Points are (porosity phi in percent, property p_f). Requires at least 3
/// points, 0 <= phi < 100 and p_f > 0. Duplicated phi values are averaged in
/// log space before the regression.
PowerLawFit fit_power_law(std::span<const Point> points);

/// Points are (x, y) with all y nonzero and of one sign; the sign carries to
/// the fitted scale a.
ExponentialFit fit_exponential(std::span<const Point> points);

/// 1 - SS_res/SS_tot. Throws UndefinedMetricError for constant y.
double r_squared(std::span<const double> y, std::span<const double> yhat);

}  // namespace blockid
