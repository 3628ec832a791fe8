#include "blockid/curvefit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "blockid/errors.hpp"

namespace blockid {

namespace {

struct Line {
    double intercept = 0.0;
    double slope = 0.0;
};

// Least-squares line through (x, z).
Line fit_line(const std::vector<double>& x, const std::vector<double>& z) {
    const double n = static_cast<double>(x.size());
    double xbar = 0.0;
    double zbar = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xbar += x[i];
        zbar += z[i];
    }
    xbar /= n;
    zbar /= n;
    double sxx = 0.0;
    double sxz = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxz += (x[i] - xbar) * (z[i] - zbar);
    }
    Line line;
    line.slope = sxx == 0.0 ? 0.0 : sxz / sxx;
    line.intercept = zbar - line.slope * xbar;
    return line;
}

// R^2 with the convention for degenerate (constant-y) data: 1 when the fit
// reproduces the data, -inf otherwise. Matches the field's [-inf, 1] range.
double r_squared_clamped(const std::vector<double>& y, const std::vector<double>& yhat) {
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
        scale = std::max(scale, y[i] * y[i]);
    }
    if (ss_tot == 0.0) {
        return ss_res <= 1e-24 * std::max(scale, 1.0)
                   ? 1.0
                   : -std::numeric_limits<double>::infinity();
    }
    return 1.0 - ss_res / ss_tot;
}

}  // namespace

double PowerLawFit::eval(double phi_percent) const {
    return c * std::pow(1.0 - phi_percent / 100.0, n);
}

double ExponentialFit::eval(double x) const { return a * std::exp(b * x); }

PowerLawFit fit_power_law(std::span<const Point> points) {
    if (points.size() < 3) {
        throw DomainError("fit_power_law: needs at least 3 points");
    }
    for (const Point& p : points) {
        if (!(p.first >= 0.0) || !(p.first < 100.0)) {
            throw DomainError("fit_power_law: porosity must satisfy 0 <= phi < 100");
        }
        if (!(p.second > 0.0) || !std::isfinite(p.second)) {
            throw DomainError("fit_power_law: property values must be positive");
        }
    }

    // Average duplicated porosities in log space.
    std::map<double, std::pair<double, int>> grouped;
    for (const Point& p : points) {
        auto& [sum, count] = grouped[p.first];
        sum += std::log(p.second);
        ++count;
    }
    std::vector<double> x;
    std::vector<double> z;
    for (const auto& [phi, acc] : grouped) {
        x.push_back(std::log(1.0 - phi / 100.0));
        z.push_back(acc.first / acc.second);
    }
    const Line line = fit_line(x, z);

    PowerLawFit fit;
    fit.n = line.slope;
    fit.c = std::exp(line.intercept);

    std::vector<double> y;
    std::vector<double> yhat;
    for (const Point& p : points) {
        y.push_back(p.second);
        yhat.push_back(fit.eval(p.first));
    }
    fit.r_squared = r_squared_clamped(y, yhat);
    return fit;
}

ExponentialFit fit_exponential(std::span<const Point> points) {
    if (points.size() < 3) {
        throw DomainError("fit_exponential: needs at least 3 points");
    }
    const double sign = points.front().second > 0.0 ? 1.0 : -1.0;
    for (const Point& p : points) {
        if (p.second == 0.0 || !std::isfinite(p.second)) {
            throw DomainError("fit_exponential: y values must be nonzero and finite");
        }
        if (p.second * sign < 0.0) {
            throw DomainError("fit_exponential: y values must share one sign");
        }
    }
    std::vector<double> x;
    std::vector<double> z;
    for (const Point& p : points) {
        x.push_back(p.first);
        z.push_back(std::log(std::abs(p.second)));
    }
    const Line line = fit_line(x, z);

    ExponentialFit fit;
    fit.a = sign * std::exp(line.intercept);
    fit.b = line.slope;

    std::vector<double> y;
    std::vector<double> yhat;
    for (const Point& p : points) {
        y.push_back(p.second);
        yhat.push_back(fit.eval(p.first));
    }
    fit.r_squared = r_squared_clamped(y, yhat);
    return fit;
}

double r_squared(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) {
        throw ShapeError("r_squared: sequence lengths differ");
    }
    if (y.size() < 2) {
        throw DomainError("r_squared: needs at least 2 samples");
    }
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    if (ss_tot == 0.0) {
        throw UndefinedMetricError("r_squared: y is constant");
    }
    return 1.0 - ss_res / ss_tot;
}

}  // namespace blockid
