#include "blockid/lti.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "blockid/errors.hpp"

namespace blockid {

namespace {

constexpr double kStabilityMargin = 1e-9;

}  // namespace

void TransferFunction::validate() const {
    if (num.empty() || den.empty()) {
        throw DomainError("transfer function: empty coefficient list");
    }
    if (den[0] != 1.0) {
        throw DomainError("transfer function: denominator must be monic");
    }
    if (input_delay < 0) {
        throw DomainError("transfer function: negative input delay");
    }
    for (double c : num) {
        if (!std::isfinite(c)) throw DomainError("transfer function: non-finite numerator");
    }
    for (double c : den) {
        if (!std::isfinite(c)) throw DomainError("transfer function: non-finite denominator");
    }
}

std::vector<double> simulate_tf(const TransferFunction& tf, std::span<const double> input) {
    tf.validate();
    const int n = static_cast<int>(input.size());
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    const int nb = static_cast<int>(tf.num.size());
    const int na = static_cast<int>(tf.den.size());
    for (int t = 0; t < n; ++t) {
        double acc = 0.0;
        for (int i = 0; i < nb; ++i) {
            const int k = t - i - tf.input_delay;
            if (k >= 0) acc += tf.num[static_cast<std::size_t>(i)] * input[static_cast<std::size_t>(k)];
        }
        for (int j = 1; j < na; ++j) {
            const int k = t - j;
            if (k >= 0) acc -= tf.den[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k)];
        }
        y[static_cast<std::size_t>(t)] = acc;
    }
    return y;
}

std::vector<std::complex<double>> poles(const TransferFunction& tf) {
    tf.validate();
    const int n = tf.pole_count();
    if (n == 0) return {};
    // Companion matrix of z^n + a1 z^{n-1} + ... + an.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        companion(0, i) = -tf.den[static_cast<std::size_t>(i) + 1];
    }
    for (int i = 1; i < n; ++i) {
        companion(i, i - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.push_back(solver.eigenvalues()(i));
    }
    return out;
}

double max_pole_modulus(const TransferFunction& tf) {
    double worst = 0.0;
    for (const auto& p : poles(tf)) {
        worst = std::max(worst, std::abs(p));
    }
    return worst;
}

bool is_stable(const TransferFunction& tf) {
    return max_pole_modulus(tf) < 1.0 - kStabilityMargin;
}

double dc_gain(const TransferFunction& tf) {
    tf.validate();
    double sn = 0.0;
    double sd = 0.0;
    for (double c : tf.num) sn += c;
    for (double c : tf.den) sd += c;
    if (sd == 0.0) {
        throw DomainError("transfer function: DC gain undefined, denominator sums to zero");
    }
    return sn / sd;
}

double normalize_dc_gain(TransferFunction& tf) {
    const double gain = dc_gain(tf);
    if (gain == 0.0 || !std::isfinite(gain)) {
        throw DomainError("transfer function: cannot normalize zero or non-finite DC gain");
    }
    for (double& c : tf.num) c /= gain;
    return gain;
}

}  // namespace blockid
