#pragma once

#include <complex>
#include <span>
#include <vector>

namespace blockid {

/// Discrete-time rational filter in shift-operator form,
///
///   y(t) = sum_i num[i] u(t - i - input_delay) - sum_{j>=1} den[j] y(t - j)
///
/// with a monic denominator (den[0] == 1) and zero initial conditions.
struct TransferFunction {
    std::vector<double> num{1.0};
    std::vector<double> den{1.0};
    int input_delay = 0;

    TransferFunction() = default;
    TransferFunction(std::vector<double> numerator, std::vector<double> denominator,
                     int delay = 0)
        : num(std::move(numerator)), den(std::move(denominator)), input_delay(delay) {}

    static TransferFunction identity() { return TransferFunction({1.0}, {1.0}); }

    int pole_count() const { return static_cast<int>(den.size()) - 1; }
    int zero_count() const { return static_cast<int>(num.size()) - 1; }

    /// Throws DomainError unless the coefficients are usable: non-empty,
    /// finite, monic denominator, non-negative delay.
    void validate() const;

    bool operator==(const TransferFunction&) const = default;
};

/// Runs the difference equation over the whole input. Empty input yields an
/// empty output. Throws DomainError on invalid coefficients.
std::vector<double> simulate_tf(const TransferFunction& tf, std::span<const double> input);

/// Denominator roots in the z-plane (roots of z^na + a1 z^{na-1} + ... + a_na).
std::vector<std::complex<double>> poles(const TransferFunction& tf);

/// Strict stability: every pole has modulus < 1, with a 1e-9 guard band at
/// the unit circle. Poles on the circle fail.
bool is_stable(const TransferFunction& tf);

double max_pole_modulus(const TransferFunction& tf);

/// Static gain sum(num)/sum(den). Throws DomainError when the denominator
/// sums to zero (z = 1 is a pole).
double dc_gain(const TransferFunction& tf);

/// Scales the numerator so the DC gain becomes exactly 1. Returns the scale
/// that was removed. Throws DomainError when the gain is zero or undefined.
double normalize_dc_gain(TransferFunction& tf);

}  // namespace blockid
