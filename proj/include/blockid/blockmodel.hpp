#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blockid/lti.hpp"

namespace blockid {

/// Continuous piecewise linear map with linear extrapolation beyond the
/// outermost breakpoints (terminal segment slopes continue).
struct PiecewiseLinearMap {
    std::vector<double> breakpoints;  // strictly increasing, at least 2
    std::vector<double> values;

    void validate() const;
    double eval(double x) const;
    double slope_at(double x) const;

    /// Segment index and barycentric position used for x; extrapolation maps
    /// to the terminal segments (the position then falls outside [0, 1]).
    std::pair<std::size_t, double> locate(double x) const;

    /// g(x) = x sampled at `count` uniform breakpoints over [lo, hi].
    static PiecewiseLinearMap identity(double lo, double hi, int count);

    bool operator==(const PiecewiseLinearMap&) const = default;
};

inline double eval_pwl(const PiecewiseLinearMap& map, double x) { return map.eval(x); }

enum class ModelKind { Linear, Hammerstein, Wiener, WienerHammerstein };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& text);

/// Block-oriented MISO model. Composition per kind:
///
///   Linear:             y = sum_c H_c(u_c)
///   Wiener:             y = g(sum_c H1_c(u_c))
///   Hammerstein:        y = H2(g(sum_c u_c))
///   WienerHammerstein:  y = H2(g(sum_c H1_c(u_c)))
///
/// Per-channel front blocks live in `front` (also the per-channel blocks of
/// the Linear kind); the shared output block lives in `back`.
struct BlockModel {
    ModelKind kind = ModelKind::Linear;
    int channels = 1;                              // input channel count m
    std::vector<TransferFunction> front;           // one per input channel
    std::optional<PiecewiseLinearMap> nonlinearity;
    std::optional<TransferFunction> back;
    bool canonical = false;  // unit-DC-gain convention applied

    int input_channels() const { return channels; }
    int parameter_count() const;

    /// Structure must match kind; contained blocks must be valid.
    void validate() const;

    bool operator==(const BlockModel&) const = default;
};

/// Free-run simulation with zero initial conditions. `inputs` is N x m on the
/// normalized (fraction) scale. Throws ShapeError on channel mismatch.
std::vector<double> simulate_model(const BlockModel& model, const Eigen::MatrixXd& inputs);

/// Resolves the cascade's scale ambiguity: front blocks are rescaled by a
/// common factor to give front[0] unit DC gain, the back block is rescaled to
/// unit DC gain, and both factors are folded into the nonlinearity. Models
/// without the relevant blocks (or with zero DC gains) pass through
/// unchanged.
BlockModel canonicalized(const BlockModel& model);

/// One model per output channel, sharing the input layout.
struct ModelBundle {
    std::vector<BlockModel> models;
    std::map<std::string, std::string> metadata;  // provenance: datasets, seed, settings

    void validate() const;
    bool operator==(const ModelBundle&) const = default;
};

void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace blockid
