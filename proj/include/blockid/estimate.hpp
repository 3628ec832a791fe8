#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blockid/blockmodel.hpp"
#include "blockid/dataset.hpp"
#include "blockid/metrics.hpp"

namespace blockid {

/// Knobs of the identification protocol: order grid bounds, breakpoint
/// count, iteration budget, restarts and the local-minimum thresholds.
struct SearchConfig {
    int max_poles = 10;
    int max_zeros = 10;  // grid additionally enforces zeros < poles
    int breakpoint_count = 10;  // explored range in the protocol is [5, 10]
    int max_iterations = 200;
    int restarts = 2;  // total tries per candidate; extra tries get perturbed starts
    std::uint64_t seed = 0;

    double cost_rel_tol = 1e-9;  // relative cost decrease over the stall window
    int cost_stall_window = 5;
    double gradient_tol = 1e-8;  // infinity norm
    double step_tol = 1e-10;

    int jobs = 1;  // worker threads across the order grid

    void validate() const;
};

/// One identification task: which datasets, which output, which model class.
/// Inputs are normalized on construction (percent -> fraction).
struct EstimationProblem {
    std::vector<TimeSeriesDataset> identification;
    std::vector<TimeSeriesDataset> validation;
    int output_channel = 0;
    ModelKind kind = ModelKind::Linear;
    SearchConfig config;
};

/// Validates shapes, disjointness and sample periods, and normalizes inputs.
EstimationProblem make_estimation_problem(std::vector<TimeSeriesDataset> identification,
                                          std::vector<TimeSeriesDataset> validation,
                                          int output_channel, ModelKind kind,
                                          SearchConfig config);

struct DatasetMetric {
    std::string name;
    DatasetRole role = DatasetRole::identification;
    double fit = 0.0;       // NRMSE fit, percent
    double rms = 0.0;       // scaled RMS, percent
    bool fit_defined = true;  // false when the output is constant
    std::size_t n_samples = 0;
};

struct FitReport {
    ModelKind kind = ModelKind::Linear;
    std::vector<DatasetMetric> per_dataset;
    double avg_fit = 0.0;  // mean over identification + validation
    double fit_se = 0.0;
    double avg_rms = 0.0;
    double rms_se = 0.0;
    int n_parameters = 0;
    double identification_cost = 0.0;  // sum of squared simulation errors
    std::string verdict;  // chosen orders / construction path
};

struct EstimationResult {
    BlockModel model;
    FitReport report;
};

/// Order-grid search with simulation-error minimization for the Linear kind.
EstimationResult estimate_linear(const EstimationProblem& problem);

/// Joint estimation of linear coefficients, breakpoint values and breakpoint
/// positions for the Wiener and Hammerstein kinds.
EstimationResult estimate_block(const EstimationProblem& problem);

/// Two-stage Wiener-Hammerstein construction. Path (a) fits a Wiener model
/// and refines its output with a linear block; path (b) fits a linear model
/// and refines with a Hammerstein stage. Each composition is kept only when
/// it improves on its own first stage; the path with the higher average fit
/// wins.
EstimationResult estimate_wh(const EstimationProblem& problem);

/// Dispatch on problem.kind.
EstimationResult estimate_model(const EstimationProblem& problem);

struct BundleResult {
    ModelBundle bundle;
    std::vector<FitReport> reports;
};

/// Independent estimation per output channel over a shared dataset suite.
BundleResult estimate_miso_bundle(const std::vector<EstimationProblem>& problems);

/// Index of the report with the highest average fit; ties break toward lower
/// scaled RMS, then fewer parameters.
std::size_t select_best(std::span<const FitReport> reports);

/// Evaluates a model against a dataset (normalizing inputs when needed).
DatasetMetric evaluate_model(const BlockModel& model, const TimeSeriesDataset& dataset,
                             int output_channel = 0);

FitReport report_for_model(const BlockModel& model, const EstimationProblem& problem);

/// Residual model behind the optimizer: parameter packing, free-run
/// residuals and the semi-analytic Jacobian (forward sensitivities for the
/// linear blocks, exact hat-basis derivatives for breakpoint values, central
/// differences for breakpoint positions). Exposed so the Jacobian can be
/// verified against finite differences.
class SimulationErrorProblem {
  public:
    struct Structure {
        ModelKind kind = ModelKind::Linear;
        int channels = 1;
        int na = 1;           // denominator order
        int nb = 1;           // numerator length
        int breakpoints = 0;  // 0 for Linear
    };

    SimulationErrorProblem(Structure structure,
                           std::vector<Eigen::MatrixXd> inputs,
                           std::vector<Eigen::VectorXd> outputs);

    const Structure& structure() const { return structure_; }
    int parameter_count() const;
    Eigen::Index residual_count() const { return total_samples_; }

    Eigen::VectorXd pack(const BlockModel& model) const;
    BlockModel unpack(const Eigen::VectorXd& theta) const;

    /// Breakpoints must stay strictly increasing (with a minimal gap).
    bool parameters_valid(const Eigen::VectorXd& theta) const;

    /// Concatenated (yhat - y) over all datasets; non-finite simulations
    /// yield +inf entries.
    Eigen::VectorXd residuals(const Eigen::VectorXd& theta) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& theta) const;
    double cost(const Eigen::VectorXd& theta) const;

  private:
    Structure structure_;
    std::vector<Eigen::MatrixXd> inputs_;
    std::vector<Eigen::VectorXd> outputs_;
    Eigen::Index total_samples_ = 0;
};

}  // namespace blockid
