#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace blockid {

enum class DatasetRole { identification, validation };

std::string to_string(DatasetRole role);
DatasetRole dataset_role_from_string(const std::string& text);

/// Uniformly sampled multi-channel record. Values are immutable by
/// convention once constructed; estimation workers share datasets by
/// const reference.
struct TimeSeriesDataset {
    std::string name;
    double sample_period = 0.0;  // seconds
    Eigen::MatrixXd inputs;      // N x m
    Eigen::MatrixXd outputs;     // N x p
    DatasetRole role = DatasetRole::identification;
    std::vector<std::string> input_names;   // optional units as "name[unit]"
    std::vector<std::string> output_names;
    bool normalized = false;  // inputs already divided by 100
    std::map<std::string, std::string> extra;  // provenance: seed, version, digests

    Eigen::Index n_samples() const { return std::max(inputs.rows(), outputs.rows()); }
    Eigen::Index input_channels() const { return inputs.cols(); }
    Eigen::Index output_channels() const { return outputs.cols(); }

    /// N >= 2, equal row counts, positive sample period, finite samples.
    void validate() const;
};

/// Raw resistance record R(t) with the reference resistance R0.
struct ResistanceTrace {
    std::vector<double> samples;  // ohm
    double r0 = 0.0;              // ohm

    /// R0 defaults to the first sample (records start unactuated).
    static ResistanceTrace from_samples(std::vector<double> samples);
};

/// Relative resistance change 100*(R - R0)/R0 per sample, in percent.
std::vector<double> compute_resistance_change(const ResistanceTrace& trace);

/// Divides every input channel by 100 (percent to fraction). Refuses to run
/// twice on the same dataset.
TimeSeriesDataset normalize_inputs(const TimeSeriesDataset& dataset);

/// normalize_inputs if needed, identity otherwise.
TimeSeriesDataset ensure_normalized(const TimeSeriesDataset& dataset);

TimeSeriesDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const TimeSeriesDataset& dataset, const std::filesystem::path& path);

}  // namespace blockid
