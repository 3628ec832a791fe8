#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blockid/dataset.hpp"
#include "blockid/lti.hpp"

namespace blockid {

enum class PlantKind { Linear, Wiener, Hammerstein, WienerHammerstein, HystereticFoam, Miso3 };

std::string to_string(PlantKind kind);
PlantKind plant_kind_from_string(const std::string& text);

/// Exponential saturation c1 * (exp(c2 x) - 1); the closed-form nonlinearity
/// the plants use (the estimators approximate it piecewise linearly).
struct ExpSaturation {
    double c1 = 1.0;
    double c2 = 1.0;

    double eval(double x) const;
};

/// Ground-truth plant: a pressure-to-resistance sensing chain per input
/// channel, followed by the deformation chain(s)
///
///   v_i = sum_c mix(i,c) * H1_c(dR_c / 100)
///   y_i = H2_i(g_i(v_i)) + noise
///
/// where absent blocks are identities. Every output model the plant realizes
/// is therefore in the estimator's own class.
struct PlantSpec {
    std::string name;
    PlantKind kind = PlantKind::Linear;
    int channels = 1;
    int outputs = 1;

    std::vector<TransferFunction> sensors;  // pressure (kPa) -> dR (%), one per channel
    std::vector<TransferFunction> fronts;   // H1 per channel; empty = identity
    Eigen::MatrixXd mix;                    // outputs x channels; empty = ones
    std::vector<std::optional<ExpSaturation>> nonlins;  // g per output
    std::vector<std::optional<TransferFunction>> backs;  // H2 per output

    std::vector<std::string> output_names;  // defaults to y0..yp
    double noise_rel = 0.0;  // output noise SD as a fraction of that output's range
    std::uint64_t seed = 0;

    /// All blocks stable and shapes consistent; throws DomainError otherwise.
    void validate() const;
};

enum class ExcitationPattern { step_cycles, gradual_increase, mixed_parallel };

std::string to_string(ExcitationPattern pattern);

/// Vacuum actuation program. Pressures are gauge kPa (negative = vacuum).
struct ExcitationProgram {
    ExcitationPattern pattern = ExcitationPattern::step_cycles;
    std::vector<double> levels_kpa{-20.0};
    double on_seconds = 10.0;
    double off_seconds = 10.0;
    int cycles = 3;
    int channels = 1;

    void validate() const;
};

/// Piecewise-constant pressure trajectory (N x channels) realizing a program.
///
///   step_cycles:      on/off pulses at levels_kpa[0]; with several channels,
///                     each channel pulses alone in turn, then all together.
///   gradual_increase: staircase down through levels_kpa and back up, with a
///                     rest segment on both ends.
///   mixed_parallel:   two channels pulse concurrently at different levels
///                     (first half of levels_kpa on channel 0, rest on 1).
Eigen::MatrixXd generate_excitation(const ExcitationProgram& program, double dt);

/// Drives the plant with a pressure trajectory and returns the recorded
/// dataset: inputs are resistance changes in percent, outputs the
/// deformations. Noise is seeded from (spec.seed, noise_stream); equal seeds
/// reproduce the dataset bitwise.
TimeSeriesDataset simulate_plant(const PlantSpec& spec, const Eigen::MatrixXd& pressure_kpa,
                                 double dt, DatasetRole role, const std::string& name,
                                 std::uint64_t noise_stream = 0);

/// The five-dataset suite used throughout: steps at -10/-60 kPa plus the
/// gradual staircase for identification, steps at -20/-40 kPa for validation.
std::vector<TimeSeriesDataset> generate_standard_suite(const PlantSpec& spec, double dt,
                                                       int cycles = 3);

struct HysteresisLoop {
    double area = 0.0;  // enclosed (input, output) area accumulated over the record
    int poly_order = 3;
    Eigen::VectorXd loading_coeffs;    // polynomial in the input, ascending powers
    Eigen::VectorXd unloading_coeffs;
    std::size_t n_loading = 0;
    std::size_t n_unloading = 0;
};

/// Splits samples into loading/unloading branches by the sign of the input
/// derivative, fits one polynomial per branch and integrates the enclosed
/// area. Throws DomainError when the input never changes direction.
HysteresisLoop hysteresis_loop(const TimeSeriesDataset& dataset, int poly_order = 3,
                               int input_channel = 0, int output_channel = 0);

struct PlantCatalog {
    std::vector<PlantSpec> plants;

    const PlantSpec* find(const std::string& name) const;
    const PlantSpec& require(const std::string& name) const;
    std::vector<std::string> names() const;

    static PlantCatalog load(const std::filesystem::path& path);
};

}  // namespace blockid
