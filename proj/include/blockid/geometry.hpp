#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

namespace blockid {

/// Extracted marker coordinates for one camera frame, in millimeters.
struct MarkerFrame {
    double timestamp = 0.0;  // seconds
    std::vector<std::array<double, 2>> points;
};

struct CircleFit {
    double curvature = 0.0;  // 1/mm, non-negative; 0 for collinear points
    double radius = 0.0;     // mm, +inf for collinear points
    std::array<double, 2> center{0.0, 0.0};
    bool collinear = false;
};

/// Algebraic (Kasa) least-squares circle fit through marker points.
/// Needs at least 3 points; collinear configurations (smallest normal-matrix
/// eigenvalue below 1e-12 of the largest) report zero curvature.
CircleFit fit_circle_curvature(std::span<const std::array<double, 2>> points);

/// Compression strain in percent, positive when the marker moves toward the
/// fixture. Positions are coordinates along the gravity axis (growing
/// downward, away from the fixture).
double contraction_strain(double rest_position, double current_position,
                          double rest_length);

/// Weighed print sample used for the porosity formula.
struct DesignSample {
    double mass_g = 0.0;
    double volume_cm3 = 0.0;
    double bulk_density = 0.97;  // g/cm^3
};

/// phi = 100 (1 - m / (V rho_b)), rounded to the nearest whole percent.
int porosity_from_mass(const DesignSample& sample);

/// Printed coiling radius for a nozzle height in the calibrated 2.5-10 mm
/// band: R_c = 0.40 H - 0.3.
double coiling_radius(double nozzle_height_mm);

/// Marker CSV rows are `t,x1,y1[,x2,y2,...]`; a leading `#` or non-numeric
/// header line is skipped.
std::vector<MarkerFrame> load_marker_frames(const std::filesystem::path& path);

}  // namespace blockid
