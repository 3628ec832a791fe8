#include "blockid/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>

#include "blockid/errors.hpp"
#include "blockid/textio.hpp"

namespace blockid {

CircleFit fit_circle_curvature(std::span<const std::array<double, 2>> points) {
    if (points.size() < 3) {
        throw DomainError("circle fit: needs at least 3 points");
    }
    const double n = static_cast<double>(points.size());

    // Center and scale for conditioning; undone at the end.
    double cx = 0.0;
    double cy = 0.0;
    for (const auto& p : points) {
        cx += p[0];
        cy += p[1];
    }
    cx /= n;
    cy /= n;
    double scale = 0.0;
    for (const auto& p : points) {
        scale = std::max({scale, std::abs(p[0] - cx), std::abs(p[1] - cy)});
    }
    if (scale == 0.0) {
        throw DomainError("circle fit: all points coincide");
    }

    // Kasa normal equations for x^2 + y^2 = c0 x + c1 y + c2.
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (const auto& p : points) {
        const double x = (p[0] - cx) / scale;
        const double y = (p[1] - cy) / scale;
        const double r2 = x * x + y * y;
        Eigen::Vector3d row(x, y, 1.0);
        m += row * row.transpose();
        rhs += r2 * row;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
    const double lmin = eig.eigenvalues()(0);
    const double lmax = eig.eigenvalues()(2);
    CircleFit fit;
    if (lmin < 1e-12 * lmax) {
        fit.collinear = true;
        fit.curvature = 0.0;
        fit.radius = std::numeric_limits<double>::infinity();
        fit.center = {cx, cy};
        return fit;
    }

    const Eigen::Vector3d c = m.ldlt().solve(rhs);
    const double ux = c(0) / 2.0;
    const double uy = c(1) / 2.0;
    const double radius_scaled = std::sqrt(std::max(0.0, c(2) + ux * ux + uy * uy));
    fit.radius = radius_scaled * scale;
    fit.curvature = fit.radius > 0.0 ? 1.0 / fit.radius : 0.0;
    fit.center = {cx + ux * scale, cy + uy * scale};
    return fit;
}

double contraction_strain(double rest_position, double current_position,
                          double rest_length) {
    if (!(rest_length > 0.0)) {
        throw DomainError("contraction strain: rest length must be > 0");
    }
    return 100.0 * (rest_position - current_position) / rest_length;
}

int porosity_from_mass(const DesignSample& sample) {
    if (!(sample.mass_g > 0.0) || !(sample.volume_cm3 > 0.0) ||
        !(sample.bulk_density > 0.0)) {
        throw DomainError("porosity: mass, volume and bulk density must be > 0");
    }
    const double solid_mass = sample.volume_cm3 * sample.bulk_density;
    if (sample.mass_g > solid_mass) {
        throw DomainError("porosity: mass exceeds the bulk mass, porosity would be negative");
    }
    const double phi = 100.0 * (1.0 - sample.mass_g / solid_mass);
    return static_cast<int>(std::lround(phi));
}

double coiling_radius(double nozzle_height_mm) {
    if (!(nozzle_height_mm >= 2.5) || !(nozzle_height_mm <= 10.0)) {
        throw DomainError("coiling radius: nozzle height " +
                          textio::format_double(nozzle_height_mm) +
                          " mm is outside the calibrated range 2.5 to 10 mm");
    }
    return 0.40 * nozzle_height_mm - 0.3;
}

std::vector<MarkerFrame> load_marker_frames(const std::filesystem::path& path) {
    const std::string text = textio::read_file(path);
    std::istringstream in(text);
    std::string line;
    std::vector<MarkerFrame> frames;
    long rownum = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = textio::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (first) {
            first = false;
            // Header line such as "t,x1,y1" is optional.
            char* end = nullptr;
            std::strtod(t.c_str(), &end);
            if (end == t.c_str()) continue;
        }
        ++rownum;
        const auto cells = textio::split(t, ',');
        if (cells.size() < 3 || cells.size() % 2 == 0) {
            throw ParseError(path.string() + ": row " + std::to_string(rownum) +
                             " must have t followed by x,y pairs");
        }
        MarkerFrame frame;
        frame.timestamp = textio::parse_finite_double(
            cells[0], path.string() + ": row " + std::to_string(rownum) + ", column 1");
        for (std::size_t i = 1; i + 1 < cells.size(); i += 2) {
            const std::string ctx =
                path.string() + ": row " + std::to_string(rownum) + ", column " +
                std::to_string(i + 1);
            frame.points.push_back({textio::parse_finite_double(cells[i], ctx),
                                    textio::parse_finite_double(cells[i + 1], ctx)});
        }
        frames.push_back(std::move(frame));
    }
    if (frames.empty()) {
        throw ParseError(path.string() + ": no marker frames found");
    }
    return frames;
}

}  // namespace blockid
