#pragma once

#include "qfc/linalg.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace qfc {

// Closed forms for a qubit in the Bloch parametrization rho = (1 + s.sigma)/2,
// i.e. tangents sigma_a / 2.

enum class SicDirection { X, XY, XYZ };  // (1,0,0), (1,1,0)/sqrt2, (1,1,1)/sqrt3

const char* to_string(SicDirection direction);
std::optional<SicDirection> sic_direction_from_string(std::string_view name);
Eigen::Vector3d unit_vector(SicDirection direction);

struct SicAnalytic {
    std::array<double, 3> eigenvalues;  // descending
    double purity = 0.0;
};

/// Fisher eigenvalues and purity of the qubit SIC at the state with Bloch vector
/// s * unit_vector(direction). Requires 0 <= s < 1.
SicAnalytic sic_analytic(SicDirection direction, double s);

/// SIC Fisher purity at an arbitrary Bloch vector (x, y, z).
double sic_purity(const Eigen::Vector3d& bloch);

struct QubitClosedForms {
    Eigen::Matrix3d fim;              // sum_j w_j r_j r_j^T / (1 + s.r_j)
    Eigen::Matrix3d metric_adjusted;  // J_S^{-1} I
    double gill_massar_trace = 0.0;   // tr(J_S^{-1} I)
    double purity = 0.0;              // tr[(J_S^{-1} I)^2] / (d - 1), d = 2
};

/// Requires |s| < 1, w_j > 0 and 1 + s.r_j > 0.
QubitClosedForms qubit_closed_forms(const Eigen::Vector3d& s, std::span<const double> weights,
                                    std::span<const Eigen::Vector3d> bloch_vectors);

}  // namespace qfc
