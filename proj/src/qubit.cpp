#include "qfc/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace qfc {

const char* to_string(SicDirection direction) {
    switch (direction) {
        case SicDirection::X: return "x";
        case SicDirection::XY: return "xy";
        case SicDirection::XYZ: return "xyz";
    }
    return "unknown";
}

std::optional<SicDirection> sic_direction_from_string(std::string_view name) {
    for (SicDirection d : {SicDirection::X, SicDirection::XY, SicDirection::XYZ}) {
        if (name == to_string(d)) return d;
    }
    return std::nullopt;
}

Eigen::Vector3d unit_vector(SicDirection direction) {
    switch (direction) {
        case SicDirection::X: return {1.0, 0.0, 0.0};
        case SicDirection::XY: return Eigen::Vector3d(1.0, 1.0, 0.0).normalized();
        case SicDirection::XYZ: return Eigen::Vector3d(1.0, 1.0, 1.0).normalized();
    }
    return Eigen::Vector3d::Zero();
}

double sic_purity(const Eigen::Vector3d& bloch) {
    const double x = bloch(0), y = bloch(1), z = bloch(2);
    const double s2 = bloch.squaredNorm();
    const double r3 = std::sqrt(3.0);
    const double num = 2.0 * (9.0 - 7.0 * s2 + 6.0 * r3 * x * y * z);
    const double den = 3.0 * ((3.0 - s2) * (3.0 - s2) -
                              4.0 * (x * x * y * y + y * y * z * z + z * z * x * x) +
                              8.0 * r3 * x * y * z);
    return 1.0 - num / den;
}

SicAnalytic sic_analytic(SicDirection direction, double s) {
    if (!(s >= 0.0 && s < 1.0)) {
        std::ostringstream os;
        os << "Bloch length " << s << " outside [0, 1)";
        throw Error(ErrorCode::Validation, os.str());
    }
    const double r3 = std::sqrt(3.0);
    const double s2 = s * s;
    SicAnalytic out;
    switch (direction) {
        case SicDirection::X:
            out.eigenvalues = {1.0 / (3.0 - r3 * s), 1.0 / (3.0 + r3 * s), (1.0 - s2) / (3.0 - s2)};
            break;
        case SicDirection::XY: {
            double root = std::sqrt(3.0 * s2 - 2.0 * s2 * s2);
            double den = 9.0 - 6.0 * s2;
            out.eigenvalues = {1.0 / 3.0, (3.0 - 2.0 * s2 + root) / den, (3.0 - 2.0 * s2 - root) / den};
            break;
        }
        case SicDirection::XYZ:
            out.eigenvalues = {1.0 / (3.0 - s), 1.0 / (3.0 - s), (1.0 - s) / (3.0 - s)};
            break;
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
    out.purity = sic_purity(s * unit_vector(direction));
    return out;
}

QubitClosedForms qubit_closed_forms(const Eigen::Vector3d& s, std::span<const double> weights,
                                    std::span<const Eigen::Vector3d> bloch_vectors) {
    if (weights.size() != bloch_vectors.size() || weights.empty()) {
        throw Error(ErrorCode::Dimension, "need one Bloch vector per weight");
    }
    if (!(s.norm() < 1.0)) throw Error(ErrorCode::Validation, "state Bloch vector must have length < 1");
    QubitClosedForms out;
    out.fim.setZero();
    out.metric_adjusted.setZero();
    const std::size_t m = weights.size();
    std::vector<double> denom(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Eigen::Vector3d& r = bloch_vectors[j];
        denom[j] = 1.0 + s.dot(r);
        if (!(weights[j] > 0.0) || !(denom[j] > 0.0)) {
            std::ostringstream os;
            os << "outcome " << j << ": need w > 0 and 1 + s.r > 0";
            throw Error(ErrorCode::Validation, os.str());
        }
        out.fim += weights[j] * r * r.transpose() / denom[j];
        out.metric_adjusted += weights[j] * (r * r.transpose() - s.dot(r) * s * r.transpose()) / denom[j];
        out.gill_massar_trace += weights[j] * (r.dot(r) - s.dot(r) * s.dot(r)) / denom[j];
    }
    double square_trace = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            const Eigen::Vector3d& rj = bloch_vectors[j];
            const Eigen::Vector3d& rk = bloch_vectors[k];
            double t = rj.dot(rk) - s.dot(rj) * s.dot(rk);
            square_trace += weights[j] * weights[k] * t * t / (denom[j] * denom[k]);
        }
    }
    out.purity = square_trace;  // d - 1 = 1
    return out;
}

}  // namespace qfc
