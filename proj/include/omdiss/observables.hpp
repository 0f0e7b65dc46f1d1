#pragma once

/**
 * @file observables.hpp
 * @brief Entanglement and occupation numbers extracted from covariance matrices.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "omdiss/errors.hpp"
#include "omdiss/gaussian.hpp"
#include "omdiss/model.hpp"
#include "omdiss/smallmat.hpp"
#include "omdiss/tolerances.hpp"

namespace omdiss {

/// V = [[v1, v3], [v3ᵀ, v2]] for a pair of modes.
struct TwoModeBlocks {
    Matrix<2> v1;
    Matrix<2> v2;
    Matrix<2> v3;
};

[[nodiscard]] constexpr std::array<std::size_t, 2> quadratures(Mode m) { return {q_index(m), p_index(m)}; }

[[nodiscard]] inline TwoModeBlocks two_mode_blocks(const Matrix<6>& v, Mode first = Mode::optical,
                                                   Mode second = Mode::mechanical) {
    const auto a = quadratures(first);
    const auto b = quadratures(second);
    return {submatrix<2>(v, a), submatrix<2>(v, b), block<2>(v, a, b)};
}

[[nodiscard]] inline Matrix<4> two_mode_covariance(const Matrix<6>& v, Mode first = Mode::optical,
                                                   Mode second = Mode::mechanical) {
    const auto a = quadratures(first);
    const auto b = quadratures(second);
    return submatrix<4>(v, {a[0], a[1], b[0], b[1]});
}

[[nodiscard]] inline TwoModeBlocks split_blocks(const Matrix<4>& v) {
    return {submatrix<2>(v, {0, 1}), submatrix<2>(v, {2, 3}), block<2>(v, {0, 1}, {2, 3})};
}

namespace detail {

/// Smaller root ν² of ν⁴ − Σν² + det V, with the discriminant clamped near zero.
inline double smaller_symplectic_square(double sigma, double det_v) {
    double disc = sigma * sigma - 4.0 * det_v;
    if (disc < 0.0) {
        if (disc < -Tolerances::discriminant_relative * sigma * sigma) {
            throw NonPhysicalCovariance("two-mode covariance: negative symplectic discriminant");
        }
        disc = 0.0;
    }
    return std::max(0.0, 0.5 * (sigma - std::sqrt(disc)));
}

}  // namespace detail

/// Both symplectic eigenvalues (ν₋, ν₊) of a two-mode covariance; physical states have ν₋ >= 1/2.
[[nodiscard]] inline std::array<double, 2> symplectic_eigenvalues(const Matrix<4>& v) {
    const auto b = split_blocks(v);
    const double sigma = det(b.v1) + det(b.v2) + 2.0 * det(b.v3);
    const double det_v = det(v);
    const double lo = detail::smaller_symplectic_square(sigma, det_v);
    return {std::sqrt(lo), std::sqrt(std::max(0.0, sigma - lo))};
}

/**
 * @brief Logarithmic negativity E_N = max(0, −ln 2η) of a two-mode covariance.
 *
 * η is the smaller symplectic eigenvalue of the partial transpose:
 * η² = (Σ − √(Σ² − 4 det V))/2 with Σ = det V1 + det V2 − 2 det V3.
 *
 * @throws NonPhysicalCovariance if det V < det_floor
 */
[[nodiscard]] inline double log_negativity(const Matrix<4>& v) {
    const double det_v = det(v);
    if (det_v < Tolerances::det_floor) {
        throw NonPhysicalCovariance("log_negativity: det V = " + std::to_string(det_v) + " < 0");
    }
    const auto b = split_blocks(v);
    const double sigma = det(b.v1) + det(b.v2) - 2.0 * det(b.v3);
    const double eta = std::sqrt(detail::smaller_symplectic_square(sigma, std::max(det_v, 0.0)));
    if (!(eta > 0.0)) {
        throw NonPhysicalCovariance("log_negativity: vanishing symplectic eigenvalue");
    }
    return std::max(0.0, -std::log(2.0 * eta));
}

[[nodiscard]] inline double log_negativity(const CovarianceMatrix& v, Mode first = Mode::optical,
                                           Mode second = Mode::mechanical) {
    return log_negativity(two_mode_covariance(v.v, first, second));
}

/// ⟨o†o⟩ = (V_qq + V_pp − 1)/2 for the chosen mode.
[[nodiscard]] inline double thermal_occupation(const CovarianceMatrix& v, Mode mode = Mode::mechanical) {
    const auto q = q_index(mode);
    const auto p = p_index(mode);
    return 0.5 * (v.v(q, q) + v.v(p, p) - 1.0);
}

/**
 * @brief Weak-coupling sideband-cooling estimate
 *        n_f = γ_m n_m / (γ_m + 4G_m²/κ_eff), κ_eff = κ + 4G_b²/γ_b.
 */
[[nodiscard]] inline double rate_equation_nf(const PhysicalParams& p, double G_m, double G_b) {
    const double kappa_eff = p.kappa_j + 4.0 * G_b * G_b / p.gamma_b;
    return p.gamma_m * p.n_m / (p.gamma_m + 4.0 * G_m * G_m / kappa_eff);
}

struct Supermodes {
    double omega_a = 0.0;
    double omega_b = 0.0;
};

/// Hybridized optical/Brillouin frequencies ω_m ∓ |G_b|.
[[nodiscard]] constexpr Supermodes supermode_frequencies(double omega_m, double G_b) {
    const double g = G_b < 0.0 ? -G_b : G_b;
    return {omega_m - g, omega_m + g};
}

struct CoolingResult {
    double n_f = 0.0;
    /// n_f without engineering divided by n_f.
    double ratio = 0.0;
    PhysicalParams params;
    DriveConfig drive;
};

/// Steady occupation of m for the drive, and the ratio against the same drive with G_b = 0.
[[nodiscard]] inline CoolingResult cooling_result(const PhysicalParams& p, const DriveConfig& drive) {
    DriveConfig bare = drive;
    bare.G_b = 0.0;
    const double n_f = thermal_occupation(steady_covariance(build_drift(p, drive)));
    const double n_ref = thermal_occupation(steady_covariance(build_drift(p, bare)));
    return {n_f, n_ref / n_f, p, drive};
}

}  // namespace omdiss
