#pragma once

/// Numerical thresholds shared by every module. Tests reference these
/// directly instead of repeating literals.

namespace omdiss {

struct Tolerances {
    /// solve_linear: pivot below this fraction of the largest |a_ij| is singular.
    static constexpr double pivot_relative = 1e-14;
    /// Replacement for an exactly-zero Routh first-column entry.
    static constexpr double routh_epsilon = 1e-12;
    /// Roots closer than this (relative to ‖M‖_max) to the imaginary axis count as unstable.
    static constexpr double marginal_shift = 1e-9;
    /// Covariance symmetry bound kept by symmetrization.
    static constexpr double symmetry = 1e-10;
    /// Lyapunov residual bound relative to ‖D‖_max.
    static constexpr double lyapunov_residual = 1e-8;
    /// RK4 step bound: h <= rk4_step_scale / ‖M‖_max.
    static constexpr double rk4_step_scale = 1e-2;
    /// Smallest admissible RK4 step, seconds.
    static constexpr double min_step = 1e-15;
    /// Two-mode determinant below this is non-physical.
    static constexpr double det_floor = -1e-12;
    /// Relative slack on Σ² − 4 det V before it is treated as negative.
    static constexpr double discriminant_relative = 1e-12;
    /// Heisenberg floor slack on quadrature variances.
    static constexpr double variance_floor = 1e-9;
    /// Floor on |denominator| in spectra so threshold crossings stay finite.
    static constexpr double spectrum_denominator_floor = 1e-300;
};

}  // namespace omdiss
