#pragma once

/**
 * @file gaussian.hpp
 * @brief Covariance dynamics dV/dt = MV + VMᵀ + D: steady state, fixed-step
 *        RK4 evolution and Routh–Hurwitz stability of M.
 *
 * vec() is row-major, so MV ↦ (M ⊗ I) vec V and VMᵀ ↦ (I ⊗ M) vec V. The
 * Lyapunov operator is the Kronecker sum L = M ⊗ I + I ⊗ M.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "omdiss/errors.hpp"
#include "omdiss/model.hpp"
#include "omdiss/smallmat.hpp"
#include "omdiss/tolerances.hpp"

namespace omdiss {

struct CovarianceMatrix {
    Matrix<6> v;
    /// Seconds; set by evolve_covariance.
    std::optional<double> t;
};

/// Initial state with the drives switched on at t = 0: a in vacuum, b and m at their bath occupations.
[[nodiscard]] inline CovarianceMatrix equilibrium_initial_state(const PhysicalParams& p) {
    const double vb = p.n_b + 0.5;
    const double vm = p.n_m + 0.5;
    return {Matrix<6>::diagonal({0.5, 0.5, vb, vb, vm, vm}), 0.0};
}

struct StabilityReport {
    bool stable = false;
    /// Characteristic polynomial of M/scale + marginal_shift·I, the matrix actually tested.
    PolynomialCoeffs char_coeffs{std::vector<double>{0.0, 1.0}};
    /// Smallest |Routh first-column entry|.
    double margin = 0.0;
    /// ‖M‖_max used to normalize M.
    double scale = 1.0;
};

/**
 * @brief Routh–Hurwitz on the normalized drift matrix.
 *
 * M is divided by ‖M‖_max and shifted right by marginal_shift, so eigenvalues
 * within that relative distance of the imaginary axis count as unstable.
 */
[[nodiscard]] inline StabilityReport stability(const DriftModel& drift) {
    StabilityReport rep;
    const double scale = drift.m.max_abs();
    rep.scale = scale > 0.0 ? scale : 1.0;
    const Matrix<6> shifted = drift.m * (1.0 / rep.scale) + Tolerances::marginal_shift * Matrix<6>::identity();
    rep.char_coeffs = char_poly(shifted);
    const auto routh = routh_hurwitz(rep.char_coeffs);
    rep.stable = routh.stable;
    rep.margin = routh.margin;
    return rep;
}

[[nodiscard]] inline Matrix<36> lyapunov_operator(const Matrix<6>& m) {
    const auto eye = Matrix<6>::identity();
    return kron(m, eye) + kron(eye, m);
}

/// MV + VMᵀ + D
[[nodiscard]] inline Matrix<6> covariance_rhs(const DriftModel& drift, const Matrix<6>& v) {
    return drift.m * v + v * drift.m.transposed() + drift.d;
}

/// ‖MV + VMᵀ + D‖_max
[[nodiscard]] inline double lyapunov_residual(const DriftModel& drift, const Matrix<6>& v) {
    return covariance_rhs(drift, v).max_abs();
}

/**
 * @brief Steady state: solve (M⊗I + I⊗M) vec V = −vec D.
 * @throws UnstableSystem if M fails the Routh–Hurwitz test
 */
[[nodiscard]] inline CovarianceMatrix steady_covariance(const DriftModel& drift) {
    if (!stability(drift).stable) {
        throw UnstableSystem("steady_covariance: drift matrix has eigenvalues with non-negative real part");
    }
    Vector<36> rhs = vectorize(drift.d);
    for (double& x : rhs) x = -x;
    const auto sol = solve_linear(lyapunov_operator(drift.m), rhs);
    return {unvectorize<6>(sol).symmetrized(), std::nullopt};
}

/// One classical RK4 step of size h, applied directly to the 6x6 matrix ODE.
[[nodiscard]] inline Matrix<6> rk4_step(const DriftModel& drift, const Matrix<6>& v, double h) {
    const Matrix<6> k1 = covariance_rhs(drift, v);
    const Matrix<6> k2 = covariance_rhs(drift, v + (0.5 * h) * k1);
    const Matrix<6> k3 = covariance_rhs(drift, v + (0.5 * h) * k2);
    const Matrix<6> k4 = covariance_rhs(drift, v + h * k3);
    return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/**
 * @brief RK4 on a linear ODE as an affine map vec V ↦ (I + E) vec V + c.
 *
 * For dV/dt = L(V) + D one RK4 step is I + E with E = hL + (hL)²/2 + (hL)³/6
 * + (hL)⁴/24 and c = h(I + hL/2 + (hL)²/6 + (hL)³/24) vec D. Keeping E rather
 * than I + E preserves precision when n steps are composed by squaring.
 */
class Rk4Propagator {
public:
    static Rk4Propagator single_step(const DriftModel& drift, double h) {
        const Matrix<36> hl = h * lyapunov_operator(drift.m);
        const auto eye = Matrix<36>::identity();
        // G = I + hL/2 (I + hL/3 (I + hL/4))
        const Matrix<36> g = eye + (0.5 * hl) * (eye + (1.0 / 3.0) * hl * (eye + 0.25 * hl));
        Rk4Propagator p;
        p.e_ = hl * g;
        p.c_ = g * vectorize(drift.d);
        for (double& x : p.c_) x *= h;
        return p;
    }

    /// Map for applying *this first, then `next`.
    [[nodiscard]] Rk4Propagator then(const Rk4Propagator& next) const {
        Rk4Propagator out;
        out.e_ = e_ + next.e_ + next.e_ * e_;
        const auto ec = next.e_ * c_;
        for (std::size_t i = 0; i < 36; ++i) out.c_[i] = c_[i] + ec[i] + next.c_[i];
        return out;
    }

    /// The map applied n >= 1 times.
    [[nodiscard]] Rk4Propagator power(std::uint64_t n) const {
        if (n == 0) throw std::invalid_argument("Rk4Propagator::power: n must be >= 1");
        std::optional<Rk4Propagator> acc;
        Rk4Propagator base = *this;
        while (true) {
            if (n & 1U) acc = acc ? acc->then(base) : base;
            n >>= 1U;
            if (n == 0) break;
            base = base.then(base);
        }
        return *acc;
    }

    [[nodiscard]] Matrix<6> apply(const Matrix<6>& v) const {
        const auto x = vectorize(v);
        auto y = e_ * x;
        for (std::size_t i = 0; i < 36; ++i) y[i] += x[i] + c_[i];
        return unvectorize<6>(y);
    }

private:
    Matrix<36> e_;
    Vector<36> c_{};
};

/// Largest admissible RK4 step for this drift.
[[nodiscard]] inline double max_rk4_step(const DriftModel& drift) {
    const double scale = drift.m.max_abs();
    return scale > 0.0 ? Tolerances::rk4_step_scale / scale : std::numeric_limits<double>::infinity();
}

/**
 * @brief Integrate dV/dt = MV + VMᵀ + D with fixed-step classical RK4.
 *
 * Every grid interval is split into the fewest equal steps not exceeding
 * max_rk4_step(); each output is symmetrized.
 *
 * @param t_grid seconds, strictly increasing, starting at 0
 * @throws StepSizeUnderflow if a step would fall below Tolerances::min_step
 */
[[nodiscard]] inline std::vector<CovarianceMatrix> evolve_covariance(const DriftModel& drift,
                                                                     const CovarianceMatrix& v0,
                                                                     std::span<const double> t_grid) {
    if (t_grid.empty() || t_grid.front() != 0.0) {
        throw std::invalid_argument("evolve_covariance: time grid must start at 0");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1]) || !std::isfinite(t_grid[i])) {
            throw std::invalid_argument("evolve_covariance: time grid must be strictly increasing");
        }
    }
    const double h_max = max_rk4_step(drift);

    std::vector<CovarianceMatrix> out;
    out.reserve(t_grid.size());
    Matrix<6> v = v0.v.symmetrized();
    out.push_back({v, 0.0});

    std::optional<Rk4Propagator> cached;
    std::uint64_t cached_n = 0;
    double cached_h = 0.0;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double dt = t_grid[i] - t_grid[i - 1];
        const double steps = std::isfinite(h_max) ? std::ceil(dt / h_max) : 1.0;
        const auto n = static_cast<std::uint64_t>(std::max(1.0, steps));
        const double h = dt / static_cast<double>(n);
        if (h < Tolerances::min_step) {
            throw StepSizeUnderflow("evolve_covariance: required step " + std::to_string(h) + " s is below 1e-15 s");
        }
        if (!cached || n != cached_n || std::abs(h - cached_h) > 1e-12 * h) {
            cached = Rk4Propagator::single_step(drift, h).power(n);
            cached_n = n;
            cached_h = h;
        }
        v = cached->apply(v).symmetrized();
        out.push_back({v, t_grid[i]});
    }
    return out;
}

}  // namespace omdiss
