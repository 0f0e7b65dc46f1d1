#pragma once

/**
 * @file response.hpp
 * @brief Frequency-domain probe response of the optical mode: Brillouin
 *        linewidth engineering and OMIT/OMIA spectra.
 *
 * Threshold crossings (κ_eff <= 0, or a non-positive real part of the δ = 0
 * denominator) are reported as flags on the returned Spectrum; the numbers
 * stay finite so sweeps can pass through them.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "omdiss/model.hpp"
#include "omdiss/tolerances.hpp"

namespace omdiss {

enum class Process { Stokes, AntiStokes };

[[nodiscard]] constexpr Process process_of(DetuningCase c) {
    return is_anti_stokes(c) ? Process::AntiStokes : Process::Stokes;
}

/// Probed optical mode: a_j for the anti-Stokes pump (Δ_k = 0), a_k for Stokes.
[[nodiscard]] constexpr double probe_kappa(const PhysicalParams& p, Process proc) {
    return proc == Process::AntiStokes ? p.kappa_j : p.kappa_k;
}
[[nodiscard]] constexpr double probe_kappa_ex(const PhysicalParams& p, Process proc) {
    return proc == Process::AntiStokes ? p.kappa_j_ex : p.kappa_k_ex;
}

struct ProbeConfig {
    double epsilon_p = 1.0;
    /// External coupling in the normalization; <= 0 selects the probed mode's kappa_ex.
    double kappa_ex = 0.0;

    void validate() const {
        if (!(std::isfinite(epsilon_p) && epsilon_p > 0.0)) throw ValidationError("epsilon_p must be > 0");
    }
};

struct SpectrumPoint {
    double delta = 0.0;
    double p_a = 0.0;
    std::complex<double> amplitude;
};

struct Spectrum {
    std::vector<SpectrumPoint> points;
    /// κ_eff <= 0: the Stokes gain has reached the phonon-lasing threshold.
    bool gain_exceeds_loss = false;
    /// Re of the full δ = 0 denominator <= 0.
    bool unstable_response = false;
};

struct EffectiveLinewidth {
    double kappa_eff = 0.0;
    double delta_eff = 0.0;
    bool gain_exceeds_loss = false;
};

/// κ_eff and δ_eff of the probed mode with the Brillouin mode adiabatically eliminated.
[[nodiscard]] inline EffectiveLinewidth effective_linewidth(const PhysicalParams& p, double G_b, double delta,
                                                            Process proc) {
    if (!(p.gamma_b > 0.0)) throw ValidationError("effective_linewidth: gamma_b must be > 0");
    const double lorentz = G_b * G_b / (0.25 * p.gamma_b * p.gamma_b + delta * delta);
    const double sign = proc == Process::Stokes ? -1.0 : 1.0;
    EffectiveLinewidth out;
    out.kappa_eff = probe_kappa(p, proc) + sign * lorentz * p.gamma_b;
    out.delta_eff = delta - sign * lorentz * delta;
    out.gain_exceeds_loss = out.kappa_eff <= 0.0;
    return out;
}

/// C = 4 G_m² / (κ_eff γ_m).
[[nodiscard]] constexpr double cooperativity(double G_m, double kappa_eff, double gamma_m) {
    return 4.0 * G_m * G_m / (kappa_eff * gamma_m);
}

namespace detail {

inline void require_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("probe grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw std::invalid_argument("probe grid must be finite");
        if (i > 0 && grid[i] < grid[i - 1]) throw std::invalid_argument("probe grid must be sorted");
    }
}

/// P_a = |κ_norm / 2|² / |den|² with den floored away from zero.
inline double normalized_power(double kappa_norm, std::complex<double> den) {
    const double mag = std::max(std::abs(den), Tolerances::spectrum_denominator_floor);
    const double r = 0.5 * kappa_norm / mag;
    return r * r;
}

inline std::complex<double> field(double kappa_ex, double epsilon_p, std::complex<double> den) {
    if (std::abs(den) < Tolerances::spectrum_denominator_floor) {
        den = Tolerances::spectrum_denominator_floor;
    }
    return std::sqrt(kappa_ex) * epsilon_p / den;
}

}  // namespace detail

/// Intracavity power spectrum with only the Brillouin ancilla coupled.
[[nodiscard]] inline Spectrum linewidth_spectrum(const PhysicalParams& p, double G_b, Process proc,
                                                 std::span<const double> probe_grid, ProbeConfig probe = {}) {
    detail::require_grid(probe_grid);
    probe.validate();
    const double kappa_ex = probe.kappa_ex > 0.0 ? probe.kappa_ex : probe_kappa_ex(p, proc);
    const double kappa_norm = effective_linewidth(p, G_b, 0.0, proc).kappa_eff;

    Spectrum out;
    out.gain_exceeds_loss = kappa_norm <= 0.0;
    out.points.reserve(probe_grid.size());
    for (double delta : probe_grid) {
        const auto eff = effective_linewidth(p, G_b, delta, proc);
        out.gain_exceeds_loss = out.gain_exceeds_loss || eff.gain_exceeds_loss;
        const std::complex<double> den(0.5 * eff.kappa_eff, -eff.delta_eff);
        out.points.push_back({delta, detail::normalized_power(kappa_norm, den),
                              detail::field(kappa_ex, probe.epsilon_p, den)});
    }
    out.unstable_response = out.gain_exceeds_loss;
    return out;
}

/**
 * @brief Full OMIT/OMIA spectrum with both the Brillouin and breathing modes.
 *
 * G_b² flips sign for Stokes cases and G_m² for blue detuning. Normalized with
 * the δ = 0 engineered linewidth κ ± 4G_b²/γ_b.
 */
[[nodiscard]] inline Spectrum omit_spectrum(const PhysicalParams& p, double G_b, double G_m, DetuningCase c,
                                            std::span<const double> probe_grid, ProbeConfig probe = {}) {
    detail::require_grid(probe_grid);
    probe.validate();
    const Process proc = process_of(c);
    const double kappa = probe_kappa(p, proc);
    const double kappa_ex = probe.kappa_ex > 0.0 ? probe.kappa_ex : probe_kappa_ex(p, proc);
    const double sb = proc == Process::AntiStokes ? 1.0 : -1.0;
    const double sm = is_blue(c) ? -1.0 : 1.0;
    const double kappa_norm = kappa + sb * 4.0 * G_b * G_b / p.gamma_b;

    auto denominator = [&](double delta) {
        return std::complex<double>(0.5 * kappa, -delta) +
               sb * G_b * G_b / std::complex<double>(0.5 * p.gamma_b, -delta) +
               sm * G_m * G_m / std::complex<double>(0.5 * p.gamma_m, -delta);
    };

    Spectrum out;
    out.gain_exceeds_loss = kappa_norm <= 0.0;
    out.unstable_response = denominator(0.0).real() <= 0.0;
    out.points.reserve(probe_grid.size());
    for (double delta : probe_grid) {
        const auto den = denominator(delta);
        out.points.push_back({delta, detail::normalized_power(kappa_norm, den),
                              detail::field(kappa_ex, probe.epsilon_p, den)});
    }
    return out;
}

/**
 * @brief Small-detuning approximation P_a ≈ |1/(1 − 2iδ/κ_eff ± C/(1 − 2iδ/γ_m))|².
 *
 * Red detuning takes +C, blue −C. Valid for |δ| ≪ γ_b, which is the caller's
 * responsibility. The amplitude field is in units of 2√κ_ex ε_p/κ_eff with the
 * probed anti-Stokes mode's κ_ex.
 */
[[nodiscard]] inline Spectrum omit_approx(const PhysicalParams& p, double kappa_eff, double G_m, bool blue,
                                          std::span<const double> probe_grid) {
    detail::require_grid(probe_grid);
    const double c = cooperativity(G_m, kappa_eff, p.gamma_m);
    const double s = blue ? -1.0 : 1.0;
    const double scale = 2.0 * std::sqrt(p.kappa_j_ex) / kappa_eff;
    Spectrum out;
    out.points.reserve(probe_grid.size());
    for (double delta : probe_grid) {
        const std::complex<double> den =
            std::complex<double>(1.0, -2.0 * delta / kappa_eff) + s * c / std::complex<double>(1.0, -2.0 * delta / p.gamma_m);
        const auto r = 1.0 / den;
        out.points.push_back({delta, std::norm(r), scale * r});
    }
    out.gain_exceeds_loss = kappa_eff <= 0.0;
    out.unstable_response = (1.0 + s * c) <= 0.0 || out.gain_exceeds_loss;
    return out;
}

/**
 * @brief Full width at half maximum of the main peak, by linear interpolation
 *        of the two half-maximum crossings. Empty if a crossing is off-grid.
 */
[[nodiscard]] inline std::optional<double> full_width_half_max(const Spectrum& s) {
    const auto& pts = s.points;
    if (pts.size() < 3) return std::nullopt;
    const auto peak = std::max_element(pts.begin(), pts.end(),
                                       [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.p_a < b.p_a; });
    const double half = 0.5 * peak->p_a;
    const auto ip = static_cast<std::size_t>(peak - pts.begin());

    auto crossing = [&](std::size_t lo, std::size_t hi) {
        // p_a(lo) and p_a(hi) straddle half
        const double t = (half - pts[lo].p_a) / (pts[hi].p_a - pts[lo].p_a);
        return pts[lo].delta + t * (pts[hi].delta - pts[lo].delta);
    };

    std::optional<double> left, right;
    for (std::size_t i = ip; i-- > 0;) {
        if (pts[i].p_a <= half) {
            left = crossing(i, i + 1);
            break;
        }
    }
    for (std::size_t i = ip + 1; i < pts.size(); ++i) {
        if (pts[i].p_a <= half) {
            right = crossing(i - 1, i);
            break;
        }
    }
    if (!left || !right) return std::nullopt;
    return *right - *left;
}

}  // namespace omdiss
