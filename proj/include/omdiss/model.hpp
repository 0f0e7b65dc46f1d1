#pragma once

/**
 * @file model.hpp
 * @brief Physical parameters, drive configurations and the linearized
 *        drift/diffusion matrices of the optical–Brillouin–mechanical system.
 *
 * All rates and frequencies are angular (rad/s). Quadratures are ordered
 * (q_a, p_a, q_b, p_b, q_m, p_m) with q = (o† + o)/√2, p = i(o† − o)/√2 and
 * vacuum variance 1/2.
 */

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "omdiss/errors.hpp"
#include "omdiss/smallmat.hpp"

namespace omdiss {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Hz -> rad/s.
[[nodiscard]] constexpr double angular(double hz) { return kTwoPi * hz; }
/// rad/s -> Hz.
[[nodiscard]] constexpr double hertz(double rad_per_s) { return rad_per_s / kTwoPi; }

/// Quadrature indices of the three modes.
enum class Mode : std::size_t { optical = 0, brillouin = 1, mechanical = 2 };

[[nodiscard]] constexpr std::size_t q_index(Mode m) { return 2 * static_cast<std::size_t>(m); }
[[nodiscard]] constexpr std::size_t p_index(Mode m) { return 2 * static_cast<std::size_t>(m) + 1; }

struct PhysicalParams {
    double kappa_j = angular(2e6);
    double kappa_k = angular(2e6);
    double kappa_j_ex = angular(1e6);
    double kappa_k_ex = angular(1e6);
    double gamma_b = angular(40e6);
    double gamma_m = angular(10e3);
    double omega_b = angular(10e9);
    double omega_m = angular(100e6);
    double g_b = angular(1e3);
    double g_m_j = angular(1e3);
    double g_m_k = angular(1e3);
    /// Thermal occupation of the breathing mode.
    double n_m = 250.0;
    /// Thermal occupation of the Brillouin mode; 0 unless overridden.
    double n_b = 0.0;

    /**
     * @brief Check the hard invariants.
     * @return soft warnings (resolved-sideband sanity)
     * @throws ValidationError naming the first violated invariant
     */
    std::vector<std::string> validate() const {
        auto positive = [](double v, std::string_view name) {
            if (!(std::isfinite(v) && v > 0.0)) {
                throw ValidationError(std::string(name) + " must be finite and > 0");
            }
        };
        positive(kappa_j, "kappa_j");
        positive(kappa_k, "kappa_k");
        positive(kappa_j_ex, "kappa_j_ex");
        positive(kappa_k_ex, "kappa_k_ex");
        positive(gamma_b, "gamma_b");
        positive(gamma_m, "gamma_m");
        positive(omega_b, "omega_b");
        positive(omega_m, "omega_m");
        positive(g_b, "g_b");
        positive(g_m_j, "g_m_j");
        positive(g_m_k, "g_m_k");
        if (!(std::isfinite(n_m) && n_m >= 0.0)) throw ValidationError("n_m must be finite and >= 0");
        if (!(std::isfinite(n_b) && n_b >= 0.0)) throw ValidationError("n_b must be finite and >= 0");
        if (kappa_j_ex > kappa_j) throw ValidationError("kappa_j_ex must not exceed kappa_j");
        if (kappa_k_ex > kappa_k) throw ValidationError("kappa_k_ex must not exceed kappa_k");

        std::vector<std::string> warnings;
        if (omega_m <= gamma_m) warnings.emplace_back("omega_m does not exceed gamma_m");
        if (omega_b <= gamma_m) warnings.emplace_back("omega_b does not exceed gamma_m");
        return warnings;
    }

    friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

enum class DetuningCase { AntiStokesRed, AntiStokesBlue, StokesRed, StokesBlue };

[[nodiscard]] constexpr bool is_anti_stokes(DetuningCase c) {
    return c == DetuningCase::AntiStokesRed || c == DetuningCase::AntiStokesBlue;
}
[[nodiscard]] constexpr bool is_blue(DetuningCase c) {
    return c == DetuningCase::AntiStokesBlue || c == DetuningCase::StokesBlue;
}

[[nodiscard]] constexpr std::string_view to_string(DetuningCase c) {
    switch (c) {
        case DetuningCase::AntiStokesRed: return "anti_stokes_red";
        case DetuningCase::AntiStokesBlue: return "anti_stokes_blue";
        case DetuningCase::StokesRed: return "stokes_red";
        case DetuningCase::StokesBlue: return "stokes_blue";
    }
    return "?";
}

struct DriveConfig {
    DetuningCase detuning_case = DetuningCase::AntiStokesBlue;
    /// Effective Brillouin coupling, real and >= 0.
    double G_b = 0.0;
    /// Effective radiation-pressure coupling, real and >= 0.
    double G_m = 0.0;
    double delta_j = 0.0;
    double delta_k = 0.0;
    double delta_b = 0.0;

    void validate() const {
        if (!(std::isfinite(G_b) && G_b >= 0.0)) throw ValidationError("G_b must be real and >= 0");
        if (!(std::isfinite(G_m) && G_m >= 0.0)) throw ValidationError("G_m must be real and >= 0");
        if (!std::isfinite(delta_j) || !std::isfinite(delta_k) || !std::isfinite(delta_b)) {
            throw ValidationError("detunings must be finite");
        }
        // The Brillouin pump sits on resonance with one optical mode, never both.
        const bool resonant_port_ok = is_anti_stokes(detuning_case) ? (delta_k == 0.0 && delta_j != 0.0)
                                                                    : (delta_j == 0.0 && delta_k != 0.0);
        if (!resonant_port_ok) {
            throw ValidationError(std::string("exactly one of delta_j, delta_k must be zero, matching case ") +
                                  std::string(to_string(detuning_case)));
        }
    }

    friend bool operator==(const DriveConfig&, const DriveConfig&) = default;
};

/**
 * @brief Detunings for one of the four frequency-domain configurations.
 *
 * Red means the radiation-pressure drive sits at +ω_m, blue at −ω_m. For the
 * anti-Stokes cases Δ_b follows Δ_j (the covariance presets use Δ_j = Δ_b);
 * for Stokes cases Δ_b = −Δ_k, the pair-creation resonance.
 */
[[nodiscard]] inline DriveConfig detuning_preset(DetuningCase c, const PhysicalParams& p) {
    DriveConfig d;
    d.detuning_case = c;
    const double w = is_blue(c) ? -p.omega_m : p.omega_m;
    if (is_anti_stokes(c)) {
        d.delta_k = 0.0;
        d.delta_j = w;
        d.delta_b = w;
    } else {
        d.delta_j = 0.0;
        d.delta_k = w;
        d.delta_b = -w;
    }
    return d;
}

/// Entanglement configuration: anti-Stokes ancilla, Δ_j = Δ_b = −ω_m.
[[nodiscard]] inline DriveConfig entanglement_preset(const PhysicalParams& p, double G_b, double G_m) {
    DriveConfig d = detuning_preset(DetuningCase::AntiStokesBlue, p);
    d.G_b = G_b;
    d.G_m = G_m;
    return d;
}

/// Cooling configuration: anti-Stokes ancilla, Δ_j = Δ_b = +ω_m.
[[nodiscard]] inline DriveConfig cooling_preset(const PhysicalParams& p, double G_b, double G_m) {
    DriveConfig d = detuning_preset(DetuningCase::AntiStokesRed, p);
    d.G_b = G_b;
    d.G_m = G_m;
    return d;
}

enum class Port { j, k };

/// Classical steady intracavity pump amplitude α = √κ_ex ε_d / (κ/2 + iΔ).
[[nodiscard]] inline std::complex<double> pump_amplitude(const PhysicalParams& p, double drive_amplitude,
                                                         double detuning, Port port) {
    const double kappa = port == Port::j ? p.kappa_j : p.kappa_k;
    const double kappa_ex = port == Port::j ? p.kappa_j_ex : p.kappa_k_ex;
    if (!(kappa > 0.0)) throw ValidationError("pump_amplitude: kappa must be > 0");
    return std::sqrt(kappa_ex) * drive_amplitude / std::complex<double>(0.5 * kappa, detuning);
}

struct EffectiveCouplings {
    std::complex<double> G_b_j;
    std::complex<double> G_b_k;
    std::complex<double> G_m_j;
    std::complex<double> G_m_k;
};

/// G_{b,j(k)} = g_b α_{j(k)}, G_{m,j(k)} = g_{m,j(k)} α_{j(k)}.
[[nodiscard]] inline EffectiveCouplings effective_couplings(const PhysicalParams& p, std::complex<double> alpha_j,
                                                            std::complex<double> alpha_k) {
    return {p.g_b * alpha_j, p.g_b * alpha_k, p.g_m_j * alpha_j, p.g_m_k * alpha_k};
}

struct DriftModel {
    Matrix<6> m;
    Matrix<6> d;
};

/**
 * @brief Drift matrix M and diffusion D for the anti-Stokes covariance model.
 *
 * Uses kappa_j as the single optical decay rate. Mode-b bath occupation is
 * params.n_b (zero by default).
 *
 * @throws InvalidConfiguration for Stokes cases
 */
[[nodiscard]] inline DriftModel build_drift(const PhysicalParams& p, const DriveConfig& drive) {
    if (!is_anti_stokes(drive.detuning_case)) {
        throw InvalidConfiguration("build_drift: covariance model covers only the anti-Stokes configurations, got " +
                                   std::string(to_string(drive.detuning_case)));
    }
    const double k2 = 0.5 * p.kappa_j;
    const double b2 = 0.5 * p.gamma_b;
    const double m2 = 0.5 * p.gamma_m;
    const double dj = drive.delta_j;
    const double db = drive.delta_b;
    const double gb = drive.G_b;
    const double gm2 = 2.0 * drive.G_m;
    const double wm = p.omega_m;

    DriftModel out;
    out.m = Matrix<6>{
        {-k2, dj, 0.0, gb, 0.0, 0.0},
        {-dj, -k2, -gb, 0.0, -gm2, 0.0},
        {0.0, gb, -b2, db, 0.0, 0.0},
        {-gb, 0.0, -db, -b2, 0.0, 0.0},
        {0.0, 0.0, 0.0, 0.0, -m2, wm},
        {-gm2, 0.0, 0.0, 0.0, -wm, -m2},
    };
    const double db_noise = 0.5 * p.gamma_b * (2.0 * p.n_b + 1.0);
    const double dm_noise = 0.5 * p.gamma_m * (2.0 * p.n_m + 1.0);
    out.d = Matrix<6>::diagonal({k2, k2, db_noise, db_noise, dm_noise, dm_noise});
    return out;
}

}  // namespace omdiss
