// Copyright 2026 The qbd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Closed-form overlaps <psi|D(z)|psi> and overlap strengths for the supported
// preparations.
//
// Squeezed vacuum: the library form is the exact Gaussian
//     O = exp{-|z|^2/2 [cosh 2r - sinh 2r cos 2phi]},
// which is what the Fock oracle reproduces. The widely quoted variant with
// cos^2 phi in place of cos 2phi agrees only at phi = 0; it is kept as
// kappa_squeezed_published / kappa_squeezed_random_phase_published for comparison.
//
// Cat states: overlaps are built from the four coherent-state matrix elements
// with unit normalization 1/sqrt(2(1 +- e^{-2 alpha^2})). kappa_cat_published keeps
// the (1 +- 2e^{-2 alpha^2})^2 denominators of the published strength formulas.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <type_traits>
#include <variant>

#include "qbd/error.hpp"
#include "qbd/overlap_result.hpp"
#include "qbd/special_functions.hpp"
#include "qbd/state.hpp"

namespace qbd {

enum class SqueezeForm { Exact, Published };

enum class CatPhase { Phase0, PhaseHalfPi, RandomPhase };

namespace detail {

inline void require_intensity(double intensity) {
    if (!std::isfinite(intensity) || intensity < 0) {
        throw DomainError("intensity must be finite and >= 0");
    }
}

// <beta|D(z)|gamma> as a single exponential.
inline complex coherent_element(complex beta, complex gamma, complex z) {
    complex shifted = gamma + z;
    complex exponent = 0.5 * (z * std::conj(gamma) - std::conj(z) * gamma) - 0.5 * std::norm(beta) -
                       0.5 * std::norm(shifted) + std::conj(beta) * shifted;
    return std::exp(exponent);
}

// 1 +- e^{-2 a^2} without cancellation for the odd sign.
inline double cat_norm_factor(double alpha, Parity parity) {
    double e = -2.0 * alpha * alpha;
    return parity == Parity::Even ? 1.0 + std::exp(e) : -std::expm1(e);
}

inline double parity_sign(Parity parity) {
    return parity == Parity::Even ? 1.0 : -1.0;
}

// e^{-2 a^2} I0(x), evaluated through the scaled Bessel function.
inline double damped_i0(double alpha, double x) {
    return bessel_i0_scaled(x) * std::exp(x - 2.0 * alpha * alpha);
}

// e^{-2 a^2} cosh(x)
inline double damped_cosh(double alpha, double x) {
    double e = -2.0 * alpha * alpha;
    return 0.5 * (std::exp(x + e) + std::exp(-x + e));
}

}  // namespace detail

/// Coherent state: O = e^{-|z|^2/2} e^{z conj(alpha) - alpha conj(z)}, kappa = e^{-|z|^2}.
inline OverlapResult overlap_coherent(complex alpha, complex z) {
    complex o = std::exp(-0.5 * std::norm(z) + (z * std::conj(alpha) - alpha * std::conj(z)));
    return {o, std::exp(-std::norm(z))};
}

/// Squeezed vacuum (squeezing phase 0), exact Gaussian overlap. Always real.
inline OverlapResult overlap_squeezed(double r, complex z) {
    double intensity = std::norm(z);
    double phi = std::arg(z);
    double bracket = std::cosh(2 * r) - std::sinh(2 * r) * std::cos(2 * phi);
    double o = std::exp(-0.5 * intensity * bracket);
    return {o, o * o};
}

inline double kappa_squeezed(double r, double intensity, double phase) {
    detail::require_intensity(intensity);
    return overlap_squeezed(r, std::polar(std::sqrt(intensity), phase)).kappa;
}

/// Strength from the cos^2(phi) overlap variant; matches kappa_squeezed only at phi = 0.
inline double kappa_squeezed_published(double r, double intensity, double phase) {
    detail::require_intensity(intensity);
    double c = std::cos(phase);
    return std::exp(-intensity * (std::cosh(2 * r) - std::sinh(2 * r) * c * c));
}

/// |<O>_phi|^2 = exp{-|z|^2 (2n+1)} I0(|z|^2 sqrt(n(n+1)))^2, n = sinh^2 r.
inline double kappa_squeezed_random_phase(double r, double intensity) {
    detail::require_intensity(intensity);
    // cosh 2r - sinh 2r = e^{-2r} absorbs the growth of I0.
    double b = 0.5 * intensity * std::sinh(2 * r);
    return std::exp(-intensity * std::exp(-2 * r) + 2.0 * std::log(bessel_i0_scaled(b)));
}

/// Phase average of the cos^2(phi) variant:
/// exp{-|z|^2 [2n+1 - sqrt(n(n+1))]} I0(|z|^2 sqrt(n(n+1)) / 2)^2.
inline double kappa_squeezed_random_phase_published(double r, double intensity) {
    detail::require_intensity(intensity);
    double b = 0.25 * intensity * std::sinh(2 * r);
    return std::exp(-intensity * std::exp(-2 * r) + 2.0 * std::log(bessel_i0_scaled(b)));
}

/// Number state: kappa = e^{-|z|^2} L_n(|z|^2)^2.
inline double kappa_number(int n, double intensity) {
    detail::require_intensity(intensity);
    double l = laguerre(n, intensity);
    if (l == 0) {
        return 0.0;
    }
    return std::exp(-intensity + 2.0 * std::log(std::abs(l)));
}

struct CatOverlap {
    /// From the coherent-state matrix elements with unit normalization.
    OverlapResult exact;
    /// e^{-|z|^2/2}[cos(2a|z| sin phi) +- e^{-2a^2} cosh(2a|z| cos phi)] / (1 +- e^{-2a^2}).
    double published;
};

inline CatOverlap overlap_cat(double alpha, Parity parity, complex z) {
    validate(Cat{alpha, parity});
    double s = detail::parity_sign(parity);
    complex a{alpha, 0.0};
    complex sum = detail::coherent_element(a, a, z) + detail::coherent_element(-a, -a, z) +
                  s * (detail::coherent_element(a, -a, z) + detail::coherent_element(-a, a, z));
    double denom = detail::cat_norm_factor(alpha, parity);
    complex o = sum / (2.0 * denom);

    double radius = std::abs(z);
    double phi = std::arg(z);
    double literal = std::exp(-0.5 * radius * radius) *
                     (std::cos(2 * alpha * radius * std::sin(phi)) +
                      s * detail::damped_cosh(alpha, 2 * alpha * radius * std::cos(phi))) /
                     denom;
    return {{o, std::norm(o)}, literal};
}

/// Cat-state strength at phi = 0, phi = pi/2, or phase averaged.
inline double kappa_cat(double alpha, Parity parity, double intensity, CatPhase mode) {
    validate(Cat{alpha, parity});
    detail::require_intensity(intensity);
    double radius = std::sqrt(intensity);
    switch (mode) {
        case CatPhase::Phase0:
            return overlap_cat(alpha, parity, radius).exact.kappa;
        case CatPhase::PhaseHalfPi:
            return overlap_cat(alpha, parity, complex{0.0, radius}).exact.kappa;
        case CatPhase::RandomPhase: {
            double x = 2 * alpha * radius;
            double s = detail::parity_sign(parity);
            double avg = std::exp(-0.5 * intensity) * (bessel_j0(x) + s * detail::damped_i0(alpha, x)) /
                         detail::cat_norm_factor(alpha, parity);
            return avg * avg;
        }
    }
    throw DomainError("kappa_cat: unknown mode");
}

/// The published cat strength formulas, (1 +- 2e^{-2a^2})^2 denominators included.
inline double kappa_cat_published(double alpha, Parity parity, double intensity, CatPhase mode) {
    validate(Cat{alpha, parity});
    detail::require_intensity(intensity);
    double s = detail::parity_sign(parity);
    double e = std::exp(-2 * alpha * alpha);
    double denom = (1 + s * 2 * e) * (1 + s * 2 * e);
    double x = 2 * alpha * std::sqrt(intensity);
    double bracket = 0;
    switch (mode) {
        case CatPhase::Phase0:
            bracket = 1 + s * detail::damped_cosh(alpha, x);
            break;
        case CatPhase::PhaseHalfPi:
            // e^{-4a^2}[1 +- e^{2a^2} cos x]^2 = [e^{-2a^2} +- cos x]^2
            bracket = e + s * std::cos(x);
            break;
        case CatPhase::RandomPhase:
            bracket = bessel_j0(x) + s * detail::damped_i0(alpha, x);
            break;
    }
    return std::exp(-intensity) * bracket * bracket / denom;
}

/// <N> of the preparation.
inline double mean_excitation(const StatePrep &state) {
    validate(state);
    return std::visit(
        [](const auto &s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Coherent>) {
                return std::norm(s.amplitude);
            } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                double sh = std::sinh(s.squeeze);
                return sh * sh;
            } else if constexpr (std::is_same_v<T, NumberState>) {
                return static_cast<double>(s.n);
            } else {
                double a2 = s.amplitude * s.amplitude;
                // a^2 (1 -+ e^{-2a^2}) / (1 +- e^{-2a^2}) = a^2 tanh(a^2) or a^2 coth(a^2)
                return s.parity == Parity::Even ? a2 * std::tanh(a2) : a2 / std::tanh(a2);
            }
        },
        state);
}

/// Closed-form overlap for a fixed displacement z.
inline OverlapResult overlap(const StatePrep &state, complex z) {
    validate(state);
    return std::visit(
        [z](const auto &s) -> OverlapResult {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Coherent>) {
                return overlap_coherent(s.amplitude, z);
            } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                return overlap_squeezed(s.squeeze, z);
            } else if constexpr (std::is_same_v<T, NumberState>) {
                double intensity = std::norm(z);
                double l = laguerre(s.n, intensity);
                double o = std::exp(-0.5 * intensity) * l;
                return {o, kappa_number(s.n, intensity)};
            } else {
                return overlap_cat(s.amplitude, s.parity, z).exact;
            }
        },
        state);
}

/// Overlap strength for a fixed or random-phase perturbation. Random phase uses
/// the modulus squared of the phase-averaged overlap.
inline double kappa(const StatePrep &state, const Perturbation &p, SqueezeForm form = SqueezeForm::Exact) {
    validate(state);
    double intensity = p.intensity();
    if (const auto *sq = std::get_if<SqueezedVacuum>(&state); sq && form == SqueezeForm::Published) {
        return p.is_random_phase() ? kappa_squeezed_random_phase_published(sq->squeeze, intensity)
                                   : kappa_squeezed_published(sq->squeeze, intensity, *p.phase());
    }
    if (!p.is_random_phase()) {
        return overlap(state, p.amplitude()).kappa;
    }
    return std::visit(
        [intensity](const auto &s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Coherent>) {
                // <e^{2i Im(z conj alpha)}>_phi = J0(2|alpha||z|)
                double j = bessel_j0(2 * std::abs(s.amplitude) * std::sqrt(intensity));
                return std::exp(-intensity) * j * j;
            } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                return kappa_squeezed_random_phase(s.squeeze, intensity);
            } else if constexpr (std::is_same_v<T, NumberState>) {
                return kappa_number(s.n, intensity);
            } else {
                return kappa_cat(s.amplitude, s.parity, intensity, CatPhase::RandomPhase);
            }
        },
        state);
}

/// |(1/2pi) \int overlap_fn(|z| e^{i phi}) dphi|^2 by the periodic trapezoid rule.
template <typename OverlapFn>
double phase_average_quadrature(OverlapFn overlap_fn, double intensity, std::size_t points) {
    detail::require_intensity(intensity);
    if (points == 0) {
        throw DomainError("phase_average_quadrature: need at least one node");
    }
    double radius = std::sqrt(intensity);
    complex sum{};
    for (std::size_t j = 0; j < points; j++) {
        double phi = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / points;
        sum += complex(overlap_fn(std::polar(radius, phi)));
    }
    return std::norm(sum / static_cast<double>(points));
}

}  // namespace qbd
