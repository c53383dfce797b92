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

// Brute-force reference for every closed-form overlap in the library. States are
// expanded on a truncated number basis and D(z) is applied through its exact
// matrix elements, so nothing here depends on the analytic overlap formulas.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qbd/error.hpp"
#include "qbd/overlap_result.hpp"
#include "qbd/special_functions.hpp"
#include "qbd/state.hpp"

namespace qbd {

/// Truncated number-basis amplitudes plus the squared norm living beyond the
/// truncation (computed from the analytic expansion, not by subtraction).
class FockVector {
   public:
    FockVector(std::vector<complex> amplitudes, double tail_norm)
        : amplitudes_(std::move(amplitudes)), tail_norm_(tail_norm) {
    }

    std::size_t dim() const noexcept {
        return amplitudes_.size();
    }
    std::span<const complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    complex operator[](std::size_t n) const {
        return amplitudes_[n];
    }
    double tail_norm() const noexcept {
        return tail_norm_;
    }

    double stored_norm() const {
        double s = 0;
        for (const auto &c : amplitudes_) {
            s += std::norm(c);
        }
        return s;
    }

    /// <N> over the stored amplitudes.
    double mean_number() const {
        double s = 0;
        for (std::size_t n = 0; n < amplitudes_.size(); n++) {
            s += static_cast<double>(n) * std::norm(amplitudes_[n]);
        }
        return s;
    }

   private:
    std::vector<complex> amplitudes_;
    double tail_norm_;
};

struct TruncationReport {
    bool passed;
    double tail_norm;
};

inline TruncationReport truncation_check(const FockVector &v, double tol) {
    if (!(tol > 0)) {
        throw DomainError("truncation_check: tolerance must be positive");
    }
    return {v.tail_norm() <= tol, v.tail_norm()};
}

/// Largest 2*sqrt(tail_norm) accepted by the overlap oracle. Bounds |O_exact - O_truncated|.
inline constexpr double kOracleOverlapTolerance = 1e-10;
inline constexpr std::size_t kOracleMaxDim = 1600;

namespace detail {

// Sum of term(j), j >= 0, for a sequence whose successive ratio is at most
// `ratio_bound` < 1 once j > peak.
template <typename Term>
double tail_sum(Term term, double peak, double ratio_bound) {
    double acc = 0;
    for (std::size_t j = 0; j < 10'000'000; j++) {
        double t = term(j);
        acc += t;
        if (static_cast<double>(j) > peak) {
            double remaining = t * ratio_bound / (1.0 - ratio_bound);
            if (t == 0.0 || remaining <= 1e-17 * acc) {
                break;
            }
        }
    }
    return acc;
}

inline double poisson_term(double mean, std::size_t n) {
    if (mean == 0) {
        return n == 0 ? 1.0 : 0.0;
    }
    return std::exp(-mean + static_cast<double>(n) * std::log(mean) - ln_factorial(n));
}

// ln cosh r without overflow.
inline double log_cosh(double r) {
    return r + std::log1p(std::exp(-2.0 * r)) - std::numbers::ln2;
}

// |<2m|S(r)|0>|^2.
inline double squeezed_term(double r, std::size_t m) {
    if (r == 0) {
        return m == 0 ? 1.0 : 0.0;
    }
    double dm = static_cast<double>(m);
    return std::exp(-log_cosh(r) + 2.0 * dm * std::log(std::tanh(r)) + ln_factorial(2 * m) -
                    2.0 * dm * std::numbers::ln2 - 2.0 * ln_factorial(m));
}

inline FockVector coherent_amplitudes(complex alpha, std::size_t dim) {
    double mean = std::norm(alpha);
    std::vector<complex> c(dim);
    if (mean == 0) {
        c[0] = 1.0;
        return FockVector(std::move(c), 0.0);
    }
    double theta = std::arg(alpha);
    for (std::size_t n = 0; n < dim; n++) {
        c[n] = std::polar(std::sqrt(poisson_term(mean, n)), static_cast<double>(n) * theta);
    }
    // Poisson term ratio mean/(k+1) is below 1/2 once k > 2*mean.
    double tail = tail_sum([&](std::size_t j) { return poisson_term(mean, dim + j); },
                           2.0 * mean + 1.0 - static_cast<double>(dim), 0.5);
    return FockVector(std::move(c), tail);
}

inline FockVector squeezed_amplitudes(double r, std::size_t dim) {
    std::vector<complex> c(dim);
    for (std::size_t n = 0; n < dim; n += 2) {
        c[n] = std::sqrt(squeezed_term(r, n / 2));
    }
    double t = std::tanh(r);
    double tail = 0;
    if (r > 0) {
        std::size_t first = (dim + 1) / 2;
        tail = tail_sum([&](std::size_t j) { return squeezed_term(r, first + j); }, 0.0, t * t);
    }
    return FockVector(std::move(c), tail);
}

inline FockVector cat_amplitudes(double alpha, Parity parity, std::size_t dim) {
    double mean = alpha * alpha;
    std::size_t offset = parity == Parity::Even ? 0 : 1;
    std::vector<complex> c(dim);
    double stored = 0;
    for (std::size_t n = offset; n < dim; n += 2) {
        double p = 4.0 * poisson_term(mean, n);
        c[n] = std::sqrt(p);
        stored += p;
    }
    std::size_t first = dim + ((dim % 2) != offset ? 1 : 0);
    double tail = tail_sum([&](std::size_t j) { return 4.0 * poisson_term(mean, first + 2 * j); },
                           mean + 1.0 - 0.5 * static_cast<double>(first), 0.5);
    double norm2 = stored + tail;
    double scale = 1.0 / std::sqrt(norm2);
    for (auto &x : c) {
        x *= scale;
    }
    return FockVector(std::move(c), tail / norm2);
}

}  // namespace detail

/// Number-basis expansion of `state` truncated to `dim` levels.
inline FockVector fock_amplitudes(const StatePrep &state, std::size_t dim) {
    validate(state);
    if (dim == 0) {
        throw DomainError("fock_amplitudes: dim must be positive");
    }
    return std::visit(
        [dim](const auto &s) -> FockVector {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Coherent>) {
                return detail::coherent_amplitudes(s.amplitude, dim);
            } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                return detail::squeezed_amplitudes(s.squeeze, dim);
            } else if constexpr (std::is_same_v<T, NumberState>) {
                if (static_cast<std::size_t>(s.n) >= dim) {
                    throw TruncationError("number state |" + std::to_string(s.n) + "> does not fit in dim " +
                                          std::to_string(dim));
                }
                std::vector<complex> c(dim);
                c[static_cast<std::size_t>(s.n)] = 1.0;
                return FockVector(std::move(c), 0.0);
            } else {
                return detail::cat_amplitudes(s.amplitude, s.parity, dim);
            }
        },
        state);
}

/// <m|D(z)|n>, with factorial ratios assembled in log space.
inline complex displacement_element(std::size_t m, std::size_t n, complex z) {
    double re = z.real(), im = z.imag();
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw DomainError("displacement_element: non-finite amplitude");
    }
    double x = std::norm(z);
    if (x == 0) {
        return m == n ? complex{1.0} : complex{};
    }
    bool lower = m >= n;
    std::size_t lo = lower ? n : m;
    std::size_t hi = lower ? m : n;
    std::size_t k = hi - lo;
    auto lag = assoc_laguerre_log(static_cast<int>(lo), static_cast<int>(k), x);
    if (lag.sign == 0) {
        return {};
    }
    double log_mag = 0.5 * (ln_factorial(lo) - ln_factorial(hi)) + 0.5 * static_cast<double>(k) * std::log(x) -
                     0.5 * x + lag.log_abs;
    // z^k below the diagonal, (-conj z)^k above it.
    double phase = lower ? static_cast<double>(k) * std::arg(z)
                         : static_cast<double>(k) * (std::numbers::pi - std::arg(z));
    return lag.sign * std::polar(std::exp(log_mag), phase);
}

/// Starting truncation: max(32, ceil(4(nbar-like + |z|^2) + 10)).
inline std::size_t default_dim(const StatePrep &state, double intensity) {
    double scale = std::visit(
        [](const auto &s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Coherent>) {
                return std::norm(s.amplitude);
            } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                return std::sinh(s.squeeze) * std::sinh(s.squeeze);
            } else if constexpr (std::is_same_v<T, NumberState>) {
                return static_cast<double>(s.n);
            } else {
                return s.amplitude * s.amplitude;
            }
        },
        state);
    return std::max<std::size_t>(32, static_cast<std::size_t>(std::ceil(4.0 * (scale + intensity) + 10.0)));
}

inline bool oracle_truncation_ok(const FockVector &v) {
    return 2.0 * std::sqrt(v.tail_norm()) <= kOracleOverlapTolerance;
}

/// Smallest dimension on a geometric ladder from default_dim whose expansion
/// passes the oracle tolerance.
inline std::size_t adequate_dim(const StatePrep &state, double intensity) {
    std::size_t dim = default_dim(state, intensity);
    while (dim <= kOracleMaxDim) {
        if (oracle_truncation_ok(fock_amplitudes(state, dim))) {
            return dim;
        }
        dim = dim + dim / 4 + 8;
    }
    throw ConvergenceError("no truncation up to " + std::to_string(kOracleMaxDim) + " levels is adequate");
}

namespace detail {

inline FockVector checked_expansion(const StatePrep &state, double intensity, std::size_t dim) {
    auto v = fock_amplitudes(state, dim);
    if (!oracle_truncation_ok(v)) {
        std::size_t suggestion = 0;
        try {
            suggestion = adequate_dim(state, intensity);
        } catch (const ConvergenceError &) {
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, "truncation at dim %zu leaves tail norm %.3g; try dim %zu", dim,
                      v.tail_norm(), suggestion);
        throw ConvergenceError(buf, suggestion);
    }
    return v;
}

inline std::vector<std::size_t> support(const FockVector &v) {
    std::vector<std::size_t> idx;
    for (std::size_t n = 0; n < v.dim(); n++) {
        if (v[n] != complex{}) {
            idx.push_back(n);
        }
    }
    return idx;
}

}  // namespace detail

/// O = <psi|D(z)|psi> by explicit summation over the truncated basis.
inline OverlapResult overlap_numeric(const StatePrep &state, complex z, std::size_t dim) {
    auto v = detail::checked_expansion(state, std::norm(z), dim);
    auto idx = detail::support(v);
    complex o{};
    for (std::size_t m : idx) {
        complex row{};
        for (std::size_t n : idx) {
            row += displacement_element(m, n, z) * v[n];
        }
        o += std::conj(v[m]) * row;
    }
    return {o, std::norm(o)};
}

inline OverlapResult overlap_numeric(const StatePrep &state, complex z) {
    return overlap_numeric(state, z, adequate_dim(state, std::norm(z)));
}

/// |(1/2pi) \int O(|z| e^{i phi}) dphi|^2 by the periodic trapezoid rule,
/// doubling the node count until successive values agree to 1e-9.
inline double phase_averaged_kappa_numeric(const StatePrep &state, double intensity, std::size_t dim,
                                           std::size_t quad_points) {
    if (!std::isfinite(intensity) || intensity < 0) {
        throw DomainError("phase_averaged_kappa_numeric: intensity must be finite and >= 0");
    }
    if (quad_points < 16) {
        throw DomainError("phase_averaged_kappa_numeric: need at least 16 quadrature points");
    }
    auto v = detail::checked_expansion(state, intensity, dim);
    auto idx = detail::support(v);
    // D_mn(|z| e^{i phi}) = D_mn(|z|) e^{i (m - n) phi}: group terms by m - n.
    std::vector<complex> harmonic(2 * dim - 1);
    double radius = std::sqrt(intensity);
    for (std::size_t m : idx) {
        for (std::size_t n : idx) {
            harmonic[m + dim - 1 - n] += std::conj(v[m]) * displacement_element(m, n, radius) * v[n];
        }
    }
    auto trapezoid = [&](std::size_t points) {
        complex sum{};
        for (std::size_t j = 0; j < points; j++) {
            double phi = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / points;
            complex o{};
            for (std::size_t h = 0; h < harmonic.size(); h++) {
                if (harmonic[h] != complex{}) {
                    double k = static_cast<double>(h) - static_cast<double>(dim - 1);
                    o += harmonic[h] * std::polar(1.0, k * phi);
                }
            }
            sum += o;
        }
        return std::norm(sum / static_cast<double>(points));
    };
    double prev = trapezoid(quad_points);
    for (std::size_t points = 2 * quad_points; points <= (quad_points << 10); points *= 2) {
        double cur = trapezoid(points);
        if (std::abs(cur - prev) <= 1e-9) {
            return cur;
        }
        prev = cur;
    }
    throw ConvergenceError("phase average did not stabilise to 1e-9");
}

inline double phase_averaged_kappa_numeric(const StatePrep &state, double intensity) {
    return phase_averaged_kappa_numeric(state, intensity, adequate_dim(state, intensity), 16);
}

}  // namespace qbd
