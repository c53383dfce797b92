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

// Scalar special functions used by the overlap formulas: Laguerre polynomials,
// Bessel J0, modified Bessel I0 and log-factorials. Accuracy target is 1e-12
// absolute on the working ranges so the overlap formulas dominate the error.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "qbd/error.hpp"

namespace qbd {

namespace detail {

inline void require_finite(double x, const char *where) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(where) + ": non-finite argument");
    }
}

inline constexpr std::size_t kExactFactorialLimit = 256;

inline const std::array<double, kExactFactorialLimit + 1> &ln_factorial_table() {
    static const auto table = [] {
        std::array<double, kExactFactorialLimit + 1> t{};
        long double acc = 0;
        t[0] = 0;
        for (std::size_t k = 1; k <= kExactFactorialLimit; k++) {
            acc += std::log(static_cast<long double>(k));
            t[k] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

// Miller backward recurrence, normalized with J0 + 2 sum_k J_2k = 1.
inline double bessel_j0_miller(double ax) {
    int start = static_cast<int>(ax + 30.0 + 6.0 * std::sqrt(ax));
    start += start % 2;
    double j_next = 0.0;
    double j = 1e-30;
    double even_sum = j;  // start is even
    for (int n = start; n > 0; n--) {
        double j_prev = (2.0 * n / ax) * j - j_next;
        j_next = j;
        j = j_prev;
        if ((n - 1) % 2 == 0 && n - 1 > 0) {
            even_sum += j;
        }
        if (std::abs(j) > 1e200) {
            j *= 1e-200;
            j_next *= 1e-200;
            even_sum *= 1e-200;
        }
    }
    return j / (j + 2.0 * even_sum);
}

// Hankel expansion, DLMF 10.17.3 with nu = 0.
inline double bessel_j0_asymptotic(double ax) {
    double p = 0, q = 0;
    double term = 1.0;
    double prev_abs = INFINITY;
    for (int k = 0; k < 200; k++) {
        if (k > 0) {
            double odd = 2.0 * k - 1.0;
            term *= -(odd * odd) / (8.0 * k * ax);
        }
        double a = std::abs(term);
        if (a > prev_abs) {
            break;
        }
        prev_abs = a;
        // (-1)^floor(k/2) sign pattern of the P and Q series.
        double s = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            p += s * term;
        } else {
            q += s * term;
        }
        if (a < 1e-17) {
            break;
        }
    }
    double chi = ax - std::numbers::pi / 4;
    return std::sqrt(2.0 / (std::numbers::pi * ax)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// L_n^(k)(x) as sign * exp(log_abs); the recurrence rescales itself so large
/// orders (binomial(n+k, n) past the double range) stay representable.
struct SignedLog {
    double sign;
    double log_abs;
};

inline SignedLog assoc_laguerre_log(int n, int k, double x) {
    detail::require_finite(x, "assoc_laguerre_log");
    if (n < 0 || k < 0 || x < 0) {
        throw DomainError("assoc_laguerre_log: negative index or argument");
    }
    double prev = 1.0;
    double cur = n == 0 ? 1.0 : 1.0 + k - x;
    double log_scale = 0.0;
    for (int j = 1; j < n; j++) {
        double next = ((2.0 * j + k + 1.0 - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e150) {
            prev *= 1e-150;
            cur *= 1e-150;
            log_scale += 150.0 * std::numbers::ln10;
        }
    }
    if (cur == 0) {
        return {0.0, -INFINITY};
    }
    return {cur < 0 ? -1.0 : 1.0, std::log(std::abs(cur)) + log_scale};
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
inline double laguerre(int n, double x) {
    detail::require_finite(x, "laguerre");
    if (n < 0) {
        throw DomainError("laguerre: negative degree");
    }
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = 1.0 - x;
    for (int k = 1; k < n; k++) {
        double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Associated Laguerre polynomial L_n^(k)(x), x >= 0.
inline double assoc_laguerre(int n, int k, double x) {
    detail::require_finite(x, "assoc_laguerre");
    if (n < 0 || k < 0) {
        throw DomainError("assoc_laguerre: negative index");
    }
    if (x < 0) {
        throw DomainError("assoc_laguerre: negative argument");
    }
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = 1.0 + k - x;
    for (int j = 1; j < n; j++) {
        double next = ((2.0 * j + k + 1.0 - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Bessel function of the first kind, order zero.
inline double bessel_j0(double x) {
    detail::require_finite(x, "bessel_j0");
    double ax = std::abs(x);
    if (ax <= 8.0) {
        double q = 0.25 * ax * ax;
        double term = 1.0;
        double sum = 1.0;
        for (int m = 1; m < 100; m++) {
            term *= -q / (static_cast<double>(m) * m);
            sum += term;
            if (std::abs(term) < 1e-18) {
                break;
            }
        }
        return sum;
    }
    if (ax < 25.0) {
        return detail::bessel_j0_miller(ax);
    }
    return detail::bessel_j0_asymptotic(ax);
}

/// e^{-x} I0(x) for x >= 0. Never overflows; lies in (0, 1].
inline double bessel_i0_scaled(double x) {
    detail::require_finite(x, "bessel_i0_scaled");
    if (x < 0) {
        throw DomainError("bessel_i0_scaled: negative argument");
    }
    if (x < 25.0) {
        double q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int m = 1; m < 500; m++) {
            term *= q / (static_cast<double>(m) * m);
            sum += term;
            if (term < 1e-17 * sum) {
                break;
            }
        }
        return sum * std::exp(-x);
    }
    // DLMF 10.40.1; every term is positive for nu = 0.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; k++) {
        double odd = 2.0 * k - 1.0;
        double next = term * (odd * odd) / (8.0 * k * x);
        if (next > term) {
            break;
        }
        term = next;
        sum += term;
        if (term < 1e-17 * sum) {
            break;
        }
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

/// Modified Bessel function I0(x), x >= 0. Returns +inf past the double range.
inline double bessel_i0(double x) {
    return bessel_i0_scaled(x) * std::exp(x);
}

/// ln(n!).
inline double ln_factorial(std::size_t n) {
    if (n <= detail::kExactFactorialLimit) {
        return detail::ln_factorial_table()[n];
    }
    double x = static_cast<double>(n);
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    double series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    return x * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi * x) + series;
}

}  // namespace qbd
