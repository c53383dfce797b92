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

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>

#include "qbd/error.hpp"

namespace qbd {

using complex = std::complex<double>;

enum class Parity { Even, Odd };

/// Coherent state |alpha>.
struct Coherent {
    complex amplitude;
};

/// Squeezed vacuum S(r)|0> with the squeezing phase fixed to zero.
struct SqueezedVacuum {
    double squeeze;
};

/// Number state |n>.
struct NumberState {
    int n;
};

/// Unit-norm superposition of |alpha> and |-alpha>, alpha real and positive.
struct Cat {
    double amplitude;
    Parity parity;
};

/// Initial pure state of the oscillator.
using StatePrep = std::variant<Coherent, SqueezedVacuum, NumberState, Cat>;

inline void validate(const StatePrep &state) {
    std::visit(
        [](const auto &s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Coherent>) {
                if (!std::isfinite(s.amplitude.real()) || !std::isfinite(s.amplitude.imag())) {
                    throw DomainError("coherent amplitude must be finite");
                }
            } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                if (!std::isfinite(s.squeeze) || s.squeeze < 0) {
                    throw DomainError("squeeze parameter must be finite and >= 0");
                }
            } else if constexpr (std::is_same_v<T, NumberState>) {
                if (s.n < 0) {
                    throw DomainError("number state index must be >= 0");
                }
            } else {
                if (!std::isfinite(s.amplitude) || s.amplitude <= 0) {
                    throw DomainError("cat amplitude must be finite and > 0");
                }
            }
        },
        state);
}

inline std::string describe(const StatePrep &state) {
    return std::visit(
        [](const auto &s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Coherent>) {
                return "coherent";
            } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
                return "squeezed";
            } else if constexpr (std::is_same_v<T, NumberState>) {
                return "number";
            } else {
                return s.parity == Parity::Even ? "cat-even" : "cat-odd";
            }
        },
        state);
}

/// Displacement perturbation: either a known complex amplitude z, or only its
/// intensity |z|^2 with a uniformly random phase.
class Perturbation {
   public:
    static Perturbation fixed(complex z) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw DomainError("perturbation amplitude must be finite");
        }
        return Perturbation(z, std::norm(z), false);
    }

    static Perturbation polar(double intensity, double phase) {
        check_intensity(intensity);
        return fixed(std::polar(std::sqrt(intensity), phase));
    }

    static Perturbation random_phase(double intensity) {
        check_intensity(intensity);
        return Perturbation(complex{}, intensity, true);
    }

    bool is_random_phase() const noexcept {
        return random_;
    }

    /// |z|^2, in units of oscillator quanta.
    double intensity() const noexcept {
        return intensity_;
    }

    /// arg z in (-pi, pi]; empty for random-phase perturbations.
    std::optional<double> phase() const noexcept {
        if (random_) {
            return std::nullopt;
        }
        double p = std::arg(z_);
        return p <= -std::numbers::pi ? std::numbers::pi : p;
    }

    /// Complex amplitude; throws for random-phase perturbations.
    complex amplitude() const {
        if (random_) {
            throw DomainError("random-phase perturbation has no fixed amplitude");
        }
        return z_;
    }

   private:
    Perturbation(complex z, double intensity, bool random) : z_(z), intensity_(intensity), random_(random) {
    }

    static void check_intensity(double intensity) {
        if (!std::isfinite(intensity) || intensity < 0) {
            throw DomainError("perturbation intensity must be finite and >= 0");
        }
    }

    complex z_;
    double intensity_;
    bool random_;
};

}  // namespace qbd
