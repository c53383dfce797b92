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

// Classical forcing record F(t) -> displacement amplitude z of the interaction
// picture evolution.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qbd/error.hpp"

namespace qbd {

struct DriveSample {
    double t;
    double force;
};

/// Sampled force on [0, tau] acting on an oscillator of frequency omega and mass m.
class DriveSignal {
   public:
    DriveSignal(std::vector<DriveSample> samples, double omega, double mass)
        : samples_(std::move(samples)), omega_(omega), mass_(mass) {
        if (samples_.size() < 3) {
            throw DomainError("drive signal needs at least 3 samples");
        }
        if (!(omega_ > 0) || !std::isfinite(omega_) || !(mass_ > 0) || !std::isfinite(mass_)) {
            throw DomainError("omega and mass must be finite and positive");
        }
        for (std::size_t i = 0; i < samples_.size(); i++) {
            if (!std::isfinite(samples_[i].t) || !std::isfinite(samples_[i].force)) {
                throw DomainError("drive samples must be finite");
            }
            if (i > 0 && !(samples_[i].t > samples_[i - 1].t)) {
                throw DomainError("drive sample times must be strictly increasing");
            }
        }
        if (samples_.front().t != 0.0) {
            throw DomainError("drive signal must start at t = 0");
        }
    }

    const std::vector<DriveSample> &samples() const noexcept {
        return samples_;
    }
    double omega() const noexcept {
        return omega_;
    }
    double mass() const noexcept {
        return mass_;
    }
    double tau() const noexcept {
        return samples_.back().t;
    }

   private:
    std::vector<DriveSample> samples_;
    double omega_;
    double mass_;
};

enum class QuadratureRule { Simpson, Trapezoid };

struct GammaEstimate {
    std::complex<double> value;
    /// Richardson-style estimate of the quadrature error.
    double error;
    QuadratureRule rule;
};

namespace detail {

using Integrand = std::vector<std::pair<double, std::complex<double>>>;

inline bool uniform_spacing(const Integrand &f) {
    double h = f[1].first - f[0].first;
    for (std::size_t i = 2; i < f.size(); i++) {
        if (std::abs((f[i].first - f[i - 1].first) - h) > 1e-9 * h) {
            return false;
        }
    }
    return true;
}

inline std::complex<double> trapezoid(const Integrand &f) {
    std::complex<double> s{};
    for (std::size_t i = 1; i < f.size(); i++) {
        s += 0.5 * (f[i].first - f[i - 1].first) * (f[i].second + f[i - 1].second);
    }
    return s;
}

// Composite Simpson on a uniform grid; an odd number of intervals closes with
// the 3/8 rule on the last three.
inline std::complex<double> simpson(const Integrand &f) {
    std::size_t intervals = f.size() - 1;
    double h = (f.back().first - f.front().first) / static_cast<double>(intervals);
    std::size_t even_part = intervals % 2 == 0 ? intervals : intervals - 3;
    std::complex<double> s{};
    for (std::size_t i = 0; i + 2 <= even_part; i += 2) {
        s += h / 3.0 * (f[i].second + 4.0 * f[i + 1].second + f[i + 2].second);
    }
    if (even_part != intervals) {
        std::size_t i = even_part;
        s += 3.0 * h / 8.0 * (f[i].second + 3.0 * f[i + 1].second + 3.0 * f[i + 2].second + f[i + 3].second);
    }
    return s;
}

inline Integrand every_other(const Integrand &f) {
    Integrand g;
    for (std::size_t i = 0; i < f.size(); i += 2) {
        g.push_back(f[i]);
    }
    if ((f.size() - 1) % 2 != 0) {
        g.push_back(f.back());
    }
    return g;
}

}  // namespace detail

/// gamma = \int_0^tau e^{i omega t} F(t) dt on the caller's samples.
inline GammaEstimate gamma_integral(const DriveSignal &signal) {
    detail::Integrand f;
    f.reserve(signal.samples().size());
    for (const auto &s : signal.samples()) {
        f.emplace_back(s.t, std::polar(s.force, signal.omega() * s.t));
    }
    std::complex<double> trap = detail::trapezoid(f);
    if (!detail::uniform_spacing(f)) {
        auto coarse = detail::every_other(f);
        double err = coarse.size() >= 2 ? std::abs(trap - detail::trapezoid(coarse)) / 3.0 : std::abs(trap);
        return {trap, err, QuadratureRule::Trapezoid};
    }
    std::complex<double> fine = detail::simpson(f);
    std::size_t intervals = f.size() - 1;
    double err;
    if (intervals % 4 == 0) {
        // Safety factor 1.5 over the bare Richardson constant 1/15.
        err = std::abs(fine - detail::simpson(detail::every_other(f))) / 10.0;
    } else {
        err = std::abs(fine - trap);
    }
    return {fine, err, QuadratureRule::Simpson};
}

enum class AmplitudeConvention { PaperLiteral, Standard };

inline const char *to_string(AmplitudeConvention c) {
    return c == AmplitudeConvention::PaperLiteral ? "paper-literal" : "standard";
}

/// PaperLiteral: z = i gamma tau / sqrt(2 m omega). Standard: z = i gamma / sqrt(2 m omega).
inline std::complex<double> perturbation_amplitude(std::complex<double> gamma, const DriveSignal &signal,
                                                   AmplitudeConvention convention = AmplitudeConvention::PaperLiteral) {
    if (!std::isfinite(gamma.real()) || !std::isfinite(gamma.imag())) {
        throw DomainError("perturbation_amplitude: non-finite gamma");
    }
    std::complex<double> z = std::complex<double>(0, 1) * gamma / std::sqrt(2 * signal.mass() * signal.omega());
    return convention == AmplitudeConvention::PaperLiteral ? z * signal.tau() : z;
}

/// Two-column (t, F) CSV. Blank lines, '#' comments and a non-numeric header
/// row are skipped.
inline std::vector<DriveSample> read_drive_csv(std::istream &in) {
    std::vector<DriveSample> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        line_no++;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw DomainError("drive csv line " + std::to_string(line_no) + ": expected two columns");
        }
        std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        char *end_a = nullptr;
        char *end_b = nullptr;
        double t = std::strtod(a.c_str(), &end_a);
        double force = std::strtod(b.c_str(), &end_b);
        auto rest_blank = [](const char *p) {
            for (; *p; p++) {
                if (*p != ' ' && *p != '\t' && *p != '\r') {
                    return false;
                }
            }
            return true;
        };
        bool ok = end_a != a.c_str() && end_b != b.c_str() && rest_blank(end_a) && rest_blank(end_b);
        if (!ok) {
            if (out.empty() && !header_skipped) {
                header_skipped = true;
                continue;
            }
            throw DomainError("drive csv line " + std::to_string(line_no) + ": unparsable number");
        }
        out.push_back({t, force});
    }
    return out;
}

}  // namespace qbd
