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

// Neyman-Pearson detection probability for two pure states with overlap
// strength kappa, the threshold overlap at which detection reaches 1/2, and
// the minimum detectable perturbation intensity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "qbd/error.hpp"

namespace qbd {

/// P11 = [sqrt(P01 kappa) + sqrt((1 - P01)(1 - kappa))]^2 for P01 <= kappa, else 1.
inline double detection_probability(double p01, double kappa) {
    if (!(p01 >= 0 && p01 <= 1) || !(kappa >= 0 && kappa <= 1)) {
        throw DomainError("detection_probability: arguments must lie in [0, 1]");
    }
    if (p01 >= kappa) {
        return 1.0;
    }
    double s = std::sqrt(p01 * kappa) + std::sqrt((1 - p01) * (1 - kappa));
    return std::min(1.0, s * s);
}

struct DecisionPoint {
    double false_alarm;
    double kappa;
    double detection;
};

inline DecisionPoint decision_point(double p01, double kappa) {
    return {p01, kappa, detection_probability(p01, kappa)};
}

/// kappa* in [p01, 1] solving detection_probability(p01, kappa*) = 1/2, by bisection.
inline double critical_kappa_bisection(double p01) {
    if (!(p01 >= 0 && p01 <= 0.5)) {
        throw DomainError("critical_kappa_bisection: p01 must lie in [0, 1/2]");
    }
    // detection_probability is non-increasing in kappa on [p01, 1].
    double lo = p01, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-16; i++) {
        double mid = 0.5 * (lo + hi);
        if (detection_probability(p01, mid) > 0.5) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Threshold overlap strength for P11 = 1/2: kappa* = (1 + 2 sqrt(P01 (1 - P01))) / 2.
/// Empty when p01 > 1/2, where every perturbation meets the threshold.
inline std::optional<double> critical_kappa(double p01) {
    if (!(p01 >= 0 && p01 <= 1)) {
        throw DomainError("critical_kappa: p01 must lie in [0, 1]");
    }
    if (p01 > 0.5) {
        return std::nullopt;
    }
    double analytic = 0.5 * (1 + 2 * std::sqrt(p01 * (1 - p01)));
    double bisected = critical_kappa_bisection(p01);
    if (std::abs(analytic - bisected) > 1e-12) {
        throw ConvergenceError("critical_kappa: analytic and bisection values disagree");
    }
    return std::min(analytic, 1.0);
}

enum class MinIntensityMethod { ClosedForm, RootFind };

inline const char *to_string(MinIntensityMethod m) {
    return m == MinIntensityMethod::ClosedForm ? "closed-form" : "root-find";
}

struct MinIntensity {
    /// M = |z_min|^2, in oscillator quanta.
    double intensity;
    double lo;
    double hi;
    MinIntensityMethod method;
    double false_alarm;
};

struct ScanOptions {
    double scan_max = 50.0;
    double scan_step = 1e-3;
    double tol = 1e-10;
};

/// Smallest intensity I in (0, scan_max] with kappa_of_intensity(I) <= kappa*,
/// i.e. the first down-crossing of the threshold. A forward scan brackets the
/// crossing and bisection refines it, so oscillating strengths (number and cat
/// states) report their first root.
template <typename KappaFn>
MinIntensity min_detectable_intensity(KappaFn &&kappa_of_intensity, double p01, const ScanOptions &opt = {}) {
    if (!(opt.scan_max > 0) || !(opt.scan_step > 0) || !(opt.tol > 0)) {
        throw DomainError("min_detectable_intensity: scan parameters must be positive");
    }
    auto threshold = critical_kappa(p01);
    if (!threshold || *threshold >= 1.0) {
        return {0.0, 0.0, 0.0, MinIntensityMethod::ClosedForm, p01};
    }
    double target = *threshold;
    double prev = 0.0;
    std::size_t steps = static_cast<std::size_t>(std::ceil(opt.scan_max / opt.scan_step));
    for (std::size_t i = 1; i <= steps; i++) {
        double cur = std::min(opt.scan_max, static_cast<double>(i) * opt.scan_step);
        if (kappa_of_intensity(cur) <= target) {
            double lo = prev, hi = cur;
            while (hi - lo > opt.tol) {
                double mid = 0.5 * (lo + hi);
                if (kappa_of_intensity(mid) <= target) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return {0.5 * (lo + hi), lo, hi, MinIntensityMethod::RootFind, p01};
        }
        prev = cur;
    }
    throw NotFoundError("no threshold crossing in (0, " + std::to_string(opt.scan_max) + "]", opt.scan_max);
}

/// -ln kappa*: minimum intensity for any preparation with kappa = e^{-|z|^2}.
inline double coherent_min_intensity(double p01) {
    auto k = critical_kappa(p01);
    return k ? -std::log(*k) : 0.0;
}

/// log(2 / (1 + sqrt(P01 (1 - P01)))), the published coherent-state prefactor.
/// Equals coherent_min_intensity only at P01 = 0.
inline double published_coherent_prefactor(double p01) {
    if (!(p01 >= 0 && p01 <= 1)) {
        throw DomainError("published_coherent_prefactor: p01 must lie in [0, 1]");
    }
    return std::log(2.0 / (1.0 + std::sqrt(p01 * (1 - p01))));
}

enum class ReferenceFamily {
    CoherentRef,
    SqueezedPhase0,
    SqueezedPhaseHalfPi,
    SqueezedRandomAsymptotic,
    NumberAsymptotic,
    CatPhase0,
    CatPhaseHalfPi,
    CatRandom,
};

struct ReferenceParams {
    /// Mean excitation of the preparation (squeezed and cat families).
    double nbar = 0;
    /// Fock index (number family).
    int n = 0;

    static ReferenceParams squeezed(double r) {
        double s = std::sinh(r);
        return {s * s, 0};
    }
};

/// Published closed-form or asymptotic minimum intensity. `value` is
/// `coefficient * scaling`; when `proportional` is set only the scaling is
/// meaningful and the coefficient is 1.
struct ReferenceScaling {
    double value;
    double coefficient;
    bool proportional;
    /// Parameters lie outside the stated validity of an asymptotic form.
    bool outside_validity;
};

inline ReferenceScaling reference_scaling(ReferenceFamily family, const ReferenceParams &params, double p01) {
    double pref = published_coherent_prefactor(p01);
    double nbar = params.nbar;
    if (!(nbar >= 0)) {
        throw DomainError("reference_scaling: nbar must be >= 0");
    }
    switch (family) {
        case ReferenceFamily::CoherentRef:
            return {pref, pref, false, false};
        case ReferenceFamily::SqueezedPhase0: {
            double e2r = 2 * nbar + 1 + 2 * std::sqrt((nbar + 1) * nbar);
            return {pref * e2r, pref, false, false};
        }
        case ReferenceFamily::SqueezedPhaseHalfPi:
            return {pref / (2 * nbar + 1), pref, false, false};
        case ReferenceFamily::SqueezedRandomAsymptotic:
            if (nbar <= 0) {
                throw DomainError("reference_scaling: nbar must be positive");
            }
            return {pref / nbar, pref, false, nbar < 10};
        case ReferenceFamily::NumberAsymptotic: {
            if (params.n <= 0) {
                throw DomainError("reference_scaling: n must be positive");
            }
            double a = 0.3 - 1.5 * p01;
            return {a / params.n, a, false, params.n < 10};
        }
        case ReferenceFamily::CatPhase0:
            return {nbar, 1.0, true, nbar < 10};
        case ReferenceFamily::CatPhaseHalfPi:
        case ReferenceFamily::CatRandom:
            if (nbar <= 0) {
                throw DomainError("reference_scaling: nbar must be positive");
            }
            return {family == ReferenceFamily::CatRandom ? 1 / nbar : 1 / (2 * nbar), 1.0, true, nbar < 10};
    }
    throw DomainError("reference_scaling: unknown family");
}

}  // namespace qbd
