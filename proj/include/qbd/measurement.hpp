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

// Explicit optimal measurement for the two pure hypotheses psi0 and
// psi1 = D(z) psi0. Both states live in span{psi0, psi1}; with the orthonormal
// basis e0 = psi0, e1 ~ psi1 - <psi0|psi1> psi0 the operator rho1 - lambda rho0
// is the 2x2 Hermitian matrix
//
//     [ kappa - lambda        O sqrt(1 - kappa) ]
//     [ conj(O) sqrt(1-kappa)     1 - kappa     ]
//
// with O = sqrt(kappa) e^{i theta}. H1 is accepted on the eigenvector with the
// positive eigenvalue.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "qbd/error.hpp"

namespace qbd {

struct OperatingPoint {
    double false_alarm;
    double detection;
};

struct MeasurementModel {
    double kappa;
    double overlap_phase;
    double lambda;
    std::array<std::array<std::complex<double>, 2>, 2> matrix;
    /// Larger eigenvalue first. The larger one is > 0 and the smaller <= 0.
    std::pair<double, double> eigenvalues;
    /// Coefficients of the accept-H1 eigenvector in {e0, e1}.
    std::array<std::complex<double>, 2> positive_eigvec;
    OperatingPoint operating_point;
};

inline MeasurementModel build_measurement(double kappa, double overlap_phase, double lambda) {
    if (!(kappa >= 0 && kappa < 1)) {
        throw DomainError(kappa == 1 ? "build_measurement: kappa = 1, the hypotheses are indistinguishable"
                                     : "build_measurement: kappa must lie in [0, 1)");
    }
    if (!(lambda >= 0) || !std::isfinite(lambda) || !std::isfinite(overlap_phase)) {
        throw DomainError("build_measurement: lambda must be finite and >= 0");
    }
    using cplx = std::complex<double>;
    double ortho = std::sqrt(1 - kappa);
    cplx o = std::polar(std::sqrt(kappa), overlap_phase);
    double a = kappa - lambda;
    cplx b = o * ortho;
    double d = 1 - kappa;

    double mean = 0.5 * (a + d);
    double radius = std::hypot(0.5 * (a - d), std::abs(b));
    double upper = mean + radius;
    // Product of eigenvalues is -lambda (1 - kappa); use it for the small root.
    double lower = upper != 0 ? -lambda * (1 - kappa) / upper : mean - radius;

    std::array<cplx, 2> v;
    std::array<cplx, 2> from_row0{b, upper - a};
    std::array<cplx, 2> from_row1{upper - d, std::conj(b)};
    double n0 = std::norm(from_row0[0]) + std::norm(from_row0[1]);
    double n1 = std::norm(from_row1[0]) + std::norm(from_row1[1]);
    if (std::max(n0, n1) == 0) {
        v = a >= d ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
    } else {
        v = n0 >= n1 ? from_row0 : from_row1;
        double scale = 1.0 / std::sqrt(std::max(n0, n1));
        v[0] *= scale;
        v[1] *= scale;
    }

    double p01 = std::norm(v[0]);
    double p11 = std::norm(std::conj(v[0]) * o + std::conj(v[1]) * ortho);
    return MeasurementModel{
        kappa,
        overlap_phase,
        lambda,
        {{{cplx(a), b}, {std::conj(b), cplx(d)}}},
        {upper, lower},
        v,
        {std::clamp(p01, 0.0, 1.0), std::clamp(p11, 0.0, 1.0)},
    };
}

struct RocPoint {
    double lambda;
    double false_alarm;
    double detection;
};

/// One operating point per multiplier, sorted by false-alarm probability.
inline std::vector<RocPoint> roc_curve(double kappa, std::span<const double> lambdas) {
    std::vector<RocPoint> out;
    out.reserve(lambdas.size());
    for (double lambda : lambdas) {
        auto m = build_measurement(kappa, 0.0, lambda);
        out.push_back({lambda, m.operating_point.false_alarm, m.operating_point.detection});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RocPoint &x, const RocPoint &y) { return x.false_alarm < y.false_alarm; });
    return out;
}

/// Multiplier whose optimal test has false-alarm probability p01. The false
/// alarm decreases from kappa at lambda = 0 towards 0 as lambda grows; any
/// p01 >= kappa is served by lambda = 0.
inline double lambda_for_false_alarm(double kappa, double p01) {
    if (!(p01 > 0 && p01 <= 1)) {
        throw DomainError("lambda_for_false_alarm: p01 must lie in (0, 1]");
    }
    auto false_alarm = [kappa](double lambda) { return build_measurement(kappa, 0.0, lambda).operating_point.false_alarm; };
    if (p01 >= kappa) {
        return 0.0;
    }
    double lo = 0.0, hi = 1.0;
    while (false_alarm(hi) > p01) {
        lo = hi;
        hi *= 2;
        if (hi > 1e300) {
            throw ConvergenceError("lambda_for_false_alarm: no bracket");
        }
    }
    for (int i = 0; i < 300 && hi - lo > 1e-15 * hi; i++) {
        double mid = 0.5 * (lo + hi);
        if (false_alarm(mid) > p01) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

enum class Hypothesis { H0, H1 };

struct SimulationCounts {
    std::uint64_t accepted;
    std::uint64_t trials;

    double frequency() const {
        return trials == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(trials);
    }
};

/// Bernoulli draws of the accept-H1 outcome under the given hypothesis. The
/// stream is std::mt19937_64 (fixed by the standard) mapped to [0, 1) with 53
/// bits, so counts depend only on the seed.
inline SimulationCounts simulate_decisions(const MeasurementModel &model, Hypothesis truth, std::uint64_t trials,
                                           std::uint64_t seed) {
    if (trials == 0) {
        throw DomainError("simulate_decisions: need at least one trial");
    }
    double p = truth == Hypothesis::H0 ? model.operating_point.false_alarm : model.operating_point.detection;
    std::mt19937_64 rng(seed);
    std::uint64_t accepted = 0;
    for (std::uint64_t i = 0; i < trials; i++) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        accepted += u < p ? 1 : 0;
    }
    return {accepted, trials};
}

}  // namespace qbd
