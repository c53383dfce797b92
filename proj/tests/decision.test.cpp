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

#include "qbd/decision.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "qbd/overlap.hpp"

using namespace qbd;

namespace {

const double kFalseAlarms[] = {0.0, 0.01, 0.02, 0.05, 0.1, 0.25, 0.5};

// Plain scan of f for every down-crossing of `target`, each refined by bisection.
template <typename Fn>
std::vector<double> all_crossings(Fn f, double target, double hi, double step) {
    std::vector<double> out;
    double prev = 0, fprev = f(0.0);
    for (double x = step; x <= hi; x += step) {
        double fx = f(x);
        if (fprev > target && fx <= target) {
            double a = prev, b = x;
            for (int i = 0; i < 200; i++) {
                double m = 0.5 * (a + b);
                (f(m) <= target ? b : a) = m;
            }
            out.push_back(0.5 * (a + b));
        }
        prev = x;
        fprev = fx;
    }
    return out;
}

}  // namespace

TEST(decision, detection_probability_examples) {
    for (double k : {0.0, 0.2, 0.7, 1.0}) {
        EXPECT_NEAR(detection_probability(0.0, k), 1 - k, 1e-15);
        EXPECT_NEAR(detection_probability(k, k), 1.0, 1e-15);
    }
    for (double p : {0.0, 0.3, 1.0}) {
        EXPECT_NEAR(detection_probability(p, 1.0), p, 1e-15);
    }
    EXPECT_EQ(detection_probability(0.6, 0.3), 1.0);
    EXPECT_THROW(detection_probability(-0.1, 0.5), DomainError);
    EXPECT_THROW(detection_probability(0.1, 1.5), DomainError);
    EXPECT_THROW(detection_probability(NAN, 0.5), DomainError);
}

TEST(decision, detection_probability_shape) {
    for (double p = 0; p <= 1.0; p += 0.01) {
        double prev = 2;
        for (double k = 0; k <= 1.0; k += 0.001) {
            double d = detection_probability(p, k);
            ASSERT_GE(d, p - 1e-15);
            ASSERT_LE(d, 1.0 + 1e-15);
            if (k >= p) {
                ASSERT_LE(d, prev + 1e-15);
            }
            prev = d;
        }
        if (p > 0 && p < 1) {
            EXPECT_NEAR(detection_probability(p, p + 1e-9), 1.0, 1e-4);
        }
    }
    auto pt = decision_point(0.05, 0.4);
    EXPECT_EQ(pt.false_alarm, 0.05);
    EXPECT_EQ(pt.kappa, 0.4);
    EXPECT_EQ(pt.detection, detection_probability(0.05, 0.4));
}

TEST(decision, critical_kappa) {
    EXPECT_NEAR(*critical_kappa(0.0), 0.5, 1e-15);
    EXPECT_NEAR(*critical_kappa(0.05), 0.717945, 1e-6);
    EXPECT_NEAR(*critical_kappa(0.5), 1.0, 1e-15);
    EXPECT_FALSE(critical_kappa(0.6).has_value());
    EXPECT_THROW(critical_kappa(-0.01), DomainError);
    for (double p : kFalseAlarms) {
        double k = *critical_kappa(p);
        EXPECT_NEAR(k, critical_kappa_bisection(p), 1e-12);
        EXPECT_NEAR(detection_probability(p, k), 0.5, 1e-12);
        EXPECT_NEAR(std::sqrt(p * k) + std::sqrt((1 - p) * (1 - k)), std::sqrt(0.5), 1e-12);
    }
}

TEST(decision, coherent_minimum) {
    auto m = min_detectable_intensity([](double i) { return std::exp(-i); }, 0.0);
    EXPECT_NEAR(m.intensity, std::log(2.0), 1e-10);
    EXPECT_EQ(m.method, MinIntensityMethod::RootFind);
    EXPECT_LE(m.lo, m.intensity);
    EXPECT_GE(m.hi, m.intensity);
    EXPECT_LE(m.hi - m.lo, 1e-10);
    for (double p : kFalseAlarms) {
        auto mp = min_detectable_intensity([](double i) { return std::exp(-i); }, p);
        EXPECT_NEAR(mp.intensity, -std::log(*critical_kappa(p)), 1e-10) << p;
        EXPECT_NEAR(mp.intensity, coherent_min_intensity(p), 1e-10);
    }
    auto always = min_detectable_intensity([](double i) { return std::exp(-i); }, 0.7);
    EXPECT_EQ(always.intensity, 0.0);
    EXPECT_EQ(always.method, MinIntensityMethod::ClosedForm);
}

TEST(decision, squeezed_phase_matched_ratio) {
    auto base = min_detectable_intensity([](double i) { return kappa_squeezed(0.0, i, 0.0); }, 0.0);
    for (double r : {0.5, 1.0, 2.0}) {
        auto m = min_detectable_intensity([r](double i) { return kappa_squeezed(r, i, 0.0); }, 0.0,
                                          {.scan_max = 500.0, .scan_step = 1e-2, .tol = 1e-12});
        EXPECT_NEAR(m.intensity / base.intensity / std::exp(2 * r), 1.0, 1e-8);
    }
}

TEST(decision, squeezed_out_of_phase) {
    // The cos^2 variant gives ln 2 / (2 nbar + 1) = 0.184239 at r = 1.
    auto published = min_detectable_intensity([](double i) { return kappa_squeezed_published(1.0, i, std::numbers::pi / 2); },
                                          0.0, {.scan_max = 50, .scan_step = 1e-4, .tol = 1e-13});
    double nbar = std::sinh(1.0) * std::sinh(1.0);
    EXPECT_NEAR(published.intensity, std::log(2.0) / (2 * nbar + 1), 1e-10);
    EXPECT_NEAR(published.intensity, 0.1842401, 1e-7);
    // The exact overlap gives ln 2 e^{-2r}.
    auto exact = min_detectable_intensity([](double i) { return kappa_squeezed(1.0, i, std::numbers::pi / 2); }, 0.0,
                                          {.scan_max = 50, .scan_step = 1e-4, .tol = 1e-13});
    EXPECT_NEAR(exact.intensity, std::log(2.0) * std::exp(-2.0), 1e-10);
}

TEST(decision, number_state_smallest_root) {
    auto f = [](double x) { return std::exp(-x) * (1 - x) * (1 - x); };
    auto crossings = all_crossings(f, 0.5, 50, 1e-4);
    ASSERT_FALSE(crossings.empty());
    auto m = min_detectable_intensity([](double i) { return kappa_number(1, i); }, 0.0);
    EXPECT_NEAR(m.intensity, crossings.front(), 1e-9);
    EXPECT_NEAR(m.intensity, 0.2133086, 1e-7);
    for (int n : {2, 3, 5, 8}) {
        auto kn = [n](double i) { return kappa_number(n, i); };
        auto mn = min_detectable_intensity(kn, 0.05);
        auto roots = all_crossings(kn, *critical_kappa(0.05), 50, 1e-4);
        ASSERT_FALSE(roots.empty());
        for (double root : roots) {
            EXPECT_LE(mn.intensity, root + 1e-9);
        }
        EXPECT_NEAR(mn.intensity, roots.front(), 1e-8);
    }
}

TEST(decision, not_found) {
    try {
        min_detectable_intensity([](double) { return 1.0; }, 0.0, {.scan_max = 2.0});
        FAIL() << "expected NotFoundError";
    } catch (const NotFoundError &e) {
        EXPECT_EQ(e.scanned_max(), 2.0);
    }
    EXPECT_THROW(min_detectable_intensity([](double i) { return std::exp(-i); }, 0.0, {.scan_step = 0}), DomainError);
}

TEST(decision, reference_scaling) {
    EXPECT_NEAR(reference_scaling(ReferenceFamily::CoherentRef, {}, 0.0).value, std::log(2.0), 1e-15);
    auto sq = reference_scaling(ReferenceFamily::SqueezedPhase0, ReferenceParams::squeezed(1.0), 0.0);
    EXPECT_NEAR(sq.value, std::log(2.0) * std::exp(2.0), 1e-12);
    EXPECT_NEAR(sq.value, 5.121703, 1e-6);
    auto half = reference_scaling(ReferenceFamily::SqueezedPhaseHalfPi, ReferenceParams::squeezed(1.0), 0.0);
    EXPECT_NEAR(half.value, 0.1842401, 1e-7);
    auto num = reference_scaling(ReferenceFamily::NumberAsymptotic, {.n = 100}, 0.05);
    EXPECT_NEAR(num.coefficient, 0.225, 1e-15);
    EXPECT_NEAR(num.value, 0.00225, 1e-15);
    EXPECT_FALSE(num.outside_validity);
    EXPECT_TRUE(reference_scaling(ReferenceFamily::SqueezedRandomAsymptotic, {.nbar = 5}, 0.0).outside_validity);
    EXPECT_FALSE(reference_scaling(ReferenceFamily::SqueezedRandomAsymptotic, {.nbar = 50}, 0.0).outside_validity);
    auto cat = reference_scaling(ReferenceFamily::CatRandom, {.nbar = 20}, 0.0);
    EXPECT_TRUE(cat.proportional);
    EXPECT_NEAR(cat.value, 0.05, 1e-15);
    EXPECT_NEAR(reference_scaling(ReferenceFamily::CatPhaseHalfPi, {.nbar = 20}, 0.0).value, 0.025, 1e-15);
    EXPECT_NEAR(reference_scaling(ReferenceFamily::CatPhase0, {.nbar = 20}, 0.0).value, 20, 1e-15);
    EXPECT_THROW(reference_scaling(ReferenceFamily::NumberAsymptotic, {.n = 0}, 0.0), DomainError);
}

TEST(decision, published_prefactor_differs_from_inversion) {
    EXPECT_NEAR(published_coherent_prefactor(0.0), coherent_min_intensity(0.0), 1e-15);
    double published = published_coherent_prefactor(0.05);
    double derived = coherent_min_intensity(0.05);
    EXPECT_GT(std::abs(published - derived), 0.1);
    EXPECT_NEAR(detection_probability(0.05, std::exp(-derived)), 0.5, 1e-12);
    EXPECT_NEAR(detection_probability(0.05, std::exp(-published)), 0.615, 5e-3);
}
