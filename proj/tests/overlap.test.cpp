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

#include "qbd/overlap.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "qbd/fock_oracle.hpp"

using namespace qbd;

namespace {

constexpr double kPi = std::numbers::pi;

const double kIntensities[] = {0.1, 0.5, 1.0, 2.0};
const double kPhases[] = {0.0, kPi / 4, kPi / 2};

}  // namespace

TEST(overlap, coherent) {
    auto at_zero = overlap_coherent({2.0, -1.0}, 0.0);
    EXPECT_EQ(at_zero.overlap, complex(1.0));
    EXPECT_EQ(at_zero.kappa, 1.0);
    EXPECT_NEAR(overlap_coherent({0.3, 0.1}, std::polar(1.0, 0.4)).kappa, 0.367879441171442, 1e-14);
    complex z{0.4, -0.7};
    EXPECT_EQ(overlap_coherent(0.0, z).kappa, overlap_coherent({5.0, 2.0}, z).kappa);
    for (complex alpha : {complex(0.0), complex(1.0, 0.5), complex(3.0, 2.0)}) {
        auto closed = overlap_coherent(alpha, z);
        auto oracle = overlap_numeric(Coherent{alpha}, z);
        EXPECT_NEAR(std::abs(closed.overlap - oracle.overlap), 0.0, 1e-10);
        EXPECT_NEAR(closed.kappa, std::norm(closed.overlap), 1e-12);
    }
}

TEST(overlap, squeezed_fixed_phase) {
    for (double phi : kPhases) {
        EXPECT_NEAR(kappa_squeezed(0.0, 1.0, phi), std::exp(-1.0), 1e-15);
    }
    // cosh 2 - sinh 2 = e^{-2}
    EXPECT_NEAR(kappa_squeezed(1.0, 1.0, 0.0), std::exp(-std::exp(-2.0)), 1e-15);
    EXPECT_NEAR(kappa_squeezed(1.0, 1.0, 0.0), 0.873423018493117, 1e-12);
    // cosh 2 + sinh 2 = e^{2}
    EXPECT_NEAR(kappa_squeezed(1.0, 1.0, kPi / 2), std::exp(-std::exp(2.0)), 1e-15);
}

TEST(overlap, squeezed_published_variant_agrees_only_in_phase) {
    double nbar = std::sinh(1.0) * std::sinh(1.0);
    EXPECT_NEAR(kappa_squeezed_published(1.0, 1.0, 0.0), kappa_squeezed(1.0, 1.0, 0.0), 1e-15);
    // exp{-|z|^2 (2 nbar + 1)} at phi = pi/2
    EXPECT_NEAR(kappa_squeezed_published(1.0, 1.0, kPi / 2), std::exp(-(2 * nbar + 1)), 1e-15);
    EXPECT_NEAR(kappa_squeezed_published(1.0, 1.0, kPi / 2), 0.0232327, 1e-7);
    // The oracle sides with the cos(2 phi) form.
    double oracle = overlap_numeric(SqueezedVacuum{1.0}, complex(0.0, 1.0)).kappa;
    EXPECT_NEAR(oracle, kappa_squeezed(1.0, 1.0, kPi / 2), 1e-10);
    EXPECT_GT(std::abs(oracle - kappa_squeezed_published(1.0, 1.0, kPi / 2)), 0.02);
}

TEST(overlap, squeezed_phase_symmetry) {
    for (double r : {0.3, 1.0, 2.0}) {
        for (double phi = -3; phi <= 3; phi += 0.4) {
            double k = kappa_squeezed(r, 0.7, phi);
            ASSERT_NEAR(k, kappa_squeezed(r, 0.7, -phi), 1e-14);
            ASSERT_NEAR(k, kappa_squeezed(r, 0.7, kPi - phi), 1e-14);
            ASSERT_GE(k, 0.0);
            ASSERT_LE(k, 1.0);
        }
    }
}

TEST(overlap, squeezed_random_phase) {
    for (double intensity : kIntensities) {
        EXPECT_NEAR(kappa_squeezed_random_phase(0.0, intensity), std::exp(-intensity), 1e-15);
    }
    EXPECT_NEAR(kappa_squeezed_random_phase(1.0, 1.0), phase_averaged_kappa_numeric(SqueezedVacuum{1.0}, 1.0), 1e-8);
    // n = sinh^2 r form: exp{-|z|^2(2n+1)} I0(|z|^2 sqrt(n(n+1)))^2, naive where representable.
    for (double r : {0.5, 1.0, 3.0}) {
        double n = std::sinh(r) * std::sinh(r);
        double i0 = bessel_i0(0.01 * std::sqrt(n * (n + 1)));
        double naive = std::exp(-0.01 * (2 * n + 1)) * i0 * i0;
        double k = kappa_squeezed_random_phase(r, 0.01);
        EXPECT_TRUE(std::isfinite(k));
        EXPECT_NEAR(k / naive, 1.0, 1e-12);
    }
    // Far past the naive overflow point.
    double huge = kappa_squeezed_random_phase(12.0, 5.0);
    EXPECT_TRUE(std::isfinite(huge));
    EXPECT_GT(huge, 0.0);
}

TEST(overlap, squeezed_published_random_phase_is_average_of_variant_overlap) {
    // The published averaged strength is the exact phase average of the
    // cos^2 overlap, so the discrepancy starts in the fixed-phase overlap.
    for (double r : {0.5, 1.5}) {
        for (double intensity : kIntensities) {
            auto variant_overlap = [r, intensity](complex z) {
                double c = std::cos(std::arg(z));
                return std::exp(-0.5 * intensity * (std::cosh(2 * r) - std::sinh(2 * r) * c * c));
            };
            EXPECT_NEAR(kappa_squeezed_random_phase_published(r, intensity),
                        phase_average_quadrature(variant_overlap, intensity, 256), 1e-12);
        }
    }
}

TEST(overlap, random_phase_closed_forms_match_phase_quadrature) {
    for (double intensity : kIntensities) {
        for (double r : {0.5, 1.5}) {
            auto fn = [r](complex z) { return overlap_squeezed(r, z).overlap; };
            EXPECT_NEAR(kappa_squeezed_random_phase(r, intensity), phase_average_quadrature(fn, intensity, 256), 1e-12);
        }
        for (Parity p : {Parity::Even, Parity::Odd}) {
            auto fn = [p](complex z) { return overlap_cat(1.3, p, z).exact.overlap; };
            EXPECT_NEAR(kappa_cat(1.3, p, intensity, CatPhase::RandomPhase), phase_average_quadrature(fn, intensity, 256),
                        1e-12);
        }
    }
}

TEST(overlap, number_state) {
    EXPECT_NEAR(kappa_number(0, 0.8), std::exp(-0.8), 1e-15);
    EXPECT_EQ(kappa_number(1, 1.0), 0.0);
    EXPECT_NEAR(kappa_number(2, 1.0), std::exp(-1.0) * 0.25, 1e-15);
    EXPECT_NEAR(kappa_number(2, 1.0), 0.091970, 1e-6);
}

TEST(overlap, reduction_chain) {
    for (double intensity : {0.0, 0.3, 1.0, 4.0}) {
        double e = std::exp(-intensity);
        EXPECT_NEAR(kappa_squeezed(0.0, intensity, 0.7), e, 1e-15);
        EXPECT_NEAR(kappa_number(0, intensity), e, 1e-15);
        EXPECT_NEAR(overlap_coherent({1.0, 1.0}, std::polar(std::sqrt(intensity), 0.2)).kappa, e, 1e-15);
    }
}

TEST(overlap, oracle_equivalence_grid) {
    for (double intensity : kIntensities) {
        for (double phi : kPhases) {
            complex z = std::polar(std::sqrt(intensity), phi);
            for (complex alpha : {complex(0.0), complex(1.0, 0.5), complex(-2.0, 1.0)}) {
                EXPECT_NEAR(overlap_coherent(alpha, z).kappa, overlap_numeric(Coherent{alpha}, z).kappa, 1e-8);
            }
            for (double r : {0.0, 0.5, 1.0, 1.5}) {
                EXPECT_NEAR(kappa_squeezed(r, intensity, phi), overlap_numeric(SqueezedVacuum{r}, z).kappa, 1e-8)
                    << r << " " << intensity << " " << phi;
            }
            for (int n = 0; n <= 10; n++) {
                EXPECT_NEAR(kappa_number(n, intensity), overlap_numeric(NumberState{n}, z).kappa, 1e-8);
            }
        }
        for (double r : {0.0, 0.5, 1.0, 1.5}) {
            EXPECT_NEAR(kappa_squeezed_random_phase(r, intensity),
                        phase_averaged_kappa_numeric(SqueezedVacuum{r}, intensity), 1e-8);
        }
    }
}

TEST(overlap, cat_matches_oracle) {
    EXPECT_EQ(overlap_cat(1.0, Parity::Even, 0.0).exact.kappa, 1.0);
    EXPECT_NEAR(overlap_cat(0.4, Parity::Odd, 0.0).exact.kappa, 1.0, 1e-14);
    EXPECT_NEAR(overlap_cat(1.0, Parity::Even, 0.5).exact.kappa, overlap_numeric(Cat{1.0, Parity::Even}, 0.5).kappa, 1e-8);
    auto odd = overlap_cat(1.0, Parity::Odd, complex(0.0, 0.5));
    auto odd_oracle = overlap_numeric(Cat{1.0, Parity::Odd}, complex(0.0, 0.5));
    EXPECT_NEAR(std::abs(odd.exact.overlap - odd_oracle.overlap), 0.0, 1e-8);
    for (double alpha : {0.5, 1.0, 2.0}) {
        for (Parity p : {Parity::Even, Parity::Odd}) {
            for (double intensity : kIntensities) {
                for (double phi : {0.0, 0.6, kPi / 2, 2.0}) {
                    complex z = std::polar(std::sqrt(intensity), phi);
                    auto closed = overlap_cat(alpha, p, z);
                    EXPECT_NEAR(closed.exact.kappa, overlap_numeric(Cat{alpha, p}, z).kappa, 1e-8);
                    // The literal overlap formula agrees; only the strength denominators differ.
                    EXPECT_NEAR(closed.published, closed.exact.overlap.real(), 1e-12);
                }
                EXPECT_NEAR(kappa_cat(alpha, p, intensity, CatPhase::RandomPhase),
                            phase_averaged_kappa_numeric(Cat{alpha, p}, intensity), 1e-8);
            }
        }
    }
    EXPECT_NEAR(kappa_cat(1.0, Parity::Even, 1.0, CatPhase::RandomPhase),
                phase_averaged_kappa_numeric(Cat{1.0, Parity::Even}, 1.0), 1e-8);
}

TEST(overlap, cat_fixed_phase_modes) {
    for (CatPhase mode : {CatPhase::Phase0, CatPhase::PhaseHalfPi, CatPhase::RandomPhase}) {
        EXPECT_NEAR(kappa_cat(1.5, Parity::Odd, 0.0, mode), 1.0, 1e-14);
    }
    double e = std::exp(-2.0);
    double k0 = kappa_cat(1.0, Parity::Even, 0.49, CatPhase::Phase0);
    EXPECT_NEAR(k0, std::exp(-0.49) * std::pow(1 + e * std::cosh(2 * 0.7), 2) / std::pow(1 + e, 2), 1e-14);
    double kh = kappa_cat(1.0, Parity::Even, 0.49, CatPhase::PhaseHalfPi);
    EXPECT_NEAR(kh, std::exp(-0.49) * std::pow(std::cos(2 * 0.7) + e, 2) / std::pow(1 + e, 2), 1e-14);
}

TEST(overlap, cat_half_pi_fringe_zero) {
    // kappa_{pi/2} of the even cat vanishes where cos(2 alpha |z|) = -e^{-2 alpha^2}.
    double alpha = 1.0;
    double best_i = 0, best_k = 1;
    for (double intensity = 0.01; intensity < 1.5; intensity += 1e-4) {
        double k = kappa_cat(alpha, Parity::Even, intensity, CatPhase::PhaseHalfPi);
        if (k < best_k) {
            best_k = k;
            best_i = intensity;
        }
    }
    double x = std::acos(-std::exp(-2.0));
    double predicted = x * x / 4;
    EXPECT_NEAR(best_i, predicted, 2e-4);
    EXPECT_NEAR(kappa_cat(alpha, Parity::Even, predicted, CatPhase::PhaseHalfPi), 0.0, 1e-20);
    EXPECT_NEAR(overlap_numeric(Cat{alpha, Parity::Even}, complex(0.0, std::sqrt(predicted))).kappa, 0.0, 1e-10);
    // The zero sits past the 2 alpha |z| = pi/2 crossing of the cosine.
    EXPECT_GT(2 * alpha * std::sqrt(best_i), kPi / 2);
}

TEST(overlap, cat_published_strength_denominators) {
    double e = std::exp(-2.0);
    for (CatPhase mode : {CatPhase::Phase0, CatPhase::PhaseHalfPi, CatPhase::RandomPhase}) {
        double exact = kappa_cat(1.0, Parity::Even, 0.6, mode);
        double published = kappa_cat_published(1.0, Parity::Even, 0.6, mode);
        EXPECT_NEAR(published / exact, std::pow((1 + e) / (1 + 2 * e), 2), 1e-12);
    }
    // Large amplitudes wash the difference out.
    EXPECT_NEAR(kappa_cat_published(4.0, Parity::Odd, 0.3, CatPhase::RandomPhase),
                kappa_cat(4.0, Parity::Odd, 0.3, CatPhase::RandomPhase), 1e-12);
}

TEST(overlap, mean_excitation) {
    EXPECT_EQ(mean_excitation(NumberState{7}), 7.0);
    EXPECT_NEAR(mean_excitation(SqueezedVacuum{1.0}), 1.381098, 1e-6);
    EXPECT_NEAR(mean_excitation(Coherent{{1.0, 2.0}}), 5.0, 1e-15);
    EXPECT_NEAR(mean_excitation(Cat{1.0, Parity::Even}), (1 - std::exp(-2.0)) / (1 + std::exp(-2.0)), 1e-15);
    EXPECT_NEAR(mean_excitation(Cat{1.0, Parity::Even}), 0.761594, 1e-6);
    for (double alpha : {0.2, 1.0, 2.5}) {
        for (Parity p : {Parity::Even, Parity::Odd}) {
            Cat c{alpha, p};
            auto v = fock_amplitudes(c, adequate_dim(c, 0));
            EXPECT_NEAR(mean_excitation(c), v.mean_number(), 1e-10);
        }
    }
}

TEST(overlap, dispatch) {
    StatePrep coh = Coherent{{1.0, -0.5}};
    EXPECT_NEAR(kappa(coh, Perturbation::polar(0.6, 1.0)), std::exp(-0.6), 1e-15);
    // Coherent states are not phase insensitive: <O>_phi = e^{-|z|^2/2} J0(2|alpha||z|).
    EXPECT_NEAR(kappa(coh, Perturbation::random_phase(0.6)), phase_averaged_kappa_numeric(coh, 0.6), 1e-8);
    StatePrep sq = SqueezedVacuum{0.8};
    EXPECT_NEAR(kappa(sq, Perturbation::polar(0.6, 1.0)), kappa_squeezed(0.8, 0.6, 1.0), 1e-15);
    EXPECT_NEAR(kappa(sq, Perturbation::polar(0.6, 1.0), SqueezeForm::Published), kappa_squeezed_published(0.8, 0.6, 1.0),
                1e-15);
    EXPECT_EQ(kappa(sq, Perturbation::random_phase(0.6), SqueezeForm::Published),
              kappa_squeezed_random_phase_published(0.8, 0.6));
    EXPECT_NEAR(kappa(NumberState{3}, Perturbation::random_phase(0.6)), kappa_number(3, 0.6), 1e-15);
    EXPECT_NEAR(kappa(Cat{1.0, Parity::Odd}, Perturbation::random_phase(0.6)),
                kappa_cat(1.0, Parity::Odd, 0.6, CatPhase::RandomPhase), 1e-15);
    EXPECT_THROW(kappa_number(2, -1.0), DomainError);
    EXPECT_THROW(Perturbation::random_phase(-1.0), DomainError);
}

TEST(overlap, perturbation_accessors) {
    auto p = Perturbation::fixed({-1.0, 0.0});
    EXPECT_EQ(p.intensity(), 1.0);
    EXPECT_EQ(*p.phase(), kPi);
    auto q = Perturbation::fixed({-1.0, -0.0});
    EXPECT_EQ(*q.phase(), kPi);
    auto rnd = Perturbation::random_phase(2.0);
    EXPECT_FALSE(rnd.phase().has_value());
    EXPECT_THROW(rnd.amplitude(), DomainError);
}
