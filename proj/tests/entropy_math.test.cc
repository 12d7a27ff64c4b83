// Copyright 2026 The seedlen Authors
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

#include "seedlen/entropy_math.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "seedlen/errors.h"

using namespace seedlen;

namespace {

// Naive textbook forms, valid away from the edges.
double h_oracle(double x) {
    if (x == 0 || x == 1) {
        return 0;
    }
    return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

double big_pi_oracle(double x, double y) {
    long double a = 1.0L / (1 + 2.0L * x);
    long double s = std::pow(1.0L - y, a) + std::pow((long double)y, a);
    return (double)(1 - (1 + 2.0L * x) / x * std::log2(s));
}

}  // namespace

TEST(entropy_math, binary_entropy_examples) {
    EXPECT_EQ(binary_entropy(0.5), 1.0);
    EXPECT_EQ(binary_entropy(0), 0.0);
    EXPECT_EQ(binary_entropy(1), 0.0);
    EXPECT_NEAR(binary_entropy(0.01), 0.080793, 1e-6);
    EXPECT_THROW(binary_entropy(-0.1), DomainError);
    EXPECT_THROW(binary_entropy(1.5), DomainError);
}

TEST(entropy_math, binary_entropy_matches_oracle_and_is_symmetric) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-9, 1 - 1e-9);
    for (int i = 0; i < 1000; ++i) {
        double x = u(rng);
        EXPECT_NEAR(binary_entropy(x), h_oracle(x), 1e-12);
        EXPECT_NEAR(binary_entropy(x), binary_entropy(1 - x), 1e-12);
    }
}

TEST(entropy_math, pi_examples) {
    EXPECT_NEAR(pi_fn(0.5), -1.0, 1e-12);
    EXPECT_EQ(pi_fn(0), 1.0);
    EXPECT_NEAR(pi_fn(0.11), 0.000168, 1e-5);
}

TEST(entropy_math, pi_is_one_minus_two_h_and_non_increasing) {
    double prev = 2;
    for (int i = 0; i <= 10000; ++i) {
        double y = 0.5 * i / 10000;
        double p = pi_fn(y);
        EXPECT_NEAR(p, 1 - 2 * h_oracle(y), 1e-12);
        EXPECT_LE(p, prev + 1e-15);
        prev = p;
    }
}

TEST(entropy_math, pi_prime_examples) {
    EXPECT_EQ(pi_prime(0.5), 0.0);
    EXPECT_NEAR(pi_prime(0.25), -3.169925, 1e-5);
    EXPECT_LT(pi_prime(1e-6), -39);
    EXPECT_THROW(pi_prime(0), DomainError);
}

TEST(entropy_math, pi_prime_matches_finite_difference) {
    for (int i = 1; i < 500; ++i) {
        double y = 0.5 * i / 500;
        double step = 1e-6 * y;
        double fd = (pi_fn(y + step) - pi_fn(y - step)) / (2 * step);
        double d = pi_prime(y);
        EXPECT_LE(d, 0);
        if (std::abs(d) > 1e-3) {
            EXPECT_NEAR(fd / d, 1.0, 1e-5) << "y=" << y;
        }
    }
}

TEST(entropy_math, big_pi_examples) {
    EXPECT_NEAR(pi_big(0.5, 0.5), -1.0, 1e-12);
    EXPECT_NEAR(pi_big(3.0, 0), 1.0, 1e-15);
    EXPECT_NEAR(pi_big(1e-9, 0.3), pi_fn(0.3), 1e-5);
}

TEST(entropy_math, big_pi_tends_to_pi) {
    for (double y : {0.1, 0.25, 0.4}) {
        EXPECT_LE(std::abs(pi_big(1e-9, y) - pi_fn(y)), 1e-5) << y;
    }
}

TEST(entropy_math, big_pi_matches_oracle_at_moderate_x) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.01, 5);
    std::uniform_real_distribution<double> uy(0.0, 0.5);
    for (int i = 0; i < 1000; ++i) {
        double x = ux(rng);
        double y = uy(rng);
        EXPECT_NEAR(pi_big(x, y), big_pi_oracle(x, y), 1e-9);
        EXPECT_NEAR(x_pi_big(x, y), x * big_pi_oracle(x, y), 1e-9);
    }
}

TEST(entropy_math, r0_examples) {
    RateParams p{1.0, 0, 0.25, 1e-3, 1e-3};
    EXPECT_NEAR(r0(p), 0.315465, 1e-5);
    p.q = 0.9;
    p.k = 40;
    EXPECT_DOUBLE_EQ(r0(p), 1 / (0.9 * 40));
    RateParams degenerate{0.14, 0, 0.07, 1e-3, 2};
    EXPECT_DOUBLE_EQ(r0(degenerate), 1 / (1e-3 * 2));
}

TEST(entropy_math, t_rate_examples) {
    RateParams p{0.14, 0, 4.2e-5, 1e-6, 1e-4};
    EXPECT_GE(t_rate(p), pi_fn(4.2e-5 / 0.14) - 0.0125);
    RateParams tiny{0.14, 0.01, 1e-3, 1e-8, 1e-8};
    EXPECT_NEAR(t_rate(tiny), pi_fn(1e-3 / 0.14), 1e-3);
}

TEST(entropy_math, zero_h_term_is_exactly_zero) {
    double a = rate_objective(0.3, 0.01, 0.5, 0.2, 0.14, 0);
    double b = rate_objective(0.3, 0.01, 0.5, 0.2, 0.14, 1e-300);
    EXPECT_TRUE(std::isfinite(a));
    EXPECT_NEAR(a, b, 1e-15);
}

TEST(entropy_math, e_rate_examples) {
    RateParams p{1.0, 0, 0.25, 1e-3, 1e-3};
    EXPECT_NEAR(e_rate(p), 6.339850, 1e-4);
    p.q = 0.9;
    p.k = 40;
    EXPECT_DOUBLE_EQ(e_rate(p), 2 * 0.9 * 40);
}

TEST(entropy_math, e_rate_limit_below_threshold) {
    for (double v : {0.14, 0.5, 1.0}) {
        for (double eta : {1e-5, 1e-3, 0.05}) {
            if (eta / v >= 0.5) {
                continue;
            }
            double limit = -2 * pi_prime(eta / v) / v;
            RateParams p{v, 0, eta, 1e-4, 1e-4};
            ASSERT_LT(p.q * p.k, -pi_prime(eta / v) / v);
            EXPECT_NEAR(e_rate(p) / limit, 1.0, 1e-12);
        }
    }
}

TEST(entropy_math, random_draws_are_finite_and_e_positive) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> lu(-8, -0.5);
    std::uniform_real_distribution<double> uv(0.05, 1.0);
    for (int i = 0; i < 1000; ++i) {
        RateParams p;
        p.v = uv(rng);
        p.eta = p.v * std::pow(10.0, lu(rng)) / 4;
        p.h = std::pow(10.0, lu(rng));
        p.q = std::pow(10.0, lu(rng));
        p.k = std::pow(10.0, lu(rng) + 2);
        TMaxOptions fast{65, 1e-9};
        double t = t_rate(p, fast);
        ASSERT_TRUE(std::isfinite(t));
        ASSERT_GT(e_rate(p), 0);
    }
}

TEST(entropy_math, rejects_bad_parameters) {
    EXPECT_THROW(r0(RateParams{0, 0, 0.1, 0.1, 1}), DomainError);
    EXPECT_THROW(r0(RateParams{1, 0, 0.1, 0, 1}), DomainError);
    EXPECT_THROW(r0(RateParams{1, 0, 0.1, 0.1, -1}), DomainError);
    EXPECT_THROW(pi_big(0, 0.2), DomainError);
}
