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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "seedlen/errors.h"

namespace seedlen {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require(bool ok, const char *what) {
    if (!ok) {
        throw DomainError(what);
    }
}

// 1 - 2^{-z}, accurate for small z.
double one_minus_exp2_neg(double z) {
    return -std::expm1(-z * kLn2);
}

}  // namespace

void RateParams::validate() const {
    require(v > 0 && v <= 1, "RateParams: v must lie in (0, 1]");
    require(h >= 0, "RateParams: h must be non-negative");
    require(eta > 0 && eta < 0.5, "RateParams: eta must lie in (0, 1/2)");
    require(q > 0 && q < 1, "RateParams: q must lie in (0, 1)");
    require(k > 0, "RateParams: k must be positive");
    // eta / v == 1/2 is the degenerate point where the first r0 branch diverges.
    require(eta / v <= 0.5, "RateParams: eta / v must not exceed 1/2");
}

double binary_entropy(double x) {
    require(x >= 0 && x <= 1, "binary_entropy: argument outside [0, 1]");
    if (x == 0 || x == 1) {
        return 0;
    }
    return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

double pi_fn(double y) {
    require(y >= 0 && y <= 0.5, "pi: argument outside [0, 1/2]");
    return 1 - 2 * binary_entropy(y);
}

double pi_prime(double y) {
    require(y > 0 && y <= 0.5, "pi_prime: argument outside (0, 1/2]");
    return 2 * (std::log2(y) - std::log2(1 - y));
}

double x_pi_big(double x, double y) {
    require(x > 0, "pi_big: x must be positive");
    require(y >= 0 && y <= 1, "pi_big: y outside [0, 1]");
    // (1-y)^a + y^a = 1 + s, with a - 1 = -2x / (1 + 2x).
    double a_minus_1 = -2 * x / (1 + 2 * x);
    double s = 0;
    if (y < 1) {
        s += (1 - y) * std::expm1(a_minus_1 * std::log1p(-y));
    }
    if (y > 0) {
        s += y * std::expm1(a_minus_1 * std::log(y));
    }
    return x - (1 + 2 * x) * std::log1p(s) / kLn2;
}

double pi_big(double x, double y) {
    return x_pi_big(x, y) / x;
}

double r0(const RateParams &p) {
    p.validate();
    double slope = pi_prime(p.eta / p.v);
    double first = slope < 0 ? -p.v / slope : std::numeric_limits<double>::infinity();
    return std::min(first, 1 / (p.q * p.k));
}

double rate_objective(double t, double q, double k, double r, double v, double h) {
    double x = r * q * k;
    double a = one_minus_exp2_neg(x_pi_big(x, t));
    double half_h = h == 0 ? 0.0 : std::pow(h / 2, 1 + x);
    double s = one_minus_exp2_neg(k) * (half_h + std::pow(v, 1 + x) * t);
    double u = (1 - q) * a + q * s;
    return std::log1p(-u) / kLn2;
}

double max_rate_objective(double q, double k, double r, double v, double h,
                          const TMaxOptions &opt) {
    require(opt.grid_points >= 3, "max_rate_objective: need at least 3 grid points");
    auto f = [&](double t) { return rate_objective(t, q, k, r, v, h); };

    int last = opt.grid_points - 1;
    int best_i = 0;
    double best = f(0);
    for (int i = 1; i <= last; ++i) {
        double val = f(static_cast<double>(i) / last);
        if (val > best) {
            best = val;
            best_i = i;
        }
    }

    double lo = static_cast<double>(std::max(best_i - 1, 0)) / last;
    double hi = static_cast<double>(std::min(best_i + 1, last)) / last;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double m1 = hi - g * (hi - lo);
    double m2 = lo + g * (hi - lo);
    double f1 = f(m1);
    double f2 = f(m2);
    while (hi - lo > opt.tolerance) {
        if (f1 < f2) {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + g * (hi - lo);
            f2 = f(m2);
        } else {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - g * (hi - lo);
            f1 = f(m1);
        }
    }
    return std::max({best, f1, f2});
}

double t_rate(const RateParams &p, const TMaxOptions &opt) {
    double r = r0(p);
    double x = r * p.q * p.k;
    double best = max_rate_objective(p.q, p.k, r, p.v, p.h, opt);
    return -best / x - (p.h / 2 + p.eta) / r;
}

double e_rate(const RateParams &p) {
    return 2 / r0(p);
}

}  // namespace seedlen
