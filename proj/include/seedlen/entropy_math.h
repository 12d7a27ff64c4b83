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

#ifndef SEEDLEN_ENTROPY_MATH_H
#define SEEDLEN_ENTROPY_MATH_H

// Real-valued building blocks of the spot-checking entropy-rate bound.
// All logarithms are base 2 unless written ln.

namespace seedlen {

/// Arguments of the rate functions T and E.
struct RateParams {
    double v;    // trust coefficient, (0, 1]
    double h;    // doubled failing probability, >= 0
    double eta;  // error tolerance, (0, 1/2), with eta / v < 1/2
    double q;    // test probability, (0, 1)
    double k;    // smoothing parameter, > 0

    /// Throws DomainError when any field is out of range.
    void validate() const;
};

/// Options for the inner maximisation over t in [0, 1].
struct TMaxOptions {
    int grid_points = 1025;
    double tolerance = 1e-12;
};

double binary_entropy(double x);

/// 1 - 2 h(y) on [0, 1/2].
double pi_fn(double y);

/// Derivative of pi_fn: 2 (log y - log(1 - y)). Non-positive on (0, 1/2].
double pi_prime(double y);

/// 1 - ((1 + 2x) / x) log[(1 - y)^(1/(1+2x)) + y^(1/(1+2x))], x > 0, y in [0, 1].
double pi_big(double x, double y);

/// x * pi_big(x, y), evaluated without cancellation for tiny x.
double x_pi_big(double x, double y);

double r0(const RateParams &p);

/// log2[(1-q) 2^{-x Pi(x,t)} + q (1 - (1 - 2^-k)((h/2)^{1+x} + v^{1+x} t))] with x = r q k.
///
/// This is the objective maximised inside T. `r` is passed explicitly so
/// that both the exact form (r = r0) and the c_v-substituted form used for
/// constant extraction share one implementation.
double rate_objective(double t, double q, double k, double r, double v, double h);

/// max over t in [0, 1] of rate_objective: dense grid, then golden-section
/// refinement around the best grid point.
double max_rate_objective(double q, double k, double r, double v, double h,
                          const TMaxOptions &opt = {});

double t_rate(const RateParams &p, const TMaxOptions &opt = {});

/// 2 / r0.
double e_rate(const RateParams &p);

}  // namespace seedlen

#endif
