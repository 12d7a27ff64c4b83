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

#ifndef SEEDLEN_CONSTANTS_H
#define SEEDLEN_CONSTANTS_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seedlen/entropy_math.h"

namespace seedlen {

/// A component-input tuple; bit i is the input of component i.
using InputString = std::uint32_t;

/// Static description of an XOR game as seen by the seed accounting.
struct GameSpec {
    std::string name;
    int n_components = 0;
    double c_v = 0;  // lower bound on the trust coefficient
    double f_g = 0;  // optimal failing probability
    double w_g = 1;  // optimal winning probability, 1 - f_g
    std::vector<InputString> input_strings;
    int bits_per_game_input = 0;

    void validate() const;
};

/// Three-component GHZ game: c_v = 0.14, f_G = 0, inputs {000, 100, 010, 001}.
GameSpec ghz_game();

/// Derived constants for one (delta, eta) choice.
///
/// `delta` is the caller-facing min-entropy loss; the q0/k0 search and b use
/// `delta_inner` = delta / 4.
struct EntropyConstants {
    double delta = 0;
    double delta_inner = 0;
    double eta = 0;
    double eta_max = 0;
    double q0 = 0;
    double k0 = 0;
    double b = 0;
    double b_entropy = 0;        // k0 delta' c_v / (-4 pi'(eta))
    double b_concentration = 0;  // (log e / 2) (delta' / 2n - q0)^2 / q0
    double big_k = 0;
    double big_m = 0;
    int n_components = 0;
    double c_v = 0;
    bool verified = false;  // rectangle check passed

    /// Throws DomainError if any stored invariant is violated.
    void check_invariants() const;
};

/// Resolution knobs for the (q0, k0) region search.
struct RegionSearch {
    int verify_points = 20;    // per axis, log-spaced over (0, q0] x (0, k0]
    double verify_span = 1e3;  // ratio between the largest and smallest grid value
    int q0_points = 12;        // candidate q0 values below delta' / 2n
    double q0_span = 1e3;
    double k_floor = 1e-6;
    double k_ceiling = 50;
    int k_bisection_steps = 24;
    int verify_retries = 10;  // shrink k0 by 10% on each failed verification
    TMaxOptions tmax;
};

struct RegionPoint {
    double q;
    double k;
    double clipped_t;  // conservative T value where feasible, else 0
};

/// Linear P x P grid over (0, q_max] x (0, k_max], q-major. Points with
/// q k > -pi'(eta / c_v) count as infeasible.
std::vector<RegionPoint> feasibility_region(double delta, double eta, const GameSpec &game,
                                            double q_max, double k_max, int points,
                                            const TMaxOptions &opt = {});

/// sqrt(2) + 1.
double big_k();

/// x0 * c_v where x0 in (0, 1/2) solves h(x0) = delta / 4.
double eta_max(double delta, const GameSpec &game);

/// -2 pi'(eta) / c_v.
double big_m(double eta, const GameSpec &game);

/// LHS - RHS of the c_v-substituted T inequality (h/2 term dropped):
///
///   -1/(r1 q k) max_t log(...) >= pi(eta) - delta/2 + eta/r1,  r1 = -c_v / pi'(eta).
double feasibility_margin(double q, double k, double delta, double eta, const GameSpec &game,
                          const TMaxOptions &opt = {});

bool feasibility_check(double q, double k, double delta, double eta, const GameSpec &game,
                       const TMaxOptions &opt = {});

/// Largest k (to bisection resolution) with feasibility_margin(q0, k) >= 0,
/// capped by q0 k <= -pi'(eta / c_v). Empty when even k_floor fails.
std::optional<double> k_frontier(double q0, double delta, double eta, const GameSpec &game,
                                 const RegionSearch &cfg = {});

/// Checks feasibility at every point of the log-spaced verification grid.
bool verify_rectangle(double q0, double k0, double delta, double eta, const GameSpec &game,
                      const RegionSearch &cfg = {});

struct Q0K0 {
    double q0;
    double k0;
};

/// The two branches of b for a (q0, k0) pair; b is their minimum.
struct BBranches {
    double entropy;
    double concentration;
    double b() const { return entropy < concentration ? entropy : concentration; }
};

BBranches b_branches(double q0, double k0, double delta, double eta, const GameSpec &game);

/// Verified (q0, k0) maximising b * q0, with q0 <= delta / 2n. `delta` is the
/// already-quartered value.
std::optional<Q0K0> find_q0_k0(double delta, double eta, const GameSpec &game,
                               const RegionSearch &cfg = {});

/// Unverified frontier candidates for one (delta, eta): one per feasible q0
/// grid value. Each can later be promoted with verify_constants.
std::vector<EntropyConstants> constant_candidates(double delta, double eta,
                                                  const GameSpec &game,
                                                  const RegionSearch &cfg = {});

/// Runs the rectangle check, shrinking k0 on failure. Returns false if no
/// k0 survives the configured retries.
bool verify_constants(EntropyConstants &c, const GameSpec &game, const RegionSearch &cfg = {});

/// Log-spaced eta values in [eta_max / span, eta_max).
std::vector<double> eta_grid(double eta_max_value, int points, double span = 1e3);

/// Full derivation. When `eta` is empty the eta grid is scanned and the
/// result maximising b * q0 is returned. Throws InfeasibleError when no
/// verified constants exist.
EntropyConstants derive_constants(double delta, const GameSpec &game,
                                  std::optional<double> eta = std::nullopt,
                                  const RegionSearch &cfg = {}, int eta_points = 16);

/// log2(K / epsilon) / b: the required product q * N.
double qn_for_epsilon(const EntropyConstants &c, double epsilon);

/// K 2^{-b q N}.
double smooth_error(const EntropyConstants &c, double q, double n);

/// sqrt(2) 2^{-b' q N} + 2^{-(log e / 2)(delta'/2n - q0)^2 N}, the sum that
/// smooth_error bounds from above.
double combined_error(const EntropyConstants &c, double q, double n);

}  // namespace seedlen

#endif
