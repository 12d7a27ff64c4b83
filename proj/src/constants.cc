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

#include "seedlen/constants.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "seedlen/errors.h"

namespace seedlen {

namespace {

constexpr double kLog2E = std::numbers::log2e;

void require(bool ok, const char *what) {
    if (!ok) {
        throw DomainError(what);
    }
}

// values[i] = top * span^{-(points-1-i)/(points-1)}, ascending, ending at top.
std::vector<double> log_grid_to(double top, double span, int points) {
    std::vector<double> out;
    out.reserve(points);
    for (int i = 0; i < points; ++i) {
        double frac = points == 1 ? 0.0 : static_cast<double>(points - 1 - i) / (points - 1);
        out.push_back(top * std::pow(span, -frac));
    }
    return out;
}

// Frontier candidates for an already-quartered delta.
std::vector<Q0K0> frontier(double delta_inner, double eta, const GameSpec &game,
                           const RegionSearch &cfg) {
    double cap = delta_inner / (2.0 * game.n_components);
    std::vector<Q0K0> out;
    for (int i = cfg.q0_points; i >= 1; --i) {
        double q0 = cap * std::pow(cfg.q0_span, -static_cast<double>(i) / cfg.q0_points);
        if (auto k0 = k_frontier(q0, delta_inner, eta, game, cfg)) {
            out.push_back({q0, *k0});
        }
    }
    return out;
}

}  // namespace

void GameSpec::validate() const {
    require(n_components >= 1 && n_components <= 32, "GameSpec: n_components out of range");
    require(c_v > 0 && c_v <= 1, "GameSpec: c_v must lie in (0, 1]");
    require(f_g >= 0 && f_g < 1, "GameSpec: f_G must lie in [0, 1)");
    require(std::abs(w_g - (1 - f_g)) < 1e-15, "GameSpec: w_G must equal 1 - f_G");
    require(!input_strings.empty(), "GameSpec: empty input set");
    auto width = static_cast<int>(std::bit_width(input_strings.size() - 1));
    require(bits_per_game_input == std::max(width, 1),
            "GameSpec: bits_per_game_input must be ceil(log2 |inputs|)");
    for (InputString s : input_strings) {
        require(n_components == 32 || s < (InputString{1} << n_components),
                "GameSpec: input string wider than n_components");
    }
}

GameSpec ghz_game() {
    // Bit i is component i's input: 000, 100, 010, 001.
    return GameSpec{
        .name = "GHZ",
        .n_components = 3,
        .c_v = 0.14,
        .f_g = 0,
        .w_g = 1,
        .input_strings = {0b000, 0b001, 0b010, 0b100},
        .bits_per_game_input = 2,
    };
}

void EntropyConstants::check_invariants() const {
    require(delta > 0 && delta < 1, "EntropyConstants: delta outside (0, 1)");
    require(std::abs(delta_inner - delta / 4) <= 1e-15 * delta, "EntropyConstants: delta' != delta/4");
    require(eta > 0 && eta <= eta_max, "EntropyConstants: eta outside (0, eta_max]");
    require(q0 > 0 && q0 < 1, "EntropyConstants: q0 outside (0, 1)");
    require(k0 > 0, "EntropyConstants: k0 must be positive");
    require(q0 * k0 <= -pi_prime(eta / c_v) * (1 + 1e-12), "EntropyConstants: q0 k0 bound violated");
    require(q0 <= delta_inner / (2.0 * n_components), "EntropyConstants: q0 > delta'/2n");
    require(b > 0 && b == std::min(b_entropy, b_concentration), "EntropyConstants: b is not the branch minimum");
    require(big_k == seedlen::big_k(), "EntropyConstants: K != sqrt(2) + 1");
    require(big_m > 0, "EntropyConstants: M must be positive");
}

double big_k() {
    return std::numbers::sqrt2 + 1;
}

double eta_max(double delta, const GameSpec &game) {
    require(delta > 0 && delta < 1, "eta_max: delta outside (0, 1)");
    double target = delta / 4;
    double lo = 0;
    double hi = 0.5;
    while (hi - lo > 1e-10 * lo || lo == 0) {
        double mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) {
            break;
        }
        if (binary_entropy(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo * game.c_v;
}

double big_m(double eta, const GameSpec &game) {
    require(eta > 0 && eta <= 0.5, "big_m: eta outside (0, 1/2]");
    return -2 * pi_prime(eta) / game.c_v;
}

double feasibility_margin(double q, double k, double delta, double eta, const GameSpec &game,
                          const TMaxOptions &opt) {
    require(q > 0 && q < 1, "feasibility_check: q outside (0, 1)");
    require(k > 0, "feasibility_check: k must be positive");
    require(delta > 0 && delta < 1, "feasibility_check: delta outside (0, 1)");
    require(eta > 0 && eta / game.c_v < 0.5, "feasibility_check: eta / c_v outside (0, 1/2)");
    require(q * k <= -pi_prime(eta / game.c_v), "feasibility_check: q k exceeds -pi'(eta / c_v)");
    double r1 = -game.c_v / pi_prime(eta);
    double lhs = -max_rate_objective(q, k, r1, game.c_v, 0.0, opt) / (r1 * q * k);
    double rhs = pi_fn(eta) - delta / 2 + eta / r1;
    return lhs - rhs;
}

bool feasibility_check(double q, double k, double delta, double eta, const GameSpec &game,
                       const TMaxOptions &opt) {
    return feasibility_margin(q, k, delta, eta, game, opt) >= 0;
}

std::optional<double> k_frontier(double q0, double delta, double eta, const GameSpec &game,
                                 const RegionSearch &cfg) {
    double k_hi = std::min(cfg.k_ceiling, -pi_prime(eta / game.c_v) / q0);
    double k_lo = cfg.k_floor;
    if (k_lo > k_hi || feasibility_margin(q0, k_lo, delta, eta, game, cfg.tmax) < 0) {
        return std::nullopt;
    }
    if (feasibility_margin(q0, k_hi, delta, eta, game, cfg.tmax) >= 0) {
        return k_hi;
    }
    for (int i = 0; i < cfg.k_bisection_steps; ++i) {
        double mid = std::sqrt(k_lo * k_hi);
        if (feasibility_margin(q0, mid, delta, eta, game, cfg.tmax) >= 0) {
            k_lo = mid;
        } else {
            k_hi = mid;
        }
    }
    return k_lo;
}

bool verify_rectangle(double q0, double k0, double delta, double eta, const GameSpec &game,
                      const RegionSearch &cfg) {
    auto qs = log_grid_to(q0, cfg.verify_span, cfg.verify_points);
    auto ks = log_grid_to(k0, cfg.verify_span, cfg.verify_points);
    // Far corner first: it is where failures show up in practice.
    if (!feasibility_check(q0, k0, delta, eta, game, cfg.tmax)) {
        return false;
    }
    for (double q : qs) {
        for (double k : ks) {
            if (!feasibility_check(q, k, delta, eta, game, cfg.tmax)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<RegionPoint> feasibility_region(double delta, double eta, const GameSpec &game,
                                            double q_max, double k_max, int points,
                                            const TMaxOptions &opt) {
    require(q_max > 0 && q_max < 1 && k_max > 0 && points >= 1, "feasibility_region: bad grid");
    double qk_cap = -pi_prime(eta / game.c_v);
    std::vector<RegionPoint> out;
    out.reserve(static_cast<std::size_t>(points) * points);
    for (int i = 1; i <= points; ++i) {
        double q = q_max * i / points;
        for (int j = 1; j <= points; ++j) {
            double k = k_max * j / points;
            RegionPoint p{q, k, 0.0};
            if (q * k <= qk_cap) {
                double m = feasibility_margin(q, k, delta, eta, game, opt);
                if (m >= 0) {
                    // margin = (T_c + eta/r1) - (pi(eta) - delta/2 + eta/r1)
                    p.clipped_t = m + pi_fn(eta) - delta / 2;
                }
            }
            out.push_back(p);
        }
    }
    return out;
}

BBranches b_branches(double q0, double k0, double delta, double eta, const GameSpec &game) {
    double gap = delta / (2.0 * game.n_components) - q0;
    return BBranches{
        .entropy = k0 * delta * game.c_v / (-4 * pi_prime(eta)),
        .concentration = kLog2E / 2 * gap * gap / q0,
    };
}

std::optional<Q0K0> find_q0_k0(double delta, double eta, const GameSpec &game,
                               const RegionSearch &cfg) {
    auto cands = frontier(delta, eta, game, cfg);
    auto score = [&](const Q0K0 &p) { return b_branches(p.q0, p.k0, delta, eta, game).b() * p.q0; };
    std::stable_sort(cands.begin(), cands.end(),
                     [&](const Q0K0 &a, const Q0K0 &b) { return score(a) > score(b); });
    for (Q0K0 p : cands) {
        for (int attempt = 0; attempt <= cfg.verify_retries; ++attempt) {
            if (verify_rectangle(p.q0, p.k0, delta, eta, game, cfg)) {
                return p;
            }
            p.k0 *= 0.9;
        }
    }
    return std::nullopt;
}

namespace {

EntropyConstants assemble(double delta, double eta, double eta_max_value, Q0K0 p,
                          const GameSpec &game) {
    double inner = delta / 4;
    BBranches br = b_branches(p.q0, p.k0, inner, eta, game);
    return EntropyConstants{
        .delta = delta,
        .delta_inner = inner,
        .eta = eta,
        .eta_max = eta_max_value,
        .q0 = p.q0,
        .k0 = p.k0,
        .b = br.b(),
        .b_entropy = br.entropy,
        .b_concentration = br.concentration,
        .big_k = big_k(),
        .big_m = big_m(eta, game),
        .n_components = game.n_components,
        .c_v = game.c_v,
    };
}

}  // namespace

std::vector<EntropyConstants> constant_candidates(double delta, double eta, const GameSpec &game,
                                                  const RegionSearch &cfg) {
    double em = eta_max(delta, game);
    require(eta > 0 && eta <= em, "constant_candidates: eta outside (0, eta_max]");
    std::vector<EntropyConstants> out;
    for (Q0K0 p : frontier(delta / 4, eta, game, cfg)) {
        out.push_back(assemble(delta, eta, em, p, game));
    }
    return out;
}

bool verify_constants(EntropyConstants &c, const GameSpec &game, const RegionSearch &cfg) {
    if (c.verified) {
        return true;
    }
    for (int attempt = 0; attempt <= cfg.verify_retries; ++attempt) {
        if (verify_rectangle(c.q0, c.k0, c.delta_inner, c.eta, game, cfg)) {
            c = assemble(c.delta, c.eta, c.eta_max, {c.q0, c.k0}, game);
            c.verified = true;
            return true;
        }
        c.k0 *= 0.9;
    }
    return false;
}

std::vector<double> eta_grid(double eta_max_value, int points, double span) {
    std::vector<double> out;
    out.reserve(points);
    for (int i = 0; i < points; ++i) {
        out.push_back(eta_max_value * std::pow(span, -1.0 + static_cast<double>(i) / points));
    }
    return out;
}

EntropyConstants derive_constants(double delta, const GameSpec &game, std::optional<double> eta,
                                  const RegionSearch &cfg, int eta_points) {
    game.validate();
    double em = eta_max(delta, game);
    std::vector<double> etas = eta ? std::vector<double>{*eta} : eta_grid(em, eta_points);
    std::optional<EntropyConstants> best;
    for (double e : etas) {
        if (auto p = find_q0_k0(delta / 4, e, game, cfg)) {
            EntropyConstants c = assemble(delta, e, em, *p, game);
            c.verified = true;
            if (!best || c.b * c.q0 > best->b * best->q0) {
                best = c;
            }
        }
    }
    if (!best) {
        throw InfeasibleError("derive_constants: no feasible (q0, k0) at this resolution");
    }
    best->check_invariants();
    return *best;
}

double qn_for_epsilon(const EntropyConstants &c, double epsilon) {
    require(epsilon > 0, "qn_for_epsilon: epsilon must be positive");
    if (epsilon >= c.big_k) {
        throw DomainError("qn_for_epsilon: epsilon >= K is a trivial target");
    }
    return std::log2(c.big_k / epsilon) / c.b;
}

double smooth_error(const EntropyConstants &c, double q, double n) {
    return c.big_k * std::exp2(-c.b * q * n);
}

double combined_error(const EntropyConstants &c, double q, double n) {
    double gap = c.delta_inner / (2.0 * c.n_components) - c.q0;
    return std::numbers::sqrt2 * std::exp2(-c.b_entropy * q * n) +
           std::exp2(-kLog2E / 2 * gap * gap * n);
}

}  // namespace seedlen
