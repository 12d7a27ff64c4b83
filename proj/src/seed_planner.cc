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

#include "seedlen/seed_planner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "seedlen/entropy_math.h"
#include "seedlen/errors.h"

namespace seedlen {

namespace {

constexpr std::int64_t kMaxN = std::int64_t{1} << 62;
// Smallest greedy epsilon is 2^-1000, well inside normal doubles.
constexpr double kMaxLogInvEps = 1000;

void require(bool ok, const char *what) {
    if (!ok) {
        throw DomainError(what);
    }
}

bool better(const SeedBreakdown &a, const SeedBreakdown &b) {
    return std::tie(a.total_seed, a.n, a.constants.delta) <
           std::tie(b.total_seed, b.n, b.constants.delta);
}

}  // namespace

const char *to_string(ExtractorMode mode) {
    return mode == ExtractorMode::kWithExtractor ? "with-extractor" : "extractor-free";
}

std::int64_t SeedBreakdown::total_seed_bits() const {
    return static_cast<std::int64_t>(std::ceil(total_seed));
}

std::int64_t SeedBreakdown::output_bits_int() const {
    return static_cast<std::int64_t>(std::floor(output_bits));
}

double game_bits(std::int64_t n, double q) {
    require(n >= 1, "game_bits: N must be positive");
    return 2 * static_cast<double>(n) * binary_entropy(q);
}

std::int64_t min_n(const EntropyConstants &c, double epsilon) {
    double n = std::ceil(qn_for_epsilon(c, epsilon) / c.q0);
    if (n >= static_cast<double>(kMaxN)) {
        throw InfeasibleError("min_n: required N overflows");
    }
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

double output_bits(const EntropyConstants &c, double n) {
    return 0.25 * (1 - c.delta) * n;
}

double seed_total(double epsilon, const EntropyConstants &c, double n, ExtractorMode mode) {
    double qn = std::log2(c.big_k / epsilon) / c.b;
    double total = 2 * n * binary_entropy(qn / n);
    if (mode == ExtractorMode::kWithExtractor) {
        total += design_size_bound(composed_one_bit_seed(n, c.delta, epsilon));
    }
    return total;
}

SeedBreakdown single_iteration(double epsilon, const EntropyConstants &c, std::int64_t n,
                               ExtractorMode mode) {
    require(epsilon > 0 && epsilon < 1, "single_iteration: epsilon outside (0, 1)");
    if (n < min_n(c, epsilon)) {
        throw InfeasibleError("single_iteration: N below the smoothness lower bound");
    }
    SeedBreakdown out;
    out.n = n;
    out.epsilon = epsilon;
    out.qn = qn_for_epsilon(c, epsilon);
    out.q = out.qn / static_cast<double>(n);
    out.mode = mode;
    out.constants = c;
    out.extractor = composed_budget(n, c.delta, epsilon);
    out.game_bits = game_bits(n, out.q);
    out.extractor_bits = mode == ExtractorMode::kWithExtractor ? out.extractor.d_bound : 0.0;
    out.total_seed = out.game_bits + out.extractor_bits;
    out.output_bits = output_bits(c, static_cast<double>(n));
    out.output_eps = 2 * epsilon;
    out.net_gain = out.output_bits - out.total_seed;
    return out;
}

std::optional<std::int64_t> first_n_where(const std::function<bool(std::int64_t)> &pred,
                                          std::int64_t lo, int points_per_decade, int decades) {
    require(lo >= 1 && points_per_decade >= 1 && decades >= 1, "first_n_where: bad grid");
    if (pred(lo)) {
        return lo;
    }
    std::int64_t prev = lo;
    int steps = points_per_decade * decades;
    for (int j = 1; j <= steps; ++j) {
        double x = static_cast<double>(lo) * std::pow(10.0, static_cast<double>(j) / points_per_decade);
        if (x >= static_cast<double>(kMaxN)) {
            break;
        }
        auto cur = static_cast<std::int64_t>(std::ceil(x));
        if (cur <= prev) {
            continue;
        }
        if (pred(cur)) {
            // pred(prev) false, pred(cur) true.
            std::int64_t a = prev;
            std::int64_t b = cur;
            while (b - a > 1) {
                std::int64_t mid = a + (b - a) / 2;
                if (pred(mid)) {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return b;
        }
        prev = cur;
    }
    return std::nullopt;
}

SlopeFit least_squares(std::vector<double> x, std::vector<double> y) {
    require(x.size() == y.size(), "least_squares: size mismatch");
    auto distinct = x;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    require(distinct.size() >= 2, "least_squares: fewer than 2 distinct points");
    double n = static_cast<double>(x.size());
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.x = std::move(x);
    fit.y = std::move(y);
    return fit;
}

std::optional<std::int64_t> n_for_ratio(const EntropyConstants &c, double epsilon, double ratio,
                                        ExtractorMode mode, const SearchConfig &cfg) {
    auto pred = [&](std::int64_t n) {
        auto x = static_cast<double>(n);
        return output_bits(c, x) >= ratio * seed_total(epsilon, c, x, mode);
    };
    return first_n_where(pred, min_n(c, epsilon), cfg.n_points_per_decade, cfg.n_decades);
}

std::optional<std::int64_t> halving_first_n(const EntropyConstants &c, double eps1,
                                            ExtractorMode mode, const SearchConfig &cfg) {
    double eps2 = eps1 / 2;
    // Iteration 2 is assumed to turn seed into output at iteration 1's ratio;
    // iteration 1 must then produce at least iteration 2's seed.
    auto pred = [&](std::int64_t n1) {
        auto x = static_cast<double>(n1);
        double out1 = output_bits(c, x);
        double ratio = out1 / seed_total(eps1, c, x, mode);
        auto n2 = n_for_ratio(c, eps2, ratio, mode, cfg);
        return n2 && out1 >= seed_total(eps2, c, static_cast<double>(*n2), mode);
    };
    return first_n_where(pred, min_n(c, eps1), cfg.n_points_per_decade, cfg.n_decades);
}

SeedPlanner::SeedPlanner(SearchConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.game.validate();
    for (double delta : cfg_.deltas) {
        double em = eta_max(delta, cfg_.game);
        std::vector<double> etas;
        if (cfg_.etas.empty()) {
            etas = eta_grid(em, cfg_.eta_points, cfg_.eta_span);
        } else {
            for (double e : cfg_.etas) {
                if (e > 0 && e <= em) {
                    etas.push_back(e);
                }
            }
        }
        for (double eta : etas) {
            auto cands = constant_candidates(delta, eta, cfg_.game, cfg_.region);
            table_.insert(table_.end(), cands.begin(), cands.end());
        }
    }
    if (table_.empty()) {
        throw InfeasibleError("SeedPlanner: no feasible constants in the search space");
    }
    rejected_.assign(table_.size(), 0);
}

SeedBreakdown SeedPlanner::select(const Scorer &score) const {
    std::vector<Scored> scored;
    for (std::size_t i = 0; i < table_.size(); ++i) {
        EntropyConstants c;
        {
            std::unique_lock lock(mu_);
            if (rejected_[i]) {
                continue;
            }
            c = table_[i];
        }
        if (auto bd = score(c)) {
            scored.push_back({i, std::move(*bd)});
        }
    }
    // Unverified scores are lower bounds: verification can only shrink k0,
    // which lowers b and raises the seed. The first verified minimum wins.
    while (!scored.empty()) {
        auto it = std::min_element(scored.begin(), scored.end(), [](const Scored &a, const Scored &b) {
            return better(a.breakdown, b.breakdown);
        });
        EntropyConstants c;
        {
            std::unique_lock lock(mu_);
            EntropyConstants &entry = table_[it->index];
            if (!rejected_[it->index] && !entry.verified && !verify_constants(entry, cfg_.game, cfg_.region)) {
                rejected_[it->index] = 1;
            }
            if (rejected_[it->index]) {
                scored.erase(it);
                continue;
            }
            c = entry;
        }
        if (c.k0 == it->breakdown.constants.k0) {
            it->breakdown.constants = c;
            return it->breakdown;
        }
        // k0 shrank during verification: rescore and keep competing.
        if (auto bd = score(c)) {
            it->breakdown = std::move(*bd);
        } else {
            scored.erase(it);
        }
    }
    throw InfeasibleError("no verified constants satisfy the target at this resolution");
}

SeedBreakdown SeedPlanner::optimize_single(double epsilon, ExtractorMode mode,
                                           std::optional<double> min_output) const {
    require(epsilon > 0 && epsilon < 1, "optimize_single: epsilon outside (0, 1)");
    return select([&](const EntropyConstants &c) -> std::optional<SeedBreakdown> {
        auto pred = [&](std::int64_t n) {
            auto x = static_cast<double>(n);
            double out = output_bits(c, x);
            return min_output ? out >= *min_output : out >= seed_total(epsilon, c, x, mode);
        };
        auto n = first_n_where(pred, min_n(c, epsilon), cfg_.n_points_per_decade, cfg_.n_decades);
        if (!n) {
            return std::nullopt;
        }
        return single_iteration(epsilon, c, *n, mode);
    });
}

ExpansionPlan SeedPlanner::plan_halving(double eps_total, ExtractorMode mode) const {
    require(eps_total > 0 && eps_total < 1, "plan_halving: eps_total outside (0, 1)");
    require(cfg_.plan_iterations >= 1, "plan_halving: need at least one iteration");
    double eps1 = eps_total / 4;

    SeedBreakdown first = select([&](const EntropyConstants &c) -> std::optional<SeedBreakdown> {
        auto n1 = halving_first_n(c, eps1, mode, cfg_);
        if (!n1) {
            return std::nullopt;
        }
        return single_iteration(eps1, c, *n1, mode);
    });

    const EntropyConstants c = first.constants;
    ExpansionPlan plan;
    plan.scheme = "halving";
    plan.expansion_ratio = first.output_bits / first.total_seed;
    plan.iterations.push_back(std::move(first));
    double eps = eps1;
    for (int i = 1; i < cfg_.plan_iterations; ++i) {
        eps /= 2;
        auto n = n_for_ratio(c, eps, plan.expansion_ratio, mode, cfg_);
        if (!n) {
            throw InfeasibleError("plan_halving: later iteration exceeds the N search range");
        }
        SeedBreakdown next = single_iteration(eps, c, *n, mode);
        if (next.total_seed > plan.iterations.back().output_bits) {
            throw std::logic_error("plan_halving: iteration seed exceeds previous output");
        }
        plan.iterations.push_back(std::move(next));
    }
    for (const auto &it : plan.iterations) {
        plan.eps_schedule.push_back(it.epsilon);
        plan.eps_accumulated += it.output_eps;
    }
    plan.eps_total = 4 * eps1;
    plan.initial_seed = plan.iterations.front().total_seed;
    return plan;
}

SeedBreakdown SeedPlanner::break_even(double eps_total, ExtractorMode mode) const {
    return optimize_single(eps_total, mode);
}

SlopeFit SeedPlanner::fit_slope(const std::vector<double> &eps_list, ExtractorMode mode) const {
    auto distinct = eps_list;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    require(distinct.size() >= 3, "fit_slope: need at least 3 distinct epsilon values");
    std::vector<double> x;
    std::vector<double> y;
    for (double eps : eps_list) {
        x.push_back(std::log2(1 / eps));
        y.push_back(plan_halving(eps, mode).initial_seed);
    }
    return least_squares(std::move(x), std::move(y));
}

ExpansionPlan plan_greedy(const EntropyConstants &c, double eps_first, std::int64_t n_first,
                          int iterations, ExtractorMode mode, const SearchConfig &cfg) {
    require(iterations >= 1, "plan_greedy: need at least one iteration");
    ExpansionPlan plan;
    plan.scheme = "greedy";
    plan.iterations.push_back(single_iteration(eps_first, c, n_first, mode));
    const SeedBreakdown &first = plan.iterations.front();
    plan.expansion_ratio = first.output_bits / first.total_seed;
    if (iterations > 1 && plan.expansion_ratio <= 1) {
        throw InfeasibleError("plan_greedy: first iteration does not expand its seed");
    }

    for (int i = 1; i < iterations; ++i) {
        double budget = plan.iterations.back().output_bits;
        auto affordable = [&](double log_inv_eps) -> std::optional<std::int64_t> {
            double eps = std::exp2(-log_inv_eps);
            auto n = n_for_ratio(c, eps, plan.expansion_ratio, mode, cfg);
            if (n && seed_total(eps, c, static_cast<double>(*n), mode) <= budget) {
                return n;
            }
            return std::nullopt;
        };
        double lo = -std::log2(plan.iterations.back().epsilon);
        if (!affordable(lo)) {
            throw InfeasibleError("plan_greedy: budget too small for the next iteration");
        }
        double step = 1;
        while (lo + step < kMaxLogInvEps && affordable(lo + step)) {
            lo += step;
            step *= 2;
        }
        double hi = std::min(lo + step, kMaxLogInvEps);
        if (affordable(hi)) {
            lo = hi;
        }
        for (int it = 0; it < 60 && hi - lo > 1e-9; ++it) {
            double mid = (lo + hi) / 2;
            (affordable(mid) ? lo : hi) = mid;
        }
        double eps = std::exp2(-lo);
        plan.iterations.push_back(single_iteration(eps, c, *affordable(lo), mode));
    }
    for (const auto &it : plan.iterations) {
        plan.eps_schedule.push_back(it.epsilon);
        plan.eps_accumulated += it.output_eps;
    }
    plan.eps_total = plan.eps_accumulated;
    plan.initial_seed = plan.iterations.front().total_seed;
    return plan;
}

}  // namespace seedlen
