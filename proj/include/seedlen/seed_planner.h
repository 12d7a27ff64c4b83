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

#ifndef SEEDLEN_SEED_PLANNER_H
#define SEEDLEN_SEED_PLANNER_H

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "seedlen/constants.h"
#include "seedlen/extractor_budget.h"

namespace seedlen {

enum class ExtractorMode {
    kWithExtractor,
    kExtractorFree,  // extractor_bits := 0 everywhere
};

const char *to_string(ExtractorMode mode);

/// Randomness accounting for one run of the protocol followed by extraction.
struct SeedBreakdown {
    std::int64_t n = 0;
    double q = 0;
    double epsilon = 0;
    double qn = 0;  // log2(K / epsilon) / b
    double game_bits = 0;
    double extractor_bits = 0;
    double total_seed = 0;
    double output_bits = 0;  // (1 - delta) N / 4
    double output_eps = 0;   // 2 epsilon
    double net_gain = 0;     // output_bits - total_seed
    ExtractorMode mode = ExtractorMode::kWithExtractor;
    EntropyConstants constants;
    ExtractorBudget extractor;

    std::int64_t total_seed_bits() const;
    std::int64_t output_bits_int() const;
};

struct ExpansionPlan {
    std::string scheme;  // "halving" or "greedy"
    std::vector<SeedBreakdown> iterations;
    std::vector<double> eps_schedule;
    double eps_total = 0;        // certified bound (halving) or the empirical sum (greedy)
    double eps_accumulated = 0;  // sum of per-iteration output errors
    double initial_seed = 0;
    double expansion_ratio = 0;  // output / seed of the first iteration
};

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    std::vector<double> x;  // log2(1 / eps)
    std::vector<double> y;  // initial seed
};

/// Search space for the optimiser. Defaults reach the regime (delta near
/// 0.9) where seeds are smallest; every knob can be narrowed for tests.
struct SearchConfig {
    std::vector<double> deltas = {0.95, 0.9, 0.85, 0.8, 0.7, 0.6, 0.5,
                                  0.4,  0.2, 0.1,  0.05, 0.025, 0.0125};
    std::vector<double> etas;  // when non-empty, used instead of the eta grid
    int eta_points = 16;
    double eta_span = 1e3;
    RegionSearch region;
    int n_points_per_decade = 8;
    int n_decades = 12;
    int plan_iterations = 4;
    GameSpec game = ghz_game();
};

/// 2 N h(q).
double game_bits(std::int64_t n, double q);

/// Smallest N keeping q = qN / N at or below q0.
std::int64_t min_n(const EntropyConstants &c, double epsilon);

/// Accounting for a given N. Throws InfeasibleError when N is below min_n.
SeedBreakdown single_iteration(double epsilon, const EntropyConstants &c, std::int64_t n,
                               ExtractorMode mode = ExtractorMode::kWithExtractor);

/// Seed total only; the hot path of every search.
double seed_total(double epsilon, const EntropyConstants &c, double n, ExtractorMode mode);

/// (1 - delta) N / 4.
double output_bits(const EntropyConstants &c, double n);

/// First integer N in [lo, cap] with pred(N) true: a log-spaced scan
/// (points_per_decade over `decades`) followed by integer bisection inside
/// the first bracketing interval. Empty if the scan never succeeds.
std::optional<std::int64_t> first_n_where(const std::function<bool(std::int64_t)> &pred,
                                          std::int64_t lo, int points_per_decade, int decades);

/// Least-squares line through (x, y).
SlopeFit least_squares(std::vector<double> x, std::vector<double> y);

/// Owns the table of candidate constants and answers planning queries
/// against it. Candidates are derived once at construction; the rectangle
/// verification runs lazily, only for candidates that win a selection.
/// Safe to share between threads.
class SeedPlanner {
  public:
    explicit SeedPlanner(SearchConfig cfg = {});

    const SearchConfig &config() const { return cfg_; }
    std::size_t candidate_count() const { return table_.size(); }

    /// Minimal total seed at this epsilon with net_gain >= 0, or with
    /// output_bits >= min_output when given.
    SeedBreakdown optimize_single(double epsilon,
                                  ExtractorMode mode = ExtractorMode::kWithExtractor,
                                  std::optional<double> min_output = std::nullopt) const;

    /// Halving scheme: eps_1 = eps_total / 4, eps_{i+1} = eps_i / 2.
    ExpansionPlan plan_halving(double eps_total,
                               ExtractorMode mode = ExtractorMode::kWithExtractor) const;

    /// Lower bound on any plan with total error eps_total: one iteration at
    /// epsilon = eps_total (four times the halving plan's first epsilon) that
    /// exactly returns its seed.
    SeedBreakdown break_even(double eps_total,
                             ExtractorMode mode = ExtractorMode::kWithExtractor) const;

    /// Initial seed of plan_halving against log2(1 / eps_total).
    SlopeFit fit_slope(const std::vector<double> &eps_list, ExtractorMode mode) const;

  private:
    struct Scored {
        std::size_t index;
        SeedBreakdown breakdown;
    };

    using Scorer = std::function<std::optional<SeedBreakdown>(const EntropyConstants &)>;

    // Best verified candidate under `score` (ties: seed, then N, then delta).
    SeedBreakdown select(const Scorer &score) const;

    SearchConfig cfg_;
    mutable std::mutex mu_;
    mutable std::vector<EntropyConstants> table_;
    mutable std::vector<char> rejected_;
};

/// Greedy scheme: every iteration spends the previous output as seed and
/// picks the smallest epsilon it can afford while keeping the first
/// iteration's output:seed ratio. The error sum is reported, not certified.
ExpansionPlan plan_greedy(const EntropyConstants &c, double eps_first, std::int64_t n_first,
                          int iterations, ExtractorMode mode = ExtractorMode::kWithExtractor,
                          const SearchConfig &cfg = {});

/// First N >= min_n with output / seed >= ratio, at this epsilon.
std::optional<std::int64_t> n_for_ratio(const EntropyConstants &c, double epsilon, double ratio,
                                        ExtractorMode mode, const SearchConfig &cfg);

/// Iteration-1 size under the halving estimate for one candidate.
std::optional<std::int64_t> halving_first_n(const EntropyConstants &c, double eps1,
                                            ExtractorMode mode, const SearchConfig &cfg);

}  // namespace seedlen

#endif
