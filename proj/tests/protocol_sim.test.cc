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

#include "seedlen/protocol_sim.h"

#include <chrono>
#include <cmath>

#include "gtest/gtest.h"
#include "seedlen/errors.h"

using namespace seedlen;

namespace {

SimParams params(std::int64_t n, double q, double eta) {
    SimParams p;
    p.n = n;
    p.q = q;
    p.eta = eta;
    return p;
}

}  // namespace

TEST(protocol_sim, win_predicate_table) {
    WinPredicate win = xor_equals_or();
    EXPECT_TRUE(win(0b000, 0b000));
    EXPECT_FALSE(win(0b000, 0b001));
    EXPECT_TRUE(win(0b001, 0b111));
    EXPECT_FALSE(win(0b100, 0b110));
}

TEST(protocol_sim, abort_threshold_examples) {
    GameSpec g = ghz_game();
    EXPECT_NEAR(abort_threshold(1000, 0.1, 0.01, g), 1, 1e-12);
    EXPECT_EQ(abort_threshold(1000, 0.1, 0, g), 0.0);
    EXPECT_NEAR(abort_threshold(1000000, 0.01, 4.2e-5, g), 4.2e-5 * 10000, 1e-9);
}

TEST(protocol_sim, honest_never_aborts) {
    auto honest = honest_strategy(ghz_game(), xor_equals_or());
    TrialSummary s = run_trials(params(2000, 0.2, 0.0), *honest, 1000, 1);
    EXPECT_EQ(s.aborts, 0);
    EXPECT_EQ(s.failures, 0);
    EXPECT_EQ(s.win_rate(), 1.0);
    EXPECT_EQ(estimate_abort_rate(params(500, 0.5, 0.01), *honest, 100, 2), 0.0);
}

TEST(protocol_sim, constant_strategy_aborts) {
    // XOR of 0b111 is 1, which wins on the three nonzero inputs only.
    auto cheat = constant_strategy(0b111);
    SimParams p = params(20000, 0.1, 0.05);
    TrialSummary s = run_trials(p, *cheat, 1000, 42);
    EXPECT_GE(s.abort_rate(), 0.99);
    EXPECT_LE(s.win_rate(), 0.75 + 0.01);
    EXPECT_NEAR(s.win_rate(), 0.75, 0.01);
}

TEST(protocol_sim, all_fail_always_aborts) {
    auto fail = all_fail_strategy(ghz_game(), xor_equals_or());
    EXPECT_EQ(estimate_abort_rate(params(1000, 0.01, 0.2), *fail, 100, 5), 1.0);
}

TEST(protocol_sim, game_round_count_within_five_sigma) {
    auto honest = honest_strategy(ghz_game(), xor_equals_or());
    std::int64_t n = 10000;
    double q = 0.05;
    int trials = 1000;
    TrialSummary s = run_trials(params(n, q, 0.01), *honest, trials, 77);
    double mean = double(s.game_rounds) / trials;
    double sigma = std::sqrt(double(n) * q * (1 - q) / trials);
    EXPECT_LE(std::abs(mean - q * double(n)), 5 * sigma);
}

TEST(protocol_sim, trace_and_abort_are_consistent) {
    auto cheat = local_deterministic_strategy({{{0, 1}}, {{0, 0}}, {{1, 1}}});
    RunOutcome r = run_protocol(params(5000, 0.3, 0.1), *cheat, 9, true);
    ASSERT_EQ(r.trace.size(), 5000u);
    std::int64_t games = 0;
    std::int64_t fails = 0;
    for (const auto &rec : r.trace) {
        games += rec.is_game_round;
        fails += rec.failed;
        if (!rec.is_game_round) {
            EXPECT_FALSE(rec.failed);
        }
    }
    EXPECT_EQ(games, r.game_rounds);
    EXPECT_EQ(fails, r.failure_count);
    EXPECT_EQ(r.aborted, double(r.failure_count) > abort_threshold(5000, 0.3, 0.1, ghz_game()));
    EXPECT_EQ(r.output_bits.empty(), r.aborted);
}

TEST(protocol_sim, honest_generation_bits_are_balanced) {
    auto honest = honest_strategy(ghz_game(), xor_equals_or());
    std::int64_t n = 200000;
    RunOutcome r = run_protocol(params(n, 0.01, 0.01), *honest, 123);
    ASSERT_FALSE(r.aborted);
    ASSERT_EQ(r.output_bits.size(), std::size_t(n));
    double ones = 0;
    double gen = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        ones += r.output_bits[i];
    }
    gen = double(n);
    EXPECT_LE(std::abs(ones / gen - 0.5), 5 * 0.5 / std::sqrt(gen));
}

TEST(protocol_sim, q_zero_never_aborts) {
    auto fail = all_fail_strategy(ghz_game(), xor_equals_or());
    RunOutcome r = run_protocol(params(1000, 0, 0), *fail, 4, true);
    EXPECT_FALSE(r.aborted);
    EXPECT_EQ(r.game_rounds, 0);
    EXPECT_EQ(r.output_bits.size(), 1000u);
    EXPECT_EQ(r.random_bits_consumed, 0.0);
}

TEST(protocol_sim, reproducible) {
    auto cheat = constant_strategy(0b001);
    SimParams p = params(3000, 0.05, 0.05);
    RunOutcome a = run_protocol(p, *cheat, 31, true);
    RunOutcome b = run_protocol(p, *cheat, 31, true);
    EXPECT_EQ(a.failure_count, b.failure_count);
    EXPECT_EQ(a.game_rounds, b.game_rounds);
    EXPECT_EQ(a.output_bits, b.output_bits);
    EXPECT_EQ(estimate_abort_rate(p, *cheat, 50, 8), estimate_abort_rate(p, *cheat, 50, 8));
    RunOutcome c = run_protocol(p, *cheat, 32);
    EXPECT_NE(a.game_rounds * 100000 + a.failure_count, c.game_rounds * 100000 + c.failure_count);
}

TEST(protocol_sim, input_randomness_within_bound) {
    auto honest = honest_strategy(ghz_game(), xor_equals_or());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RunOutcome r = run_protocol(params(100000, 0.001, 0.01), *honest, seed);
        EXPECT_GT(r.random_bits_consumed, 0);
        EXPECT_LE(r.random_bits_consumed, r.random_bits_bound * 1.2);
    }
}

// The default predicate over inputs {000, 100, 010, 001} admits a local strategy that
// always wins: each party outputs its own input bit.
TEST(protocol_sim, local_deterministic_strategy_on_default_inputs) {
    auto copy_input = local_deterministic_strategy({{{0, 1}}, {{0, 1}}, {{0, 1}}});
    TrialSummary s = run_trials(params(5000, 0.2, 0.0), *copy_input, 50, 3);
    EXPECT_EQ(s.win_rate(), 1.0);
    EXPECT_EQ(s.aborts, 0);

    auto constant = constant_strategy(0b001);
    TrialSummary c = run_trials(params(5000, 0.2, 0.0), *constant, 50, 3);
    EXPECT_NEAR(c.win_rate(), 0.75, 0.02);
}

TEST(protocol_sim, million_round_run_is_fast) {
    auto honest = honest_strategy(ghz_game(), xor_equals_or());
    auto start = std::chrono::steady_clock::now();
    RunOutcome r = run_protocol(params(2000000, 0.005, 4.2e-5), *honest, 1);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_FALSE(r.aborted);
    EXPECT_LT(secs, 60);
}

TEST(protocol_sim, validation) {
    auto honest = honest_strategy(ghz_game(), xor_equals_or());
    EXPECT_THROW(run_protocol(params(0, 0.1, 0.1), *honest, 1), DomainError);
    EXPECT_THROW(run_protocol(params(10, 1.0, 0.1), *honest, 1), DomainError);
    EXPECT_THROW(run_protocol(params(10, 0.1, 0.5), *honest, 1), DomainError);
    EXPECT_THROW(run_trials(params(10, 0.1, 0.1), *honest, 0, 1), DomainError);
}
