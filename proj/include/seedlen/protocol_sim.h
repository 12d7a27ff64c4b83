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

#ifndef SEEDLEN_PROTOCOL_SIM_H
#define SEEDLEN_PROTOCOL_SIM_H

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "seedlen/constants.h"

namespace seedlen {

/// Output tuple of the components; bit i is component i's answer.
using OutputString = std::uint32_t;

/// Decides whether a round is won given the inputs and the outputs.
using WinPredicate = std::function<bool(InputString inputs, OutputString outputs)>;

/// XOR of the outputs equals OR of the inputs. With the input set
/// {000, 100, 010, 001} this caps constant-output strategies at 3/4.
WinPredicate xor_equals_or();

/// A (possibly cheating) device. Strategies see only the round's inputs,
/// never whether the round is a game round.
class DeviceStrategy {
  public:
    virtual ~DeviceStrategy() = default;
    virtual std::string name() const = 0;
    virtual OutputString respond(InputString inputs, std::mt19937_64 &rng) const = 0;
};

/// Wins every round; the first n - 1 outputs are uniform.
std::unique_ptr<DeviceStrategy> honest_strategy(const GameSpec &game, WinPredicate win);

/// Ignores the inputs and always answers `outputs`.
std::unique_ptr<DeviceStrategy> constant_strategy(OutputString outputs);

/// Component i answers table[i][x_i]: a local deterministic classical strategy.
std::unique_ptr<DeviceStrategy> local_deterministic_strategy(std::vector<std::array<int, 2>> table);

/// Loses every round it can lose.
std::unique_ptr<DeviceStrategy> all_fail_strategy(const GameSpec &game, WinPredicate win);

struct SimParams {
    std::int64_t n = 0;
    double eta = 0;
    double q = 0;
    GameSpec game = ghz_game();
    WinPredicate win = xor_equals_or();

    void validate() const;
};

struct RoundRecord {
    bool is_game_round = false;
    InputString input = 0;
    int outcome_bit = 0;
    bool failed = false;
};

struct RunOutcome {
    bool aborted = false;
    std::vector<std::uint8_t> output_bits;  // N bits on success, empty on abort
    std::int64_t failure_count = 0;
    std::int64_t game_rounds = 0;
    double threshold = 0;
    double random_bits_consumed = 0;  // N h(q) + bits_per_input * game rounds
    double random_bits_bound = 0;     // 2 N h(q)
    std::vector<RoundRecord> trace;   // only when requested
};

/// (1 - w_G + eta) q N.
double abort_threshold(std::int64_t n, double q, double eta, const GameSpec &game);

/// The generator for trial `index` under master seed `seed`: mt19937_64
/// seeded from std::seed_seq{seed lo32, seed hi32, index lo32, index hi32}.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index);

RunOutcome run_protocol(const SimParams &params, const DeviceStrategy &strategy,
                        std::uint64_t seed, bool keep_trace = false);

struct TrialSummary {
    std::int64_t trials = 0;
    std::int64_t aborts = 0;
    std::int64_t game_rounds = 0;  // summed over trials
    std::int64_t failures = 0;
    std::int64_t game_rounds_won = 0;
    double abort_rate() const;
    double win_rate() const;
};

/// Runs `trials` independent runs; trial i calls run_protocol with seed
/// trial_rng(seed, i)().
TrialSummary run_trials(const SimParams &params, const DeviceStrategy &strategy,
                        std::int64_t trials, std::uint64_t seed);

double estimate_abort_rate(const SimParams &params, const DeviceStrategy &strategy,
                           std::int64_t trials, std::uint64_t seed);

}  // namespace seedlen

#endif
