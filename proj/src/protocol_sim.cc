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

#include <bit>
#include <cmath>
#include <limits>

#include "seedlen/entropy_math.h"
#include "seedlen/errors.h"

namespace seedlen {

namespace {

void require(bool ok, const char *what) {
    if (!ok) {
        throw DomainError(what);
    }
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased index in [0, n) by rejection.
std::uint64_t uniform_index(std::mt19937_64 &rng, std::uint64_t n) {
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

class Honest final : public DeviceStrategy {
  public:
    Honest(int n, WinPredicate win) : n_(n), win_(std::move(win)) {}
    std::string name() const override { return "honest"; }
    OutputString respond(InputString inputs, std::mt19937_64 &rng) const override {
        OutputString free_bits = n_ == 1 ? 0 : static_cast<OutputString>(rng() & ((OutputString{1} << (n_ - 1)) - 1));
        OutputString last = OutputString{1} << (n_ - 1);
        bool win0 = win_(inputs, free_bits);
        bool win1 = win_(inputs, free_bits | last);
        if (win0 && win1) {
            return (rng() & 1) ? free_bits | last : free_bits;
        }
        return win1 ? free_bits | last : free_bits;
    }

  private:
    int n_;
    WinPredicate win_;
};

class Constant final : public DeviceStrategy {
  public:
    explicit Constant(OutputString out) : out_(out) {}
    std::string name() const override { return "constant"; }
    OutputString respond(InputString, std::mt19937_64 &) const override { return out_; }

  private:
    OutputString out_;
};

class LocalDeterministic final : public DeviceStrategy {
  public:
    explicit LocalDeterministic(std::vector<std::array<int, 2>> table) : table_(std::move(table)) {}
    std::string name() const override { return "local-deterministic"; }
    OutputString respond(InputString inputs, std::mt19937_64 &) const override {
        OutputString out = 0;
        for (std::size_t i = 0; i < table_.size(); ++i) {
            int x = (inputs >> i) & 1;
            out |= static_cast<OutputString>(table_[i][x] & 1) << i;
        }
        return out;
    }

  private:
    std::vector<std::array<int, 2>> table_;
};

class AllFail final : public DeviceStrategy {
  public:
    AllFail(int n, WinPredicate win) : n_(n), win_(std::move(win)) {}
    std::string name() const override { return "all-fail"; }
    OutputString respond(InputString inputs, std::mt19937_64 &) const override {
        OutputString count = n_ >= 32 ? 0 : OutputString{1} << n_;
        for (OutputString out = 0; out < count; ++out) {
            if (!win_(inputs, out)) {
                return out;
            }
        }
        return 0;
    }

  private:
    int n_;
    WinPredicate win_;
};

}  // namespace

WinPredicate xor_equals_or() {
    return [](InputString inputs, OutputString outputs) {
        return (std::popcount(outputs) & 1) == (inputs != 0 ? 1 : 0);
    };
}

std::unique_ptr<DeviceStrategy> honest_strategy(const GameSpec &game, WinPredicate win) {
    return std::make_unique<Honest>(game.n_components, std::move(win));
}

std::unique_ptr<DeviceStrategy> constant_strategy(OutputString outputs) {
    return std::make_unique<Constant>(outputs);
}

std::unique_ptr<DeviceStrategy> local_deterministic_strategy(std::vector<std::array<int, 2>> table) {
    return std::make_unique<LocalDeterministic>(std::move(table));
}

std::unique_ptr<DeviceStrategy> all_fail_strategy(const GameSpec &game, WinPredicate win) {
    return std::make_unique<AllFail>(game.n_components, std::move(win));
}

void SimParams::validate() const {
    game.validate();
    require(n >= 1, "SimParams: N must be positive");
    require(q >= 0 && q < 1, "SimParams: q outside [0, 1)");
    require(eta >= 0 && eta < 0.5, "SimParams: eta outside [0, 1/2)");
    require(static_cast<bool>(win), "SimParams: missing win predicate");
}

double abort_threshold(std::int64_t n, double q, double eta, const GameSpec &game) {
    return (1 - game.w_g + eta) * q * static_cast<double>(n);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

RunOutcome run_protocol(const SimParams &params, const DeviceStrategy &strategy, std::uint64_t seed,
                        bool keep_trace) {
    params.validate();
    std::mt19937_64 rng = trial_rng(seed, 0);
    const auto &inputs = params.game.input_strings;

    RunOutcome out;
    out.threshold = abort_threshold(params.n, params.q, params.eta, params.game);
    out.output_bits.resize(static_cast<std::size_t>(params.n));
    if (keep_trace) {
        out.trace.reserve(static_cast<std::size_t>(params.n));
    }
    for (std::int64_t i = 0; i < params.n; ++i) {
        RoundRecord rec;
        rec.is_game_round = uniform01(rng) < params.q;
        if (rec.is_game_round) {
            rec.input = inputs[uniform_index(rng, inputs.size())];
            bool won = params.win(rec.input, strategy.respond(rec.input, rng));
            rec.failed = !won;
            rec.outcome_bit = won ? 0 : 1;
            ++out.game_rounds;
            out.failure_count += rec.failed;
        } else {
            rec.outcome_bit = static_cast<int>(strategy.respond(0, rng) & 1);
        }
        out.output_bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rec.outcome_bit);
        if (keep_trace) {
            out.trace.push_back(rec);
        }
    }
    out.aborted = static_cast<double>(out.failure_count) > out.threshold;
    if (out.aborted) {
        out.output_bits.clear();
    }
    double h = binary_entropy(params.q);
    auto n = static_cast<double>(params.n);
    out.random_bits_consumed = n * h + params.game.bits_per_game_input * static_cast<double>(out.game_rounds);
    out.random_bits_bound = 2 * n * h;
    return out;
}

double TrialSummary::abort_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(aborts) / static_cast<double>(trials);
}

double TrialSummary::win_rate() const {
    return game_rounds == 0 ? 1.0 : static_cast<double>(game_rounds_won) / static_cast<double>(game_rounds);
}

TrialSummary run_trials(const SimParams &params, const DeviceStrategy &strategy, std::int64_t trials,
                        std::uint64_t seed) {
    require(trials >= 1, "run_trials: need at least one trial");
    TrialSummary s;
    s.trials = trials;
    for (std::int64_t i = 0; i < trials; ++i) {
        // Each trial gets its own stream; run_protocol draws stream 0 of the derived seed.
        std::mt19937_64 derive = trial_rng(seed, static_cast<std::uint64_t>(i));
        RunOutcome r = run_protocol(params, strategy, derive());
        s.aborts += r.aborted;
        s.game_rounds += r.game_rounds;
        s.failures += r.failure_count;
        s.game_rounds_won += r.game_rounds - r.failure_count;
    }
    return s;
}

double estimate_abort_rate(const SimParams &params, const DeviceStrategy &strategy, std::int64_t trials,
                           std::uint64_t seed) {
    return run_trials(params, strategy, trials, seed).abort_rate();
}

}  // namespace seedlen
