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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seedlen/cli.h"
#include "seedlen/constants.h"
#include "seedlen/entropy_math.h"
#include "seedlen/extractor_budget.h"
#include "seedlen/protocol_sim.h"
#include "seedlen/report.h"
#include "seedlen/seed_planner.h"

using namespace seedlen;

namespace {

int failures = 0;

void line(int id, const char *title, bool ok, const std::string &detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Runs `plan --eps-total <eps>` through the CLI entry point.
report::json cli_plan(const std::string &eps) {
    std::vector<const char *> argv = {"seedlen", "plan", "--eps-total", eps.c_str()};
    std::ostringstream out;
    std::ostringstream err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != kExitOk) {
        return report::json{{"error", err.str()}};
    }
    return report::json::parse(out.str());
}

void criterion_headline() {
    std::string detail;
    bool ok = true;
    for (auto [eps, limit] : {std::pair<std::string, double>{"1e-6", 715000}, {"1e-1", 225000}}) {
        auto t0 = std::chrono::steady_clock::now();
        report::json doc = cli_plan(eps);
        double secs = seconds_since(t0);
        if (!doc.contains("plan")) {
            ok = false;
            detail += "eps " + eps + " failed: " + doc.value("error", std::string()) + "; ";
            continue;
        }
        double seed = doc["plan"]["initial_seed"].get<double>();
        ok = ok && seed <= limit && secs <= 600;
        detail += "eps " + eps + " seed " + fmt("%.0f", seed) + " (limit " + fmt("%.0f", limit) + ", " +
                  fmt("%.1f", secs) + " s); ";
    }
    line(1, "headline seed bounds", ok, detail);
}

void criterion_slopes(const SeedPlanner &planner) {
    std::vector<double> eps;
    for (int e = 1; e <= 11; ++e) {
        eps.push_back(std::pow(10.0, -e));
    }
    SlopeFit with = planner.fit_slope(eps, ExtractorMode::kWithExtractor);
    SlopeFit free = planner.fit_slope(eps, ExtractorMode::kExtractorFree);
    line(2, "slope fit", with.slope >= 28200 && with.slope <= 35100,
         "slope " + fmt("%.1f", with.slope) + " in [28200, 35100]");
    double ratio = with.slope / free.slope;
    bool ok = std::abs(ratio - 1.49) <= 0.15 && std::abs(free.slope - 21380) <= 0.15 * 21380;
    line(3, "extractor share", ok,
         "ratio " + fmt("%.4f", ratio) + " in 1.49 +- 0.15; extractor-free slope " + fmt("%.1f", free.slope) +
             " in 21380 +- 15%");
}

void criterion_region() {
    auto t0 = std::chrono::steady_clock::now();
    auto pts = feasibility_region(0.025, 4.2e-5, ghz_game(), 0.02, 2.0, 100);
    double secs = seconds_since(t0);
    int feasible = 0;
    double q_hi = 0;
    double k_hi = 0;
    for (const auto &p : pts) {
        if (p.clipped_t != 0) {
            ++feasible;
            q_hi = std::max(q_hi, p.q);
            k_hi = std::max(k_hi, p.k);
        }
    }
    bool ok = feasible > 0 && q_hi <= 1e-2 && k_hi <= 1 && secs <= 60;
    line(4, "feasibility region near origin", ok,
         std::to_string(feasible) + " of 10000 points feasible on q in (0, 0.02], k in (0, 2]; max q " +
             fmt("%.4g", q_hi) + " (<= 0.01), max k " + fmt("%.4g", k_hi) + " (<= 1); " + fmt("%.1f", secs) +
             " s");
}

void criterion_identities() {
    double worst = 0;
    auto track = [&](double err) { worst = std::max(worst, err); };
    bool ok = std::abs(pi_fn(0.5) + 1) <= 1e-12;
    for (int i = 0; i < 10000; ++i) {
        double y = 0.5 * i / 9999;
        double h = (y == 0) ? 0 : -y * std::log2(y) - (1 - y) * std::log2(1 - y);
        track(std::abs(pi_fn(y) - (1 - 2 * h)));
    }
    ok = ok && worst <= 1e-12;
    double big_pi_err = 0;
    for (double y : {0.1, 0.25, 0.4}) {
        big_pi_err = std::max(big_pi_err, std::abs(pi_big(1e-9, y) - pi_fn(y)));
    }
    ok = ok && big_pi_err <= 1e-5;
    double fd_err = 0;
    for (int i = 1; i < 1000; ++i) {
        double y = 0.4995 * i / 1000;
        double step = 1e-6 * y;
        double fd = (pi_fn(y + step) - pi_fn(y - step)) / (2 * step);
        fd_err = std::max(fd_err, std::abs(fd / pi_prime(y) - 1));
    }
    ok = ok && fd_err <= 1e-5;
    double e_err = 0;
    for (double v : {0.14, 0.5, 1.0}) {
        for (double eta : {1e-5, 4.2e-5, 1e-3, 0.05}) {
            if (eta / v >= 0.5) {
                continue;
            }
            double limit = -2 * pi_prime(eta / v) / v;
            RateParams p{v, 0, eta, 1e-4, 1e-4};
            e_err = std::max(e_err, std::abs(e_rate(p) / limit - 1));
        }
    }
    ok = ok && e_err <= 1e-12;
    line(5, "function identities", ok,
         "pi(1/2) " + fmt("%.17g", pi_fn(0.5)) + "; |pi - (1 - 2h)| " + fmt("%.2e", worst) + "; |Pi(1e-9,y) - pi| " +
             fmt("%.2e", big_pi_err) + "; pi' rel err " + fmt("%.2e", fd_err) + "; E limit rel err " +
             fmt("%.2e", e_err));
}

void criterion_budget() {
    ExtractorBudget b = composed_budget(1 << 20, 0.0, std::exp2(-10));
    bool ok = std::abs(b.t_bits - 265.68) <= 0.01 && std::abs(b.d_bound - 102220) <= 100;
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> ln(3, 12);
    std::uniform_real_distribution<double> le(-30, -1);
    std::uniform_real_distribution<double> ud(0, 0.99);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        double n = std::floor(std::pow(10.0, ln(rng)));
        double eps = std::pow(10.0, le(rng));
        double delta = ud(rng);
        double k = 0.25 * (1 - delta) * n;
        double substituted = one_bit_seed(n, eps * eps / (9 * k * k));
        worst = std::max(worst, std::abs(composed_one_bit_seed(n, delta, eps) - substituted) / substituted);
    }
    ok = ok && worst <= 1e-12;
    line(6, "extractor budget", ok,
         "t " + fmt("%.4f", b.t_bits) + " (265.68 +- 0.01); d bound " + fmt("%.1f", b.d_bound) +
             " (102220 +- 100); expanded vs substituted t rel err " + fmt("%.2e", worst));
}

void criterion_simulator() {
    GameSpec g = ghz_game();
    auto honest = honest_strategy(g, xor_equals_or());
    auto cheat = constant_strategy(0b111);

    SimParams p;
    p.n = 20000;
    p.q = 0.1;
    p.eta = 0.05;
    TrialSummary hs = run_trials(p, *honest, 1000, 1);
    TrialSummary cs = run_trials(p, *cheat, 1000, 2);
    double mean = static_cast<double>(hs.game_rounds) / 1000;
    double qn = p.q * static_cast<double>(p.n);
    double sigma = std::sqrt(qn * (1 - p.q) / 1000);

    SimParams big = p;
    big.n = 1000000;
    big.q = 0.005;
    big.eta = 4.2e-5;
    auto t0 = std::chrono::steady_clock::now();
    RunOutcome r = run_protocol(big, *honest, 3);
    double secs = seconds_since(t0);

    bool ok = hs.aborts == 0 && cs.abort_rate() >= 0.99 && std::abs(mean - qn) <= 5 * sigma && secs <= 60 &&
              !r.aborted;
    line(7, "simulator", ok,
         "honest abort rate " + fmt("%.3f", hs.abort_rate()) + "; constant-output abort rate " +
             fmt("%.3f", cs.abort_rate()) + " (>= 0.99, win rate " + fmt("%.4f", cs.win_rate()) +
             "); mean game rounds " + fmt("%.2f", mean) + " vs qN " + fmt("%.0f", qn) + " (5 sigma " +
             fmt("%.2f", 5 * sigma) + "); N = 1e6 run " + fmt("%.2f", secs) + " s");
}

void criterion_break_even(const SeedPlanner &planner) {
    bool ok = true;
    std::string detail;
    for (double eps : {1e-3, 1e-6, 1e-9}) {
        double be = planner.break_even(eps).total_seed;
        double plan = planner.plan_halving(eps).initial_seed;
        ok = ok && be <= plan;
        detail += fmt("eps %.0e: ", eps) + fmt("%.0f", be) + " <= " + fmt("%.0f", plan);
        if (eps == 1e-6) {
            double gap = plan - be;
            ok = ok && gap <= 64000 * 1.1;
            detail += fmt(", gap %.0f (<= 70400)", gap);
        }
        detail += "; ";
    }
    line(8, "break-even bound", ok, detail);
}

}  // namespace

int main() {
    criterion_headline();
    SeedPlanner planner;
    criterion_slopes(planner);
    criterion_region();
    criterion_identities();
    criterion_budget();
    criterion_simulator();
    criterion_break_even(planner);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
