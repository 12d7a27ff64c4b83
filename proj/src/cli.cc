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

#include "seedlen/cli.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seedlen/constants.h"
#include "seedlen/errors.h"
#include "seedlen/protocol_sim.h"
#include "seedlen/report.h"
#include "seedlen/seed_planner.h"

namespace seedlen {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 673512.3 -> "673,513" (rounded up, as seeds are).
std::string grouped(double bits) {
    auto s = std::to_string(static_cast<long long>(std::ceil(bits)));
    for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) {
        s.insert(static_cast<std::size_t>(i), ",");
    }
    return s;
}

std::string sci(double x) {
    std::ostringstream o;
    o << x;
    return o.str();
}

struct Options {
    std::optional<double> epsilon;
    std::optional<double> eps_total;
    std::optional<double> delta;
    std::optional<double> eta;
    std::optional<std::int64_t> n;
    std::string output;
    std::string mode = "with";
    std::string scheme = "halving";
    int iterations = 4;
    std::string eps_range = "1e-1:1e-11";
    std::vector<double> eps_list;
    std::vector<double> deltas;
    int eta_points = 16;
    int verify_points = 20;
    int q0_points = 12;
    int t_grid = 1025;
    double q_max = 0.02;
    double k_max = 2.0;
    int points = 100;
    double q = 0;
    std::string strategy = "honest";
    unsigned constant_outputs = 0;
    std::uint64_t seed = 0;
    std::int64_t trials = 0;
    std::string trace;
    bool compare = false;
};

SearchConfig search_config(const Options &o) {
    SearchConfig cfg;
    if (!o.deltas.empty()) {
        cfg.deltas = o.deltas;
    }
    if (o.eta) {
        cfg.etas = {*o.eta};
    }
    cfg.eta_points = o.eta_points;
    cfg.region.verify_points = o.verify_points;
    cfg.region.q0_points = o.q0_points;
    cfg.region.tmax.grid_points = o.t_grid;
    cfg.plan_iterations = o.iterations;
    return cfg;
}

ExtractorMode parse_mode(const std::string &m) {
    return m == "free" ? ExtractorMode::kExtractorFree : ExtractorMode::kWithExtractor;
}

std::vector<double> eps_values(const Options &o) {
    if (!o.eps_list.empty()) {
        return o.eps_list;
    }
    auto colon = o.eps_range.find(':');
    if (colon == std::string::npos) {
        throw DomainError("--eps-range must look like 1e-1:1e-11");
    }
    double hi = std::stod(o.eps_range.substr(0, colon));
    double lo = std::stod(o.eps_range.substr(colon + 1));
    if (!(hi > 0 && hi < 1 && lo > 0 && lo <= hi)) {
        throw DomainError("--eps-range bounds must satisfy 0 < lo <= hi < 1");
    }
    std::vector<double> out;
    int decades = static_cast<int>(std::lround(std::log10(hi / lo)));
    for (int i = 0; i <= decades; ++i) {
        out.push_back(hi * std::pow(10.0, -i));
    }
    return out;
}

struct Artifact {
    std::string text;
    std::string extension;
};

// Writes the artifact and returns the stream the summary belongs on.
std::ostream &emit(const std::string &command, const Artifact &a, const std::string &path_opt,
                   std::ostream &out, std::ostream &err) {
    std::filesystem::path path = path_opt;
    if (path.empty()) {
        if (const char *dir = std::getenv("SEEDLEN_OUTPUT_DIR"); dir && *dir) {
            path = std::filesystem::path(dir) / (command + "." + a.extension);
        }
    }
    if (path.empty()) {
        out << a.text;
        return err;
    }
    std::ofstream f(path, std::ios::binary);
    f << a.text;
    f.close();
    if (!f) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

std::string dump(const report::json &doc) {
    report::validate_document(doc);
    return doc.dump(2) + "\n";
}

EntropyConstants constants_for(const Options &o, const SearchConfig &cfg) {
    return derive_constants(*o.delta, cfg.game, o.eta, cfg.region, cfg.eta_points);
}

int dispatch(const std::string &command, const Options &o, std::ostream &out, std::ostream &err) {
    SearchConfig cfg = search_config(o);
    ExtractorMode mode = parse_mode(o.mode);

    if (command == "constants") {
        EntropyConstants c = constants_for(o, cfg);
        auto &s = emit(command, {dump(report::constants_document(c)), "json"}, o.output, out, err);
        s << "b = " << sci(c.b) << ", q0 = " << sci(c.q0) << ", k0 = " << sci(c.k0) << " for delta = "
          << sci(c.delta) << ", eta = " << sci(c.eta) << "\n";
        return kExitOk;
    }
    if (command == "single") {
        SeedBreakdown bd;
        if (o.delta) {
            EntropyConstants c = constants_for(o, cfg);
            std::int64_t n = 0;
            if (o.n) {
                n = *o.n;
            } else {
                auto pred = [&](std::int64_t x) {
                    return output_bits(c, double(x)) >= seed_total(*o.epsilon, c, double(x), mode);
                };
                auto found = first_n_where(pred, min_n(c, *o.epsilon), cfg.n_points_per_decade, cfg.n_decades);
                if (!found) {
                    throw InfeasibleError("single: no N with non-negative net gain in range");
                }
                n = *found;
            }
            bd = single_iteration(*o.epsilon, c, n, mode);
        } else {
            bd = SeedPlanner(cfg).optimize_single(*o.epsilon, mode);
        }
        auto &s = emit(command, {dump(report::single_document(bd)), "json"}, o.output, out, err);
        s << "seed <= " << grouped(bd.total_seed) << " bits for epsilon = " << sci(bd.epsilon) << " (N = " << bd.n
          << ", net gain " << static_cast<long long>(std::floor(bd.net_gain)) << ")\n";
        return kExitOk;
    }
    if (command == "plan") {
        ExpansionPlan plan;
        if (o.scheme == "greedy") {
            SeedPlanner planner(cfg);
            double eps_first = o.epsilon ? *o.epsilon : *o.eps_total / 4;
            SeedBreakdown be = planner.optimize_single(eps_first, mode);
            std::int64_t n_first = o.n ? *o.n : 2 * be.n;
            plan = plan_greedy(be.constants, eps_first, n_first, o.iterations, mode, cfg);
        } else {
            plan = SeedPlanner(cfg).plan_halving(*o.eps_total, mode);
        }
        auto &s = emit(command, {dump(report::plan_document(plan)), "json"}, o.output, out, err);
        s << "seed <= " << grouped(plan.initial_seed) << " bits for epsilon_total = " << sci(plan.eps_total)
          << " (" << plan.scheme << ", " << plan.iterations.size() << " iterations)\n";
        return kExitOk;
    }
    if (command == "break-even") {
        SeedPlanner planner(cfg);
        SeedBreakdown be = planner.break_even(*o.eps_total, mode);
        std::optional<ExpansionPlan> plan;
        if (o.compare) {
            plan = planner.plan_halving(*o.eps_total, mode);
        }
        auto doc = report::break_even_document(*o.eps_total, be, plan ? &*plan : nullptr);
        auto &s = emit(command, {dump(doc), "json"}, o.output, out, err);
        s << "break-even seed " << grouped(be.total_seed) << " bits for epsilon_total = " << sci(*o.eps_total);
        if (plan) {
            s << " (halving plan " << grouped(plan->initial_seed) << ", gap "
              << grouped(plan->initial_seed - be.total_seed) << ")";
        }
        s << "\n";
        return kExitOk;
    }
    if (command == "slope") {
        SeedPlanner planner(cfg);
        auto eps = eps_values(o);
        std::optional<SlopeFit> with;
        std::optional<SlopeFit> free;
        if (o.mode == "with" || o.mode == "both") {
            with = planner.fit_slope(eps, ExtractorMode::kWithExtractor);
        }
        if (o.mode == "free" || o.mode == "both") {
            free = planner.fit_slope(eps, ExtractorMode::kExtractorFree);
        }
        const SlopeFit *pw = with ? &*with : nullptr;
        const SlopeFit *pf = free ? &*free : nullptr;
        std::string csv = report::slope_csv(pw, pf);
        report::validate_csv(csv, report::kSlopeHeader, true);
        auto &s = emit(command, {csv, "csv"}, o.output, out, err);
        if (!o.trace.empty()) {
            emit(command, {dump(report::slope_document(pw, pf)), "json"}, o.trace, out, err);
        }
        if (with) {
            s << "slope with extractor " << with->slope;
        }
        if (free) {
            s << (with ? ", " : "") << "extractor-free " << free->slope;
        }
        if (with && free) {
            s << ", ratio " << with->slope / free->slope;
        }
        s << "\n";
        return kExitOk;
    }
    if (command == "region") {
        auto pts = feasibility_region(*o.delta, *o.eta, cfg.game, o.q_max, o.k_max, o.points, cfg.region.tmax);
        std::string csv = report::region_csv(pts);
        report::validate_csv(csv, report::kRegionHeader);
        auto &s = emit(command, {csv, "csv"}, o.output, out, err);
        std::size_t feasible = 0;
        double q_hi = 0;
        double k_hi = 0;
        for (const auto &p : pts) {
            if (p.clipped_t != 0) {
                ++feasible;
                q_hi = std::max(q_hi, p.q);
                k_hi = std::max(k_hi, p.k);
            }
        }
        s << feasible << " of " << pts.size() << " grid points feasible (max q " << q_hi << ", max k " << k_hi
          << ")\n";
        return kExitOk;
    }
    if (command == "simulate") {
        SimParams params;
        params.n = *o.n;
        params.q = o.q;
        params.eta = *o.eta;
        std::unique_ptr<DeviceStrategy> strategy;
        if (o.strategy == "honest") {
            strategy = honest_strategy(params.game, params.win);
        } else if (o.strategy == "constant") {
            strategy = constant_strategy(o.constant_outputs);
        } else {
            strategy = all_fail_strategy(params.game, params.win);
        }
        RunOutcome run = run_protocol(params, *strategy, o.seed, !o.trace.empty());
        std::optional<TrialSummary> trials;
        if (o.trials > 0) {
            trials = run_trials(params, *strategy, o.trials, o.seed);
        }
        auto doc = report::simulate_document(params, strategy->name(), o.seed, run, trials ? &*trials : nullptr);
        auto &s = emit(command, {dump(doc), "json"}, o.output, out, err);
        if (!o.trace.empty()) {
            emit(command, {report::trace_csv(run), "csv"}, o.trace, out, err);
        }
        s << (run.aborted ? "aborted" : "accepted") << ": " << run.failure_count << " failures in "
          << run.game_rounds << " game rounds (threshold " << run.threshold << ")";
        if (trials) {
            s << "; abort rate " << trials->abort_rate() << " over " << trials->trials << " trials";
        }
        s << "\n";
        return kExitOk;
    }
    throw DomainError("unknown command " + command);
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Seed-length calculator and planner for spot-checking randomness expansion"};
    app.require_subcommand(1);
    Options o;

    auto real_pos = CLI::PositiveNumber;
    auto unit = CLI::Range(0.0, 1.0);

    auto add_search = [&](CLI::App *sub, bool allow_both = false) {
        sub->add_option("--deltas", o.deltas, "delta grid for the optimiser")->delimiter(',');
        sub->add_option("--eta-points", o.eta_points, "eta grid size per delta")->check(CLI::Range(1, 1000));
        sub->add_option("--verify-points", o.verify_points, "rectangle check grid per axis")
            ->check(CLI::Range(1, 1000));
        sub->add_option("--q0-points", o.q0_points, "q0 candidates per (delta, eta)")->check(CLI::Range(1, 1000));
        sub->add_option("--t-grid", o.t_grid, "grid points for the max over t")->check(CLI::Range(3, 1000000));
        auto modes = allow_both ? std::vector<std::string>{"with", "free", "both"}
                                : std::vector<std::string>{"with", "free"};
        sub->add_option("--mode", o.mode, "extractor accounting")->check(CLI::IsMember(modes));
    };

    auto *constants = app.add_subcommand("constants", "derive b, q0, k0, K, M for one delta");
    constants->add_option("--delta", o.delta)->required()->check(unit);
    constants->add_option("--eta", o.eta)->check(real_pos);
    add_search(constants);

    auto *single = app.add_subcommand("single", "size one iteration");
    single->add_option("--epsilon", o.epsilon)->required()->check(unit);
    single->add_option("--delta", o.delta)->check(unit);
    single->add_option("--eta", o.eta)->check(real_pos);
    single->add_option("--N", o.n)->check(CLI::PositiveNumber);
    add_search(single);

    auto *plan = app.add_subcommand("plan", "plan unbounded expansion");
    plan->add_option("--eps-total", o.eps_total)->required()->check(unit);
    plan->add_option("--scheme", o.scheme)->check(CLI::IsMember({"halving", "greedy"}));
    plan->add_option("--iterations", o.iterations)->check(CLI::Range(1, 64));
    plan->add_option("--epsilon", o.epsilon, "greedy: first-iteration epsilon")->check(unit);
    plan->add_option("--N", o.n, "greedy: first-iteration N")->check(CLI::PositiveNumber);
    add_search(plan);

    auto *be = app.add_subcommand("break-even", "lower bound on the initial seed");
    be->add_option("--eps-total", o.eps_total)->required()->check(unit);
    be->add_flag("--compare", o.compare, "also run the halving plan and report the gap");
    add_search(be);

    auto *slope = app.add_subcommand("slope", "seed vs log2(1/eps) fit");
    slope->add_option("--eps-range", o.eps_range, "hi:lo, one point per decade");
    slope->add_option("--eps-list", o.eps_list)->delimiter(',');
    add_search(slope, true);
    slope->add_option("--json", o.trace, "also write the fits as JSON");

    auto *region = app.add_subcommand("region", "feasibility region of (q, k) as CSV");
    region->add_option("--delta", o.delta)->required()->check(unit);
    region->add_option("--eta", o.eta)->required()->check(real_pos);
    region->add_option("--q-max", o.q_max)->check(unit);
    region->add_option("--k-max", o.k_max)->check(real_pos);
    region->add_option("--points", o.points)->check(CLI::Range(1, 10000));
    region->add_option("--t-grid", o.t_grid)->check(CLI::Range(3, 1000000));

    auto *sim = app.add_subcommand("simulate", "Monte-Carlo run of the spot-checking protocol");
    sim->add_option("--N", o.n)->required()->check(CLI::PositiveNumber);
    sim->add_option("--q", o.q)->required()->check(CLI::Range(0.0, 1.0));
    sim->add_option("--eta", o.eta)->required()->check(CLI::Range(0.0, 0.5));
    sim->add_option("--strategy", o.strategy)->check(CLI::IsMember({"honest", "constant", "all-fail"}));
    sim->add_option("--outputs", o.constant_outputs, "constant strategy: output bits as an integer mask");
    sim->add_option("--seed", o.seed)->required();
    sim->add_option("--trials", o.trials)->check(CLI::NonNegativeNumber);
    sim->add_option("--trace", o.trace, "per-round CSV path");

    for (auto *sub : app.get_subcommands({})) {
        sub->add_option("--output,-o", o.output, "artifact path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << report::error_document("invalid-config", e.what()).dump() << "\n";
        return kExitInvalidConfig;
    }

    std::string command = app.get_subcommands().front()->get_name();
    try {
        return dispatch(command, o, out, err);
    } catch (const DomainError &e) {
        err << report::error_document("invalid-config", e.what()).dump() << "\n";
        return kExitInvalidConfig;
    } catch (const InfeasibleError &e) {
        err << report::error_document("infeasible-target", e.what()).dump() << "\n";
        return kExitInfeasible;
    } catch (const IoError &e) {
        err << report::error_document("io-failure", e.what()).dump() << "\n";
        return kExitIoFailure;
    }
}

}  // namespace seedlen
