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

#include "seedlen/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "seedlen/errors.h"

namespace seedlen::report {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json document(std::string_view schema) {
    return json{{"schema", std::string(schema)}};
}

// FNV-1a over the output bits, so runs can be compared without dumping them.
std::string fingerprint(const std::vector<std::uint8_t> &bits) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bits) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

enum class Kind { kNumber, kInteger, kBool, kString, kArray, kObject };

bool has_kind(const json &v, Kind kind) {
    switch (kind) {
        case Kind::kNumber:
            return v.is_number();
        case Kind::kInteger:
            return v.is_number_integer();
        case Kind::kBool:
            return v.is_boolean();
        case Kind::kString:
            return v.is_string();
        case Kind::kArray:
            return v.is_array();
        case Kind::kObject:
            return v.is_object();
    }
    return false;
}

struct Field {
    const char *name;
    Kind kind;
};

void expect(const json &obj, std::initializer_list<Field> fields, std::string_view where) {
    if (!obj.is_object()) {
        throw SchemaError(std::string(where) + ": not an object");
    }
    for (const Field &f : fields) {
        auto it = obj.find(f.name);
        if (it == obj.end() || !has_kind(*it, f.kind)) {
            throw SchemaError(std::string(where) + ": missing or mistyped field '" + f.name + "'");
        }
    }
}

void expect_constants(const json &c, std::string_view where) {
    expect(c,
           {{"delta", Kind::kNumber}, {"delta_inner", Kind::kNumber}, {"eta", Kind::kNumber},
            {"eta_max", Kind::kNumber}, {"q0", Kind::kNumber}, {"k0", Kind::kNumber},
            {"b", Kind::kNumber}, {"b_entropy", Kind::kNumber}, {"b_concentration", Kind::kNumber},
            {"K", Kind::kNumber}, {"M", Kind::kNumber}, {"verified", Kind::kBool}},
           where);
}

void expect_breakdown(const json &s, std::string_view where) {
    expect(s,
           {{"N", Kind::kInteger}, {"q", Kind::kNumber}, {"epsilon", Kind::kNumber},
            {"game_bits", Kind::kNumber}, {"extractor_bits", Kind::kNumber},
            {"total_seed", Kind::kNumber}, {"total_seed_bits", Kind::kInteger},
            {"output_bits", Kind::kNumber}, {"output_eps", Kind::kNumber}, {"net_gain", Kind::kNumber},
            {"mode", Kind::kString}, {"constants", Kind::kObject}, {"extractor", Kind::kObject}},
           where);
    expect_constants(s["constants"], std::string(where) + ".constants");
    expect(s["extractor"],
           {{"t_bits", Kind::kNumber}, {"d_bits", Kind::kNumber}, {"d_bound", Kind::kNumber},
            {"m_output", Kind::kInteger}, {"eps_1bit", Kind::kNumber}, {"k_min", Kind::kNumber}},
           std::string(where) + ".extractor");
    double total = s["total_seed"].get<double>();
    double parts = s["game_bits"].get<double>() + s["extractor_bits"].get<double>();
    if (std::abs(total - parts) > 1e-9 * std::max(1.0, total)) {
        throw SchemaError(std::string(where) + ": total_seed != game_bits + extractor_bits");
    }
}

void expect_plan(const json &p, std::string_view where) {
    expect(p,
           {{"scheme", Kind::kString}, {"initial_seed", Kind::kNumber}, {"initial_seed_bits", Kind::kInteger},
            {"eps_total", Kind::kNumber}, {"eps_accumulated", Kind::kNumber},
            {"eps_schedule", Kind::kArray}, {"iterations", Kind::kArray}},
           where);
    if (p["iterations"].empty() || p["iterations"].size() != p["eps_schedule"].size()) {
        throw SchemaError(std::string(where) + ": iterations and eps_schedule disagree");
    }
    for (const auto &it : p["iterations"]) {
        expect_breakdown(it, std::string(where) + ".iterations[]");
    }
}

}  // namespace

json to_json(const EntropyConstants &c) {
    return json{{"delta", c.delta},
                {"delta_inner", c.delta_inner},
                {"eta", c.eta},
                {"eta_max", c.eta_max},
                {"q0", c.q0},
                {"k0", c.k0},
                {"b", c.b},
                {"b_entropy", c.b_entropy},
                {"b_concentration", c.b_concentration},
                {"K", c.big_k},
                {"M", c.big_m},
                {"n_components", c.n_components},
                {"c_v", c.c_v},
                {"verified", c.verified}};
}

json to_json(const ExtractorBudget &b) {
    return json{{"n_input", b.n_input},       {"m_output", b.m_output},
                {"eps_out", b.eps_out},       {"eps_1bit", b.eps_1bit},
                {"t_bits", b.t_bits},         {"t_bits_int", b.t_bits_int()},
                {"d_bits", b.d_bits},         {"d_bound", b.d_bound},
                {"k_min", b.k_min},           {"k_min_approx", b.k_min_approx}};
}

json to_json(const SeedBreakdown &s) {
    return json{{"N", s.n},
                {"q", s.q},
                {"epsilon", s.epsilon},
                {"qN", s.qn},
                {"game_bits", s.game_bits},
                {"extractor_bits", s.extractor_bits},
                {"total_seed", s.total_seed},
                {"total_seed_bits", s.total_seed_bits()},
                {"output_bits", s.output_bits},
                {"output_bits_int", s.output_bits_int()},
                {"output_eps", s.output_eps},
                {"net_gain", s.net_gain},
                {"mode", to_string(s.mode)},
                {"constants", to_json(s.constants)},
                {"extractor", to_json(s.extractor)}};
}

json to_json(const ExpansionPlan &p) {
    json iters = json::array();
    for (const auto &it : p.iterations) {
        iters.push_back(to_json(it));
    }
    return json{{"scheme", p.scheme},
                {"initial_seed", p.initial_seed},
                {"initial_seed_bits", static_cast<std::int64_t>(std::ceil(p.initial_seed))},
                {"eps_total", p.eps_total},
                {"eps_accumulated", p.eps_accumulated},
                {"expansion_ratio", p.expansion_ratio},
                {"eps_schedule", p.eps_schedule},
                {"iterations", iters}};
}

json constants_document(const EntropyConstants &c) {
    json doc = document(kConstantsSchema);
    doc["constants"] = to_json(c);
    return doc;
}

json single_document(const SeedBreakdown &s) {
    json doc = document(kSingleSchema);
    doc["breakdown"] = to_json(s);
    return doc;
}

json plan_document(const ExpansionPlan &p) {
    json doc = document(kPlanSchema);
    doc["plan"] = to_json(p);
    return doc;
}

json break_even_document(double eps_total, const SeedBreakdown &be, const ExpansionPlan *plan) {
    json doc = document(kBreakEvenSchema);
    doc["eps_total"] = eps_total;
    doc["break_even"] = to_json(be);
    if (plan) {
        doc["halving_initial_seed"] = plan->initial_seed;
        doc["gap"] = plan->initial_seed - be.total_seed;
    }
    return doc;
}

json slope_document(const SlopeFit *with_extractor, const SlopeFit *extractor_free) {
    json doc = document(kSlopeSchema);
    auto fit = [](const SlopeFit &f) {
        return json{{"slope", f.slope}, {"intercept", f.intercept}, {"log2_inv_eps", f.x}, {"seed", f.y}};
    };
    if (with_extractor) {
        doc["with_extractor"] = fit(*with_extractor);
    }
    if (extractor_free) {
        doc["extractor_free"] = fit(*extractor_free);
    }
    if (with_extractor && extractor_free) {
        doc["ratio"] = with_extractor->slope / extractor_free->slope;
    }
    return doc;
}

json simulate_document(const SimParams &params, const std::string &strategy, std::uint64_t seed,
                       const RunOutcome &run, const TrialSummary *trials) {
    json doc = document(kSimulateSchema);
    std::int64_t ones = 0;
    for (auto b : run.output_bits) {
        ones += b;
    }
    doc["params"] = json{{"N", params.n}, {"q", params.q}, {"eta", params.eta},
                         {"game", params.game.name}, {"strategy", strategy}, {"seed", seed}};
    doc["run"] = json{{"aborted", run.aborted},
                      {"failure_count", run.failure_count},
                      {"game_rounds", run.game_rounds},
                      {"threshold", run.threshold},
                      {"output_length", static_cast<std::int64_t>(run.output_bits.size())},
                      {"output_ones", ones},
                      {"output_fingerprint", fingerprint(run.output_bits)},
                      {"random_bits_consumed", run.random_bits_consumed},
                      {"random_bits_bound", run.random_bits_bound}};
    if (trials) {
        doc["trials"] = json{{"trials", trials->trials},
                             {"aborts", trials->aborts},
                             {"abort_rate", trials->abort_rate()},
                             {"game_rounds", trials->game_rounds},
                             {"failures", trials->failures},
                             {"win_rate", trials->win_rate()}};
    }
    return doc;
}

json error_document(std::string_view category, std::string_view message) {
    json doc = document(kErrorSchema);
    doc["category"] = std::string(category);
    doc["message"] = std::string(message);
    return doc;
}

std::string region_csv(const std::vector<RegionPoint> &points) {
    std::ostringstream out;
    out << "q,k,clipped_T\n";
    for (const auto &p : points) {
        out << num(p.q) << ',' << num(p.k) << ',' << num(p.clipped_t) << '\n';
    }
    return out.str();
}

std::string slope_csv(const SlopeFit *with_extractor, const SlopeFit *extractor_free) {
    const SlopeFit *base = with_extractor ? with_extractor : extractor_free;
    std::ostringstream out;
    out << "log2_inv_eps,seed_with,seed_free\n";
    if (!base) {
        return out.str();
    }
    for (std::size_t i = 0; i < base->x.size(); ++i) {
        out << num(base->x[i]) << ',';
        if (with_extractor) {
            out << num(with_extractor->y[i]);
        }
        out << ',';
        if (extractor_free) {
            out << num(extractor_free->y[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string trace_csv(const RunOutcome &run) {
    std::ostringstream out;
    out << "round,is_game_round,input,outcome_bit,failed\n";
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
        const auto &r = run.trace[i];
        out << i << ',' << int(r.is_game_round) << ',' << r.input << ',' << r.outcome_bit << ','
            << int(r.failed) << '\n';
    }
    return out.str();
}

void validate_document(const json &doc) {
    expect(doc, {{"schema", Kind::kString}}, "document");
    auto schema = doc["schema"].get<std::string>();
    if (schema == kConstantsSchema) {
        expect(doc, {{"constants", Kind::kObject}}, schema);
        expect_constants(doc["constants"], "constants");
    } else if (schema == kSingleSchema) {
        expect(doc, {{"breakdown", Kind::kObject}}, schema);
        expect_breakdown(doc["breakdown"], "breakdown");
    } else if (schema == kPlanSchema) {
        expect(doc, {{"plan", Kind::kObject}}, schema);
        expect_plan(doc["plan"], "plan");
    } else if (schema == kBreakEvenSchema) {
        expect(doc, {{"eps_total", Kind::kNumber}, {"break_even", Kind::kObject}}, schema);
        expect_breakdown(doc["break_even"], "break_even");
    } else if (schema == kSlopeSchema) {
        if (!doc.contains("with_extractor") && !doc.contains("extractor_free")) {
            throw SchemaError("slope: no fit present");
        }
        for (const char *key : {"with_extractor", "extractor_free"}) {
            if (doc.contains(key)) {
                expect(doc[key],
                       {{"slope", Kind::kNumber}, {"intercept", Kind::kNumber},
                        {"log2_inv_eps", Kind::kArray}, {"seed", Kind::kArray}},
                       key);
            }
        }
    } else if (schema == kSimulateSchema) {
        expect(doc, {{"params", Kind::kObject}, {"run", Kind::kObject}}, schema);
        expect(doc["run"],
               {{"aborted", Kind::kBool}, {"failure_count", Kind::kInteger}, {"game_rounds", Kind::kInteger},
                {"threshold", Kind::kNumber}, {"output_length", Kind::kInteger},
                {"random_bits_consumed", Kind::kNumber}},
               "run");
        const auto &run = doc["run"];
        bool recomputed = run["failure_count"].get<double>() > run["threshold"].get<double>();
        if (recomputed != run["aborted"].get<bool>()) {
            throw SchemaError("run: abort flag disagrees with failure_count and threshold");
        }
    } else if (schema == kErrorSchema) {
        expect(doc, {{"category", Kind::kString}, {"message", Kind::kString}}, schema);
    } else {
        throw SchemaError("unknown schema '" + schema + "'");
    }
}

void validate_csv(std::string_view text, const std::vector<std::string> &header, bool allow_empty) {
    std::istringstream in{std::string(text)};
    std::string line;
    auto split = [](const std::string &s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(s);
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (!s.empty() && s.back() == ',') {
            cells.emplace_back();
        }
        return cells;
    };
    if (!std::getline(in, line) || split(line) != header) {
        throw SchemaError("csv: header mismatch");
    }
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        auto cells = split(line);
        if (cells.size() != header.size()) {
            throw SchemaError("csv: row " + std::to_string(row) + " has the wrong column count");
        }
        for (const auto &cell : cells) {
            if (cell.empty() && allow_empty) {
                continue;
            }
            double v = 0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw SchemaError("csv: row " + std::to_string(row) + " has a non-numeric cell");
            }
        }
    }
}

}  // namespace seedlen::report
