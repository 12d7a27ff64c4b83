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

#ifndef SEEDLEN_REPORT_H
#define SEEDLEN_REPORT_H

// Machine-readable outputs. JSON documents carry a versioned "schema" field;
// CSV files have fixed headers. Every emitter has a matching validator.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "seedlen/constants.h"
#include "seedlen/protocol_sim.h"
#include "seedlen/seed_planner.h"

namespace seedlen::report {

using nlohmann::json;

inline constexpr std::string_view kConstantsSchema = "seedlen.constants/1";
inline constexpr std::string_view kSingleSchema = "seedlen.single/1";
inline constexpr std::string_view kPlanSchema = "seedlen.plan/1";
inline constexpr std::string_view kBreakEvenSchema = "seedlen.break_even/1";
inline constexpr std::string_view kSlopeSchema = "seedlen.slope/1";
inline constexpr std::string_view kSimulateSchema = "seedlen.simulate/1";
inline constexpr std::string_view kErrorSchema = "seedlen.error/1";

inline const std::vector<std::string> kRegionHeader = {"q", "k", "clipped_T"};
inline const std::vector<std::string> kSlopeHeader = {"log2_inv_eps", "seed_with", "seed_free"};
inline const std::vector<std::string> kTraceHeader = {"round", "is_game_round", "input", "outcome_bit",
                                                      "failed"};

json to_json(const EntropyConstants &c);
json to_json(const ExtractorBudget &b);
json to_json(const SeedBreakdown &s);
json to_json(const ExpansionPlan &p);

json constants_document(const EntropyConstants &c);
json single_document(const SeedBreakdown &s);
json plan_document(const ExpansionPlan &p);
json break_even_document(double eps_total, const SeedBreakdown &be, const ExpansionPlan *plan);
json slope_document(const SlopeFit *with_extractor, const SlopeFit *extractor_free);
json simulate_document(const SimParams &params, const std::string &strategy, std::uint64_t seed,
                       const RunOutcome &run, const TrialSummary *trials);
json error_document(std::string_view category, std::string_view message);

std::string region_csv(const std::vector<RegionPoint> &points);
/// Either fit may be null; its column is then left empty.
std::string slope_csv(const SlopeFit *with_extractor, const SlopeFit *extractor_free);
std::string trace_csv(const RunOutcome &run);

/// Throws SchemaError when `doc` does not match the schema it names.
void validate_document(const json &doc);

/// Throws SchemaError unless the header matches and every cell of every
/// row parses as a number (empty cells allowed when `allow_empty`).
void validate_csv(std::string_view text, const std::vector<std::string> &header,
                  bool allow_empty = false);

}  // namespace seedlen::report

#endif
