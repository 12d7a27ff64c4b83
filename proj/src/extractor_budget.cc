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

#include "seedlen/extractor_budget.h"

#include <cmath>
#include <numbers>

#include "seedlen/errors.h"

namespace seedlen {

namespace {

void require(bool ok, const char *what) {
    if (!ok) {
        throw DomainError(what);
    }
}

}  // namespace

std::int64_t ExtractorBudget::t_bits_int() const {
    return static_cast<std::int64_t>(std::ceil(t_bits));
}

std::int64_t ExtractorBudget::d_bits_int() const {
    return static_cast<std::int64_t>(std::ceil(d_bits));
}

double codeword_length(double n, double delta_code) {
    require(n >= 1, "codeword_length: n must be at least 1");
    require(delta_code > 0 && delta_code <= 1, "codeword_length: delta outside (0, 1]");
    return 32 * n / std::pow(delta_code, 4);
}

double one_bit_seed(double n, double eps) {
    require(n >= 1, "one_bit_seed: n must be at least 1");
    require(eps > 0 && eps <= 1, "one_bit_seed: eps outside (0, 1]");
    // Code with delta = eps / 2: log(32 * 16 n / eps^4).
    return 9 + std::log2(n) - 4 * std::log2(eps);
}

double one_bit_min_entropy(double eps) {
    require(eps > 0 && eps < 1, "one_bit_min_entropy: eps outside (0, 1)");
    return 3 * std::log2(1 / eps);
}

double design_size_bound(double t) {
    return t * (t + 1) / std::numbers::ln2;
}

double design_size(double t, double r) {
    require(r > 1, "design_size: r must exceed 1");
    return t * std::ceil(t / std::log(r));
}

double composed_one_bit_seed(double n_input, double delta, double eps_out) {
    return 9 + 8 * std::log2(0.75 * (1 - delta)) + std::log2(n_input) +
           8 * (std::log2(n_input) - std::log2(eps_out));
}

ExtractorBudget composed_budget(std::int64_t n_input, double delta, double eps_out) {
    require(n_input >= 1, "composed_budget: n_input must be positive");
    require(delta >= 0 && delta < 1, "composed_budget: delta outside [0, 1)");
    require(eps_out > 0 && eps_out < 1, "composed_budget: eps_out outside (0, 1)");
    ExtractorBudget out;
    out.n_input = n_input;
    out.k_rate = 0.25 * (1 - delta) * static_cast<double>(n_input);
    out.m_output = static_cast<std::int64_t>(std::floor(out.k_rate));
    if (out.m_output < 1) {
        throw DomainError("composed_budget: source too short for a single output bit");
    }
    out.eps_out = eps_out;
    double m = static_cast<double>(out.m_output);
    out.eps_1bit = eps_out * eps_out / (9 * m * m);
    out.t_bits = composed_one_bit_seed(static_cast<double>(n_input), delta, eps_out);
    out.d_bits = design_size(out.t_bits, 2.0);
    out.d_bound = design_size_bound(out.t_bits);
    out.k_min_approx = 4 * out.k_rate;
    out.k_min = out.k_min_approx + 2 * std::log2(1 / eps_out);
    return out;
}

}  // namespace seedlen
