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

#ifndef SEEDLEN_EXTRACTOR_BUDGET_H
#define SEEDLEN_EXTRACTOR_BUDGET_H

#include <cstdint>

namespace seedlen {

/// Seed sizes of a Trevisan-style extractor built from a list-decodable
/// one-bit extractor and a weak (t, 2)-design. Nothing is constructed; only
/// the bit counts are computed.
struct ExtractorBudget {
    std::int64_t n_input = 0;
    double k_rate = 0;  // (1 - delta) N / 4, before flooring
    std::int64_t m_output = 0;
    double eps_out = 0;
    double eps_1bit = 0;
    double t_bits = 0;
    double d_bits = 0;   // t * ceil(t / ln 2)
    double d_bound = 0;  // t (t + 1) / ln 2, used for seed totals
    double k_min = 0;    // 4k + 2 log(1 / eps_out)
    double k_min_approx = 0;  // 4k, the log term ignored

    std::int64_t t_bits_int() const;
    std::int64_t d_bits_int() const;
};

/// 32 n / delta^4.
double codeword_length(double n, double delta_code);

/// log2(512 n / eps^4).
double one_bit_seed(double n, double eps);

/// 3 log2(1 / eps), the min-entropy a one-bit extractor built this way needs.
double one_bit_min_entropy(double eps);

/// t (t + 1) / ln 2.
double design_size_bound(double t);

/// t * ceil(t / ln r).
double design_size(double t, double r = 2.0);

/// Output of the composed extractor: m = floor((1 - delta) N / 4) bits at error eps_out.
ExtractorBudget composed_budget(std::int64_t n_input, double delta, double eps_out);

/// log 512 + 8 log(3/4 (1 - delta)) + log N + 8 log(N / eps), with N real.
double composed_one_bit_seed(double n_input, double delta, double eps_out);

}  // namespace seedlen

#endif
