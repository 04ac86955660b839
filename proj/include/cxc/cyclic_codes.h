// Copyright 2026 The cxc Authors
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

#ifndef CXC_CYCLIC_CODES_H
#define CXC_CYCLIC_CODES_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cxc/gf2.h"

namespace cxc {

/// Thrown when an exhaustive enumeration would exceed its configured cap.
class ResourceCapExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Default cap on the number of codewords enumerated by min_distance.
inline constexpr uint64_t kDefaultCodewordCap = uint64_t{1} << 26;

struct ClassicalParams {
    size_t n = 0;
    size_t k = 0;
    size_t d = 0;
};

/// A classical cyclic code with parity-check matrix circulant(poly).
struct ClassicalCode {
    CyclicPoly poly;
    size_t n = 0;
    size_t k = 0;
    size_t d = 0;

    double rate() const { return static_cast<double>(k) / static_cast<double>(n); }
    std::string label() const;
};

/// Exact minimum Hamming weight of a nonzero codeword of ker circulant(poly).
/// Throws std::domain_error when the kernel is trivial and ResourceCapExceeded
/// when 2^k - 1 exceeds `cap`.
size_t min_distance(const CyclicPoly &poly, uint64_t cap = kDefaultCodewordCap);

/// (n, k, d) of the cyclic code; d = 0 when k = 0.
ClassicalParams classical_params(const CyclicPoly &poly, uint64_t cap = kDefaultCodewordCap);

/// Lexicographically smallest support among all cyclic shifts of `poly`.
CyclicPoly canonical_support(const CyclicPoly &poly);

struct FilterRules {
    size_t min_distance = 2;
    size_t min_dimension = 1;
};

/// Best-rate codes of one generator weight, keyed by minimum distance.
struct BestRateTable {
    size_t weight = 0;
    std::map<size_t, ClassicalCode> entries;
};

struct SkippedCandidate {
    CyclicPoly poly;
    size_t k = 0;
    std::string reason;
};

struct SearchConfig {
    size_t n_max = 40;
    size_t w_min = 2;
    size_t w_max = 5;
    FilterRules rules;
    uint64_t codeword_cap = kDefaultCodewordCap;
    size_t workers = 1;
};

struct SearchResult {
    std::vector<BestRateTable> tables;  // one per weight, ascending
    std::vector<SkippedCandidate> skipped;
    /// Every candidate that passed the filter rules, in enumeration order.
    std::vector<ClassicalCode> accepted;
    size_t candidates_evaluated = 0;

    const BestRateTable &table_for_weight(size_t w) const;
};

/// Exhaustive search over canonical supports of weight in [w_min, w_max] and
/// length in [2, n_max]. Throws std::invalid_argument on an invalid range.
SearchResult enumerate_cyclic_codes(const SearchConfig &config);

/// CSV with columns w,n_c,k_c,d_c,support,rate,mirror_support.
std::string tables_to_csv(const std::vector<BestRateTable> &tables);

/// Every support of the given weight (containing 0) that is its own canonical form.
std::vector<CyclicPoly> canonical_supports(uint32_t n, size_t weight);

}  // namespace cxc

#endif
