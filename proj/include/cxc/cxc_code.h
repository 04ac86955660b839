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

#ifndef CXC_CXC_CODE_H
#define CXC_CXC_CODE_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cxc/cyclic_codes.h"
#include "cxc/gf2.h"

namespace cxc {

enum class Family { CxC, C2, CxR };

std::string family_name(Family f);
Family parse_family(const std::string &name);

/// Hypergraph product of two cyclic codes.
///
/// Data qubit (i, j, k) is column a*b*i + b*j + k of the check matrices; the
/// check at row b*s + t of H_X (or H_Z) is ancilla (X, s, t) (or (Z, s, t)).
struct CxcCode {
    Family family = Family::CxC;
    uint32_t a = 0;
    uint32_t b = 0;
    CyclicPoly poly_a;
    CyclicPoly poly_b;
    BitMatrix hx;  // [A (x) I_b | I_a (x) B]
    BitMatrix hz;  // [I_a (x) B^T | A^T (x) I_b]

    size_t num_data() const { return 2 * static_cast<size_t>(a) * b; }
    size_t num_checks() const { return static_cast<size_t>(a) * b; }
    size_t omega() const { return poly_a.weight() + poly_b.weight(); }
};

/// Throws std::logic_error if the two check matrices fail to commute.
CxcCode build_cxc(const CyclicPoly &poly_a, const CyclicPoly &poly_b, Family family = Family::CxC);
CxcCode build_c2(const CyclicPoly &poly);
/// Repetition factor 1 + y is the second factor, with length b = d_c.
CxcCode build_cxr(const ClassicalCode &seed);
CxcCode build_cxr(const CyclicPoly &poly, uint64_t cap = kDefaultCodewordCap);

struct CodeParams {
    size_t n = 0;
    size_t k = 0;
    size_t d = 0;  // min(d_A, d_B) from the seeds; 0 when k = 0
    size_t r_a = 0;
    size_t r_b = 0;
    size_t stabilizer_rank = 0;
    size_t omega = 0;

    std::string label() const;
};

CodeParams code_params(const CxcCode &code, uint64_t cap = kDefaultCodewordCap);

struct BalanceReport {
    size_t rank_x = 0;
    size_t rank_z = 0;
    size_t formula_rank = 0;
    size_t min_row_weight = 0;
    size_t max_row_weight = 0;
    bool commutes = false;

    bool balanced() const {
        return commutes && rank_x == rank_z && rank_x == formula_rank && min_row_weight == max_row_weight;
    }
};

BalanceReport balance_report(const CxcCode &code);

struct LogicalBasis {
    std::vector<BitVec> x_logicals;
    std::vector<BitVec> z_logicals;
    /// pairing(i, j) = x_logicals[i] . z_logicals[j]; identity after normalization.
    BitMatrix pairing;
};

/// Deterministic logical operators with identity pairing. Throws
/// std::domain_error when the code encodes no logical qubit.
LogicalBasis logical_basis(const CxcCode &code);

struct DistanceBound {
    size_t value = 0;
    bool exact = false;  // false: no logical up to the cap, value = cap + 1
};

struct BruteForceDistance {
    DistanceBound x;  // lightest X-type logical
    DistanceBound z;  // lightest Z-type logical

    DistanceBound overall() const;
};

/// Exhaustive search over X-type and Z-type operators of weight <= w_cap.
BruteForceDistance brute_force_distance(const CxcCode &code, size_t w_cap);

/// One row of the JSON code catalog.
struct CatalogEntry {
    Family family = Family::CxC;
    uint32_t a = 0;
    uint32_t b = 0;
    std::vector<uint32_t> support_a;
    std::vector<uint32_t> support_b;
    size_t n = 0;
    size_t k = 0;
    size_t d = 0;
    size_t omega = 0;
    size_t rank = 0;

    std::string label() const;
};

CatalogEntry catalog_entry(const CxcCode &code);
CxcCode build_from_entry(const CatalogEntry &entry);
std::string catalog_to_json(const std::vector<CatalogEntry> &entries);
std::vector<CatalogEntry> catalog_from_json(const std::string &text);

}  // namespace cxc

#endif
