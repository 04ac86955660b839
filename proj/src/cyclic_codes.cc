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

#include "cxc/cyclic_codes.h"

#include <algorithm>
#include <bit>
#include <sstream>

#include "cxc/parallel.h"

namespace cxc {

std::string ClassicalCode::label() const {
    return "[" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(d) + "]";
}

namespace {

/// Minimum weight over the span of `basis` by Gray-code traversal.
size_t min_weight_of_span(const std::vector<BitVec> &basis) {
    const size_t k = basis.size();
    const size_t words = basis.front().num_words();
    size_t best = basis.front().size();
    if (words == 1) {
        std::vector<uint64_t> b(k);
        for (size_t i = 0; i < k; i++) {
            b[i] = basis[i].words()[0];
        }
        uint64_t cur = 0;
        const uint64_t total = uint64_t{1} << k;
        for (uint64_t i = 1; i < total; i++) {
            cur ^= b[std::countr_zero(i)];
            size_t w = std::popcount(cur);
            if (w < best) {
                best = w;
            }
        }
        return best;
    }
    std::vector<uint64_t> cur(words, 0);
    const uint64_t total = uint64_t{1} << k;
    for (uint64_t i = 1; i < total; i++) {
        auto src = basis[std::countr_zero(i)].words();
        size_t w = 0;
        for (size_t t = 0; t < words; t++) {
            cur[t] ^= src[t];
            w += std::popcount(cur[t]);
        }
        best = std::min(best, w);
    }
    return best;
}

}  // namespace

size_t min_distance(const CyclicPoly &poly, uint64_t cap) {
    std::vector<BitVec> basis = kernel_basis(circulant_matrix(poly));
    if (basis.empty()) {
        throw std::domain_error("min_distance: code has no nonzero codeword (k = 0)");
    }
    if (basis.size() >= 64 || (uint64_t{1} << basis.size()) - 1 > cap) {
        throw ResourceCapExceeded("min_distance: 2^" + std::to_string(basis.size()) +
                                  " - 1 codewords exceed the enumeration cap");
    }
    return min_weight_of_span(basis);
}

ClassicalParams classical_params(const CyclicPoly &poly, uint64_t cap) {
    ClassicalParams out;
    out.n = poly.modulus();
    out.k = out.n - gf2_rank(circulant_matrix(poly));
    out.d = out.k == 0 ? 0 : min_distance(poly, cap);
    return out;
}

CyclicPoly canonical_support(const CyclicPoly &poly) {
    const uint32_t n = poly.modulus();
    std::vector<uint32_t> best;
    std::vector<uint32_t> shifted(poly.weight());
    // The minimum starts with 0, so only shifts sending an exponent to 0 qualify.
    for (uint32_t anchor : poly.support()) {
        for (size_t i = 0; i < poly.weight(); i++) {
            shifted[i] = (poly.support()[i] + n - anchor) % n;
        }
        std::sort(shifted.begin(), shifted.end());
        if (best.empty() || shifted < best) {
            best = shifted;
        }
    }
    return CyclicPoly(n, std::move(best));
}

std::vector<CyclicPoly> canonical_supports(uint32_t n, size_t weight) {
    std::vector<CyclicPoly> out;
    if (weight == 0 || weight > n) {
        return out;
    }
    // Combinations of weight-1 exponents from [1, n) in lexicographic order.
    std::vector<uint32_t> rest(weight - 1);
    for (size_t i = 0; i < rest.size(); i++) {
        rest[i] = static_cast<uint32_t>(i + 1);
    }
    std::vector<uint32_t> support(weight);
    while (true) {
        support[0] = 0;
        std::copy(rest.begin(), rest.end(), support.begin() + 1);
        CyclicPoly p(n, support);
        if (canonical_support(p) == p) {
            out.push_back(std::move(p));
        }
        // Advance to the next combination.
        size_t m = rest.size();
        size_t i = m;
        while (i > 0 && rest[i - 1] == n - 1 - (m - i)) {
            i--;
        }
        if (i == 0) {
            break;
        }
        rest[i - 1]++;
        for (size_t j = i; j < m; j++) {
            rest[j] = rest[j - 1] + 1;
        }
    }
    return out;
}

const BestRateTable &SearchResult::table_for_weight(size_t w) const {
    for (const auto &t : tables) {
        if (t.weight == w) {
            return t;
        }
    }
    throw std::out_of_range("no table for weight " + std::to_string(w));
}

namespace {

/// True when `a` should replace `b` as the best entry for its (w, d).
bool better_than(const ClassicalCode &a, const ClassicalCode &b) {
    uint64_t lhs = static_cast<uint64_t>(a.k) * b.n;
    uint64_t rhs = static_cast<uint64_t>(b.k) * a.n;
    if (lhs != rhs) {
        return lhs > rhs;
    }
    if (a.n != b.n) {
        return a.n < b.n;
    }
    return a.poly.support() < b.poly.support();
}

struct Evaluation {
    ClassicalParams params;
    bool skipped = false;
    std::string reason;
};

}  // namespace

SearchResult enumerate_cyclic_codes(const SearchConfig &config) {
    if (config.w_min < 2 || config.w_min > config.w_max) {
        throw std::invalid_argument("enumerate_cyclic_codes: need 2 <= w_min <= w_max");
    }
    if (config.n_max < 2) {
        throw std::invalid_argument("enumerate_cyclic_codes: need n_max >= 2");
    }
    SearchResult result;
    for (size_t w = config.w_min; w <= config.w_max; w++) {
        BestRateTable table;
        table.weight = w;
        for (size_t n = std::max<size_t>(w, 2); n <= config.n_max; n++) {
            std::vector<CyclicPoly> candidates = canonical_supports(static_cast<uint32_t>(n), w);
            std::vector<Evaluation> evals(candidates.size());
            parallel_for(candidates.size(), config.workers, [&](size_t i) {
                Evaluation &e = evals[i];
                e.params.n = n;
                e.params.k = n - gf2_rank(circulant_matrix(candidates[i]));
                if (e.params.k < config.rules.min_dimension || e.params.k == 0) {
                    return;
                }
                try {
                    e.params.d = min_distance(candidates[i], config.codeword_cap);
                } catch (const ResourceCapExceeded &ex) {
                    e.skipped = true;
                    e.reason = ex.what();
                }
            });
            for (size_t i = 0; i < candidates.size(); i++) {
                const Evaluation &e = evals[i];
                result.candidates_evaluated++;
                if (e.skipped) {
                    result.skipped.push_back({candidates[i], e.params.k, e.reason});
                    continue;
                }
                if (e.params.k < config.rules.min_dimension || e.params.k == 0 ||
                    e.params.d < config.rules.min_distance) {
                    continue;
                }
                ClassicalCode code{candidates[i], e.params.n, e.params.k, e.params.d};
                result.accepted.push_back(code);
                auto it = table.entries.find(code.d);
                if (it == table.entries.end()) {
                    table.entries.emplace(code.d, code);
                } else if (better_than(code, it->second)) {
                    it->second = code;
                }
            }
        }
        result.tables.push_back(std::move(table));
    }
    return result;
}

std::string tables_to_csv(const std::vector<BestRateTable> &tables) {
    std::ostringstream out;
    out << "w,n_c,k_c,d_c,support,rate,mirror_support\n";
    for (const auto &t : tables) {
        for (const auto &[d, code] : t.entries) {
            CyclicPoly mirror = canonical_support(code.poly.reversed());
            out << t.weight << ',' << code.n << ',' << code.k << ',' << code.d << ",\"" << code.poly.to_string()
                << "\"," << code.rate() << ",\"" << mirror.to_string() << "\"\n";
        }
    }
    return out.str();
}

}  // namespace cxc
