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

#include "cxc/cxc_code.h"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace cxc {

std::string family_name(Family f) {
    switch (f) {
        case Family::CxC:
            return "CxC";
        case Family::C2:
            return "C2";
        case Family::CxR:
            return "CxR";
    }
    throw std::invalid_argument("unknown family");
}

Family parse_family(const std::string &name) {
    if (name == "CxC") {
        return Family::CxC;
    }
    if (name == "C2") {
        return Family::C2;
    }
    if (name == "CxR") {
        return Family::CxR;
    }
    throw std::invalid_argument("unknown code family '" + name + "' (expected CxC, C2 or CxR)");
}

CxcCode build_cxc(const CyclicPoly &poly_a, const CyclicPoly &poly_b, Family family) {
    CxcCode code;
    code.family = family;
    code.a = poly_a.modulus();
    code.b = poly_b.modulus();
    code.poly_a = poly_a;
    code.poly_b = poly_b;
    BitMatrix a = circulant_matrix(poly_a);
    BitMatrix b = circulant_matrix(poly_b);
    BitMatrix ia = BitMatrix::identity(code.a);
    BitMatrix ib = BitMatrix::identity(code.b);
    code.hx = hstack(kron(a, ib), kron(ia, b));
    code.hz = hstack(kron(ia, transpose(b)), kron(transpose(a), ib));
    if (!matmul_gf2(code.hx, transpose(code.hz)).is_zero()) {
        throw std::logic_error("build_cxc: H_X H_Z^T != 0");
    }
    return code;
}

CxcCode build_c2(const CyclicPoly &poly) { return build_cxc(poly, poly, Family::C2); }

CxcCode build_cxr(const ClassicalCode &seed) {
    if (seed.k < 1 || seed.d < 1) {
        throw std::invalid_argument("build_cxr: seed must encode at least one bit");
    }
    return build_cxc(seed.poly, CyclicPoly(static_cast<uint32_t>(seed.d), {0, 1}), Family::CxR);
}

CxcCode build_cxr(const CyclicPoly &poly, uint64_t cap) {
    ClassicalParams p = classical_params(poly, cap);
    if (p.k < 1) {
        throw std::invalid_argument("build_cxr: seed must encode at least one bit");
    }
    return build_cxr(ClassicalCode{poly, p.n, p.k, p.d});
}

std::string CodeParams::label() const {
    return "[[" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(d) + "]]";
}

CodeParams code_params(const CxcCode &code, uint64_t cap) {
    CodeParams p;
    p.n = code.num_data();
    p.r_a = gf2_rank(circulant_matrix(code.poly_a));
    p.r_b = gf2_rank(circulant_matrix(code.poly_b));
    p.k = 2 * (code.a - p.r_a) * (code.b - p.r_b);
    p.stabilizer_rank = code.a * p.r_b + code.b * p.r_a - p.r_a * p.r_b;
    p.omega = code.omega();
    if (p.k > 0) {
        p.d = std::min(min_distance(code.poly_a, cap), min_distance(code.poly_b, cap));
    }
    return p;
}

BalanceReport balance_report(const CxcCode &code) {
    BalanceReport r;
    r.commutes = matmul_gf2(code.hx, transpose(code.hz)).is_zero();
    r.rank_x = gf2_rank(code.hx);
    r.rank_z = gf2_rank(code.hz);
    size_t ra = gf2_rank(circulant_matrix(code.poly_a));
    size_t rb = gf2_rank(circulant_matrix(code.poly_b));
    r.formula_rank = code.a * rb + code.b * ra - ra * rb;
    r.min_row_weight = code.hx.cols();
    r.max_row_weight = 0;
    for (const BitMatrix *h : {&code.hx, &code.hz}) {
        for (size_t i = 0; i < h->rows(); i++) {
            size_t w = h->row_weight(i);
            r.min_row_weight = std::min(r.min_row_weight, w);
            r.max_row_weight = std::max(r.max_row_weight, w);
        }
    }
    return r;
}

namespace {

/// Kernel vectors of a circulant plus their cyclic shifts, lightest first.
std::vector<BitVec> kernel_candidates(const CyclicPoly &p) {
    const size_t n = p.modulus();
    std::vector<BitVec> out;
    for (const BitVec &v : kernel_basis(circulant_matrix(p))) {
        for (size_t shift = 0; shift < n; shift++) {
            BitVec s(n);
            for (size_t i : v.support()) {
                s.set((i + shift) % n, true);
            }
            out.push_back(std::move(s));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const BitVec &x, const BitVec &y) {
        size_t wx = x.popcount();
        size_t wy = y.popcount();
        if (wx != wy) {
            return wx < wy;
        }
        return x.support() < y.support();
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Operator equal to `pattern` (x) e_unit on one block of the data qubits.
BitVec left_tensor(const BitVec &pattern, size_t unit, size_t a, size_t b, size_t block) {
    BitVec v(2 * a * b);
    for (size_t j : pattern.support()) {
        v.set(block * a * b + b * j + unit, true);
    }
    return v;
}

/// Operator equal to e_unit (x) pattern on one block of the data qubits.
BitVec right_tensor(size_t unit, const BitVec &pattern, size_t a, size_t b, size_t block) {
    BitVec v(2 * a * b);
    for (size_t k : pattern.support()) {
        v.set(block * a * b + b * unit + k, true);
    }
    return v;
}

struct Candidate {
    size_t weight;
    BitVec op;
};

/// Greedily keeps candidates independent of `stabilizers` until `k` are found.
std::vector<BitVec> select_logicals(const BitMatrix &stabilizers, std::vector<Candidate> candidates, size_t k,
                                    const BitMatrix &commute_with) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate &x, const Candidate &y) { return x.weight < y.weight; });
    EchelonBasis span(stabilizers.cols());
    for (size_t i = 0; i < stabilizers.rows(); i++) {
        span.insert(stabilizers.row(i));
    }
    std::vector<BitVec> out;
    for (const Candidate &c : candidates) {
        if (out.size() == k) {
            break;
        }
        if (span.insert(c.op)) {
            out.push_back(c.op);
        }
    }
    if (out.size() < k) {
        for (const BitVec &v : kernel_basis(commute_with)) {
            if (out.size() == k) {
                break;
            }
            if (span.insert(v)) {
                out.push_back(v);
            }
        }
    }
    if (out.size() != k) {
        throw std::logic_error("logical_basis: could not complete a logical basis");
    }
    return out;
}

}  // namespace

LogicalBasis logical_basis(const CxcCode &code) {
    CodeParams params = code_params(code);
    const size_t k = params.k;
    if (k == 0) {
        throw std::domain_error("logical_basis: code encodes no logical qubits");
    }
    const size_t a = code.a;
    const size_t b = code.b;

    // Z-type: (ker A (x) e_t | 0) and (0 | e_s (x) ker B) commute with H_X.
    std::vector<Candidate> z_cands;
    for (const BitVec &u : kernel_candidates(code.poly_a)) {
        for (size_t t = 0; t < b; t++) {
            z_cands.push_back({u.popcount(), left_tensor(u, t, a, b, 0)});
        }
    }
    for (const BitVec &v : kernel_candidates(code.poly_b)) {
        for (size_t s = 0; s < a; s++) {
            z_cands.push_back({v.popcount(), right_tensor(s, v, a, b, 1)});
        }
    }
    // X-type: (e_s (x) ker B^T | 0) and (0 | ker A^T (x) e_t) commute with H_Z.
    std::vector<Candidate> x_cands;
    for (const BitVec &v : kernel_candidates(code.poly_b.reversed())) {
        for (size_t s = 0; s < a; s++) {
            x_cands.push_back({v.popcount(), right_tensor(s, v, a, b, 0)});
        }
    }
    for (const BitVec &u : kernel_candidates(code.poly_a.reversed())) {
        for (size_t t = 0; t < b; t++) {
            x_cands.push_back({u.popcount(), left_tensor(u, t, a, b, 1)});
        }
    }

    LogicalBasis basis;
    basis.z_logicals = select_logicals(code.hz, std::move(z_cands), k, code.hx);
    basis.x_logicals = select_logicals(code.hx, std::move(x_cands), k, code.hz);

    // Symplectic Gram-Schmidt: bring the pairing to the identity.
    auto &xs = basis.x_logicals;
    auto &zs = basis.z_logicals;
    for (size_t i = 0; i < k; i++) {
        size_t j = i;
        while (j < k && !xs[i].dot(zs[j])) {
            j++;
        }
        if (j == k) {
            throw std::logic_error("logical_basis: degenerate pairing");
        }
        std::swap(zs[i], zs[j]);
        for (size_t m = i + 1; m < k; m++) {
            if (xs[m].dot(zs[i])) {
                xs[m] ^= xs[i];
            }
            if (xs[i].dot(zs[m])) {
                zs[m] ^= zs[i];
            }
        }
    }
    basis.pairing = BitMatrix(k, k);
    for (size_t i = 0; i < k; i++) {
        for (size_t j = 0; j < k; j++) {
            basis.pairing.set(i, j, xs[i].dot(zs[j]));
        }
    }
    return basis;
}

DistanceBound BruteForceDistance::overall() const {
    if (x.exact && z.exact) {
        return {std::min(x.value, z.value), true};
    }
    if (x.exact && x.value <= z.value) {
        return x;
    }
    if (z.exact && z.value <= x.value) {
        return z;
    }
    return {std::min(x.value, z.value), false};
}

namespace {

/// Lightest operator with zero syndrome under `checks` that anticommutes with
/// at least one of `partners`, found by enumerating supports up to `w_cap`.
DistanceBound lightest_logical(const BitMatrix &checks, const std::vector<BitVec> &partners, size_t w_cap) {
    const size_t n = checks.cols();
    const size_t syn_words = (checks.rows() + 63) / 64;
    const size_t log_words = (partners.size() + 63) / 64;
    const size_t stride = syn_words + log_words;
    // Column signature: syndrome bits followed by logical pairing bits.
    std::vector<uint64_t> column(n * stride, 0);
    for (size_t r = 0; r < checks.rows(); r++) {
        for (size_t q : checks.row_support(r)) {
            column[q * stride + r / 64] ^= uint64_t{1} << (r % 64);
        }
    }
    for (size_t l = 0; l < partners.size(); l++) {
        for (size_t q : partners[l].support()) {
            column[q * stride + syn_words + l / 64] ^= uint64_t{1} << (l % 64);
        }
    }
    for (size_t w = 1; w <= std::min(w_cap, n); w++) {
        std::vector<size_t> idx(w);
        std::vector<std::vector<uint64_t>> prefix(w + 1, std::vector<uint64_t>(stride, 0));
        // Depth-first enumeration of increasing index tuples with prefix sums.
        size_t depth = 0;
        idx[0] = 0;
        while (true) {
            if (idx[depth] > n - (w - depth)) {
                if (depth == 0) {
                    break;
                }
                depth--;
                idx[depth]++;
                continue;
            }
            const uint64_t *col = &column[idx[depth] * stride];
            for (size_t t = 0; t < stride; t++) {
                prefix[depth + 1][t] = prefix[depth][t] ^ col[t];
            }
            if (depth + 1 == w) {
                const auto &acc = prefix[w];
                bool zero_syndrome = std::all_of(acc.begin(), acc.begin() + syn_words, [](uint64_t x) { return x == 0; });
                bool nontrivial = std::any_of(acc.begin() + syn_words, acc.end(), [](uint64_t x) { return x != 0; });
                if (zero_syndrome && nontrivial) {
                    return {w, true};
                }
                idx[depth]++;
            } else {
                depth++;
                idx[depth] = idx[depth - 1] + 1;
            }
        }
    }
    return {w_cap + 1, false};
}

}  // namespace

BruteForceDistance brute_force_distance(const CxcCode &code, size_t w_cap) {
    LogicalBasis basis = logical_basis(code);
    BruteForceDistance out;
    out.x = lightest_logical(code.hz, basis.z_logicals, w_cap);
    out.z = lightest_logical(code.hx, basis.x_logicals, w_cap);
    return out;
}

std::string CatalogEntry::label() const {
    return "[[" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(d) + "]]";
}

CatalogEntry catalog_entry(const CxcCode &code) {
    CodeParams p = code_params(code);
    CatalogEntry e;
    e.family = code.family;
    e.a = code.a;
    e.b = code.b;
    e.support_a = code.poly_a.support();
    e.support_b = code.poly_b.support();
    e.n = p.n;
    e.k = p.k;
    e.d = p.d;
    e.omega = p.omega;
    e.rank = p.stabilizer_rank;
    return e;
}

CxcCode build_from_entry(const CatalogEntry &entry) {
    return build_cxc(CyclicPoly(entry.a, entry.support_a), CyclicPoly(entry.b, entry.support_b), entry.family);
}

std::string catalog_to_json(const std::vector<CatalogEntry> &entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &e : entries) {
        arr.push_back({{"family", family_name(e.family)},
                       {"a", e.a},
                       {"b", e.b},
                       {"supportA", e.support_a},
                       {"supportB", e.support_b},
                       {"n", e.n},
                       {"k", e.k},
                       {"d", e.d},
                       {"omega", e.omega},
                       {"rank", e.rank}});
    }
    return arr.dump(2);
}

std::vector<CatalogEntry> catalog_from_json(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.is_object() && j.contains("codes")) {
        j = j.at("codes");
    }
    if (!j.is_array()) {
        throw std::invalid_argument("code catalog must be a JSON array");
    }
    std::vector<CatalogEntry> out;
    for (const auto &item : j) {
        CatalogEntry e;
        e.family = parse_family(item.at("family").get<std::string>());
        e.a = item.at("a").get<uint32_t>();
        e.b = item.at("b").get<uint32_t>();
        e.support_a = item.at("supportA").get<std::vector<uint32_t>>();
        e.support_b = item.at("supportB").get<std::vector<uint32_t>>();
        e.n = item.value("n", size_t{0});
        e.k = item.value("k", size_t{0});
        e.d = item.value("d", size_t{0});
        e.omega = item.value("omega", size_t{0});
        e.rank = item.value("rank", size_t{0});
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace cxc
