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

#include "cxc/gf2.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace cxc;

namespace {

// Rank as log2 of the row-space size, by enumerating every row combination.
size_t brute_force_rank(const BitMatrix &m) {
    std::set<std::string> span;
    const size_t r = m.rows();
    for (uint64_t mask = 0; mask < (uint64_t{1} << r); mask++) {
        BitVec acc(m.cols());
        for (size_t i = 0; i < r; i++) {
            if ((mask >> i) & 1) {
                acc ^= m.row(i);
            }
        }
        span.insert(acc.to_string());
    }
    size_t rank = 0;
    while ((size_t{1} << rank) < span.size()) {
        rank++;
    }
    return rank;
}

BitMatrix random_matrix(size_t rows, size_t cols, std::mt19937_64 &rng) {
    BitMatrix m(rows, cols);
    std::bernoulli_distribution coin(0.5);
    for (size_t i = 0; i < rows; i++) {
        for (size_t j = 0; j < cols; j++) {
            m.set(i, j, coin(rng));
        }
    }
    return m;
}

}  // namespace

TEST(circulant, identity_case) { EXPECT_EQ(circulant_matrix(CyclicPoly(3, {0})), BitMatrix::identity(3)); }

TEST(circulant, single_shift) {
    BitMatrix q = circulant_matrix(CyclicPoly(3, {1}));
    for (size_t i = 0; i < 3; i++) {
        for (size_t j = 0; j < 3; j++) {
            EXPECT_EQ(q.at(i, j), j == (i + 1) % 3);
        }
    }
}

TEST(circulant, full_support_is_all_ones) {
    BitMatrix m = circulant_matrix(CyclicPoly(2, {0, 1}));
    EXPECT_EQ(m.to_text(), "2 2\n11\n11\n");
}

TEST(circulant, row_and_column_weights) {
    BitMatrix m = circulant_matrix(CyclicPoly(11, {0, 2, 7}));
    for (size_t i = 0; i < 11; i++) {
        EXPECT_EQ(m.row_weight(i), 3u);
        EXPECT_EQ(m.col_weight(i), 3u);
    }
}

TEST(cyclic_poly, rejects_invalid_supports) {
    EXPECT_THROW(CyclicPoly(5, {}), std::invalid_argument);
    EXPECT_THROW(CyclicPoly(5, {1, 1}), std::invalid_argument);
    EXPECT_THROW(CyclicPoly(5, {5}), std::invalid_argument);
    EXPECT_THROW(CyclicPoly(0, {0}), std::invalid_argument);
}

TEST(bit_matrix, out_of_range_access_throws) {
    BitMatrix m(2, 3);
    EXPECT_THROW(m.at(2, 0), std::out_of_range);
    EXPECT_THROW(m.at(0, 3), std::out_of_range);
    EXPECT_THROW(m.set(5, 5, true), std::out_of_range);
}

TEST(rank, identity) {
    for (size_t n : {1, 4, 65, 130}) {
        EXPECT_EQ(gf2_rank(BitMatrix::identity(n)), n);
    }
}

TEST(rank, one_plus_x_drops_one) {
    for (uint32_t n = 2; n <= 70; n++) {
        EXPECT_EQ(gf2_rank(circulant_matrix(CyclicPoly(n, {0, 1}))), n - 1) << n;
    }
}

TEST(rank, hamming_generator) { EXPECT_EQ(gf2_rank(circulant_matrix(CyclicPoly(7, {0, 1, 3}))), 4u); }

TEST(rank, matches_brute_force_and_gcd_for_small_circulants) {
    for (uint32_t n = 1; n <= 12; n++) {
        for (uint32_t a = 0; a < n; a++) {
            for (uint32_t b = a; b < n; b++) {
                for (uint32_t c = b; c < n; c++) {
                    std::set<uint32_t> s{a, b, c};
                    CyclicPoly p(n, std::vector<uint32_t>(s.begin(), s.end()));
                    BitMatrix m = circulant_matrix(p);
                    size_t r = gf2_rank(m);
                    EXPECT_EQ(r, brute_force_rank(m)) << n << " " << p.to_string();
                    EXPECT_EQ(r, circulant_rank_by_gcd(p)) << n << " " << p.to_string();
                    EXPECT_LE(r, n);
                }
            }
        }
    }
}

TEST(rank, random_matrices_match_brute_force) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; trial++) {
        BitMatrix m = random_matrix(1 + trial % 9, 1 + (trial * 7) % 80, rng);
        EXPECT_EQ(gf2_rank(m), brute_force_rank(m));
        EXPECT_EQ(gf2_rank(m), row_reduce(m).pivot_cols.size());
    }
}

TEST(kernel, identity_is_trivial) { EXPECT_TRUE(kernel_basis(BitMatrix::identity(3)).empty()); }

TEST(kernel, one_plus_x_on_three) {
    auto basis = kernel_basis(circulant_matrix(CyclicPoly(3, {0, 1})));
    ASSERT_EQ(basis.size(), 1u);
    EXPECT_EQ(basis[0].to_string(), "111");
}

TEST(kernel, hamming_generator_has_three_vectors) {
    BitMatrix m = circulant_matrix(CyclicPoly(7, {0, 1, 3}));
    auto basis = kernel_basis(m);
    EXPECT_EQ(basis.size(), 3u);
    for (const auto &v : basis) {
        EXPECT_FALSE(m.apply(v).any());
    }
}

TEST(kernel, basis_is_complete_and_independent) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; trial++) {
        BitMatrix m = random_matrix(3 + trial % 20, 5 + trial % 70, rng);
        auto basis = kernel_basis(m);
        EXPECT_EQ(basis.size() + gf2_rank(m), m.cols());
        for (const auto &v : basis) {
            EXPECT_FALSE(m.apply(v).any());
        }
        if (!basis.empty()) {
            EXPECT_EQ(gf2_rank(BitMatrix::from_rows(basis, m.cols())), basis.size());
        }
    }
}

TEST(kron, identities) { EXPECT_EQ(kron(BitMatrix::identity(2), BitMatrix::identity(3)), BitMatrix::identity(6)); }

TEST(kron, block_swap) {
    BitMatrix k = kron(circulant_matrix(CyclicPoly(2, {1})), BitMatrix::identity(2));
    EXPECT_EQ(k.to_text(), "4 4\n0010\n0001\n1000\n0100\n");
}

TEST(kron, dimensions) {
    BitMatrix k = kron(BitMatrix(3, 3), BitMatrix(5, 5));
    EXPECT_EQ(k.rows(), 15u);
    EXPECT_EQ(k.cols(), 15u);
}

TEST(kron, transpose_distributes) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; trial++) {
        BitMatrix a = random_matrix(2 + trial % 4, 3 + trial % 5, rng);
        BitMatrix b = random_matrix(1 + trial % 3, 2 + trial % 6, rng);
        EXPECT_EQ(transpose(kron(a, b)), kron(transpose(a), transpose(b)));
    }
}

TEST(matmul, identity_is_neutral) {
    std::mt19937_64 rng(5);
    BitMatrix a = random_matrix(7, 70, rng);
    EXPECT_EQ(matmul_gf2(a, BitMatrix::identity(70)), a);
}

TEST(matmul, shift_composition_and_transpose) {
    for (uint32_t n : {5u, 9u, 70u}) {
        for (uint32_t l = 0; l < n; l += 2) {
            for (uint32_t m = 0; m < n; m += 3) {
                EXPECT_EQ(matmul_gf2(circulant_matrix(CyclicPoly(n, {l})), circulant_matrix(CyclicPoly(n, {m}))),
                          circulant_matrix(CyclicPoly(n, {(l + m) % n})));
            }
            EXPECT_EQ(transpose(circulant_matrix(CyclicPoly(n, {l}))),
                      circulant_matrix(CyclicPoly(n, {(n - l) % n})));
        }
    }
}

TEST(matmul, dimension_mismatch_throws) { EXPECT_THROW(matmul_gf2(BitMatrix(2, 3), BitMatrix(2, 3)), std::invalid_argument); }

TEST(matmul, circulants_commute) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; trial++) {
        uint32_t n = 2 + trial % 15;
        std::uniform_int_distribution<uint32_t> exp(0, n - 1);
        std::set<uint32_t> s1{exp(rng), exp(rng), exp(rng)};
        std::set<uint32_t> s2{exp(rng), exp(rng)};
        BitMatrix p = circulant_matrix(CyclicPoly(n, {s1.begin(), s1.end()}));
        BitMatrix q = circulant_matrix(CyclicPoly(n, {s2.begin(), s2.end()}));
        EXPECT_EQ(matmul_gf2(p, q), matmul_gf2(q, p));
    }
}

TEST(text_format, round_trip_and_errors) {
    std::mt19937_64 rng(17);
    BitMatrix m = random_matrix(5, 9, rng);
    EXPECT_EQ(BitMatrix::from_text(m.to_text()), m);
    EXPECT_THROW(BitMatrix::from_text("2 2\n01\n"), std::invalid_argument);
    EXPECT_THROW(BitMatrix::from_text("1 2\n0x\n"), std::invalid_argument);
}
