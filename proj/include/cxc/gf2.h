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

#ifndef CXC_GF2_H
#define CXC_GF2_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cxc {

/// Dense bit vector over GF(2), packed into 64-bit words.
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(size_t num_bits);

    static BitVec from_string(const std::string &bits);

    size_t size() const { return num_bits_; }
    size_t num_words() const { return words_.size(); }

    bool get(size_t i) const;
    void set(size_t i, bool value);
    void flip(size_t i);

    BitVec &operator^=(const BitVec &other);
    BitVec &operator&=(const BitVec &other);
    bool operator==(const BitVec &other) const = default;

    size_t popcount() const;
    bool any() const;
    /// Parity of the bitwise AND.
    bool dot(const BitVec &other) const;
    /// Indices of the set bits, ascending.
    std::vector<size_t> support() const;
    std::string to_string() const;

    std::span<uint64_t> words() { return words_; }
    std::span<const uint64_t> words() const { return words_; }

   private:
    size_t num_bits_ = 0;
    std::vector<uint64_t> words_;
};

/// Row-major bit-packed binary matrix.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols);

    static BitMatrix identity(size_t n);
    static BitMatrix from_rows(const std::vector<BitVec> &rows, size_t cols);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t words_per_row() const { return words_per_row_; }

    /// Bounds-checked accessors; throw std::out_of_range.
    bool at(size_t i, size_t j) const;
    void set(size_t i, size_t j, bool value);

    bool get_unchecked(size_t i, size_t j) const {
        return (data_[i * words_per_row_ + (j >> 6)] >> (j & 63)) & 1;
    }
    void flip_unchecked(size_t i, size_t j) { data_[i * words_per_row_ + (j >> 6)] ^= uint64_t{1} << (j & 63); }

    std::span<uint64_t> row_words(size_t i) { return {data_.data() + i * words_per_row_, words_per_row_}; }
    std::span<const uint64_t> row_words(size_t i) const {
        return {data_.data() + i * words_per_row_, words_per_row_};
    }
    BitVec row(size_t i) const;
    size_t row_weight(size_t i) const;
    size_t col_weight(size_t j) const;
    std::vector<size_t> row_support(size_t i) const;
    std::vector<size_t> col_support(size_t j) const;

    /// Matrix-vector product over GF(2).
    BitVec apply(const BitVec &v) const;
    bool is_zero() const;

    bool operator==(const BitMatrix &other) const = default;

    /// "rows cols" on the first line, then one 0/1 string per row.
    std::string to_text() const;
    static BitMatrix from_text(const std::string &text);

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t words_per_row_ = 0;
    std::vector<uint64_t> data_;
};

/// Univariate GF(2) polynomial modulo x^n + 1, stored as its support.
class CyclicPoly {
   public:
    CyclicPoly() = default;
    /// Throws std::invalid_argument unless n >= 1, the support is non-empty,
    /// duplicate-free, and every exponent lies in [0, n).
    CyclicPoly(uint32_t modulus, std::vector<uint32_t> support);

    uint32_t modulus() const { return modulus_; }
    const std::vector<uint32_t> &support() const { return support_; }
    size_t weight() const { return support_.size(); }
    /// Polynomial of the transposed circulant: exponents negated mod n.
    CyclicPoly reversed() const;
    std::string to_string() const;

    bool operator==(const CyclicPoly &other) const = default;

   private:
    uint32_t modulus_ = 1;
    std::vector<uint32_t> support_;
};

BitMatrix circulant_matrix(const CyclicPoly &p);
BitMatrix transpose(const BitMatrix &m);
BitMatrix matmul_gf2(const BitMatrix &a, const BitMatrix &b);
BitMatrix kron(const BitMatrix &a, const BitMatrix &b);
BitMatrix hstack(const BitMatrix &left, const BitMatrix &right);

size_t gf2_rank(const BitMatrix &m);

/// Reduced row echelon form with leftmost-column-first pivoting.
struct RowEchelon {
    BitMatrix reduced;  // only the first pivot_cols.size() rows are non-zero
    std::vector<size_t> pivot_cols;
};
RowEchelon row_reduce(BitMatrix m);

/// Basis of the right null space {v : M v = 0}, one vector per free column.
std::vector<BitVec> kernel_basis(const BitMatrix &m);

/// Incrementally built basis of a GF(2) subspace. Each stored vector's lowest
/// set bit is its pivot and no two vectors share a pivot.
class EchelonBasis {
   public:
    explicit EchelonBasis(size_t num_bits) : num_bits_(num_bits) {}

    /// Adds `v` if it is independent of the current span; returns whether it was.
    bool insert(const BitVec &v);
    bool contains(const BitVec &v) const;
    size_t rank() const { return vectors_.size(); }

   private:
    void reduce(BitVec &v) const;

    size_t num_bits_;
    std::vector<BitVec> vectors_;
    std::vector<int64_t> pivot_owner_;  // bit -> index in vectors_, or -1
};

/// Rank of circulant(p) from deg gcd(p(x), x^n + 1). Cross-check only.
size_t circulant_rank_by_gcd(const CyclicPoly &p);

}  // namespace cxc

#endif
