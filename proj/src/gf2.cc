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

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cxc {

namespace {

size_t words_for(size_t bits) { return (bits + 63) / 64; }

void xor_words(std::span<uint64_t> dst, std::span<const uint64_t> src) {
    for (size_t k = 0; k < dst.size(); k++) {
        dst[k] ^= src[k];
    }
}

}  // namespace

BitVec::BitVec(size_t num_bits) : num_bits_(num_bits), words_(words_for(num_bits), 0) {}

BitVec BitVec::from_string(const std::string &bits) {
    BitVec v(bits.size());
    for (size_t i = 0; i < bits.size(); i++) {
        if (bits[i] == '1') {
            v.set(i, true);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("bit string contains a character other than 0/1");
        }
    }
    return v;
}

bool BitVec::get(size_t i) const {
    if (i >= num_bits_) {
        throw std::out_of_range("BitVec index out of range");
    }
    return (words_[i >> 6] >> (i & 63)) & 1;
}

void BitVec::set(size_t i, bool value) {
    if (i >= num_bits_) {
        throw std::out_of_range("BitVec index out of range");
    }
    uint64_t mask = uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

void BitVec::flip(size_t i) {
    if (i >= num_bits_) {
        throw std::out_of_range("BitVec index out of range");
    }
    words_[i >> 6] ^= uint64_t{1} << (i & 63);
}

BitVec &BitVec::operator^=(const BitVec &other) {
    if (other.num_bits_ != num_bits_) {
        throw std::invalid_argument("BitVec size mismatch");
    }
    xor_words(words_, other.words_);
    return *this;
}

BitVec &BitVec::operator&=(const BitVec &other) {
    if (other.num_bits_ != num_bits_) {
        throw std::invalid_argument("BitVec size mismatch");
    }
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] &= other.words_[k];
    }
    return *this;
}

size_t BitVec::popcount() const {
    size_t total = 0;
    for (uint64_t w : words_) {
        total += std::popcount(w);
    }
    return total;
}

bool BitVec::any() const {
    return std::any_of(words_.begin(), words_.end(), [](uint64_t w) { return w != 0; });
}

bool BitVec::dot(const BitVec &other) const {
    if (other.num_bits_ != num_bits_) {
        throw std::invalid_argument("BitVec size mismatch");
    }
    uint64_t acc = 0;
    for (size_t k = 0; k < words_.size(); k++) {
        acc ^= words_[k] & other.words_[k];
    }
    return std::popcount(acc) & 1;
}

std::vector<size_t> BitVec::support() const {
    std::vector<size_t> out;
    for (size_t k = 0; k < words_.size(); k++) {
        uint64_t w = words_[k];
        while (w) {
            out.push_back(k * 64 + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

std::string BitVec::to_string() const {
    std::string s(num_bits_, '0');
    for (size_t i : support()) {
        s[i] = '1';
    }
    return s;
}

BitMatrix::BitMatrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), words_per_row_(words_for(cols)), data_(rows * words_for(cols), 0) {}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        m.flip_unchecked(i, i);
    }
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<BitVec> &rows, size_t cols) {
    BitMatrix m(rows.size(), cols);
    for (size_t i = 0; i < rows.size(); i++) {
        if (rows[i].size() != cols) {
            throw std::invalid_argument("row length does not match column count");
        }
        std::copy(rows[i].words().begin(), rows[i].words().end(), m.row_words(i).begin());
    }
    return m;
}

bool BitMatrix::at(size_t i, size_t j) const {
    if (i >= rows_ || j >= cols_) {
        throw std::out_of_range("BitMatrix index out of range");
    }
    return get_unchecked(i, j);
}

void BitMatrix::set(size_t i, size_t j, bool value) {
    if (i >= rows_ || j >= cols_) {
        throw std::out_of_range("BitMatrix index out of range");
    }
    if (get_unchecked(i, j) != value) {
        flip_unchecked(i, j);
    }
}

BitVec BitMatrix::row(size_t i) const {
    if (i >= rows_) {
        throw std::out_of_range("BitMatrix row out of range");
    }
    BitVec v(cols_);
    auto src = row_words(i);
    std::copy(src.begin(), src.end(), v.words().begin());
    return v;
}

size_t BitMatrix::row_weight(size_t i) const {
    size_t total = 0;
    for (uint64_t w : row_words(i)) {
        total += std::popcount(w);
    }
    return total;
}

size_t BitMatrix::col_weight(size_t j) const {
    size_t total = 0;
    for (size_t i = 0; i < rows_; i++) {
        total += get_unchecked(i, j);
    }
    return total;
}

std::vector<size_t> BitMatrix::row_support(size_t i) const { return row(i).support(); }

std::vector<size_t> BitMatrix::col_support(size_t j) const {
    if (j >= cols_) {
        throw std::out_of_range("BitMatrix column out of range");
    }
    std::vector<size_t> out;
    for (size_t i = 0; i < rows_; i++) {
        if (get_unchecked(i, j)) {
            out.push_back(i);
        }
    }
    return out;
}

BitVec BitMatrix::apply(const BitVec &v) const {
    if (v.size() != cols_) {
        throw std::invalid_argument("matrix-vector dimension mismatch");
    }
    BitVec out(rows_);
    auto vw = v.words();
    for (size_t i = 0; i < rows_; i++) {
        uint64_t acc = 0;
        auto rw = row_words(i);
        for (size_t k = 0; k < words_per_row_; k++) {
            acc ^= rw[k] & vw[k];
        }
        if (std::popcount(acc) & 1) {
            out.flip(i);
        }
    }
    return out;
}

bool BitMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](uint64_t w) { return w == 0; });
}

std::string BitMatrix::to_text() const {
    std::ostringstream out;
    out << rows_ << ' ' << cols_ << '\n';
    for (size_t i = 0; i < rows_; i++) {
        for (size_t j = 0; j < cols_; j++) {
            out << (get_unchecked(i, j) ? '1' : '0');
        }
        out << '\n';
    }
    return out.str();
}

BitMatrix BitMatrix::from_text(const std::string &text) {
    std::istringstream in(text);
    size_t rows = 0;
    size_t cols = 0;
    if (!(in >> rows >> cols)) {
        throw std::invalid_argument("matrix text is missing the 'rows cols' header");
    }
    BitMatrix m(rows, cols);
    for (size_t i = 0; i < rows; i++) {
        std::string line;
        if (!(in >> line) || line.size() != cols) {
            throw std::invalid_argument("matrix text row " + std::to_string(i) + " is malformed");
        }
        for (size_t j = 0; j < cols; j++) {
            if (line[j] == '1') {
                m.flip_unchecked(i, j);
            } else if (line[j] != '0') {
                throw std::invalid_argument("matrix text contains a character other than 0/1");
            }
        }
    }
    return m;
}

CyclicPoly::CyclicPoly(uint32_t modulus, std::vector<uint32_t> support) : modulus_(modulus), support_(std::move(support)) {
    if (modulus_ == 0) {
        throw std::invalid_argument("cyclic polynomial modulus must be positive");
    }
    if (support_.empty()) {
        throw std::invalid_argument("cyclic polynomial support must be non-empty");
    }
    std::sort(support_.begin(), support_.end());
    if (std::adjacent_find(support_.begin(), support_.end()) != support_.end()) {
        throw std::invalid_argument("cyclic polynomial support contains a duplicate exponent");
    }
    if (support_.back() >= modulus_) {
        throw std::invalid_argument("cyclic polynomial exponent out of range");
    }
}

CyclicPoly CyclicPoly::reversed() const {
    std::vector<uint32_t> s;
    s.reserve(support_.size());
    for (uint32_t e : support_) {
        s.push_back((modulus_ - e) % modulus_);
    }
    return CyclicPoly(modulus_, std::move(s));
}

std::string CyclicPoly::to_string() const {
    std::string out;
    for (size_t i = 0; i < support_.size(); i++) {
        if (i) {
            out += ',';
        }
        out += std::to_string(support_[i]);
    }
    return out;
}

BitMatrix circulant_matrix(const CyclicPoly &p) {
    size_t n = p.modulus();
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        for (uint32_t e : p.support()) {
            m.flip_unchecked(i, (i + e) % n);
        }
    }
    return m;
}

BitMatrix transpose(const BitMatrix &m) {
    BitMatrix t(m.cols(), m.rows());
    for (size_t i = 0; i < m.rows(); i++) {
        auto rw = m.row_words(i);
        for (size_t k = 0; k < rw.size(); k++) {
            uint64_t w = rw[k];
            while (w) {
                t.flip_unchecked(k * 64 + std::countr_zero(w), i);
                w &= w - 1;
            }
        }
    }
    return t;
}

BitMatrix matmul_gf2(const BitMatrix &a, const BitMatrix &b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul_gf2: inner dimensions disagree");
    }
    BitMatrix out(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); i++) {
        auto dst = out.row_words(i);
        auto rw = a.row_words(i);
        for (size_t k = 0; k < rw.size(); k++) {
            uint64_t w = rw[k];
            while (w) {
                xor_words(dst, b.row_words(k * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }
    return out;
}

BitMatrix kron(const BitMatrix &a, const BitMatrix &b) {
    constexpr size_t limit = std::numeric_limits<size_t>::max();
    if ((b.rows() != 0 && a.rows() > limit / b.rows()) || (b.cols() != 0 && a.cols() > limit / b.cols())) {
        throw std::overflow_error("kron: dimension product overflows");
    }
    BitMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); i++) {
        for (size_t j : a.row_support(i)) {
            for (size_t r = 0; r < b.rows(); r++) {
                for (size_t c : b.row_support(r)) {
                    out.flip_unchecked(i * b.rows() + r, j * b.cols() + c);
                }
            }
        }
    }
    return out;
}

BitMatrix hstack(const BitMatrix &left, const BitMatrix &right) {
    if (left.rows() != right.rows()) {
        throw std::invalid_argument("hstack: row counts disagree");
    }
    BitMatrix out(left.rows(), left.cols() + right.cols());
    for (size_t i = 0; i < left.rows(); i++) {
        for (size_t j : left.row_support(i)) {
            out.flip_unchecked(i, j);
        }
        for (size_t j : right.row_support(i)) {
            out.flip_unchecked(i, left.cols() + j);
        }
    }
    return out;
}

RowEchelon row_reduce(BitMatrix m) {
    RowEchelon result;
    size_t r = 0;
    const size_t wpr = m.words_per_row();
    std::vector<uint64_t> tmp(wpr);
    for (size_t col = 0; col < m.cols() && r < m.rows(); col++) {
        size_t pivot = r;
        while (pivot < m.rows() && !m.get_unchecked(pivot, col)) {
            pivot++;
        }
        if (pivot == m.rows()) {
            continue;
        }
        if (pivot != r) {
            auto a = m.row_words(pivot);
            auto b = m.row_words(r);
            std::swap_ranges(a.begin(), a.end(), b.begin());
        }
        auto prow = m.row_words(r);
        std::copy(prow.begin(), prow.end(), tmp.begin());
        for (size_t i = 0; i < m.rows(); i++) {
            if (i != r && m.get_unchecked(i, col)) {
                xor_words(m.row_words(i), tmp);
            }
        }
        result.pivot_cols.push_back(col);
        r++;
    }
    result.reduced = std::move(m);
    return result;
}

size_t gf2_rank(const BitMatrix &m) {
    // Forward elimination only; the reduced form is not needed.
    BitMatrix w = m;
    size_t r = 0;
    for (size_t col = 0; col < w.cols() && r < w.rows(); col++) {
        size_t pivot = r;
        while (pivot < w.rows() && !w.get_unchecked(pivot, col)) {
            pivot++;
        }
        if (pivot == w.rows()) {
            continue;
        }
        if (pivot != r) {
            auto a = w.row_words(pivot);
            auto b = w.row_words(r);
            std::swap_ranges(a.begin(), a.end(), b.begin());
        }
        auto prow = w.row_words(r);
        for (size_t i = r + 1; i < w.rows(); i++) {
            if (w.get_unchecked(i, col)) {
                xor_words(w.row_words(i), prow);
            }
        }
        r++;
    }
    return r;
}

std::vector<BitVec> kernel_basis(const BitMatrix &m) {
    RowEchelon ech = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t c : ech.pivot_cols) {
        is_pivot[c] = true;
    }
    std::vector<BitVec> basis;
    for (size_t free = 0; free < m.cols(); free++) {
        if (is_pivot[free]) {
            continue;
        }
        BitVec v(m.cols());
        v.set(free, true);
        for (size_t r = 0; r < ech.pivot_cols.size(); r++) {
            if (ech.reduced.get_unchecked(r, free)) {
                v.set(ech.pivot_cols[r], true);
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

void EchelonBasis::reduce(BitVec &v) const {
    // Stored vectors have no bits below their pivot, so one ascending sweep suffices.
    auto w = v.words();
    for (size_t k = 0; k < w.size(); k++) {
        uint64_t pending = w[k];
        while (pending) {
            unsigned offset = std::countr_zero(pending);
            size_t bit = k * 64 + offset;
            if (bit < pivot_owner_.size() && pivot_owner_[bit] >= 0) {
                v ^= vectors_[pivot_owner_[bit]];
            }
            uint64_t above = offset == 63 ? 0 : ~((uint64_t{2} << offset) - 1);
            pending = w[k] & above;
        }
    }
}

bool EchelonBasis::insert(const BitVec &v) {
    if (v.size() != num_bits_) {
        throw std::invalid_argument("EchelonBasis: vector length mismatch");
    }
    BitVec r = v;
    reduce(r);
    if (!r.any()) {
        return false;
    }
    size_t pivot = r.support().front();
    if (pivot_owner_.empty()) {
        pivot_owner_.assign(num_bits_, -1);
    }
    pivot_owner_[pivot] = static_cast<int64_t>(vectors_.size());
    vectors_.push_back(std::move(r));
    return true;
}

bool EchelonBasis::contains(const BitVec &v) const {
    if (v.size() != num_bits_) {
        throw std::invalid_argument("EchelonBasis: vector length mismatch");
    }
    BitVec r = v;
    reduce(r);
    return !r.any();
}

namespace {

using Gf2Poly = std::vector<uint8_t>;  // coefficient i at index i, no trailing zeros

void trim(Gf2Poly &p) {
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

Gf2Poly poly_mod(Gf2Poly a, const Gf2Poly &b) {
    while (a.size() >= b.size()) {
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); i++) {
            a[shift + i] ^= b[i];
        }
        trim(a);
    }
    return a;
}

}  // namespace

size_t circulant_rank_by_gcd(const CyclicPoly &p) {
    size_t n = p.modulus();
    Gf2Poly a(n, 0);
    for (uint32_t e : p.support()) {
        a[e] ^= 1;
    }
    trim(a);
    Gf2Poly b(n + 1, 0);
    b[0] = 1;
    b[n] = 1;
    while (!a.empty()) {
        Gf2Poly r = poly_mod(b, a);
        b = std::move(a);
        a = std::move(r);
    }
    return n - (b.size() - 1);
}

}  // namespace cxc
