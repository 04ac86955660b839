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

#include "cxc/decoder.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cxc/parallel.h"
#include "json.hpp"

namespace cxc {

// ---------------------------------------------------------------------------
// Sparse matrix

SparseCheckMatrix::SparseCheckMatrix(const BitMatrix &h) {
    std::vector<std::vector<uint32_t>> col_rows(h.cols());
    for (size_t r = 0; r < h.rows(); r++) {
        for (size_t c : h.row_support(r)) {
            col_rows[c].push_back(static_cast<uint32_t>(r));
        }
    }
    build(h.rows(), h.cols(), col_rows);
}

SparseCheckMatrix SparseCheckMatrix::from_dem(const DetectorErrorModel &dem) {
    std::vector<std::vector<uint32_t>> col_rows;
    col_rows.reserve(dem.faults.size());
    for (const DemFault &f : dem.faults) {
        col_rows.push_back(f.detectors);
    }
    SparseCheckMatrix m;
    m.build(dem.num_detectors, dem.faults.size(), col_rows);
    return m;
}

void SparseCheckMatrix::build(size_t rows, size_t cols, const std::vector<std::vector<uint32_t>> &col_rows) {
    std::vector<uint32_t> row_count(rows, 0);
    for (const auto &rs : col_rows) {
        for (uint32_t r : rs) {
            if (r >= rows) {
                throw std::out_of_range("check matrix row index out of range");
            }
            row_count[r]++;
        }
    }
    row_start_.assign(rows + 1, 0);
    for (size_t r = 0; r < rows; r++) {
        row_start_[r + 1] = row_start_[r] + row_count[r];
    }
    const size_t edges = row_start_[rows];
    edge_col_.assign(edges, 0);
    edge_row_.assign(edges, 0);
    col_start_.assign(cols + 1, 0);
    col_edges_.assign(edges, 0);
    std::vector<uint32_t> fill(row_start_.begin(), row_start_.end() - 1);
    // Columns in ascending order keep each row's edges sorted by column.
    for (size_t c = 0; c < cols; c++) {
        for (uint32_t r : col_rows[c]) {
            uint32_t e = fill[r]++;
            edge_col_[e] = static_cast<uint32_t>(c);
            edge_row_[e] = r;
        }
        col_start_[c + 1] = col_start_[c] + static_cast<uint32_t>(col_rows[c].size());
    }
    std::vector<uint32_t> col_fill(col_start_.begin(), col_start_.end() - 1);
    for (uint32_t e = 0; e < edges; e++) {
        col_edges_[col_fill[edge_col_[e]]++] = e;
    }
}

std::vector<uint32_t> SparseCheckMatrix::row_support(size_t r) const {
    return {edge_col_.begin() + row_start_[r], edge_col_.begin() + row_start_[r + 1]};
}

std::vector<uint32_t> SparseCheckMatrix::col_support(size_t c) const {
    std::vector<uint32_t> out;
    for (const uint32_t *e = col_edges_begin(c); e != col_edges_end(c); ++e) {
        out.push_back(edge_row_[*e]);
    }
    return out;
}

BitVec SparseCheckMatrix::syndrome_of(const BitVec &error) const {
    if (error.size() != cols()) {
        throw std::invalid_argument("error length does not match the check matrix");
    }
    BitVec s(rows());
    for (size_t r = 0; r < rows(); r++) {
        bool parity = false;
        for (uint32_t e = row_start_[r]; e < row_start_[r + 1]; e++) {
            parity ^= error.get(edge_col_[e]);
        }
        if (parity) {
            s.set(r, true);
        }
    }
    return s;
}

BitVec SparseCheckMatrix::column(size_t c) const {
    BitVec v(rows());
    for (const uint32_t *e = col_edges_begin(c); e != col_edges_end(c); ++e) {
        v.flip(edge_row_[*e]);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Config

std::string osd_mode_name(OsdMode m) { return m == OsdMode::Exhaustive ? "osd_e" : "osd_cs"; }

OsdMode parse_osd_mode(const std::string &name) {
    if (name == "osd_e" || name == "exhaustive") {
        return OsdMode::Exhaustive;
    }
    if (name == "osd_cs" || name == "combination_sweep") {
        return OsdMode::CombinationSweep;
    }
    throw std::invalid_argument("unknown osd_mode '" + name + "' (expected osd_e or osd_cs)");
}

std::string DecoderConfig::to_json() const {
    nlohmann::ordered_json j;
    j["max_iter"] = max_iter;
    j["osd_order"] = osd_order;
    j["osd_mode"] = osd_mode_name(osd_mode);
    j["clamp"] = clamp;
    j["force_osd"] = force_osd;
    return j.dump();
}

DecoderConfig DecoderConfig::from_json(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) {
        throw std::invalid_argument("decoder config must be a JSON object");
    }
    DecoderConfig c;
    for (const auto &[key, value] : j.items()) {
        if (key == "max_iter") {
            c.max_iter = value.get<size_t>();
        } else if (key == "osd_order") {
            c.osd_order = value.get<size_t>();
        } else if (key == "osd_mode") {
            c.osd_mode = parse_osd_mode(value.get<std::string>());
        } else if (key == "clamp") {
            c.clamp = value.get<double>();
        } else if (key == "force_osd") {
            c.force_osd = value.get<bool>();
        } else {
            throw std::invalid_argument("unknown decoder config key '" + key + "'");
        }
    }
    if (!(c.clamp > 0.0)) {
        throw std::invalid_argument("decoder clamp must be positive");
    }
    if (c.osd_order > 20) {
        throw std::invalid_argument("osd_order above 20 is not supported");
    }
    return c;
}

// ---------------------------------------------------------------------------
// Belief propagation

namespace {

std::vector<double> llr_from_priors(const std::vector<double> &priors) {
    std::vector<double> out;
    out.reserve(priors.size());
    for (double p : priors) {
        if (!(p > 0.0 && p <= 0.5)) {
            throw std::invalid_argument("fault priors must lie in (0, 0.5]");
        }
        out.push_back(std::log((1 - p) / p));
    }
    return out;
}

double clamp_abs(double x, double c) { return std::max(-c, std::min(c, x)); }

}  // namespace

BeliefPropagation::BeliefPropagation(const SparseCheckMatrix &h, std::vector<double> priors, double clamp)
    : h_(h),
      prior_llr_(llr_from_priors(priors)),
      clamp_(clamp),
      to_check_(h.num_edges()),
      to_var_(h.num_edges()),
      posterior_(h.cols()),
      hard_(h.cols()) {
    if (priors.size() != h.cols()) {
        throw std::invalid_argument("one prior per fault is required");
    }
}

void BeliefPropagation::check_update(const BitVec &syndrome) {
    std::vector<double> t;
    std::vector<double> suffix;
    for (size_t r = 0; r < h_.rows(); r++) {
        const uint32_t b = h_.row_begin(r);
        const uint32_t e_end = h_.row_end(r);
        const size_t deg = e_end - b;
        t.resize(deg);
        suffix.resize(deg + 1);
        for (size_t i = 0; i < deg; i++) {
            t[i] = std::tanh(0.5 * to_check_[b + i]);
        }
        suffix[deg] = 1.0;
        for (size_t i = deg; i-- > 0;) {
            suffix[i] = suffix[i + 1] * t[i];
        }
        const double sign = syndrome.get(r) ? -1.0 : 1.0;
        double prefix = 1.0;
        for (size_t i = 0; i < deg; i++) {
            double prod = prefix * suffix[i + 1];
            double m = 2.0 * std::atanh(prod);
            to_var_[b + i] = clamp_abs(sign * m, clamp_);
            prefix *= t[i];
        }
    }
}

double BeliefPropagation::variable_update() {
    double change = 0.0;
    for (size_t c = 0; c < h_.cols(); c++) {
        double sum = prior_llr_[c];
        for (const uint32_t *e = h_.col_edges_begin(c); e != h_.col_edges_end(c); ++e) {
            sum += to_var_[*e];
        }
        posterior_[c] = sum;
        for (const uint32_t *e = h_.col_edges_begin(c); e != h_.col_edges_end(c); ++e) {
            double m = clamp_abs(sum - to_var_[*e], clamp_);
            change = std::max(change, std::abs(m - to_check_[*e]));
            to_check_[*e] = m;
        }
    }
    return change;
}

bool BeliefPropagation::hard_decision_matches(const BitVec &syndrome) {
    hard_ = BitVec(h_.cols());
    for (size_t c = 0; c < h_.cols(); c++) {
        if (posterior_[c] < 0.0) {
            hard_.set(c, true);
        }
    }
    for (size_t r = 0; r < h_.rows(); r++) {
        bool parity = false;
        for (uint32_t e = h_.row_begin(r); e < h_.row_end(r); e++) {
            parity ^= hard_.get(h_.edge_col(e));
        }
        if (parity != syndrome.get(r)) {
            return false;
        }
    }
    return true;
}

BpResult BeliefPropagation::decode(const BitVec &syndrome, size_t max_iter) {
    if (syndrome.size() != h_.rows()) {
        throw std::invalid_argument("syndrome length does not match the check matrix");
    }
    for (size_t c = 0; c < h_.cols(); c++) {
        posterior_[c] = prior_llr_[c];
        for (const uint32_t *e = h_.col_edges_begin(c); e != h_.col_edges_end(c); ++e) {
            to_check_[*e] = clamp_abs(prior_llr_[c], clamp_);
        }
    }
    BpResult out;
    auto finish = [&](bool converged, size_t iterations) {
        out.converged = converged;
        out.iterations = iterations;
        out.hard_decision = hard_;
        out.posterior_llr = posterior_;
        return out;
    };
    if (hard_decision_matches(syndrome)) {
        return finish(true, 0);
    }
    // Brent cycle detection on the variable-to-check messages, which fully
    // determine every later iteration.
    std::vector<double> saved = to_check_;
    size_t saved_iter = 0;
    size_t power = 1;
    const size_t bytes = to_check_.size() * sizeof(double);
    for (size_t it = 1; it <= max_iter; it++) {
        check_update(syndrome);
        double change = variable_update();
        if (hard_decision_matches(syndrome)) {
            return finish(true, it);
        }
        if (change <= kStationaryTolerance) {
            return finish(false, max_iter);
        }
        if (std::memcmp(saved.data(), to_check_.data(), bytes) == 0) {
            // Every state of the cycle has been visited without converging.
            size_t residue = (max_iter - it) % (it - saved_iter);
            for (size_t k = 0; k < residue; k++) {
                check_update(syndrome);
                variable_update();
            }
            hard_decision_matches(syndrome);
            return finish(false, max_iter);
        }
        if (it - saved_iter == power) {
            saved = to_check_;
            saved_iter = it;
            power *= 2;
        }
    }
    return finish(false, max_iter);
}

BpResult bp_decode(const SparseCheckMatrix &h, const std::vector<double> &priors, const BitVec &syndrome,
                   size_t max_iter, double clamp) {
    BeliefPropagation bp(h, priors, clamp);
    return bp.decode(syndrome, max_iter);
}

// ---------------------------------------------------------------------------
// Ordered statistics

namespace {

// Column basis in reliability order. Each stored vector has a distinct lowest
// set bit and remembers which basis columns it is built from.
class ColumnBasis {
   public:
    ColumnBasis(size_t rows, size_t capacity) : capacity_(capacity), owner_(rows, -1) {}

    size_t rank() const { return vecs_.size(); }
    const std::vector<uint32_t> &columns() const { return cols_; }

    // Reduces v in place; comb collects the basis slots used. Returns true
    // when v reduced to zero.
    bool reduce(BitVec &v, BitVec &comb) const {
        auto words = v.words();
        size_t w = 0;
        while (true) {
            while (w < words.size() && words[w] == 0) {
                w++;
            }
            if (w == words.size()) {
                return true;
            }
            size_t bit = 64 * w + std::countr_zero(words[w]);
            int64_t o = owner_[bit];
            if (o < 0) {
                return false;
            }
            v ^= vecs_[o];
            comb ^= combs_[o];
        }
    }

    // Inserts an already reduced, non-zero vector for column `col`.
    void insert(BitVec v, BitVec comb, uint32_t col) {
        size_t slot = vecs_.size();
        comb.set(slot, true);
        auto words = v.words();
        size_t w = 0;
        while (words[w] == 0) {
            w++;
        }
        owner_[64 * w + std::countr_zero(words[w])] = static_cast<int64_t>(slot);
        vecs_.push_back(std::move(v));
        combs_.push_back(std::move(comb));
        cols_.push_back(col);
    }

    BitVec empty_comb() const { return BitVec(capacity_); }

   private:
    size_t capacity_;
    std::vector<int64_t> owner_;
    std::vector<BitVec> vecs_;
    std::vector<BitVec> combs_;
    std::vector<uint32_t> cols_;
};

struct NonBasisColumn {
    uint32_t col;
    BitVec comb;  // basis slots that flip together with this column
};

}  // namespace

DecodeResult osd_postprocess(const SparseCheckMatrix &h, const std::vector<double> &posterior_llr,
                             const BitVec &syndrome, size_t order, OsdMode mode, size_t rank) {
    const size_t n = h.cols();
    if (posterior_llr.size() != n || syndrome.size() != h.rows()) {
        throw std::invalid_argument("OSD input dimensions do not match the check matrix");
    }
    std::vector<uint32_t> ranked(n);
    std::iota(ranked.begin(), ranked.end(), 0);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](uint32_t a, uint32_t b) { return posterior_llr[a] < posterior_llr[b]; });

    const size_t capacity = std::min(h.rows(), n);
    ColumnBasis basis(h.rows(), capacity);
    const bool want_all = mode == OsdMode::CombinationSweep;
    std::vector<NonBasisColumn> others;
    const size_t full_rank = rank == 0 ? capacity : rank;
    for (uint32_t col : ranked) {
        bool complete = basis.rank() >= full_rank;
        if (complete && !want_all && others.size() >= order) {
            break;
        }
        BitVec v = h.column(col);
        BitVec comb = basis.empty_comb();
        if (basis.reduce(v, comb)) {
            if (want_all || others.size() < order) {
                others.push_back({col, std::move(comb)});
            }
        } else {
            basis.insert(std::move(v), std::move(comb), col);
        }
    }

    BitVec s = syndrome;
    BitVec base = basis.empty_comb();
    if (!basis.reduce(s, base)) {
        throw std::domain_error("syndrome is not in the column space of the check matrix");
    }

    const std::vector<uint32_t> &basis_cols = basis.columns();
    auto soft_weight = [&](const BitVec &slots, const std::vector<size_t> &flips) {
        double w = 0.0;
        for (size_t slot : slots.support()) {
            w += posterior_llr[basis_cols[slot]];
        }
        for (size_t j : flips) {
            w += posterior_llr[others[j].col];
        }
        return w;
    };

    std::vector<std::vector<size_t>> patterns;
    const size_t head = std::min(order, others.size());
    if (mode == OsdMode::Exhaustive) {
        for (uint64_t mask = 0; mask < (uint64_t{1} << head); mask++) {
            std::vector<size_t> p;
            for (size_t j = 0; j < head; j++) {
                if ((mask >> j) & 1) {
                    p.push_back(j);
                }
            }
            patterns.push_back(std::move(p));
        }
    } else {
        patterns.push_back({});
        for (size_t j = 0; j < others.size(); j++) {
            patterns.push_back({j});
        }
        for (size_t i = 0; i < head; i++) {
            for (size_t j = i + 1; j < head; j++) {
                patterns.push_back({i, j});
            }
        }
    }

    double best_weight = 0.0;
    BitVec best_slots;
    const std::vector<size_t> *best_pattern = nullptr;
    for (const auto &p : patterns) {
        BitVec slots = base;
        for (size_t j : p) {
            slots ^= others[j].comb;
        }
        double w = soft_weight(slots, p);
        if (!best_pattern || w < best_weight) {
            best_weight = w;
            best_slots = std::move(slots);
            best_pattern = &p;
        }
    }

    DecodeResult out;
    out.correction = BitVec(n);
    for (size_t slot : best_slots.support()) {
        out.correction.set(basis_cols[slot], true);
    }
    for (size_t j : *best_pattern) {
        out.correction.set(others[j].col, true);
    }
    out.posterior_llr = posterior_llr;
    out.osd_used = true;
    out.osd_candidates = patterns.size();
    out.soft_weight = best_weight;
    return out;
}

// ---------------------------------------------------------------------------
// BP + OSD

namespace {

size_t sparse_rank(const SparseCheckMatrix &h) {
    BitMatrix dense(h.rows(), h.cols());
    for (size_t c = 0; c < h.cols(); c++) {
        for (uint32_t r : h.col_support(c)) {
            dense.set(r, c, true);
        }
    }
    return gf2_rank(dense);
}

double soft_weight_of(const BitVec &e, const std::vector<double> &llr) {
    double w = 0.0;
    for (size_t i : e.support()) {
        w += llr[i];
    }
    return w;
}

}  // namespace

BpOsdDecoder::BpOsdDecoder(const SparseCheckMatrix &h, std::vector<double> priors, DecoderConfig config, size_t rank)
    : h_(h), config_(config), rank_(rank == 0 ? sparse_rank(h) : rank), bp_(h, std::move(priors), config.clamp) {}

DecodeResult BpOsdDecoder::decode(const BitVec &syndrome) {
    BpResult bp = bp_.decode(syndrome, config_.max_iter);
    if (bp.converged && !config_.force_osd) {
        DecodeResult out;
        out.correction = std::move(bp.hard_decision);
        out.soft_weight = soft_weight_of(out.correction, bp.posterior_llr);
        out.posterior_llr = std::move(bp.posterior_llr);
        out.converged = true;
        out.iterations = bp.iterations;
        return out;
    }
    DecodeResult out = osd_postprocess(h_, bp.posterior_llr, syndrome, config_.osd_order, config_.osd_mode,
                                       rank_ == 0 ? 0 : rank_);
    out.converged = bp.converged;
    out.iterations = bp.iterations;
    return out;
}

std::string BatchDecodeResult::to_csv() const {
    std::ostringstream out;
    out << "shot,converged,iterations,failure_bits\n";
    for (const ShotDecode &s : per_shot) {
        out << s.shot << ',' << (s.converged ? 1 : 0) << ',' << s.iterations << ',' << s.failure_bits.to_string()
            << '\n';
    }
    return out.str();
}

BatchDecodeResult decode_batch(const DetectorErrorModel &dem, const ShotBatch &shots, const DecoderConfig &config,
                               size_t workers) {
    if (shots.detectors.rows() != dem.num_detectors || shots.observables.rows() != dem.num_observables) {
        throw std::invalid_argument("shot batch dimensions do not match the detector error model");
    }
    const size_t n_shots = shots.shots();
    const size_t k = dem.num_observables;
    BatchDecodeResult out;
    out.shots = n_shots;
    out.failures_per_logical.assign(k, 0);
    out.per_shot.resize(n_shots);
    if (dem.faults.empty()) {
        // Nothing can flip a detector or observable; predict all zeros.
        for (size_t s = 0; s < n_shots; s++) {
            ShotDecode &r = out.per_shot[s];
            r.shot = s;
            r.converged = true;
            r.failure_bits = BitVec(k);
            for (size_t l = 0; l < k; l++) {
                r.failure_bits.set(l, shots.observables.get_unchecked(l, s));
            }
        }
    } else {
        SparseCheckMatrix h = SparseCheckMatrix::from_dem(dem);
        const std::vector<double> priors = dem.priors();
        const size_t rank = sparse_rank(h);
        std::vector<char> osd_used(n_shots, 0);
        constexpr size_t kChunk = 64;
        const size_t chunks = (n_shots + kChunk - 1) / kChunk;
        parallel_for(chunks, workers, [&](size_t chunk) {
            BpOsdDecoder decoder(h, priors, config, rank);
            for (size_t s = chunk * kChunk; s < std::min(n_shots, (chunk + 1) * kChunk); s++) {
                BitVec syndrome(dem.num_detectors);
                for (size_t d = 0; d < dem.num_detectors; d++) {
                    if (shots.detectors.get_unchecked(d, s)) {
                        syndrome.set(d, true);
                    }
                }
                DecodeResult res = decoder.decode(syndrome);
                BitVec predicted(k);
                for (size_t f : res.correction.support()) {
                    for (uint32_t l : dem.faults[f].observables) {
                        predicted.flip(l);
                    }
                }
                ShotDecode &r = out.per_shot[s];
                r.shot = s;
                r.converged = res.converged;
                r.iterations = res.iterations;
                r.failure_bits = BitVec(k);
                for (size_t l = 0; l < k; l++) {
                    r.failure_bits.set(l, predicted.get(l) != shots.observables.get_unchecked(l, s));
                }
                osd_used[s] = res.osd_used;
            }
        });
        for (size_t s = 0; s < n_shots; s++) {
            out.osd_calls += osd_used[s];
        }
    }
    for (const ShotDecode &r : out.per_shot) {
        out.bp_converged += r.converged;
        out.failures += r.failure_bits.any();
        for (size_t l = 0; l < k; l++) {
            out.failures_per_logical[l] += r.failure_bits.get(l);
        }
    }
    return out;
}

}  // namespace cxc
