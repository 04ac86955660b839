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

#ifndef CXC_DECODER_H
#define CXC_DECODER_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cxc/gf2.h"
#include "cxc/noise_sim.h"

namespace cxc {

/// Compressed adjacency of a binary check matrix.
class SparseCheckMatrix {
   public:
    SparseCheckMatrix() = default;
    explicit SparseCheckMatrix(const BitMatrix &h);
    static SparseCheckMatrix from_dem(const DetectorErrorModel &dem);

    size_t rows() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }
    size_t cols() const { return col_start_.empty() ? 0 : col_start_.size() - 1; }
    size_t num_edges() const { return edge_col_.size(); }

    /// Edges of row r are [row_begin(r), row_end(r)); edges are numbered row-major.
    uint32_t row_begin(size_t r) const { return row_start_[r]; }
    uint32_t row_end(size_t r) const { return row_start_[r + 1]; }
    uint32_t edge_col(uint32_t e) const { return edge_col_[e]; }
    /// Edge ids incident to column c.
    const uint32_t *col_edges_begin(size_t c) const { return col_edges_.data() + col_start_[c]; }
    const uint32_t *col_edges_end(size_t c) const { return col_edges_.data() + col_start_[c + 1]; }
    std::vector<uint32_t> row_support(size_t r) const;
    std::vector<uint32_t> col_support(size_t c) const;

    BitVec syndrome_of(const BitVec &error) const;
    /// Column c as a dense bit vector of length rows().
    BitVec column(size_t c) const;

   private:
    void build(size_t rows, size_t cols, const std::vector<std::vector<uint32_t>> &col_rows);

    std::vector<uint32_t> row_start_;
    std::vector<uint32_t> edge_col_;
    std::vector<uint32_t> edge_row_;
    std::vector<uint32_t> col_start_;
    std::vector<uint32_t> col_edges_;
};

enum class OsdMode { Exhaustive, CombinationSweep };
std::string osd_mode_name(OsdMode m);
OsdMode parse_osd_mode(const std::string &name);

struct DecoderConfig {
    size_t max_iter = 10000;
    size_t osd_order = 5;
    OsdMode osd_mode = OsdMode::Exhaustive;
    double clamp = 30.0;
    bool force_osd = false;

    std::string to_json() const;
    /// Missing keys keep their defaults; unknown keys are rejected.
    static DecoderConfig from_json(const std::string &text);
};

struct BpResult {
    BitVec hard_decision;
    std::vector<double> posterior_llr;  // log((1 - p) / p) per fault
    bool converged = false;
    size_t iterations = 0;
};

struct DecodeResult {
    BitVec correction;
    std::vector<double> posterior_llr;
    bool converged = false;  // BP alone satisfied the syndrome
    size_t iterations = 0;
    bool osd_used = false;
    size_t osd_candidates = 0;
    double soft_weight = 0.0;  // sum of posterior LLRs over set bits
};

/// Sum-product BP with a flooding schedule and messages clamped to +-clamp.
/// Stops as soon as the hard decision reproduces the syndrome. A message state
/// that repeats exactly is a cycle, so the remaining iterations are skipped by
/// running only the residue of the cycle; the result equals running them all.
/// A state whose messages all move by at most kStationaryTolerance in one
/// iteration is treated as a fixed point and also ends the run unconverged.
class BeliefPropagation {
   public:
    static constexpr double kStationaryTolerance = 1e-9;

    BeliefPropagation(const SparseCheckMatrix &h, std::vector<double> priors, double clamp = 30.0);

    BpResult decode(const BitVec &syndrome, size_t max_iter);

   private:
    void check_update(const BitVec &syndrome);
    double variable_update();  // largest message change
    bool hard_decision_matches(const BitVec &syndrome);

    const SparseCheckMatrix &h_;
    std::vector<double> prior_llr_;
    double clamp_;
    std::vector<double> to_check_;  // variable -> check, per edge
    std::vector<double> to_var_;     // check -> variable, per edge
    std::vector<double> posterior_;
    BitVec hard_;
};

BpResult bp_decode(const SparseCheckMatrix &h, const std::vector<double> &priors, const BitVec &syndrome,
                   size_t max_iter = 10000, double clamp = 30.0);

/// Ordered-statistics post-processing. Columns are ranked by posterior LLR
/// (most likely faults first, ties by index); the first independent columns
/// form the basis that solves the syndrome. Exhaustive mode tries all 2^order
/// flip patterns over the first `order` non-basis columns; combination sweep
/// tries every single flip over all non-basis columns and every pair within
/// the first `order`. The minimum soft weight wins. Throws std::domain_error if
/// the syndrome is outside the column space.
/// `rank` = rank of h if known (lets elimination stop early), 0 if unknown.
DecodeResult osd_postprocess(const SparseCheckMatrix &h, const std::vector<double> &posterior_llr,
                             const BitVec &syndrome, size_t order, OsdMode mode = OsdMode::Exhaustive,
                             size_t rank = 0);

/// BP followed by OSD when BP fails (or always, with force_osd).
class BpOsdDecoder {
   public:
    /// `rank` as for osd_postprocess; computed here when 0.
    BpOsdDecoder(const SparseCheckMatrix &h, std::vector<double> priors, DecoderConfig config = {}, size_t rank = 0);

    DecodeResult decode(const BitVec &syndrome);
    size_t rank() const { return rank_; }

   private:
    const SparseCheckMatrix &h_;
    DecoderConfig config_;
    size_t rank_;
    BeliefPropagation bp_;
};

struct ShotDecode {
    size_t shot = 0;
    bool converged = false;
    size_t iterations = 0;
    BitVec failure_bits;  // per observable: predicted != actual
};

struct BatchDecodeResult {
    size_t shots = 0;
    size_t failures = 0;  // any observable wrong
    std::vector<size_t> failures_per_logical;
    size_t bp_converged = 0;
    size_t osd_calls = 0;
    std::vector<ShotDecode> per_shot;

    /// "shot,converged,iterations,failure_bits" header plus one row per shot.
    std::string to_csv() const;
};

/// Decodes every shot independently. Throws std::invalid_argument when the
/// batch dimensions do not match the model.
BatchDecodeResult decode_batch(const DetectorErrorModel &dem, const ShotBatch &shots, const DecoderConfig &config,
                               size_t workers = 1);

}  // namespace cxc

#endif
