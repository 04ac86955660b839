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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cxc/cxc_code.h"

using namespace cxc;

namespace {

CxcCode toric(uint32_t d) { return build_cxc(CyclicPoly(d, {0, 1}), CyclicPoly(d, {0, 1})); }

BitMatrix repetition(size_t n) {
    BitMatrix h(n - 1, n);
    for (size_t i = 0; i + 1 < n; i++) {
        h.set(i, i, true);
        h.set(i, i + 1, true);
    }
    return h;
}

bool satisfies(const SparseCheckMatrix &h, const BitVec &e, const BitVec &s) { return h.syndrome_of(e) == s; }

// Random DEM with every fault touching 1..3 detectors; some faults flip observables.
DetectorErrorModel random_dem(std::mt19937_64 &rng, size_t D, size_t F, size_t K, double p) {
    DetectorErrorModel dem;
    dem.num_detectors = D;
    dem.num_observables = K;
    std::uniform_int_distribution<size_t> det(0, D - 1), obs(0, K - 1), weight(1, 3);
    std::bernoulli_distribution coin(0.3);
    for (size_t f = 0; f < F; f++) {
        DemFault fault;
        fault.p = p * (0.5 + (f % 3) * 0.5);
        std::set<uint32_t> ds;
        size_t w = weight(rng);
        while (ds.size() < w) {
            ds.insert(static_cast<uint32_t>(det(rng)));
        }
        fault.detectors.assign(ds.begin(), ds.end());
        if (coin(rng)) {
            fault.observables.push_back(static_cast<uint32_t>(obs(rng)));
        }
        dem.faults.push_back(fault);
    }
    return dem;
}

// Samples faults straight from the DEM priors.
ShotBatch sample_dem(const DetectorErrorModel &dem, size_t shots, std::mt19937_64 &rng) {
    ShotBatch b;
    b.detectors = BitMatrix(dem.num_detectors, shots);
    b.observables = BitMatrix(dem.num_observables, shots);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (size_t s = 0; s < shots; s++) {
        for (size_t f = 0; f < dem.faults.size(); f++) {
            if (u(rng) < dem.faults[f].p) {
                for (uint32_t d : dem.faults[f].detectors) {
                    b.detectors.flip_unchecked(d, s);
                }
                for (uint32_t l : dem.faults[f].observables) {
                    b.observables.flip_unchecked(l, s);
                }
            }
        }
    }
    return b;
}

// Exhaustive coset-summed maximum likelihood: syndrome -> most probable
// observable flip pattern.
std::map<uint64_t, uint64_t> ml_table(const DetectorErrorModel &dem) {
    const size_t F = dem.faults.size();
    std::map<uint64_t, std::map<uint64_t, double>> mass;
    for (uint64_t mask = 0; mask < (uint64_t{1} << F); mask++) {
        uint64_t syn = 0, obs = 0;
        double prob = 1.0;
        for (size_t f = 0; f < F; f++) {
            const DemFault &fault = dem.faults[f];
            if ((mask >> f) & 1) {
                prob *= fault.p;
                for (uint32_t d : fault.detectors) {
                    syn ^= uint64_t{1} << d;
                }
                for (uint32_t l : fault.observables) {
                    obs ^= uint64_t{1} << l;
                }
            } else {
                prob *= 1 - fault.p;
            }
        }
        mass[syn][obs] += prob;
    }
    std::map<uint64_t, uint64_t> best;
    for (const auto &[syn, classes] : mass) {
        double top = -1;
        for (const auto &[obs, prob] : classes) {
            if (prob > top) {
                top = prob;
                best[syn] = obs;
            }
        }
    }
    return best;
}

TEST(SparseCheckMatrix, MatchesDense) {
    BitMatrix dense = toric(3).hz;
    SparseCheckMatrix h(dense);
    ASSERT_EQ(h.rows(), dense.rows());
    ASSERT_EQ(h.cols(), dense.cols());
    for (size_t r = 0; r < dense.rows(); r++) {
        auto support = dense.row_support(r);
        auto sparse = h.row_support(r);
        EXPECT_EQ(std::vector<size_t>(sparse.begin(), sparse.end()), support);
    }
    for (size_t c = 0; c < dense.cols(); c++) {
        auto sparse = h.col_support(c);
        EXPECT_EQ(std::vector<size_t>(sparse.begin(), sparse.end()), dense.col_support(c));
    }
    BitVec e(dense.cols());
    e.set(4, true);
    e.set(11, true);
    EXPECT_EQ(h.syndrome_of(e), dense.apply(e));
}

TEST(BeliefPropagation, ZeroSyndromeConvergesImmediately) {
    SparseCheckMatrix h(repetition(5));
    BpResult r = bp_decode(h, std::vector<double>(5, 0.1), BitVec(4));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_FALSE(r.hard_decision.any());
}

TEST(BeliefPropagation, TreeGraphIsExact) {
    // Three checks on three faults forming a tree: BP marginals are exact.
    BitMatrix dense(2, 3);
    dense.set(0, 0, true);
    dense.set(0, 1, true);
    dense.set(1, 1, true);
    dense.set(1, 2, true);
    SparseCheckMatrix h(dense);
    std::vector<double> priors = {0.1, 0.2, 0.3};
    BitVec s = BitVec::from_string("11");
    BpResult r = bp_decode(h, priors, s, 50);
    ASSERT_TRUE(r.converged);
    // Solutions: {1} or {0,2}. P({1}) = .9*.2*.7 = .126, P({0,2}) = .1*.8*.3 = .024.
    EXPECT_EQ(r.hard_decision.to_string(), "010");
    double z = 0.126 + 0.024;
    EXPECT_NEAR(r.posterior_llr[1], std::log((0.024 / z) / (0.126 / z)), 1e-9);
    EXPECT_NEAR(r.posterior_llr[0], std::log((0.126 / z) / (0.024 / z)), 1e-9);
}

TEST(BeliefPropagation, RepetitionCodeSingleError) {
    SparseCheckMatrix h(repetition(5));
    for (size_t i = 0; i < 5; i++) {
        BitVec e(5);
        e.set(i, true);
        BpResult r = bp_decode(h, std::vector<double>(5, 0.05), h.syndrome_of(e), 10);
        EXPECT_TRUE(r.converged) << i;
        EXPECT_LE(r.iterations, 10u);
        EXPECT_EQ(r.hard_decision, e) << i;
    }
}

// Plain flooding sum-product with no early exit other than convergence and
// no cycle handling. Products use the same association as the library so the
// two agree bit for bit.
BpResult naive_bp(const BitMatrix &dense, const std::vector<double> &priors, const BitVec &s, size_t max_iter) {
    const size_t m = dense.rows(), n = dense.cols();
    std::vector<std::vector<size_t>> rows(m);
    for (size_t r = 0; r < m; r++) {
        rows[r] = dense.row_support(r);
    }
    std::vector<double> prior(n);
    for (size_t c = 0; c < n; c++) {
        prior[c] = std::log((1 - priors[c]) / priors[c]);
    }
    auto clampf = [](double x) { return std::max(-30.0, std::min(30.0, x)); };
    std::vector<std::map<size_t, double>> q(m), r_msg(m);
    for (size_t r = 0; r < m; r++) {
        for (size_t c : rows[r]) {
            q[r][c] = clampf(prior[c]);
        }
    }
    BpResult out;
    out.posterior_llr = prior;
    auto hard_ok = [&]() {
        out.hard_decision = BitVec(n);
        for (size_t c = 0; c < n; c++) {
            out.hard_decision.set(c, out.posterior_llr[c] < 0);
        }
        return dense.apply(out.hard_decision) == s;
    };
    if (hard_ok()) {
        out.converged = true;
        return out;
    }
    for (size_t it = 1; it <= max_iter; it++) {
        for (size_t r = 0; r < m; r++) {
            const auto &cols = rows[r];
            std::vector<double> t;
            for (size_t c : cols) {
                t.push_back(std::tanh(0.5 * q[r][c]));
            }
            for (size_t i = 0; i < cols.size(); i++) {
                double pre = 1.0;
                for (size_t j = 0; j < i; j++) {
                    pre *= t[j];
                }
                double suf = 1.0;
                for (size_t j = cols.size(); j-- > i + 1;) {
                    suf = suf * t[j];
                }
                double v = 2.0 * std::atanh(pre * suf);
                r_msg[r][cols[i]] = clampf(s.get(r) ? -v : v);
            }
        }
        for (size_t c = 0; c < n; c++) {
            double sum = prior[c];
            for (size_t r = 0; r < m; r++) {
                if (dense.at(r, c)) {
                    sum += r_msg[r][c];
                }
            }
            out.posterior_llr[c] = sum;
            for (size_t r = 0; r < m; r++) {
                if (dense.at(r, c)) {
                    q[r][c] = clampf(sum - r_msg[r][c]);
                }
            }
        }
        if (hard_ok()) {
            out.converged = true;
            out.iterations = it;
            return out;
        }
    }
    out.iterations = max_iter;
    return out;
}

TEST(BeliefPropagation, MatchesNaiveReference) {
    // Degenerate toric syndromes keep BP oscillating, which exercises the
    // cycle skip and the fixed-point exit; the result must match running every
    // iteration.
    CxcCode code = toric(3);
    SparseCheckMatrix h(code.hz);
    std::mt19937_64 rng(13);
    size_t nonconverged = 0;
    for (int trial = 0; trial < 30; trial++) {
        BitVec e(18);
        for (int k = 0; k < 2 + trial % 3; k++) {
            e.set(rng() % 18, true);
        }
        BitVec s = h.syndrome_of(e);
        std::vector<double> priors(18, 0.1);
        for (size_t max_iter : {7u, 64u, 301u}) {
            BpResult fast = bp_decode(h, priors, s, max_iter);
            BpResult slow = naive_bp(code.hz, priors, s, max_iter);
            EXPECT_EQ(fast.converged, slow.converged);
            EXPECT_EQ(fast.iterations, slow.iterations);
            EXPECT_EQ(fast.hard_decision, slow.hard_decision);
            for (size_t i = 0; i < 18; i++) {
                EXPECT_NEAR(fast.posterior_llr[i], slow.posterior_llr[i], 1e-6);
            }
            nonconverged += !fast.converged;
        }
    }
    EXPECT_GT(nonconverged, 0u);
}

TEST(Osd, SolvesSyndromeAndCountsCandidates) {
    CxcCode code = toric(3);
    SparseCheckMatrix h(code.hz);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 6.0);
    for (int trial = 0; trial < 50; trial++) {
        BitVec e(18);
        for (size_t i = 0; i < 18; i++) {
            if (rng() % 4 == 0) {
                e.set(i, true);
            }
        }
        BitVec s = h.syndrome_of(e);
        std::vector<double> llr(18);
        for (double &x : llr) {
            x = u(rng);
        }
        DecodeResult r5 = osd_postprocess(h, llr, s, 5, OsdMode::Exhaustive);
        DecodeResult r0 = osd_postprocess(h, llr, s, 0, OsdMode::Exhaustive);
        DecodeResult cs = osd_postprocess(h, llr, s, 5, OsdMode::CombinationSweep);
        EXPECT_EQ(r5.osd_candidates, 32u);
        EXPECT_EQ(r0.osd_candidates, 1u);
        EXPECT_TRUE(satisfies(h, r5.correction, s));
        EXPECT_TRUE(satisfies(h, r0.correction, s));
        EXPECT_TRUE(satisfies(h, cs.correction, s));
        EXPECT_LE(r5.soft_weight, r0.soft_weight + 1e-12);
        EXPECT_LE(cs.soft_weight, r0.soft_weight + 1e-12);
    }
}

TEST(Osd, KnownRankGivesSameAnswer) {
    CxcCode code = toric(3);
    SparseCheckMatrix h(code.hz);
    size_t rank = gf2_rank(code.hz);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 20; trial++) {
        BitVec e(18);
        e.set(rng() % 18, true);
        e.set(rng() % 18, true);
        std::vector<double> llr(18);
        for (double &x : llr) {
            x = u(rng);
        }
        BitVec s = h.syndrome_of(e);
        EXPECT_EQ(osd_postprocess(h, llr, s, 5, OsdMode::Exhaustive, rank).correction,
                  osd_postprocess(h, llr, s, 5, OsdMode::Exhaustive, 0).correction);
    }
}

TEST(Osd, InconsistentSyndromeThrows) {
    // Toric check rows sum to zero, so an odd-weight syndrome is unreachable.
    CxcCode code = toric(3);
    SparseCheckMatrix h(code.hz);
    BitVec s(9);
    s.set(0, true);
    EXPECT_THROW(osd_postprocess(h, std::vector<double>(18, 1.0), s, 5), std::domain_error);
}

TEST(Osd, ReliabilityTiesBreakByIndex) {
    SparseCheckMatrix h(repetition(3));
    // Syndrome 10: solutions {0} and {1,2}; equal LLRs make {0} lighter.
    BitVec s = BitVec::from_string("10");
    DecodeResult r = osd_postprocess(h, std::vector<double>(3, 2.0), s, 0);
    EXPECT_EQ(r.correction.to_string(), "100");
}

// Brute-force minimum-weight decoder over errors of weight <= 2.
BitVec min_weight_oracle(const SparseCheckMatrix &h, const BitVec &s) {
    const size_t n = h.cols();
    if (!s.any()) {
        return BitVec(n);
    }
    for (size_t i = 0; i < n; i++) {
        BitVec e(n);
        e.set(i, true);
        if (h.syndrome_of(e) == s) {
            return e;
        }
    }
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) {
            BitVec e(n);
            e.set(i, true);
            e.set(j, true);
            if (h.syndrome_of(e) == s) {
                return e;
            }
        }
    }
    return BitVec(n);
}

TEST(BpOsdDecoder, ToricCodeCapacityCorrectsWeightOne) {
    CxcCode code = toric(3);
    LogicalBasis lb = logical_basis(code);
    for (bool x_type : {true, false}) {
        const BitMatrix &checks = x_type ? code.hz : code.hx;
        const auto &logicals = x_type ? lb.z_logicals : lb.x_logicals;
        SparseCheckMatrix h(checks);
        BpOsdDecoder dec(h, std::vector<double>(18, 0.05));
        for (size_t q = 0; q < 18; q++) {
            BitVec e(18);
            e.set(q, true);
            BitVec s = h.syndrome_of(e);
            BitVec oracle = min_weight_oracle(h, s);
            ASSERT_EQ(oracle, e);
            DecodeResult r = dec.decode(s);
            ASSERT_TRUE(satisfies(h, r.correction, s));
            BitVec residual = r.correction;
            residual ^= e;
            for (const BitVec &l : logicals) {
                EXPECT_FALSE(residual.dot(l)) << "qubit " << q;
            }
        }
    }
}

TEST(BpOsdDecoder, DeterministicAndAlwaysSyndromeConsistent) {
    std::mt19937_64 rng(3);
    DetectorErrorModel dem = random_dem(rng, 10, 40, 2, 0.05);
    SparseCheckMatrix h = SparseCheckMatrix::from_dem(dem);
    BpOsdDecoder a(h, dem.priors());
    BpOsdDecoder b(h, dem.priors());
    ShotBatch shots = sample_dem(dem, 500, rng);
    for (size_t s = 0; s < shots.shots(); s++) {
        BitVec syn(dem.num_detectors);
        for (size_t d = 0; d < dem.num_detectors; d++) {
            syn.set(d, shots.detectors.get_unchecked(d, s));
        }
        DecodeResult ra = a.decode(syn);
        DecodeResult rb = b.decode(syn);
        ASSERT_TRUE(satisfies(h, ra.correction, syn));
        EXPECT_EQ(ra.correction, rb.correction);
        EXPECT_EQ(ra.iterations, rb.iterations);
    }
}

TEST(BpOsdDecoder, ForceOsdStillConsistent) {
    std::mt19937_64 rng(5);
    DetectorErrorModel dem = random_dem(rng, 8, 20, 1, 0.05);
    SparseCheckMatrix h = SparseCheckMatrix::from_dem(dem);
    DecoderConfig cfg;
    cfg.force_osd = true;
    BpOsdDecoder dec(h, dem.priors(), cfg);
    ShotBatch shots = sample_dem(dem, 200, rng);
    for (size_t s = 0; s < shots.shots(); s++) {
        BitVec syn(8);
        for (size_t d = 0; d < 8; d++) {
            syn.set(d, shots.detectors.get_unchecked(d, s));
        }
        DecodeResult r = dec.decode(syn);
        EXPECT_TRUE(r.osd_used);
        EXPECT_TRUE(satisfies(h, r.correction, syn));
    }
}

TEST(DecodeBatch, AgreesWithMaximumLikelihoodOracle) {
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 3; trial++) {
        DetectorErrorModel dem = random_dem(rng, 10, 20, 2, 1e-2);
        ShotBatch shots = sample_dem(dem, 10000, rng);
        BatchDecodeResult res = decode_batch(dem, shots, DecoderConfig{}, 2);
        std::map<uint64_t, uint64_t> ml = ml_table(dem);
        size_t agree = 0;
        for (size_t s = 0; s < shots.shots(); s++) {
            uint64_t syn = 0, obs = 0;
            for (size_t d = 0; d < dem.num_detectors; d++) {
                syn |= uint64_t{shots.detectors.get_unchecked(d, s)} << d;
            }
            for (size_t l = 0; l < dem.num_observables; l++) {
                obs |= uint64_t{shots.observables.get_unchecked(l, s)} << l;
            }
            bool ml_fail = ml.at(syn) != obs;
            agree += ml_fail == res.per_shot[s].failure_bits.any();
        }
        EXPECT_GE(agree, 9500u) << "trial " << trial;
    }
}

TEST(DecodeBatch, NoFaultsNoFailures) {
    std::mt19937_64 rng(1);
    DetectorErrorModel dem = random_dem(rng, 6, 12, 1, 1e-2);
    ShotBatch shots;
    shots.detectors = BitMatrix(6, 300);
    shots.observables = BitMatrix(1, 300);
    BatchDecodeResult res = decode_batch(dem, shots, DecoderConfig{});
    EXPECT_EQ(res.failures, 0u);
    EXPECT_EQ(res.bp_converged, 300u);
    EXPECT_EQ(res.osd_calls, 0u);
}

TEST(DecodeBatch, WorkerCountDoesNotChangeResults) {
    std::mt19937_64 rng(9);
    DetectorErrorModel dem = random_dem(rng, 12, 30, 2, 3e-2);
    ShotBatch shots = sample_dem(dem, 2000, rng);
    BatchDecodeResult one = decode_batch(dem, shots, DecoderConfig{}, 1);
    BatchDecodeResult four = decode_batch(dem, shots, DecoderConfig{}, 4);
    EXPECT_EQ(one.to_csv(), four.to_csv());
    EXPECT_EQ(one.failures_per_logical, four.failures_per_logical);
}

TEST(DecodeBatch, RejectsMismatchedBatch) {
    std::mt19937_64 rng(1);
    DetectorErrorModel dem = random_dem(rng, 6, 12, 1, 1e-2);
    ShotBatch shots;
    shots.detectors = BitMatrix(5, 10);
    shots.observables = BitMatrix(1, 10);
    EXPECT_THROW(decode_batch(dem, shots, DecoderConfig{}), std::invalid_argument);
}

TEST(DecodeBatch, CsvRows) {
    std::mt19937_64 rng(4);
    DetectorErrorModel dem = random_dem(rng, 6, 12, 2, 1e-1);
    ShotBatch shots = sample_dem(dem, 3, rng);
    std::string csv = decode_batch(dem, shots, DecoderConfig{}).to_csv();
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "shot,converged,iterations,failure_bits");
    size_t rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3);
        EXPECT_EQ(line.substr(0, line.find(',')), std::to_string(rows));
        rows++;
    }
    EXPECT_EQ(rows, 3u);
}

TEST(DecoderConfig, JsonRoundTrip) {
    DecoderConfig c;
    c.max_iter = 123;
    c.osd_order = 3;
    c.osd_mode = OsdMode::CombinationSweep;
    c.clamp = 20.0;
    c.force_osd = true;
    DecoderConfig back = DecoderConfig::from_json(c.to_json());
    EXPECT_EQ(back.max_iter, 123u);
    EXPECT_EQ(back.osd_order, 3u);
    EXPECT_EQ(back.osd_mode, OsdMode::CombinationSweep);
    EXPECT_EQ(back.clamp, 20.0);
    EXPECT_TRUE(back.force_osd);

    DecoderConfig partial = DecoderConfig::from_json(R"({"osd_order": 2})");
    EXPECT_EQ(partial.max_iter, 10000u);
    EXPECT_EQ(partial.osd_order, 2u);
    EXPECT_THROW(DecoderConfig::from_json(R"({"bogus": 1})"), std::invalid_argument);
    EXPECT_THROW(DecoderConfig::from_json(R"({"osd_mode": "bogus"})"), std::invalid_argument);
    EXPECT_THROW(DecoderConfig::from_json(R"({"clamp": 0})"), std::invalid_argument);
}

TEST(Decoder, RejectsBadPriors) {
    SparseCheckMatrix h(repetition(3));
    EXPECT_THROW(BeliefPropagation(h, {0.1, 0.0, 0.1}), std::invalid_argument);
    EXPECT_THROW(BeliefPropagation(h, {0.1, 0.6, 0.1}), std::invalid_argument);
    EXPECT_THROW(BeliefPropagation(h, {0.1, 0.1}), std::invalid_argument);
}

}  // namespace
