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

#include "cxc/noise_sim.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cxc/parallel.h"

namespace cxc {

const char *op_name(OpType t) {
    switch (t) {
        case OpType::R:
            return "R";
        case OpType::RX:
            return "RX";
        case OpType::M:
            return "M";
        case OpType::MX:
            return "MX";
        case OpType::MRX:
            return "MRX";
        case OpType::CX:
            return "CX";
        case OpType::CZ:
            return "CZ";
        case OpType::DEPOLARIZE1:
            return "DEPOLARIZE1";
        case OpType::DEPOLARIZE2:
            return "DEPOLARIZE2";
        case OpType::X_ERROR:
            return "X_ERROR";
        case OpType::Z_ERROR:
            return "Z_ERROR";
        case OpType::TICK:
            return "TICK";
    }
    return "?";
}

bool is_measurement(OpType t) { return t == OpType::M || t == OpType::MX || t == OpType::MRX; }

bool is_noise(OpType t) {
    return t == OpType::DEPOLARIZE1 || t == OpType::DEPOLARIZE2 || t == OpType::X_ERROR || t == OpType::Z_ERROR;
}

size_t SimCircuit::num_measurements() const {
    size_t n = 0;
    for (const Op &op : ops) {
        if (is_measurement(op.type)) {
            n += op.targets.size();
        }
    }
    return n;
}

std::string basis_name(Basis b) { return b == Basis::X ? "X" : "Z"; }

Basis parse_basis(const std::string &name) {
    if (name == "X" || name == "x") {
        return Basis::X;
    }
    if (name == "Z" || name == "z") {
        return Basis::Z;
    }
    throw std::invalid_argument("unknown memory basis '" + name + "' (expected X or Z)");
}

// ---------------------------------------------------------------------------
// Lowering and memory experiments

SimCircuit lower_circuit(const Circuit &c, SyndromeRecords *records) {
    const uint32_t ab = c.a * c.b;
    const uint32_t n_data = 2 * ab;
    SimCircuit out;
    out.num_qubits = 4 * ab;
    SyndromeRecords rec;
    uint32_t next_record = 0;
    std::vector<LayerRounds> rounds = layer_rounds(c);

    for (size_t li = 0; li < c.layers.size(); li++) {
        const Layer &layer = c.layers[li];
        switch (layer.kind) {
            case LayerKind::PrepPlus: {
                Op op{OpType::RX, {}, 0.0};
                for (uint32_t a : layer.ancillas) {
                    op.targets.push_back(n_data + a);
                }
                out.ops.push_back(std::move(op));
                break;
            }
            case LayerKind::Gates:
                for (auto [type, pairs] : {std::pair{OpType::CX, &layer.cx}, std::pair{OpType::CZ, &layer.cz}}) {
                    if (pairs->empty()) {
                        continue;
                    }
                    Op op{type, {}, 0.0};
                    for (const GatePair &g : *pairs) {
                        op.targets.push_back(n_data + g.ancilla);
                        op.targets.push_back(g.data);
                    }
                    out.ops.push_back(std::move(op));
                }
                break;
            case LayerKind::MeasureResetX: {
                Op op{OpType::MRX, {}, 0.0};
                bool is_z = !layer.ancillas.empty() && layer.ancillas.front() >= ab;
                int round = is_z ? rounds[li].z_round : rounds[li].x_round;
                auto &dst = is_z ? rec.z : rec.x;
                if (dst.size() <= static_cast<size_t>(round)) {
                    dst.resize(round + 1, std::vector<uint32_t>(ab, 0));
                }
                for (uint32_t a : layer.ancillas) {
                    op.targets.push_back(n_data + a);
                    dst[round][a % ab] = next_record++;
                }
                out.ops.push_back(std::move(op));
                break;
            }
            case LayerKind::Shift:
                break;
        }
        out.ops.push_back({OpType::TICK, {}, 0.0});
        rec.layer_end.push_back(out.ops.size());
    }
    if (records) {
        *records = std::move(rec);
    }
    return out;
}

SimCircuit build_memory_experiment(const CxcCode &code, const MemoryExperiment &exp) {
    return build_memory_experiment(code, gen_circuit(code, exp.rounds, exp.variant), exp.basis);
}

SimCircuit build_memory_experiment(const CxcCode &code, const Circuit &circuit, Basis basis) {
    if (circuit.a != code.a || circuit.b != code.b) {
        throw std::invalid_argument("circuit dimensions do not match the code");
    }
    SyndromeRecords rec;
    SimCircuit c = lower_circuit(circuit, &rec);
    const uint32_t n_data = static_cast<uint32_t>(code.num_data());
    const size_t rounds = circuit.rounds;

    Op prep{basis == Basis::Z ? OpType::R : OpType::RX, {}, 0.0};
    for (uint32_t q = 0; q < n_data; q++) {
        prep.targets.push_back(q);
    }
    c.ops.insert(c.ops.begin(), std::move(prep));

    Op readout{basis == Basis::Z ? OpType::M : OpType::MX, {}, 0.0};
    uint32_t next_record = static_cast<uint32_t>(2 * code.num_checks() * rounds);
    for (uint32_t q = 0; q < n_data; q++) {
        readout.targets.push_back(q);
        rec.data.push_back(next_record++);
    }
    c.ops.push_back(std::move(readout));

    // Z-memory watches Z checks (rows of H_Z); X-memory watches X checks.
    const BitMatrix &h = basis == Basis::Z ? code.hz : code.hx;
    const auto &checks = basis == Basis::Z ? rec.z : rec.x;
    for (size_t r = 0; r < rounds; r++) {
        for (size_t row = 0; row < h.rows(); row++) {
            std::vector<uint32_t> det = {checks[r][row]};
            if (r > 0) {
                det.insert(det.begin(), checks[r - 1][row]);
            }
            c.detectors.push_back(std::move(det));
        }
    }
    for (size_t row = 0; row < h.rows(); row++) {
        std::vector<uint32_t> det = {checks[rounds - 1][row]};
        for (size_t q : h.row_support(row)) {
            det.push_back(rec.data[q]);
        }
        c.detectors.push_back(std::move(det));
    }
    LogicalBasis logicals = logical_basis(code);
    for (const BitVec &l : basis == Basis::Z ? logicals.z_logicals : logicals.x_logicals) {
        std::vector<uint32_t> obs;
        for (size_t q : l.support()) {
            obs.push_back(rec.data[q]);
        }
        c.observables.push_back(std::move(obs));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Noise

SimCircuit annotate_noise(const SimCircuit &c, const NoiseModel &model) {
    if (!(model.p >= 0.0 && model.p < 1.0)) {
        throw std::invalid_argument("noise rate must lie in [0, 1)");
    }
    if (model.p == 0.0) {
        return c;
    }
    const double p = model.p;

    // Tick index of the first and last operation on every qubit.
    std::vector<int64_t> first(c.num_qubits, -1);
    std::vector<int64_t> last(c.num_qubits, -1);
    int64_t tick = 0;
    for (const Op &op : c.ops) {
        if (op.type == OpType::TICK) {
            tick++;
            continue;
        }
        for (uint32_t q : op.targets) {
            if (first[q] < 0) {
                first[q] = tick;
            }
            last[q] = tick;
        }
    }

    SimCircuit out;
    out.num_qubits = c.num_qubits;
    out.detectors = c.detectors;
    out.observables = c.observables;
    std::vector<char> busy(c.num_qubits, 0);
    tick = 0;
    auto close_tick = [&]() {
        Op idle{OpType::DEPOLARIZE1, {}, p};
        for (uint32_t q = 0; q < c.num_qubits; q++) {
            if (!busy[q] && first[q] >= 0 && first[q] < tick && tick < last[q]) {
                idle.targets.push_back(q);
            }
            busy[q] = 0;
        }
        if (!idle.targets.empty()) {
            out.ops.push_back(std::move(idle));
        }
    };
    for (const Op &op : c.ops) {
        if (op.type == OpType::TICK) {
            close_tick();
            out.ops.push_back(op);
            tick++;
            continue;
        }
        for (uint32_t q : op.targets) {
            busy[q] = 1;
        }
        switch (op.type) {
            case OpType::M:
                out.ops.push_back({OpType::X_ERROR, op.targets, p});
                out.ops.push_back(op);
                break;
            case OpType::MX:
                out.ops.push_back({OpType::Z_ERROR, op.targets, p});
                out.ops.push_back(op);
                break;
            case OpType::MRX:
                out.ops.push_back({OpType::Z_ERROR, op.targets, p});
                out.ops.push_back(op);
                out.ops.push_back({OpType::DEPOLARIZE1, op.targets, p});
                break;
            case OpType::R:
            case OpType::RX:
                out.ops.push_back(op);
                out.ops.push_back({OpType::DEPOLARIZE1, op.targets, p});
                break;
            case OpType::CX:
            case OpType::CZ:
                out.ops.push_back(op);
                out.ops.push_back({OpType::DEPOLARIZE2, op.targets, p});
                break;
            default:
                out.ops.push_back(op);
                break;
        }
    }
    close_tick();
    return out;
}

size_t count_fault_locations(const SimCircuit &c) {
    size_t n = 0;
    for (const Op &op : c.ops) {
        if (op.type == OpType::DEPOLARIZE2) {
            n += op.targets.size() / 2;
        } else if (is_noise(op.type)) {
            n += op.targets.size();
        }
    }
    return n;
}

// ---------------------------------------------------------------------------
// Shot batches

namespace {

constexpr char kBatchMagic[4] = {'C', 'X', 'S', 'B'};

void put_u32(std::ostream &out, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char *>(b), 4);
}

uint32_t get_u32(std::istream &in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char *>(b), 4)) {
        throw std::runtime_error("truncated shot batch header");
    }
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void put_rows(std::ostream &out, const BitMatrix &m) {
    for (size_t r = 0; r < m.rows(); r++) {
        for (uint64_t w : m.row_words(r)) {
            for (int i = 0; i < 8; i++) {
                out.put(static_cast<char>(w >> (8 * i)));
            }
        }
    }
}

void get_rows(std::istream &in, BitMatrix &m) {
    for (size_t r = 0; r < m.rows(); r++) {
        for (uint64_t &w : m.row_words(r)) {
            unsigned char b[8];
            if (!in.read(reinterpret_cast<char *>(b), 8)) {
                throw std::runtime_error("truncated shot batch body");
            }
            w = 0;
            for (int i = 0; i < 8; i++) {
                w |= static_cast<uint64_t>(b[i]) << (8 * i);
            }
        }
    }
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

void ShotBatch::write_binary(std::ostream &out) const {
    out.write(kBatchMagic, 4);
    put_u32(out, static_cast<uint32_t>(detectors.rows()));
    put_u32(out, static_cast<uint32_t>(observables.rows()));
    put_u32(out, static_cast<uint32_t>(shots()));
    put_rows(out, detectors);
    put_rows(out, observables);
}

ShotBatch ShotBatch::read_binary(std::istream &in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kBatchMagic, 4) != 0) {
        throw std::runtime_error("not a shot batch (bad magic)");
    }
    uint32_t d = get_u32(in);
    uint32_t k = get_u32(in);
    uint32_t shots = get_u32(in);
    ShotBatch b;
    b.detectors = BitMatrix(d, shots);
    b.observables = BitMatrix(k, shots);
    get_rows(in, b.detectors);
    get_rows(in, b.observables);
    return b;
}

// ---------------------------------------------------------------------------
// Pauli-frame sampler

namespace {

constexpr size_t kWords = kShotsPerBatch / 64;
using Frame = std::array<uint64_t, kWords>;

class FrameSimulator {
   public:
    FrameSimulator(const SimCircuit &c, uint64_t seed)
        : c_(c), x_(c.num_qubits), z_(c.num_qubits), rng_(seed) {
        records_.reserve(c.num_measurements());
    }

    void run() {
        for (const Op &op : c_.ops) {
            apply(op);
        }
    }

    Frame parity(const std::vector<uint32_t> &recs) const {
        Frame out{};
        for (uint32_t r : recs) {
            xor_into(out, records_[r]);
        }
        return out;
    }

   private:
    static void xor_into(Frame &dst, const Frame &src) {
        for (size_t w = 0; w < kWords; w++) {
            dst[w] ^= src[w];
        }
    }

    void randomize(Frame &f) {
        for (uint64_t &w : f) {
            w = rng_();
        }
    }

    // Calls hit(target index, shot) for each Bernoulli(p) success among
    // targets x shots trials, skipping ahead geometrically.
    template <typename Hit>
    void sample_hits(size_t num_targets, double p, Hit &&hit) {
        if (p <= 0.0) {
            return;
        }
        const uint64_t trials = static_cast<uint64_t>(num_targets) * kShotsPerBatch;
        if (p >= 1.0) {
            for (uint64_t i = 0; i < trials; i++) {
                hit(i / kShotsPerBatch, i % kShotsPerBatch);
            }
            return;
        }
        std::geometric_distribution<uint64_t> gap(p);
        uint64_t i = gap(rng_);
        while (i < trials) {
            hit(i / kShotsPerBatch, i % kShotsPerBatch);
            i += 1 + gap(rng_);
        }
    }

    static void flip(Frame &f, size_t shot) { f[shot >> 6] ^= uint64_t{1} << (shot & 63); }

    void apply(const Op &op) {
        const auto &t = op.targets;
        switch (op.type) {
            case OpType::R:
                for (uint32_t q : t) {
                    x_[q].fill(0);
                    randomize(z_[q]);
                }
                break;
            case OpType::RX:
                for (uint32_t q : t) {
                    z_[q].fill(0);
                    randomize(x_[q]);
                }
                break;
            case OpType::M:
                for (uint32_t q : t) {
                    records_.push_back(x_[q]);
                    randomize(z_[q]);
                }
                break;
            case OpType::MX:
                for (uint32_t q : t) {
                    records_.push_back(z_[q]);
                    randomize(x_[q]);
                }
                break;
            case OpType::MRX:
                for (uint32_t q : t) {
                    records_.push_back(z_[q]);
                    z_[q].fill(0);
                    randomize(x_[q]);
                }
                break;
            case OpType::CX:
                for (size_t i = 0; i + 1 < t.size(); i += 2) {
                    xor_into(x_[t[i + 1]], x_[t[i]]);
                    xor_into(z_[t[i]], z_[t[i + 1]]);
                }
                break;
            case OpType::CZ:
                for (size_t i = 0; i + 1 < t.size(); i += 2) {
                    xor_into(z_[t[i]], x_[t[i + 1]]);
                    xor_into(z_[t[i + 1]], x_[t[i]]);
                }
                break;
            case OpType::X_ERROR:
                sample_hits(t.size(), op.p, [&](size_t i, size_t shot) { flip(x_[t[i]], shot); });
                break;
            case OpType::Z_ERROR:
                sample_hits(t.size(), op.p, [&](size_t i, size_t shot) { flip(z_[t[i]], shot); });
                break;
            case OpType::DEPOLARIZE1: {
                std::uniform_int_distribution<unsigned> pauli(1, 3);
                sample_hits(t.size(), op.p, [&](size_t i, size_t shot) {
                    unsigned pk = pauli(rng_);
                    if (pk != 3) {
                        flip(x_[t[i]], shot);
                    }
                    if (pk != 1) {
                        flip(z_[t[i]], shot);
                    }
                });
                break;
            }
            case OpType::DEPOLARIZE2: {
                std::uniform_int_distribution<unsigned> pauli(1, 15);
                sample_hits(t.size() / 2, op.p, [&](size_t i, size_t shot) {
                    unsigned pk = pauli(rng_);
                    unsigned pa = pk >> 2;
                    unsigned pb = pk & 3;
                    for (auto [q, pq] : {std::pair{t[2 * i], pa}, std::pair{t[2 * i + 1], pb}}) {
                        // 1 = X, 2 = Y, 3 = Z
                        if (pq == 1 || pq == 2) {
                            flip(x_[q], shot);
                        }
                        if (pq == 2 || pq == 3) {
                            flip(z_[q], shot);
                        }
                    }
                });
                break;
            }
            case OpType::TICK:
                break;
        }
    }

    const SimCircuit &c_;
    std::vector<Frame> x_;
    std::vector<Frame> z_;
    std::vector<Frame> records_;
    std::mt19937_64 rng_;
};

void scatter(BitMatrix &dst, size_t row, size_t batch, const Frame &f) {
    auto words = dst.row_words(row);
    const size_t begin = batch * kWords;
    const size_t shots = dst.cols();
    for (size_t w = 0; w < kWords && begin + w < words.size(); w++) {
        uint64_t v = f[w];
        size_t first_bit = (begin + w) * 64;
        if (first_bit + 64 > shots) {
            v &= (uint64_t{1} << (shots - first_bit)) - 1;
        }
        words[begin + w] = v;
    }
}

}  // namespace

ShotBatch pauli_frame_sample(const SimCircuit &c, size_t shots, uint64_t seed, size_t workers) {
    if (shots < 1) {
        throw std::invalid_argument("need at least one shot");
    }
    ShotBatch out;
    out.seed = seed;
    out.detectors = BitMatrix(c.detectors.size(), shots);
    out.observables = BitMatrix(c.observables.size(), shots);
    const size_t batches = (shots + kShotsPerBatch - 1) / kShotsPerBatch;
    // Every batch owns whole words of each output row, so batches never share
    // memory.
    parallel_for(batches, workers, [&](size_t b) {
        FrameSimulator sim(c, splitmix64(seed ^ splitmix64(b)));
        sim.run();
        for (size_t d = 0; d < c.detectors.size(); d++) {
            scatter(out.detectors, d, b, sim.parity(c.detectors[d]));
        }
        for (size_t k = 0; k < c.observables.size(); k++) {
            scatter(out.observables, k, b, sim.parity(c.observables[k]));
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Sensitivity and detector error models

SensitivityTracker::SensitivityTracker(const SimCircuit &c, const std::vector<std::vector<uint32_t>> &targets)
    : circuit_(c),
      record_targets_(c.num_measurements(), BitVec(targets.size())),
      sx_(c.num_qubits, BitVec(targets.size())),
      sz_(c.num_qubits, BitVec(targets.size())),
      position_(c.ops.size()),
      record_cursor_(c.num_measurements()) {
    for (size_t t = 0; t < targets.size(); t++) {
        for (uint32_t r : targets[t]) {
            if (r >= record_targets_.size()) {
                throw std::out_of_range("target refers to a missing measurement record");
            }
            record_targets_[r].flip(t);
        }
    }
}

void SensitivityTracker::rewind_to(size_t index) {
    if (index > position_) {
        throw std::logic_error("SensitivityTracker only moves backwards");
    }
    while (position_ > index) {
        step_back(circuit_.ops[--position_]);
    }
}

void SensitivityTracker::step_back(const Op &op) {
    const auto &t = op.targets;
    switch (op.type) {
        case OpType::M:
        case OpType::MX:
        case OpType::MRX: {
            record_cursor_ -= t.size();
            for (size_t i = 0; i < t.size(); i++) {
                const BitVec &rt = record_targets_[record_cursor_ + i];
                uint32_t q = t[i];
                if (op.type == OpType::M) {
                    sx_[q] ^= rt;
                } else if (op.type == OpType::MX) {
                    sz_[q] ^= rt;
                } else {
                    sx_[q] = BitVec(rt.size());
                    sz_[q] = rt;
                }
            }
            break;
        }
        case OpType::R:
        case OpType::RX:
            for (uint32_t q : t) {
                sx_[q] = BitVec(sx_[q].size());
                sz_[q] = BitVec(sz_[q].size());
            }
            break;
        case OpType::CX:
            for (size_t i = 0; i + 1 < t.size(); i += 2) {
                sx_[t[i]] ^= sx_[t[i + 1]];
                sz_[t[i + 1]] ^= sz_[t[i]];
            }
            break;
        case OpType::CZ:
            for (size_t i = 0; i + 1 < t.size(); i += 2) {
                sx_[t[i]] ^= sz_[t[i + 1]];
                sx_[t[i + 1]] ^= sz_[t[i]];
            }
            break;
        default:
            break;
    }
}

namespace {

struct WordsHash {
    size_t operator()(const std::vector<uint64_t> &v) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (uint64_t w : v) {
            h = splitmix64(h ^ w);
        }
        return static_cast<size_t>(h);
    }
};

class DemAccumulator {
   public:
    void add(const BitVec &sig, double p) {
        if (p <= 0.0 || !sig.any()) {
            return;
        }
        std::vector<uint64_t> key(sig.words().begin(), sig.words().end());
        auto [it, inserted] = merged_.try_emplace(std::move(key), p);
        if (!inserted) {
            double q = it->second;
            it->second = q * (1 - p) + p * (1 - q);
        }
    }

    DetectorErrorModel finish(size_t num_detectors, size_t num_observables) const {
        DetectorErrorModel dem;
        dem.num_detectors = num_detectors;
        dem.num_observables = num_observables;
        for (const auto &[key, p] : merged_) {
            DemFault f;
            f.p = p;
            for (size_t w = 0; w < key.size(); w++) {
                for (uint64_t bits = key[w]; bits; bits &= bits - 1) {
                    size_t i = 64 * w + std::countr_zero(bits);
                    if (i < num_detectors) {
                        f.detectors.push_back(static_cast<uint32_t>(i));
                    } else {
                        f.observables.push_back(static_cast<uint32_t>(i - num_detectors));
                    }
                }
            }
            dem.faults.push_back(std::move(f));
        }
        std::sort(dem.faults.begin(), dem.faults.end(), [](const DemFault &a, const DemFault &b) {
            if (a.detectors != b.detectors) {
                return a.detectors < b.detectors;
            }
            return a.observables < b.observables;
        });
        return dem;
    }

   private:
    std::unordered_map<std::vector<uint64_t>, double, WordsHash> merged_;
};

}  // namespace

DetectorErrorModel extract_dem(const SimCircuit &c) {
    std::vector<std::vector<uint32_t>> targets = c.detectors;
    targets.insert(targets.end(), c.observables.begin(), c.observables.end());
    SensitivityTracker tracker(c, targets);
    DemAccumulator acc;
    for (size_t i = c.ops.size(); i-- > 0;) {
        tracker.rewind_to(i + 1);
        const Op &op = c.ops[i];
        const auto &t = op.targets;
        switch (op.type) {
            case OpType::X_ERROR:
                for (uint32_t q : t) {
                    acc.add(tracker.x_sensitivity(q), op.p);
                }
                break;
            case OpType::Z_ERROR:
                for (uint32_t q : t) {
                    acc.add(tracker.z_sensitivity(q), op.p);
                }
                break;
            case OpType::DEPOLARIZE1:
                for (uint32_t q : t) {
                    BitVec y = tracker.x_sensitivity(q);
                    y ^= tracker.z_sensitivity(q);
                    acc.add(tracker.x_sensitivity(q), op.p / 3);
                    acc.add(y, op.p / 3);
                    acc.add(tracker.z_sensitivity(q), op.p / 3);
                }
                break;
            case OpType::DEPOLARIZE2:
                for (size_t j = 0; j + 1 < t.size(); j += 2) {
                    std::array<BitVec, 4> pa, pb;
                    for (auto [arr, q] : {std::pair{&pa, t[j]}, std::pair{&pb, t[j + 1]}}) {
                        (*arr)[0] = BitVec(targets.size());
                        (*arr)[1] = tracker.x_sensitivity(q);
                        (*arr)[3] = tracker.z_sensitivity(q);
                        (*arr)[2] = (*arr)[1];
                        (*arr)[2] ^= (*arr)[3];
                    }
                    for (unsigned k = 1; k < 16; k++) {
                        BitVec sig = pa[k >> 2];
                        sig ^= pb[k & 3];
                        acc.add(sig, op.p / 15);
                    }
                }
                break;
            default:
                break;
        }
    }
    return acc.finish(c.detectors.size(), c.observables.size());
}

BitMatrix DetectorErrorModel::check_matrix() const {
    BitMatrix h(num_detectors, faults.size());
    for (size_t f = 0; f < faults.size(); f++) {
        for (uint32_t d : faults[f].detectors) {
            h.set(d, f, true);
        }
    }
    return h;
}

BitMatrix DetectorErrorModel::observable_matrix() const {
    BitMatrix l(num_observables, faults.size());
    for (size_t f = 0; f < faults.size(); f++) {
        for (uint32_t k : faults[f].observables) {
            l.set(k, f, true);
        }
    }
    return l;
}

std::vector<double> DetectorErrorModel::priors() const {
    std::vector<double> out;
    out.reserve(faults.size());
    for (const DemFault &f : faults) {
        out.push_back(f.p);
    }
    return out;
}

std::string DetectorErrorModel::to_text() const {
    std::ostringstream out;
    out.precision(17);
    out << "detectors " << num_detectors << "\nobservables " << num_observables << '\n';
    for (const DemFault &f : faults) {
        out << "error(" << f.p << ")";
        for (uint32_t d : f.detectors) {
            out << " D" << d;
        }
        for (uint32_t k : f.observables) {
            out << " L" << k;
        }
        out << '\n';
    }
    return out.str();
}

DetectorErrorModel DetectorErrorModel::from_text(const std::string &text) {
    DetectorErrorModel dem;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "detectors") {
            ls >> dem.num_detectors;
            continue;
        }
        if (head == "observables") {
            ls >> dem.num_observables;
            continue;
        }
        if (head.rfind("error(", 0) != 0 || head.back() != ')') {
            throw std::invalid_argument("malformed DEM line: " + line);
        }
        DemFault f;
        f.p = std::stod(head.substr(6, head.size() - 7));
        if (!(f.p > 0.0 && f.p <= 0.5)) {
            throw std::invalid_argument("DEM prior outside (0, 0.5]: " + line);
        }
        std::string tok;
        while (ls >> tok) {
            if (tok.size() < 2 || (tok[0] != 'D' && tok[0] != 'L')) {
                throw std::invalid_argument("malformed DEM target '" + tok + "'");
            }
            uint32_t id = static_cast<uint32_t>(std::stoul(tok.substr(1)));
            if (tok[0] == 'D') {
                if (id >= dem.num_detectors) {
                    throw std::invalid_argument("detector id out of range: " + tok);
                }
                f.detectors.push_back(id);
            } else {
                if (id >= dem.num_observables) {
                    throw std::invalid_argument("observable id out of range: " + tok);
                }
                f.observables.push_back(id);
            }
        }
        dem.faults.push_back(std::move(f));
    }
    return dem;
}

// ---------------------------------------------------------------------------
// Detector-map verification

DetectorMapReport verify_detector_map(const CxcCode &code, const Circuit &circuit) {
    SyndromeRecords rec;
    SimCircuit c = lower_circuit(circuit, &rec);
    const size_t n_data = code.num_data();
    const size_t rounds = circuit.rounds;
    std::vector<std::vector<uint32_t>> targets(c.num_measurements());
    for (uint32_t r = 0; r < targets.size(); r++) {
        targets[r] = {r};
    }
    // Record index -> (type, round, row).
    struct Where {
        CheckType type;
        size_t round;
        size_t row;
    };
    std::vector<Where> where(targets.size());
    for (size_t r = 0; r < rounds; r++) {
        for (size_t row = 0; row < code.num_checks(); row++) {
            where[rec.x[r][row]] = {CheckType::X, r, row};
            where[rec.z[r][row]] = {CheckType::Z, r, row};
        }
    }

    // Clean injection points: right after a measurement layer that closes one
    // round of the watched type before any gate of the next round.
    std::vector<LayerRounds> lr = layer_rounds(circuit);
    size_t x_point = rec.layer_end[0];
    size_t z_point = rec.layer_end[0];
    size_t next_round = 0;
    if (rounds >= 2) {
        next_round = 1;
        for (size_t li = 0; li < circuit.layers.size(); li++) {
            if (circuit.layers[li].kind != LayerKind::MeasureResetX) {
                continue;
            }
            if (lr[li].z_round == 0) {
                x_point = rec.layer_end[li];
            }
            if (lr[li].x_round == 0) {
                z_point = rec.layer_end[li];
            }
        }
    }

    DetectorMapReport report;
    SensitivityTracker tracker(c, targets);
    // The X-fault point comes after the Z-fault point, so visit it first.
    for (auto [fault, point] : {std::pair{'X', x_point}, std::pair{'Z', z_point}}) {
        tracker.rewind_to(point);
        const CheckType watched = fault == 'X' ? CheckType::Z : CheckType::X;
        const BitMatrix &h = fault == 'X' ? code.hz : code.hx;
        for (uint32_t u = 0; u < n_data; u++) {
            const BitVec &flips = fault == 'X' ? tracker.x_sensitivity(u) : tracker.z_sensitivity(u);
            std::vector<size_t> rows;
            for (size_t r : flips.support()) {
                const Where &w = where[r];
                if (w.type != watched || w.round < next_round) {
                    report.mismatches.push_back(std::string(1, fault) + " fault on q" + std::to_string(u) +
                                                " flips a " + (w.type == CheckType::X ? "X" : "Z") +
                                                "-check in round " + std::to_string(w.round));
                } else if (w.round == next_round) {
                    rows.push_back(w.row);
                }
            }
            std::sort(rows.begin(), rows.end());
            if (rows != h.col_support(u)) {
                report.mismatches.push_back(std::string(1, fault) + " fault on q" + std::to_string(u) + " in round " +
                                            std::to_string(next_round) +
                                            " does not flip its parity-check column");
            }
            report.faults_checked++;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Export

std::string to_stim(const SimCircuit &c) {
    std::ostringstream out;
    out.precision(17);
    for (const Op &op : c.ops) {
        out << op_name(op.type);
        if (is_noise(op.type)) {
            out << '(' << op.p << ')';
        }
        for (uint32_t q : op.targets) {
            out << ' ' << q;
        }
        out << '\n';
    }
    const int64_t m = static_cast<int64_t>(c.num_measurements());
    for (const auto &det : c.detectors) {
        out << "DETECTOR";
        for (uint32_t r : det) {
            out << " rec[" << static_cast<int64_t>(r) - m << ']';
        }
        out << '\n';
    }
    for (size_t k = 0; k < c.observables.size(); k++) {
        out << "OBSERVABLE_INCLUDE(" << k << ")";
        for (uint32_t r : c.observables[k]) {
            out << " rec[" << static_cast<int64_t>(r) - m << ']';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace cxc
