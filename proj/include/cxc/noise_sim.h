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

#ifndef CXC_NOISE_SIM_H
#define CXC_NOISE_SIM_H

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cxc/circuit.h"
#include "cxc/gf2.h"

namespace cxc {

enum class OpType : uint8_t {
    R,      // reset to |0>
    RX,     // reset to |+>
    M,      // Z-basis measurement
    MX,     // X-basis measurement
    MRX,    // X-basis measurement followed by reset to |+>
    CX,     // targets are (control, target) pairs
    CZ,
    DEPOLARIZE1,
    DEPOLARIZE2,
    X_ERROR,
    Z_ERROR,
    TICK,
};

const char *op_name(OpType t);
bool is_measurement(OpType t);
bool is_noise(OpType t);

struct Op {
    OpType type = OpType::TICK;
    std::vector<uint32_t> targets;
    double p = 0.0;

    bool operator==(const Op &) const = default;
};

/// Flat stabilizer circuit. Measurements are numbered in program order; each
/// detector and observable is a parity of measurement records.
struct SimCircuit {
    uint32_t num_qubits = 0;
    std::vector<Op> ops;
    std::vector<std::vector<uint32_t>> detectors;
    std::vector<std::vector<uint32_t>> observables;

    size_t num_measurements() const;
};

enum class Basis { X, Z };
std::string basis_name(Basis b);
Basis parse_basis(const std::string &name);

struct NoiseModel {
    double p = 0.0;
};

struct MemoryExperiment {
    Basis basis = Basis::Z;
    size_t rounds = 1;
    Variant variant = Variant::Packed;
};

/// Record indices of every syndrome measurement, [type][round][check row].
struct SyndromeRecords {
    std::vector<std::vector<uint32_t>> x;
    std::vector<std::vector<uint32_t>> z;
    std::vector<uint32_t> data;  // final transversal readout, empty if absent
    /// Op index just past the closing TICK of each circuit layer.
    std::vector<size_t> layer_end;
};

/// Qubits 0 .. 2ab-1 are data, 2ab + v is ancilla v of the circuit.
SimCircuit lower_circuit(const Circuit &c, SyndromeRecords *records = nullptr);

/// Noiseless memory experiment. Z-memory prepares data in |0>, runs the
/// syndrome circuit, reads data out in Z, and declares detectors on Z checks:
/// round 0 alone, consecutive rounds, and the final readout against round d-1.
/// Observables are the Z logicals on the readout. X-memory is the mirror image.
SimCircuit build_memory_experiment(const CxcCode &code, const MemoryExperiment &exp);
SimCircuit build_memory_experiment(const CxcCode &code, const Circuit &circuit, Basis basis);

/// Inserts standard circuit noise tick by tick: DEPOLARIZE2 after two-qubit
/// gates, DEPOLARIZE1 after resets and on idle qubits, and an outcome flip
/// before each measurement. Qubits with no later operation are not idled.
SimCircuit annotate_noise(const SimCircuit &c, const NoiseModel &model);

/// Number of elementary noise locations (one per qubit or pair per channel).
size_t count_fault_locations(const SimCircuit &c);

/// Detector and observable bits, one column per shot.
struct ShotBatch {
    BitMatrix detectors;
    BitMatrix observables;
    uint64_t seed = 0;

    size_t shots() const { return detectors.cols(); }
    bool operator==(const ShotBatch &) const = default;

    /// 16-byte header (magic "CXSB", D, K, shots as little-endian u32) then
    /// the detector and observable rows, each padded to whole 64-bit words.
    void write_binary(std::ostream &out) const;
    static ShotBatch read_binary(std::istream &in);
};

/// Shots per independently seeded batch. Results depend only on the master
/// seed, never on the worker count.
inline constexpr size_t kShotsPerBatch = 1024;

/// Pauli-frame Monte Carlo. Frames are re-randomized by the stabilizers of each
/// reset and measurement, so non-deterministic outcomes look random and
/// detectors carry only the parity of physical faults.
ShotBatch pauli_frame_sample(const SimCircuit &c, size_t shots, uint64_t seed, size_t workers = 1);

struct DemFault {
    double p = 0.0;
    std::vector<uint32_t> detectors;
    std::vector<uint32_t> observables;

    bool operator==(const DemFault &) const = default;
};

struct DetectorErrorModel {
    size_t num_detectors = 0;
    size_t num_observables = 0;
    std::vector<DemFault> faults;

    size_t num_faults() const { return faults.size(); }
    /// D x F and K x F incidence.
    BitMatrix check_matrix() const;
    BitMatrix observable_matrix() const;
    std::vector<double> priors() const;

    /// "detectors D" / "observables K" header lines, then one
    /// "error(p) D<i> ... L<j> ..." line per fault.
    std::string to_text() const;
    static DetectorErrorModel from_text(const std::string &text);
};

/// Propagates every elementary fault to its detector/observable signature,
/// merges equal signatures with p1(1-p2) + p2(1-p1), and drops empty ones.
/// Faults are sorted by signature, so the result does not depend on the order
/// in which noise locations appear.
DetectorErrorModel extract_dem(const SimCircuit &c);

/// Backward Pauli sensitivity: for every qubit at every point between ops, the
/// set of targets flipped by an X or Z there. A target is a list of
/// measurement records whose parity is observed.
class SensitivityTracker {
   public:
    SensitivityTracker(const SimCircuit &c, const std::vector<std::vector<uint32_t>> &targets);

    /// Moves back to the point between op index-1 and op index; starts at the
    /// end of the circuit.
    void rewind_to(size_t index);
    size_t position() const { return position_; }
    const BitVec &x_sensitivity(uint32_t qubit) const { return sx_[qubit]; }
    const BitVec &z_sensitivity(uint32_t qubit) const { return sz_[qubit]; }

   private:
    void step_back(const Op &op);

    const SimCircuit &circuit_;
    std::vector<BitVec> record_targets_;
    std::vector<BitVec> sx_;
    std::vector<BitVec> sz_;
    size_t position_;
    size_t record_cursor_;  // measurements before position_
};

struct DetectorMapReport {
    size_t faults_checked = 0;
    std::vector<std::string> mismatches;

    bool ok() const { return mismatches.empty() && faults_checked > 0; }
};

/// Injects each single-qubit X and Z fault on every data qubit between rounds
/// of the noiseless circuit and checks that the next round flips exactly the
/// parity-check column of that qubit, that earlier rounds are untouched, and
/// that the other check type never flips.
DetectorMapReport verify_detector_map(const CxcCode &code, const Circuit &circuit);

/// Export in the widely used stabilizer-circuit text dialect.
std::string to_stim(const SimCircuit &c);

}  // namespace cxc

#endif
