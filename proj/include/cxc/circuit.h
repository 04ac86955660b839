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

#ifndef CXC_CIRCUIT_H
#define CXC_CIRCUIT_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cxc/cxc_code.h"

namespace cxc {

enum class CheckType : uint8_t { X = 0, Z = 1 };

/// Data qubit (i, j, k) in Z_2 x Z_a x Z_b.
struct DataTuple {
    uint32_t i = 0;
    uint32_t j = 0;
    uint32_t k = 0;
    bool operator==(const DataTuple &) const = default;
};

/// Ancilla (r, s, t) in {X, Z} x Z_a x Z_b.
struct AncillaTuple {
    CheckType r = CheckType::X;
    uint32_t s = 0;
    uint32_t t = 0;
    bool operator==(const AncillaTuple &) const = default;
};

/// Linear indexing of the two qubit rows. Data qubit u = ab*i + b*j + k is
/// column u of the check matrices; ancilla (r, s, t) measures row v = b*s + t of
/// H_r and sits at position v (X) or ab + v (Z) of the ancilla row.
class QubitLayout {
   public:
    QubitLayout(uint32_t a, uint32_t b) : a_(a), b_(b) {}

    uint32_t a() const { return a_; }
    uint32_t b() const { return b_; }
    size_t num_data() const { return 2 * checks(); }
    size_t num_ancillas() const { return 2 * checks(); }
    size_t checks() const { return static_cast<size_t>(a_) * b_; }

    uint32_t data_index(DataTuple q) const;
    DataTuple data_tuple(uint32_t u) const;
    uint32_t ancilla_index(AncillaTuple v) const;
    AncillaTuple ancilla_tuple(uint32_t index) const;
    /// Row of H_X or H_Z measured by an ancilla.
    uint32_t check_row(AncillaTuple v) const { return b_ * v.s + v.t; }

   private:
    uint32_t a_;
    uint32_t b_;
};

/// Which circulant block a monomial belongs to.
enum class Block { A, B, AT, BT };

/// Ancilla/data pair coupled by one monomial (indices in their own rows).
struct GatePair {
    uint32_t ancilla = 0;
    uint32_t data = 0;
    bool operator==(const GatePair &) const = default;
};

/// Pairs coupled by monomial x^exponent (or y^exponent) of the given block,
/// ordered by ancilla index. Throws std::invalid_argument if the exponent is
/// not in the corresponding support.
std::vector<GatePair> monomial_incidence(const CxcCode &code, uint32_t exponent, Block which);

struct Shift {
    uint32_t chi = 0;
    uint32_t eta = 0;
    uint32_t zeta = 0;
    bool operator==(const Shift &) const = default;
};

enum class LayerKind { PrepPlus, Gates, MeasureResetX, Shift };

/// One time step. Gate layers may hold CX and CZ gates on disjoint qubits.
struct Layer {
    LayerKind kind = LayerKind::Gates;
    std::vector<uint32_t> ancillas;  // PrepPlus / MeasureResetX
    std::vector<GatePair> cx;        // control = ancilla, target = data
    std::vector<GatePair> cz;
    Shift shift;

    bool operator==(const Layer &) const = default;
};

enum class Variant { Modular, Packed };

std::string variant_name(Variant v);
Variant parse_variant(const std::string &name);

struct Circuit {
    uint32_t a = 0;
    uint32_t b = 0;
    size_t rounds = 0;
    Variant variant = Variant::Modular;
    std::vector<Layer> layers;

    bool operator==(const Circuit &) const = default;
};

/// Syndrome extraction on two qubit rows with cyclic shifts of the ancilla row.
Circuit gen_modular_circuit(const CxcCode &code, size_t rounds);
/// The same schedule with every shift removed.
Circuit gen_packed_circuit(const CxcCode &code, size_t rounds);
Circuit gen_circuit(const CxcCode &code, size_t rounds, Variant variant);

/// Every layer counts 1 regardless of kind.
size_t circuit_depth(const Circuit &c);

/// (2w(A) + 2w(B) + 2) d + 2w(A) + 1.
size_t modular_depth_formula(size_t w_a, size_t w_b, size_t rounds);
/// (w(A) + w(B) + 2) d + w(A) + 1.
size_t packed_depth_formula(size_t w_a, size_t w_b, size_t rounds);

/// Physical translation of the ancilla row for one shift.
struct ShiftStep {
    Shift shift;     // target alignment
    Shift relative;  // offset change from the previous alignment, reduced mod (2, a, b)
    /// Translation of X ancillas: ab*chi + b*eta + zeta over the relative offsets,
    /// reduced modulo the period 2ab. Z ancillas move the same distance in the
    /// opposite sense.
    uint64_t x_distance = 0;
    int64_t z_direction = -1;
};

struct ShiftSchedule {
    std::vector<ShiftStep> steps;
    uint64_t total_distance = 0;
};

/// Data qubit sitting above an ancilla once the ancilla row is at offset
/// (chi, eta, zeta): X ancillas see (chi, s+eta, t+zeta), Z ancillas move the
/// other way and see (1+chi, s-eta, t-zeta).
DataTuple aligned_data(const QubitLayout &layout, const Shift &offset, AncillaTuple ancilla);

/// Throws std::invalid_argument for circuits without shift layers.
ShiftSchedule shift_schedule(const Circuit &c);

/// Round index of the X-type (resp. Z-type) check measured by each gate or
/// measurement layer, derived from the number of earlier measurement layers.
struct LayerRounds {
    int x_round = -1;
    int z_round = -1;
};
std::vector<LayerRounds> layer_rounds(const Circuit &c);

/// "PREP_PLUS a.." / "CX (a,q).." / "CZ (a,q).." / "MR_X a.." / "SHIFT chi eta zeta".
/// A gate layer holding both kinds is one line: "CX (..).. CZ (..)..".
std::string emit_text(const Circuit &c);
Circuit parse_text(const std::string &text);

}  // namespace cxc

#endif
