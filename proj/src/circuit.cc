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

#include "cxc/circuit.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cxc {

uint32_t QubitLayout::data_index(DataTuple q) const {
    if (q.i > 1 || q.j >= a_ || q.k >= b_) {
        throw std::out_of_range("data tuple out of range");
    }
    return a_ * b_ * q.i + b_ * q.j + q.k;
}

DataTuple QubitLayout::data_tuple(uint32_t u) const {
    if (u >= num_data()) {
        throw std::out_of_range("data index out of range");
    }
    uint32_t ab = a_ * b_;
    return {u / ab, (u % ab) / b_, u % b_};
}

uint32_t QubitLayout::ancilla_index(AncillaTuple v) const {
    if (v.s >= a_ || v.t >= b_) {
        throw std::out_of_range("ancilla tuple out of range");
    }
    return (v.r == CheckType::Z ? a_ * b_ : 0) + b_ * v.s + v.t;
}

AncillaTuple QubitLayout::ancilla_tuple(uint32_t index) const {
    if (index >= num_ancillas()) {
        throw std::out_of_range("ancilla index out of range");
    }
    uint32_t ab = a_ * b_;
    CheckType r = index >= ab ? CheckType::Z : CheckType::X;
    uint32_t v = index % ab;
    return {r, v / b_, v % b_};
}

std::vector<GatePair> monomial_incidence(const CxcCode &code, uint32_t exponent, Block which) {
    const CyclicPoly &poly = (which == Block::A || which == Block::AT) ? code.poly_a : code.poly_b;
    if (!std::binary_search(poly.support().begin(), poly.support().end(), exponent)) {
        throw std::invalid_argument("monomial exponent " + std::to_string(exponent) + " is not in the support");
    }
    QubitLayout layout(code.a, code.b);
    const uint32_t a = code.a;
    const uint32_t b = code.b;
    std::vector<GatePair> out;
    out.reserve(layout.checks());
    for (uint32_t s = 0; s < a; s++) {
        for (uint32_t t = 0; t < b; t++) {
            AncillaTuple anc;
            DataTuple q;
            switch (which) {
                case Block::A:
                    anc = {CheckType::X, s, t};
                    q = {0, (s + exponent) % a, t};
                    break;
                case Block::AT:
                    anc = {CheckType::Z, (s + exponent) % a, t};
                    q = {1, s, t};
                    break;
                case Block::B:
                    anc = {CheckType::X, s, t};
                    q = {1, s, (t + exponent) % b};
                    break;
                case Block::BT:
                    anc = {CheckType::Z, s, (t + exponent) % b};
                    q = {0, s, t};
                    break;
            }
            out.push_back({layout.ancilla_index(anc), layout.data_index(q)});
        }
    }
    std::sort(out.begin(), out.end(), [](const GatePair &x, const GatePair &y) { return x.ancilla < y.ancilla; });
    return out;
}

std::string variant_name(Variant v) { return v == Variant::Modular ? "modular" : "packed"; }

Variant parse_variant(const std::string &name) {
    if (name == "modular") {
        return Variant::Modular;
    }
    if (name == "packed") {
        return Variant::Packed;
    }
    throw std::invalid_argument("unknown circuit variant '" + name + "' (expected modular or packed)");
}

namespace {

std::vector<uint32_t> ancilla_range(const QubitLayout &layout, CheckType r) {
    std::vector<uint32_t> out(layout.checks());
    uint32_t base = r == CheckType::Z ? static_cast<uint32_t>(layout.checks()) : 0;
    for (uint32_t v = 0; v < out.size(); v++) {
        out[v] = base + v;
    }
    return out;
}

}  // namespace

Circuit gen_circuit(const CxcCode &code, size_t rounds, Variant variant) {
    if (rounds < 1) {
        throw std::invalid_argument("circuit needs at least one round");
    }
    QubitLayout layout(code.a, code.b);
    const bool shifts = variant == Variant::Modular;
    Circuit c;
    c.a = code.a;
    c.b = code.b;
    c.rounds = rounds;
    c.variant = variant;

    Layer prep;
    prep.kind = LayerKind::PrepPlus;
    prep.ancillas = ancilla_range(layout, CheckType::X);
    auto z_anc = ancilla_range(layout, CheckType::Z);
    prep.ancillas.insert(prep.ancillas.end(), z_anc.begin(), z_anc.end());
    c.layers.push_back(std::move(prep));

    for (size_t l = 0; l <= rounds; l++) {
        for (uint32_t eta : code.poly_a.support()) {
            if (shifts) {
                Layer s;
                s.kind = LayerKind::Shift;
                s.shift = {0, eta, 0};
                c.layers.push_back(s);
            }
            Layer g;
            g.kind = LayerKind::Gates;
            if (l < rounds) {
                g.cx = monomial_incidence(code, eta, Block::A);
            }
            if (l > 0) {
                g.cz = monomial_incidence(code, eta, Block::AT);
            }
            c.layers.push_back(std::move(g));
        }
        if (l > 0) {
            Layer m;
            m.kind = LayerKind::MeasureResetX;
            m.ancillas = ancilla_range(layout, CheckType::Z);
            c.layers.push_back(std::move(m));
        }
        if (l < rounds) {
            for (uint32_t zeta : code.poly_b.support()) {
                if (shifts) {
                    Layer s;
                    s.kind = LayerKind::Shift;
                    s.shift = {1, 0, zeta};
                    c.layers.push_back(s);
                }
                Layer g;
                g.kind = LayerKind::Gates;
                g.cx = monomial_incidence(code, zeta, Block::B);
                g.cz = monomial_incidence(code, zeta, Block::BT);
                c.layers.push_back(std::move(g));
            }
            Layer m;
            m.kind = LayerKind::MeasureResetX;
            m.ancillas = ancilla_range(layout, CheckType::X);
            c.layers.push_back(std::move(m));
        }
    }
    return c;
}

Circuit gen_modular_circuit(const CxcCode &code, size_t rounds) { return gen_circuit(code, rounds, Variant::Modular); }

Circuit gen_packed_circuit(const CxcCode &code, size_t rounds) { return gen_circuit(code, rounds, Variant::Packed); }

size_t circuit_depth(const Circuit &c) { return c.layers.size(); }

size_t modular_depth_formula(size_t w_a, size_t w_b, size_t rounds) {
    return (2 * w_a + 2 * w_b + 2) * rounds + (2 * w_a + 1);
}

size_t packed_depth_formula(size_t w_a, size_t w_b, size_t rounds) { return (w_a + w_b + 2) * rounds + (w_a + 1); }

DataTuple aligned_data(const QubitLayout &layout, const Shift &offset, AncillaTuple ancilla) {
    const uint32_t a = layout.a();
    const uint32_t b = layout.b();
    if (ancilla.r == CheckType::X) {
        return {offset.chi % 2, (ancilla.s + offset.eta) % a, (ancilla.t + offset.zeta) % b};
    }
    return {(1 + offset.chi) % 2, (ancilla.s + a - offset.eta % a) % a, (ancilla.t + b - offset.zeta % b) % b};
}

ShiftSchedule shift_schedule(const Circuit &c) {
    ShiftSchedule out;
    Shift current{0, 0, 0};
    const uint64_t ab = static_cast<uint64_t>(c.a) * c.b;
    for (const Layer &layer : c.layers) {
        if (layer.kind != LayerKind::Shift) {
            continue;
        }
        ShiftStep step;
        step.shift = layer.shift;
        step.relative = {(layer.shift.chi + 2 - current.chi) % 2, (layer.shift.eta + c.a - current.eta) % c.a,
                         (layer.shift.zeta + c.b - current.zeta) % c.b};
        step.x_distance = (ab * step.relative.chi + c.b * step.relative.eta + step.relative.zeta) % (2 * ab);
        out.total_distance += step.x_distance;
        out.steps.push_back(step);
        current = layer.shift;
    }
    if (out.steps.empty()) {
        throw std::invalid_argument("shift_schedule: circuit has no shift layers");
    }
    return out;
}

std::vector<LayerRounds> layer_rounds(const Circuit &c) {
    std::vector<LayerRounds> out;
    const uint32_t ab = c.a * c.b;
    int x_done = 0;
    int z_done = 0;
    for (const Layer &layer : c.layers) {
        LayerRounds r;
        if (layer.kind == LayerKind::Gates) {
            if (!layer.cx.empty()) {
                r.x_round = x_done;
            }
            if (!layer.cz.empty()) {
                r.z_round = z_done;
            }
        } else if (layer.kind == LayerKind::MeasureResetX && !layer.ancillas.empty()) {
            bool is_z = layer.ancillas.front() >= ab;
            (is_z ? r.z_round : r.x_round) = is_z ? z_done++ : x_done++;
        }
        out.push_back(r);
    }
    return out;
}

namespace {

void emit_ids(std::ostringstream &out, const std::vector<uint32_t> &ids) {
    for (uint32_t a : ids) {
        out << " a" << a;
    }
}

void emit_pairs(std::ostringstream &out, const char *name, const std::vector<GatePair> &pairs) {
    out << name;
    for (const GatePair &p : pairs) {
        out << " (a" << p.ancilla << ",q" << p.data << ")";
    }
}

uint32_t parse_id(const std::string &tok, char prefix) {
    if (tok.size() < 2 || tok[0] != prefix) {
        throw std::invalid_argument("expected '" + std::string(1, prefix) + "<id>' but got '" + tok + "'");
    }
    size_t used = 0;
    unsigned long v = std::stoul(tok.substr(1), &used);
    if (used != tok.size() - 1) {
        throw std::invalid_argument("malformed id '" + tok + "'");
    }
    return static_cast<uint32_t>(v);
}

GatePair parse_pair(const std::string &tok) {
    if (tok.size() < 7 || tok.front() != '(' || tok.back() != ')') {
        throw std::invalid_argument("malformed gate pair '" + tok + "'");
    }
    auto comma = tok.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("malformed gate pair '" + tok + "'");
    }
    return {parse_id(tok.substr(1, comma - 1), 'a'), parse_id(tok.substr(comma + 1, tok.size() - comma - 2), 'q')};
}

}  // namespace

std::string emit_text(const Circuit &c) {
    std::ostringstream out;
    out << "# cxc circuit a=" << c.a << " b=" << c.b << " rounds=" << c.rounds << " variant=" << variant_name(c.variant)
        << '\n';
    for (const Layer &layer : c.layers) {
        switch (layer.kind) {
            case LayerKind::PrepPlus:
                out << "PREP_PLUS";
                emit_ids(out, layer.ancillas);
                break;
            case LayerKind::MeasureResetX:
                out << "MR_X";
                emit_ids(out, layer.ancillas);
                break;
            case LayerKind::Shift:
                out << "SHIFT " << layer.shift.chi << ' ' << layer.shift.eta << ' ' << layer.shift.zeta;
                break;
            case LayerKind::Gates:
                if (!layer.cx.empty()) {
                    emit_pairs(out, "CX", layer.cx);
                }
                if (!layer.cz.empty()) {
                    if (!layer.cx.empty()) {
                        out << ' ';
                    }
                    emit_pairs(out, "CZ", layer.cz);
                }
                break;
        }
        out << '\n';
    }
    return out.str();
}

Circuit parse_text(const std::string &text) {
    Circuit c;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "#") {
            std::string tok;
            while (ls >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) {
                    continue;
                }
                std::string key = tok.substr(0, eq);
                std::string val = tok.substr(eq + 1);
                if (key == "a") {
                    c.a = static_cast<uint32_t>(std::stoul(val));
                } else if (key == "b") {
                    c.b = static_cast<uint32_t>(std::stoul(val));
                } else if (key == "rounds") {
                    c.rounds = std::stoul(val);
                } else if (key == "variant") {
                    c.variant = parse_variant(val);
                }
            }
            have_header = true;
            continue;
        }
        Layer layer;
        std::string tok;
        if (head == "PREP_PLUS" || head == "MR_X") {
            layer.kind = head == "PREP_PLUS" ? LayerKind::PrepPlus : LayerKind::MeasureResetX;
            while (ls >> tok) {
                layer.ancillas.push_back(parse_id(tok, 'a'));
            }
        } else if (head == "SHIFT") {
            layer.kind = LayerKind::Shift;
            if (!(ls >> layer.shift.chi >> layer.shift.eta >> layer.shift.zeta)) {
                throw std::invalid_argument("SHIFT needs three offsets");
            }
        } else if (head == "CX" || head == "CZ") {
            layer.kind = LayerKind::Gates;
            std::vector<GatePair> *dst = head == "CX" ? &layer.cx : &layer.cz;
            while (ls >> tok) {
                if (tok == "CX" || tok == "CZ") {
                    dst = tok == "CX" ? &layer.cx : &layer.cz;
                    continue;
                }
                dst->push_back(parse_pair(tok));
            }
        } else {
            throw std::invalid_argument("unknown circuit instruction '" + head + "'");
        }
        c.layers.push_back(std::move(layer));
    }
    if (!have_header) {
        throw std::invalid_argument("circuit text is missing its '# cxc circuit' header");
    }
    return c;
}

}  // namespace cxc
