// Copyright 2026 The pepfold Authors
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

#include "pepfold/lattice.hpp"

#include <string>

#include "pepfold/error.hpp"

namespace pepfold {

TurnBits TurnBits::from_code(unsigned code) {
    TurnBits t;
    t.q1 = static_cast<std::uint8_t>((code >> 4) & 1U);
    t.q2 = static_cast<std::uint8_t>((code >> 3) & 1U);
    t.q3 = static_cast<std::uint8_t>((code >> 2) & 1U);
    t.q4 = static_cast<std::uint8_t>((code >> 1) & 1U);
    t.q5 = static_cast<std::uint8_t>(code & 1U);
    return t;
}

unsigned TurnBits::code() const {
    return (unsigned{q1} << 4) | (unsigned{q2} << 3) | (unsigned{q3} << 2) | (unsigned{q4} << 1) |
           unsigned{q5};
}

double delta_a(int q1, int q2) { return 0.5 - 0.5 * q1 - q2 + q1 * q2; }

double delta_b(int q1, int q2, int q3) { return 0.5 + 0.5 * q1 - q3 - q1 * q2; }

namespace {

// Doubled-unit versions of Δa and Δb; exact integers.
int delta_a2(int q1, int q2) { return 1 - q1 - 2 * q2 + 2 * q1 * q2; }
int delta_b2(int q1, int q2, int q3) { return 1 + q1 - 2 * q3 - 2 * q1 * q2; }

TurnBasis make_basis() {
    TurnBasis basis;
    for (int s = 0; s < 8; ++s) {
        const int q1 = (s >> 2) & 1, q2 = (s >> 1) & 1, q3 = s & 1;
        basis.b3[s] = {1, q1, q2, q3, q1 * q2, q2 * q3, q3 * q1, q1 * q2 * q3};
        basis.delta_a[s] = delta_a(q1, q2);
        basis.delta_b[s] = delta_b(q1, q2, q3);
    }
    // Pairing monomial m with the state that sets exactly its variables makes
    // b3 unit lower triangular in that order: forward substitution.
    constexpr std::array<int, 8> state_of = {0b000, 0b100, 0b010, 0b001,
                                             0b110, 0b011, 0b101, 0b111};
    auto solve = [&](const std::array<double, 8>& rhs) {
        std::array<double, 8> c{};
        for (int m = 0; m < 8; ++m) {
            const int s = state_of[m];
            double acc = rhs[s];
            for (int j = 0; j < m; ++j) acc -= basis.b3[s][j] * c[j];
            c[m] = acc / basis.b3[s][m];
        }
        return c;
    };
    basis.c_delta_a = solve(basis.delta_a);
    basis.c_delta_b = solve(basis.delta_b);
    return basis;
}

}  // namespace

const TurnBasis& turn_basis() {
    static const TurnBasis basis = make_basis();
    return basis;
}

Displacement decode_turn(const TurnBits& bits) {
    const int q1 = bits.q1, q2 = bits.q2, q3 = bits.q3, q4 = bits.q4, q5 = bits.q5;
    const int a = delta_a2(q1, q2);
    const int b = delta_b2(q1, q2, q3);
    const int xy = q4 * q5;
    const int yz = (1 - q4) * q5;
    const int zx = q4 * (1 - q5);
    return {xy * a + zx * b, yz * a + xy * b, zx * a + yz * b};
}

LatticeConformation decode_conformation(const Bits& bits, std::size_t beads) {
    if (beads < 2) {
        throw DataError("a conformation needs at least 2 beads, got " + std::to_string(beads));
    }
    const std::size_t expected = qubit_count(beads);
    if (bits.size() != expected) {
        throw DataError("bitstring length mismatch: expected " + std::to_string(expected) +
                        " bits for " + std::to_string(beads) + " beads, got " +
                        std::to_string(bits.size()));
    }
    LatticeConformation conf;
    conf.positions.reserve(beads);
    conf.positions.push_back({0, 0, 0});
    for (std::size_t t = 0; t + 1 < beads; ++t) {
        const std::size_t o = t * kBitsPerTurn;
        for (std::size_t k = 0; k < kBitsPerTurn; ++k) {
            if (bits[o + k] > 1) throw DataError("bit values must be 0 or 1");
        }
        const TurnBits tb{bits[o], bits[o + 1], bits[o + 2], bits[o + 3], bits[o + 4]};
        conf.positions.push_back(conf.positions.back() + decode_turn(tb));
    }
    conf.source_bits = bits;
    return conf;
}

LatticeConformation conformation_from_turns(const std::vector<Displacement>& turns) {
    LatticeConformation conf;
    conf.positions.reserve(turns.size() + 1);
    conf.positions.push_back({0, 0, 0});
    for (const auto& t : turns) conf.positions.push_back(conf.positions.back() + t);
    return conf;
}

std::array<TurnTableEntry, 32> enumerate_turn_table() {
    std::array<TurnTableEntry, 32> table{};
    for (unsigned code = 0; code < 32; ++code) {
        const TurnBits tb = TurnBits::from_code(code);
        table[code] = {tb, decode_turn(tb)};
    }
    return table;
}

const std::vector<Displacement>& neighbor_moves() {
    static const std::vector<Displacement> moves = [] {
        std::vector<Displacement> moves;
        for (const auto& e : enumerate_turn_table()) {
            if (e.displacement.is_zero()) continue;
            bool seen = false;
            for (const auto& m : moves) seen = seen || m == e.displacement;
            if (!seen) moves.push_back(e.displacement);
        }
        return moves;
    }();
    return moves;
}

std::optional<TurnBits> encode_turn(const Displacement& d) {
    if (d.is_zero()) return std::nullopt;
    for (const auto& e : enumerate_turn_table()) {
        if (e.displacement == d) return e.bits;
    }
    return std::nullopt;
}

}  // namespace pepfold
