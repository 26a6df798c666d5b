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

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

#include "pepfold/bits.hpp"

namespace pepfold {

/// Binary variables per turn: three turn selectors and two plane selectors.
inline constexpr std::size_t kBitsPerTurn = 5;

/// Number of binary variables (qubits) needed for an N-bead chain.
constexpr std::size_t qubit_count(std::size_t beads) {
    return beads < 2 ? 0 : kBitsPerTurn * (beads - 1);
}

/// One turn's five selector bits. q1..q3 pick the move within a plane,
/// (q4, q5) pick the plane: (1,1) xy, (0,1) yz, (1,0) zx, (0,0) none.
struct TurnBits {
    std::uint8_t q1 = 0, q2 = 0, q3 = 0, q4 = 0, q5 = 0;

    /// Packs as q1 q2 q3 q4 q5 with q1 the most significant bit (0..31).
    static TurnBits from_code(unsigned code);
    unsigned code() const;
};

/// Lattice step in doubled units: the half-unit moves of the FCC turn set
/// become integers, so every geometric test is exact.
struct Displacement {
    int dx = 0, dy = 0, dz = 0;

    bool is_zero() const { return dx == 0 && dy == 0 && dz == 0; }
    int norm2() const { return dx * dx + dy * dy + dz * dz; }

    friend Displacement operator+(Displacement a, Displacement b) {
        return {a.dx + b.dx, a.dy + b.dy, a.dz + b.dz};
    }
    friend Displacement operator-(Displacement a, Displacement b) {
        return {a.dx - b.dx, a.dy - b.dy, a.dz - b.dz};
    }
    friend auto operator<=>(const Displacement&, const Displacement&) = default;
};

/// Lattice site in doubled units.
using Site = Displacement;

/// Basis matrix over the eight turn states and the coefficient vectors that
/// express the in-plane offsets Δa, Δb as multilinear polynomials in q1..q3.
///
/// Rows of `b3` are the states (q1,q2,q3) = 000, 001, ..., 111; columns are the
/// monomials 1, q1, q2, q3, q1q2, q2q3, q3q1, q1q2q3. `b3 * c_delta_a` is the
/// Δa table evaluated state by state.
struct TurnBasis {
    std::array<std::array<int, 8>, 8> b3{};
    std::array<double, 8> c_delta_a{};
    std::array<double, 8> c_delta_b{};
    std::array<double, 8> delta_a{};
    std::array<double, 8> delta_b{};
};

const TurnBasis& turn_basis();

/// In-plane offsets (undoubled lattice units) for the turn selectors.
double delta_a(int q1, int q2);
double delta_b(int q1, int q2, int q3);

Displacement decode_turn(const TurnBits& bits);

struct LatticeConformation {
    std::vector<Site> positions;
    std::optional<Bits> source_bits;

    std::size_t size() const { return positions.size(); }
    Displacement turn(std::size_t t) const { return positions[t + 1] - positions[t]; }
};

/// Decodes a 5(N-1)-bit string; bead 0 sits at the origin.
/// Throws DataError on a length mismatch.
LatticeConformation decode_conformation(const Bits& bits, std::size_t beads);

/// Builds a conformation from explicit turns (bead 0 at the origin).
LatticeConformation conformation_from_turns(const std::vector<Displacement>& turns);

struct TurnTableEntry {
    TurnBits bits;
    Displacement displacement;
};

/// decode_turn over all 32 selector states, ordered by TurnBits::code().
std::array<TurnTableEntry, 32> enumerate_turn_table();

/// The 18 distinct nonzero moves (12 face diagonals, 6 axis moves) in a fixed
/// order: first occurrence in enumerate_turn_table().
const std::vector<Displacement>& neighbor_moves();

/// First selector bits (lowest code) that decode to `d`; nullopt if `d` is not a move.
std::optional<TurnBits> encode_turn(const Displacement& d);

}  // namespace pepfold
