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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pepfold/binary_polynomial.hpp"

namespace pepfold {

/// The 20 standard residues in canonical order.
inline constexpr std::string_view kStandardResidues = "ACDEFGHIKLMNPQRSTVWY";

/// Symmetric 20x20 table of pairwise contact energies (negative = attractive).
class MJTable {
   public:
    MJTable();

    /// Throws DataError if a residue code is not one of the 20 standard residues.
    double operator()(char a, char b) const;
    void set(char a, char b, double value);

    static std::size_t index_of(char residue);

   private:
    std::array<std::array<double, 20>, 20> values_{};
};

/// How contact energies become objective weights w_jk.
enum class SignConvention {
    /// w_jk = -MJ(a_j, a_k): attractive pairs get positive distance penalties.
    Negated,
    /// w_jk = MJ(a_j, a_k).
    Literal,
};

enum class ContinuityMode {
    /// (1-x^2)(1-y^2)(1-z^2) per turn; a face diagonal still costs 0.5625.
    Literal,
    /// Indicator of the 14 zero-displacement selector patterns only.
    Strict,
};

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

/// One-hot axis choice per bead pair (overlap term) and per bond pair
/// (crossing term). Indices are 0-based: bead pairs (i, j) with j >= i+2,
/// bond pairs (r, k) with k >= r+2 where bond r joins beads r and r+1.
struct AxisSelectors {
    std::map<std::pair<std::size_t, std::size_t>, Axis> bead_pairs;
    std::map<std::pair<std::size_t, std::size_t>, Axis> bond_pairs;
    std::uint64_t seed = 0;

    /// Uniform random axis per pair from a seeded stream.
    static AxisSelectors generate(std::size_t beads, std::uint64_t seed);
    /// Same axis everywhere (test fixtures).
    static AxisSelectors uniform(std::size_t beads, Axis axis);
};

struct PenaltyFactors {
    double lambda0 = 1.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    double c_obj = 0.0;
    double c_continuity = 0.0;
    double c_overlap = 0.0;
};

/// Objective weight for residues a, b under the sign convention.
double pair_weight(const MJTable& mj, char a, char b, SignConvention sign);

/// Turn displacement components (undoubled lattice units) as polynomials in that turn's
/// five variables. Throws std::out_of_range for turn >= beads-1.
std::array<BinaryPolynomial, 3> turn_component_polynomials(std::size_t beads, std::size_t turn);

/// Sum over non-adjacent bead pairs of w_jk times their squared separation.
BinaryPolynomial build_objective(const std::string& sequence, const MJTable& mj,
                                 SignConvention sign);

/// Same, with explicit weights indexed [j][k] (only k >= j+2 is read).
BinaryPolynomial build_objective(std::size_t beads,
                                 const std::vector<std::vector<double>>& weights);

BinaryPolynomial build_continuity(std::size_t beads, ContinuityMode mode = ContinuityMode::Literal);

/// Squared bead-pair separation along each pair's selected axis.
BinaryPolynomial build_overlap(std::size_t beads, const AxisSelectors& selectors);

/// Squared bond-midpoint separation along each bond pair's selected axis.
BinaryPolynomial build_crossing(std::size_t beads, const AxisSelectors& selectors);

/// Throws DataError when the weights sum to zero (pass explicit lambdas instead).
PenaltyFactors calibrate_penalties(const std::string& sequence, const MJTable& mj,
                                   SignConvention sign);

/// lambda0*obj + lambda1*c1 - lambda2*c2 - lambda3*c3.
BinaryPolynomial assemble(const BinaryPolynomial& obj, const BinaryPolynomial& c1,
                          const BinaryPolynomial& c2, const BinaryPolynomial& c3,
                          const PenaltyFactors& lambda);

struct HamiltonianConfig {
    SignConvention sign = SignConvention::Negated;
    ContinuityMode continuity = ContinuityMode::Literal;
    std::uint64_t axis_seed = 0;
    std::optional<double> lambda1, lambda2, lambda3;
};

/// Every component of the folding Hamiltonian for one sequence.
struct Hamiltonian {
    std::string sequence;
    std::size_t beads = 0;
    AxisSelectors selectors;
    PenaltyFactors penalties;
    BinaryPolynomial objective, continuity, overlap, crossing, assembled;
};

Hamiltonian build_hamiltonian(const std::string& sequence, const MJTable& mj,
                              const HamiltonianConfig& config);

}  // namespace pepfold
