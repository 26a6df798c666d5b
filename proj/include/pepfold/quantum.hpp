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

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pepfold/binary_polynomial.hpp"
#include "pepfold/solvers.hpp"

namespace pepfold {

/// coefficient * prod_{i in qubits} Z_i; empty `qubits` is the identity.
struct PauliTerm {
    Monomial qubits;
    double coefficient = 0.0;

    friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/// Diagonal Hamiltonian as a weighted sum of Z/I strings. Terms are unique,
/// nonzero and ordered by qubit set.
struct PauliHamiltonian {
    std::size_t num_qubits = 0;
    std::vector<PauliTerm> terms;

    /// <b|H|b> for a computational basis state.
    double expectation(const Bits& basis_state) const;

    friend bool operator==(const PauliHamiltonian&, const PauliHamiltonian&) = default;
};

/// Substitutes q_i = (1 - Z_i)/2 and expands exactly.
PauliHamiltonian to_pauli(const BinaryPolynomial& poly);

std::size_t pauli_term_count(const BinaryPolynomial& poly);

/// Writes one term per line: "+0.5 I", "-0.25 Z0Z3".
void write_pauli_text(std::ostream& out, const PauliHamiltonian& h);
/// Reads the format written by write_pauli_text. Throws DataError.
PauliHamiltonian read_pauli_text(std::istream& in, std::size_t num_qubits);

/// Dense statevectors are limited to this many qubits.
inline constexpr std::size_t kDenseQubitCap = 20;

/// All 2^n diagonal entries; entry b is <b|H|b> with qubit i = bit i of b.
/// Throws CapabilityError above kDenseQubitCap.
std::vector<double> diagonal(const PauliHamiltonian& h);

using StateVector = std::vector<std::complex<double>>;

enum class Entanglement { Linear, Circular };

/// Layered RY/RZ rotations with CX entanglers ("efficient SU(2)" layout):
/// (layers + 1) rotation blocks of RY then RZ on every qubit, an entangler
/// block between consecutive rotation blocks.
struct AnsatzConfig {
    std::size_t num_qubits = 1;
    std::size_t layers = 1;
    Entanglement entanglement = Entanglement::Linear;
    std::vector<double> theta;

    std::size_t parameter_count() const { return 2 * num_qubits * (layers + 1); }
};

/// Applies the ansatz to |0...0>. Throws CapabilityError above the dense cap
/// and DataError if theta has the wrong length.
StateVector simulate_ansatz(const AnsatzConfig& config);

/// Draws `shots` basis-state indices from |amplitude|^2.
std::vector<std::uint64_t> sample_basis_states(const StateVector& state, std::size_t shots,
                                               std::uint64_t seed);

/// Mean of the lowest ceil(alpha * n) values.
double cvar(std::vector<double> energies, double alpha);

/// CVaR of `shots` sampled basis-state energies. Throws DataError unless 0 < alpha <= 1.
double cvar_energy(const PauliHamiltonian& h, const StateVector& state, std::size_t shots,
                   double alpha, std::uint64_t seed);

struct VqeConfig {
    std::size_t shots = 4000;
    double cvar_alpha = 0.1;
    /// Budget of objective evaluations.
    std::size_t max_iterations = 500;
    double initial_step = 0.5;
    /// Stop when the simplex's value spread falls below this.
    double f_tolerance = 1e-10;
    std::uint64_t seed = 0;
    /// Starting parameters; random uniform on [-pi, pi) when absent.
    std::optional<std::vector<double>> initial_theta;
};

struct VqeResult {
    std::vector<double> theta;
    double energy = 0.0;
    std::vector<double> trace;
    SampleSet samples;
    std::size_t evaluations = 0;
};

/// Derivative-free minimization of the CVaR energy over the ansatz parameters.
/// Every sampled bitstring is kept in `samples` (energies from H).
VqeResult vqe_minimize(const PauliHamiltonian& h, const AnsatzConfig& ansatz,
                       const VqeConfig& config);

struct SimplexOptions {
    std::size_t max_evaluations = 500;
    double initial_step = 0.5;
    double f_tolerance = 1e-10;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Nelder-Mead with dimension-adaptive coefficients. Never exceeds the
/// evaluation budget.
SimplexResult minimize_simplex(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> x0, const SimplexOptions& options);

}  // namespace pepfold
