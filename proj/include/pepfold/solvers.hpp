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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pepfold/binary_polynomial.hpp"

namespace pepfold {

struct Sample {
    Bits bits;
    double energy = 0.0;
    std::size_t count = 1;
    std::string source;
};

/// Bitstrings with multiplicities. merge(), rescore() and sort() order the
/// records by (energy, bitstring); add() appends.
class SampleSet {
   public:
    /// Merges into an existing record with the same bitstring (counts add).
    void add(const Bits& bits, double energy, std::size_t count, const std::string& source);
    void merge(const SampleSet& other);

    const std::vector<Sample>& records() const { return records_; }
    bool empty() const { return records_.empty(); }
    std::size_t size() const { return records_.size(); }
    /// Lowest (energy, bitstring) record; the set must be nonempty.
    const Sample& best() const;

    std::size_t total_count() const;

    /// Recomputes every energy with `poly` and re-sorts.
    void rescore(const BinaryPolynomial& poly);

    void sort();

    friend bool operator==(const SampleSet& a, const SampleSet& b) {
        return a.records_ == b.records_;
    }

   private:
    void reindex();

    std::vector<Sample> records_;
    std::map<Bits, std::size_t> index_;
};

bool operator==(const Sample& a, const Sample& b);

struct AnnealSchedule {
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t sweeps = 2000;
    std::size_t restarts = 20;
    std::uint64_t seed = 0;
    /// Worker threads for independent restarts; 0 = hardware concurrency.
    unsigned threads = 0;
    /// Re-evaluates the full energy after every accepted flip and throws
    /// std::logic_error if incremental bookkeeping drifts beyond 1e-9.
    bool verify_energy = false;

    /// Scale-free defaults: 10*max|c| down to 1e-3*min|c|.
    static AnnealSchedule defaults_for(const BinaryPolynomial& poly);
};

/// Single-flip Metropolis annealing on the full polynomial. Returns the best
/// bitstring of each restart, merged and sorted. Deterministic given the seed.
/// Throws DataError on an empty polynomial or a degenerate schedule.
SampleSet simulated_annealing(const BinaryPolynomial& poly, const AnnealSchedule& schedule);

inline constexpr std::size_t kDefaultBruteForceCap = 25;

struct BruteForceResult {
    Bits bits;
    double energy = 0.0;
};

/// Exact minimizer over all 2^n assignments; ties go to the lexicographically
/// smallest bitstring. Throws CapabilityError when num_vars exceeds `cap`.
BruteForceResult brute_force(const BinaryPolynomial& poly, std::size_t cap = kDefaultBruteForceCap);

/// Term list with per-variable incidence, for O(1)-per-term flip deltas.
class CompiledPolynomial {
   public:
    explicit CompiledPolynomial(const BinaryPolynomial& poly);

    std::size_t num_vars() const { return num_vars_; }

    /// Binds a state; subsequent delta()/flip() calls are incremental.
    void reset(const Bits& bits);
    const Bits& state() const { return state_; }
    double energy() const { return energy_; }

    /// Energy change from flipping variable v in the bound state.
    double delta(std::uint32_t v) const;
    void flip(std::uint32_t v, double delta);
    void flip(std::uint32_t v) { flip(v, delta(v)); }

   private:
    std::size_t num_vars_;
    double constant_ = 0.0;
    std::vector<double> coeff_;
    std::vector<std::uint32_t> term_begin_;
    std::vector<std::uint32_t> term_vars_;
    std::vector<std::uint32_t> var_begin_;
    std::vector<std::uint32_t> var_terms_;

    Bits state_;
    std::vector<std::uint32_t> zeros_;
    double energy_ = 0.0;
};

}  // namespace pepfold
