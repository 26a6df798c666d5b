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

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pepfold/hamiltonian.hpp"
#include "pepfold/lattice.hpp"

namespace pepfold {

/// C-alpha-like bead coordinates in Angstrom.
struct CartesianStructure {
    std::vector<Eigen::Vector3d> coords;

    std::size_t size() const { return coords.size(); }
};

inline constexpr double kBondLength = 3.8;
inline constexpr double kContactCutoff = 8.0;

struct ViolationReport {
    /// Non-adjacent bead pairs (i < j) on the same site.
    std::vector<std::pair<std::size_t, std::size_t>> overlaps;
    /// Non-adjacent bond pairs (r < k) with coincident midpoints.
    std::vector<std::pair<std::size_t, std::size_t>> crossings;
    /// Turns with zero displacement.
    std::vector<std::size_t> degenerate_turns;

    std::size_t total() const {
        return overlaps.size() + crossings.size() + degenerate_turns.size();
    }
    bool empty() const { return total() == 0; }
};

ViolationReport detect_violations(const LatticeConformation& conf);

struct RepairResult {
    /// Set when the structure was accepted (possibly unchanged).
    std::optional<LatticeConformation> conformation;
    std::optional<std::size_t> moved_bead;
    std::string reason;

    bool accepted() const { return conformation.has_value(); }
};

/// Fixes a structure carrying exactly one violation by relocating one bead to
/// a free site adjacent to both chain neighbours, choosing the site with the
/// lowest resulting contact energy. Structures with more than one violation,
/// or with no valid site, are rejected.
RepairResult repair(const LatticeConformation& conf, const ViolationReport& report,
                    const std::string& sequence, const MJTable& mj);

/// Rescales every turn to `bond` Angstrom, keeping its direction. Bead 0 stays
/// at the origin. Throws DataError on a zero-displacement turn.
CartesianStructure to_angstrom(const LatticeConformation& conf, double bond = kBondLength);

/// RMSD after optimal proper-rotation superposition. Throws DataError if the
/// bead counts differ or are below 3.
double kabsch_rmsd(const CartesianStructure& model, const CartesianStructure& reference);

double radius_of_gyration(const CartesianStructure& s);

/// Sum of literal contact-table entries over non-adjacent pairs closer than `cutoff`.
double contact_energy(const CartesianStructure& s, const std::string& sequence, const MJTable& mj,
                      double cutoff = kContactCutoff);

struct FesSample {
    double e_contact = 0.0;
    double rg = 0.0;
    std::size_t ref = 0;
    std::size_t weight = 1;
};

/// 2D population histogram over (contact energy, Rg) with F = -ln(n / n_max).
struct FESGrid {
    std::size_t bins_e = 30, bins_rg = 30;
    double e_lo = 0.0, e_hi = 0.0, rg_lo = 0.0, rg_hi = 0.0;
    /// Row-major by contact-energy bin: index = ie * bins_rg + ir.
    std::vector<std::size_t> counts;
    std::vector<double> free_energy;
    std::vector<std::vector<std::size_t>> members;

    std::size_t index(std::size_t ie, std::size_t ir) const { return ie * bins_rg + ir; }
    double e_center(std::size_t ie) const;
    double rg_center(std::size_t ir) const;
};

/// Throws DataError on an empty sample list or zero bins.
FESGrid build_fes(const std::vector<FesSample>& samples, std::size_t bins_e = 30,
                  std::size_t bins_rg = 30);

struct Representatives {
    std::size_t bin_e = 0, bin_rg = 0;
    std::vector<std::size_t> members;
    std::optional<std::size_t> min_rmsd_member;
    std::optional<double> min_rmsd;
    std::optional<double> mean_rmsd;
};

/// Members of the minimum free-energy bin. Ties go to the lower contact-energy
/// bin, then the lower Rg bin. `rmsd_by_ref`, when nonempty, maps a structure
/// ref to its RMSD against the reference.
Representatives select_representatives(const FESGrid& grid,
                                       std::span<const double> rmsd_by_ref = {});

}  // namespace pepfold
