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

#include "pepfold/analysis.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pepfold/error.hpp"

namespace pepfold {

ViolationReport detect_violations(const LatticeConformation& conf) {
    ViolationReport report;
    const auto& p = conf.positions;
    const std::size_t n = p.size();
    for (std::size_t t = 0; t + 1 < n; ++t) {
        if (p[t + 1] == p[t]) report.degenerate_turns.push_back(t);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (p[i] == p[j]) report.overlaps.emplace_back(i, j);
        }
    }
    // Doubled midpoints are p_r + p_{r+1}; exact integer comparison.
    const std::size_t bonds = n < 2 ? 0 : n - 1;
    for (std::size_t r = 0; r < bonds; ++r) {
        const Site mr = p[r] + p[r + 1];
        for (std::size_t k = r + 2; k < bonds; ++k) {
            if (p[k] + p[k + 1] == mr) report.crossings.emplace_back(r, k);
        }
    }
    return report;
}

namespace {

bool is_neighbor(const Site& a, const Site& b) {
    const Displacement d = b - a;
    const int n2 = d.norm2();
    if (n2 != 2 && n2 != 4) return false;
    const auto& moves = neighbor_moves();
    return std::find(moves.begin(), moves.end(), d) != moves.end();
}

// Re-derives selector bits from positions; every turn must be a valid move.
std::optional<Bits> encode_positions(const std::vector<Site>& positions) {
    Bits bits;
    for (std::size_t t = 0; t + 1 < positions.size(); ++t) {
        const auto tb = encode_turn(positions[t + 1] - positions[t]);
        if (!tb) return std::nullopt;
        bits.insert(bits.end(), {tb->q1, tb->q2, tb->q3, tb->q4, tb->q5});
    }
    return bits;
}

std::vector<std::size_t> beads_to_try(const ViolationReport& report) {
    if (!report.overlaps.empty()) {
        const auto [i, j] = report.overlaps.front();
        return {j, i};
    }
    if (!report.crossings.empty()) {
        const auto [r, k] = report.crossings.front();
        return {k + 1, k, r + 1, r};
    }
    const auto t = report.degenerate_turns.front();
    return {t + 1, t};
}

}  // namespace

RepairResult repair(const LatticeConformation& conf, const ViolationReport& report,
                    const std::string& sequence, const MJTable& mj) {
    RepairResult result;
    if (report.empty()) {
        result.conformation = conf;
        result.reason = "no violations";
        return result;
    }
    if (report.total() > 1) {
        result.reason = "rejected: " + std::to_string(report.total()) +
                        " violations (at most one can be repaired)";
        return result;
    }
    if (sequence.size() != conf.size()) {
        throw DataError("sequence length " + std::to_string(sequence.size()) +
                        " does not match bead count " + std::to_string(conf.size()));
    }

    const auto& p = conf.positions;
    const auto& moves = neighbor_moves();
    double best_energy = std::numeric_limits<double>::infinity();

    for (const auto bead : beads_to_try(report)) {
        const Site anchor = bead > 0 ? p[bead - 1] : p[bead + 1];
        for (const auto& m : moves) {
            const Site site = anchor + m;
            if (site == p[bead]) continue;
            if (bead > 0 && !is_neighbor(p[bead - 1], site)) continue;
            if (bead + 1 < p.size() && !is_neighbor(site, p[bead + 1])) continue;
            bool occupied = false;
            for (std::size_t i = 0; i < p.size() && !occupied; ++i) {
                occupied = i != bead && p[i] == site;
            }
            if (occupied) continue;

            LatticeConformation candidate = conf;
            candidate.positions[bead] = site;
            // Keep bead 0 at the origin.
            if (bead == 0) {
                const Site shift = candidate.positions[0];
                for (auto& s : candidate.positions) s = s - shift;
            }
            if (!detect_violations(candidate).empty()) continue;
            const double e = contact_energy(to_angstrom(candidate), sequence, mj);
            if (e < best_energy) {
                best_energy = e;
                candidate.source_bits = encode_positions(candidate.positions);
                result.conformation = std::move(candidate);
                result.moved_bead = bead;
            }
        }
    }
    result.reason = result.conformation
                        ? "repaired by moving bead " + std::to_string(*result.moved_bead)
                        : "rejected: no free lattice site repairs the violation";
    return result;
}

CartesianStructure to_angstrom(const LatticeConformation& conf, double bond) {
    CartesianStructure s;
    s.coords.reserve(conf.size());
    if (conf.size() == 0) return s;
    s.coords.emplace_back(0.0, 0.0, 0.0);
    for (std::size_t t = 0; t + 1 < conf.size(); ++t) {
        const Displacement d = conf.turn(t);
        if (d.is_zero()) {
            throw DataError("turn " + std::to_string(t) +
                            " has zero displacement and cannot be rescaled");
        }
        const Eigen::Vector3d v(d.dx, d.dy, d.dz);
        s.coords.push_back(s.coords.back() + v * (bond / v.norm()));
    }
    return s;
}

double kabsch_rmsd(const CartesianStructure& model, const CartesianStructure& reference) {
    const std::size_t n = model.size();
    if (n != reference.size()) {
        throw DataError("RMSD needs equal bead counts, got " + std::to_string(n) + " and " +
                        std::to_string(reference.size()));
    }
    if (n < 3) throw DataError("RMSD superposition needs at least 3 beads");

    Eigen::Vector3d cm = Eigen::Vector3d::Zero(), cr = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        cm += model.coords[i];
        cr += reference.coords[i];
    }
    cm /= static_cast<double>(n);
    cr /= static_cast<double>(n);

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        cov += (model.coords[i] - cm) * (reference.coords[i] - cr).transpose();
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Matrix3d& u = svd.matrixU();
    const Eigen::Matrix3d& v = svd.matrixV();
    Eigen::Matrix3d fix = Eigen::Matrix3d::Identity();
    // Proper rotations only: flip the weakest axis if the optimum is a reflection.
    if ((v * u.transpose()).determinant() < 0.0) fix(2, 2) = -1.0;
    const Eigen::Matrix3d rot = v * fix * u.transpose();

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d moved = rot * (model.coords[i] - cm);
        sum += (moved - (reference.coords[i] - cr)).squaredNorm();
    }
    return std::sqrt(sum / static_cast<double>(n));
}

double radius_of_gyration(const CartesianStructure& s) {
    if (s.coords.empty()) return 0.0;
    Eigen::Vector3d cm = Eigen::Vector3d::Zero();
    for (const auto& r : s.coords) cm += r;
    cm /= static_cast<double>(s.size());
    double sum = 0.0;
    for (const auto& r : s.coords) sum += (r - cm).squaredNorm();
    return std::sqrt(sum / static_cast<double>(s.size()));
}

double contact_energy(const CartesianStructure& s, const std::string& sequence, const MJTable& mj,
                      double cutoff) {
    if (sequence.size() != s.size()) {
        throw DataError("sequence length " + std::to_string(sequence.size()) +
                        " does not match bead count " + std::to_string(s.size()));
    }
    double e = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        for (std::size_t k = j + 2; k < s.size(); ++k) {
            if ((s.coords[j] - s.coords[k]).norm() < cutoff) e += mj(sequence[j], sequence[k]);
        }
    }
    return e;
}

double FESGrid::e_center(std::size_t ie) const {
    return e_lo + (static_cast<double>(ie) + 0.5) * (e_hi - e_lo) / static_cast<double>(bins_e);
}

double FESGrid::rg_center(std::size_t ir) const {
    return rg_lo + (static_cast<double>(ir) + 0.5) * (rg_hi - rg_lo) / static_cast<double>(bins_rg);
}

namespace {

std::pair<double, double> padded_range(double lo, double hi) {
    const double span = hi - lo;
    if (span <= 0.0) return {lo - 0.5, hi + 0.5};
    return {lo - 0.01 * span, hi + 0.01 * span};
}

std::size_t bin_of(double v, double lo, double hi, std::size_t bins) {
    const double f = (v - lo) / (hi - lo) * static_cast<double>(bins);
    if (f <= 0.0) return 0;
    return std::min(bins - 1, static_cast<std::size_t>(f));
}

}  // namespace

FESGrid build_fes(const std::vector<FesSample>& samples, std::size_t bins_e, std::size_t bins_rg) {
    if (samples.empty()) throw DataError("free-energy surface needs at least one sample");
    if (bins_e == 0 || bins_rg == 0) throw DataError("free-energy surface needs at least one bin");

    FESGrid g;
    g.bins_e = bins_e;
    g.bins_rg = bins_rg;
    double e_min = samples[0].e_contact, e_max = e_min, r_min = samples[0].rg, r_max = r_min;
    for (const auto& s : samples) {
        e_min = std::min(e_min, s.e_contact);
        e_max = std::max(e_max, s.e_contact);
        r_min = std::min(r_min, s.rg);
        r_max = std::max(r_max, s.rg);
    }
    std::tie(g.e_lo, g.e_hi) = padded_range(e_min, e_max);
    std::tie(g.rg_lo, g.rg_hi) = padded_range(r_min, r_max);

    g.counts.assign(bins_e * bins_rg, 0);
    g.members.assign(bins_e * bins_rg, {});
    for (const auto& s : samples) {
        const auto idx = g.index(bin_of(s.e_contact, g.e_lo, g.e_hi, bins_e),
                                 bin_of(s.rg, g.rg_lo, g.rg_hi, bins_rg));
        g.counts[idx] += s.weight;
        g.members[idx].push_back(s.ref);
    }
    const std::size_t n_max = *std::max_element(g.counts.begin(), g.counts.end());
    g.free_energy.resize(g.counts.size());
    for (std::size_t i = 0; i < g.counts.size(); ++i) {
        g.free_energy[i] =
            g.counts[i] == 0
                ? std::numeric_limits<double>::infinity()
                : (g.counts[i] == n_max
                       ? 0.0
                       : -std::log(static_cast<double>(g.counts[i]) / static_cast<double>(n_max)));
    }
    return g;
}

Representatives select_representatives(const FESGrid& grid, std::span<const double> rmsd_by_ref) {
    Representatives rep;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    // Row-major scan visits lower contact-energy bins first, so strict '<' keeps the tie rule.
    for (std::size_t ie = 0; ie < grid.bins_e; ++ie) {
        for (std::size_t ir = 0; ir < grid.bins_rg; ++ir) {
            const double f = grid.free_energy[grid.index(ie, ir)];
            if (f < best) {
                best = f;
                rep.bin_e = ie;
                rep.bin_rg = ir;
                found = true;
            }
        }
    }
    if (!found) return rep;
    rep.members = grid.members[grid.index(rep.bin_e, rep.bin_rg)];
    if (!rmsd_by_ref.empty() && !rep.members.empty()) {
        double sum = 0.0;
        for (const auto m : rep.members) {
            const double r = rmsd_by_ref[m];
            sum += r;
            if (!rep.min_rmsd || r < *rep.min_rmsd) {
                rep.min_rmsd = r;
                rep.min_rmsd_member = m;
            }
        }
        rep.mean_rmsd = sum / static_cast<double>(rep.members.size());
    }
    return rep;
}

}  // namespace pepfold
