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

#include "pepfold/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pepfold/error.hpp"
#include "pepfold/lattice.hpp"
#include "pepfold/rng.hpp"

namespace pepfold {

MJTable::MJTable() = default;

std::size_t MJTable::index_of(char residue) {
    const auto pos = kStandardResidues.find(residue);
    if (pos == std::string_view::npos) {
        throw DataError(std::string("residue '") + residue + "' is not in the contact table");
    }
    return pos;
}

double MJTable::operator()(char a, char b) const { return values_[index_of(a)][index_of(b)]; }

void MJTable::set(char a, char b, double value) {
    const auto i = index_of(a), j = index_of(b);
    values_[i][j] = value;
    values_[j][i] = value;
}

double pair_weight(const MJTable& mj, char a, char b, SignConvention sign) {
    const double e = mj(a, b);
    return sign == SignConvention::Negated ? -e : e;
}

namespace {

std::uint32_t var(std::size_t turn, std::size_t k) {
    return static_cast<std::uint32_t>(turn * kBitsPerTurn + k);
}

// Weighted sums of squared linear forms in the turn components, kept as
// aggregate weights on P_l^2 and P_l P_m so that each product polynomial is
// expanded once no matter how many pairs share it.
class SquaredForms {
   public:
    explicit SquaredForms(std::size_t beads) : beads_(beads), single_(beads - 1, {0.0, 0.0, 0.0}) {}

    // Adds weight * (sum_l a_l P_l^axis)^2.
    void add(Axis axis, const std::vector<std::pair<std::size_t, double>>& form, double weight) {
        const auto a = static_cast<std::size_t>(axis);
        for (std::size_t i = 0; i < form.size(); ++i) {
            const auto [l, cl] = form[i];
            single_[l][a] += weight * cl * cl;
            for (std::size_t j = i + 1; j < form.size(); ++j) {
                const auto [m, cm] = form[j];
                auto key = l < m ? std::pair{l, m} : std::pair{m, l};
                auto& slot =
                    cross_.try_emplace(key, std::array<double, 3>{0.0, 0.0, 0.0}).first->second;
                slot[a] += 2.0 * weight * cl * cm;
            }
        }
    }

    BinaryPolynomial materialize() const {
        const std::size_t n = qubit_count(beads_);
        std::vector<std::array<BinaryPolynomial, 3>> components;
        components.reserve(beads_ - 1);
        for (std::size_t t = 0; t + 1 < beads_; ++t) {
            components.push_back(turn_component_polynomials(beads_, t));
        }
        BinaryPolynomial out(n);
        for (std::size_t l = 0; l < single_.size(); ++l) {
            for (std::size_t a = 0; a < 3; ++a) {
                if (single_[l][a] == 0.0) continue;
                out += (components[l][a] * components[l][a]) * single_[l][a];
            }
        }
        for (const auto& [key, w] : cross_) {
            for (std::size_t a = 0; a < 3; ++a) {
                if (w[a] == 0.0) continue;
                out += (components[key.first][a] * components[key.second][a]) * w[a];
            }
        }
        return out;
    }

   private:
    std::size_t beads_;
    std::vector<std::array<double, 3>> single_;
    std::map<std::pair<std::size_t, std::size_t>, std::array<double, 3>> cross_;
};

// Separation of beads i < j: sum of turns i..j-1.
std::vector<std::pair<std::size_t, double>> bead_separation(std::size_t i, std::size_t j) {
    std::vector<std::pair<std::size_t, double>> form;
    for (std::size_t l = i; l < j; ++l) form.emplace_back(l, 1.0);
    return form;
}

// Midpoint of bond k minus midpoint of bond r (r < k):
// t_r/2 + t_{r+1} + ... + t_{k-1} + t_k/2.
std::vector<std::pair<std::size_t, double>> midpoint_separation(std::size_t r, std::size_t k) {
    std::vector<std::pair<std::size_t, double>> form;
    form.emplace_back(r, 0.5);
    for (std::size_t l = r + 1; l < k; ++l) form.emplace_back(l, 1.0);
    form.emplace_back(k, 0.5);
    return form;
}

void require_beads(std::size_t beads, std::size_t minimum) {
    if (beads < minimum) {
        throw DataError("need at least " + std::to_string(minimum) + " beads, got " +
                        std::to_string(beads));
    }
}

}  // namespace

AxisSelectors AxisSelectors::generate(std::size_t beads, std::uint64_t seed) {
    AxisSelectors s;
    s.seed = seed;
    Rng pair_rng(derive_seed(seed, 0));
    for (std::size_t i = 0; i + 2 < beads; ++i) {
        for (std::size_t j = i + 2; j < beads; ++j) {
            s.bead_pairs[{i, j}] = static_cast<Axis>(pair_rng.below(3));
        }
    }
    Rng bond_rng(derive_seed(seed, 1));
    const std::size_t bonds = beads < 2 ? 0 : beads - 1;
    for (std::size_t r = 0; r + 2 < bonds; ++r) {
        for (std::size_t k = r + 2; k < bonds; ++k) {
            s.bond_pairs[{r, k}] = static_cast<Axis>(bond_rng.below(3));
        }
    }
    return s;
}

AxisSelectors AxisSelectors::uniform(std::size_t beads, Axis axis) {
    AxisSelectors s = generate(beads, 0);
    for (auto& [key, a] : s.bead_pairs) a = axis;
    for (auto& [key, a] : s.bond_pairs) a = axis;
    return s;
}

std::array<BinaryPolynomial, 3> turn_component_polynomials(std::size_t beads, std::size_t turn) {
    if (beads < 2 || turn + 1 >= beads) {
        throw std::out_of_range("turn index " + std::to_string(turn) + " out of range for " +
                                std::to_string(beads) + " beads");
    }
    const std::size_t n = qubit_count(beads);
    const auto q1 = var(turn, 0), q2 = var(turn, 1), q3 = var(turn, 2), q4 = var(turn, 3),
               q5 = var(turn, 4);

    // Δa = 0.5 - 0.5 q1 - q2 + q1 q2, Δb = 0.5 + 0.5 q1 - q3 - q1 q2.
    const BinaryPolynomial da(n, {{{}, 0.5}, {{q1}, -0.5}, {{q2}, -1.0}, {{q1, q2}, 1.0}});
    const BinaryPolynomial db(n, {{{}, 0.5}, {{q1}, 0.5}, {{q3}, -1.0}, {{q1, q2}, -1.0}});

    const BinaryPolynomial xy(n, {{{q4, q5}, 1.0}});
    const BinaryPolynomial yz(n, {{{q5}, 1.0}, {{q4, q5}, -1.0}});
    const BinaryPolynomial zx(n, {{{q4}, 1.0}, {{q4, q5}, -1.0}});

    return {xy * da + zx * db, yz * da + xy * db, zx * da + yz * db};
}

BinaryPolynomial build_objective(std::size_t beads,
                                 const std::vector<std::vector<double>>& weights) {
    require_beads(beads, 2);
    SquaredForms forms(beads);
    for (std::size_t j = 0; j + 2 < beads; ++j) {
        for (std::size_t k = j + 2; k < beads; ++k) {
            const double w = weights.at(j).at(k);
            if (w == 0.0) continue;
            const auto form = bead_separation(j, k);
            for (Axis a : {Axis::X, Axis::Y, Axis::Z}) forms.add(a, form, w);
        }
    }
    return forms.materialize();
}

BinaryPolynomial build_objective(const std::string& sequence, const MJTable& mj,
                                 SignConvention sign) {
    const std::size_t beads = sequence.size();
    require_beads(beads, 2);
    std::vector<std::vector<double>> w(beads, std::vector<double>(beads, 0.0));
    for (std::size_t j = 0; j < beads; ++j) {
        for (std::size_t k = j + 2; k < beads; ++k) {
            w[j][k] = pair_weight(mj, sequence[j], sequence[k], sign);
        }
    }
    return build_objective(beads, w);
}

BinaryPolynomial build_continuity(std::size_t beads, ContinuityMode mode) {
    require_beads(beads, 2);
    const std::size_t n = qubit_count(beads);
    const auto one = BinaryPolynomial::constant(n, 1.0);
    BinaryPolynomial out(n);
    for (std::size_t t = 0; t + 1 < beads; ++t) {
        if (mode == ContinuityMode::Literal) {
            const auto p = turn_component_polynomials(beads, t);
            out += (one - p[0] * p[0]) * (one - p[1] * p[1]) * (one - p[2] * p[2]);
        } else {
            const auto q1 = var(t, 0), q2 = var(t, 1), q3 = var(t, 2), q4 = var(t, 3),
                       q5 = var(t, 4);
            const BinaryPolynomial no_plane(
                n, {{{}, 1.0}, {{q4}, -1.0}, {{q5}, -1.0}, {{q4, q5}, 1.0}});
            // States 101 and 110 give Δa = Δb = 0.
            const BinaryPolynomial degenerate(
                n, {{{q1, q3}, 1.0}, {{q1, q2}, 1.0}, {{q1, q2, q3}, -2.0}});
            out += no_plane + (one - no_plane) * degenerate;
        }
    }
    return out;
}

BinaryPolynomial build_overlap(std::size_t beads, const AxisSelectors& selectors) {
    require_beads(beads, 2);
    SquaredForms forms(beads);
    for (std::size_t i = 0; i + 2 < beads; ++i) {
        for (std::size_t j = i + 2; j < beads; ++j) {
            const auto it = selectors.bead_pairs.find({i, j});
            if (it == selectors.bead_pairs.end()) {
                throw DataError("missing axis selector for bead pair (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
            }
            forms.add(it->second, bead_separation(i, j), 1.0);
        }
    }
    return forms.materialize();
}

BinaryPolynomial build_crossing(std::size_t beads, const AxisSelectors& selectors) {
    require_beads(beads, 2);
    SquaredForms forms(beads);
    const std::size_t bonds = beads - 1;
    for (std::size_t r = 0; r + 2 < bonds; ++r) {
        for (std::size_t k = r + 2; k < bonds; ++k) {
            const auto it = selectors.bond_pairs.find({r, k});
            if (it == selectors.bond_pairs.end()) {
                throw DataError("missing axis selector for bond pair (" + std::to_string(r) + ", " +
                                std::to_string(k) + ")");
            }
            forms.add(it->second, midpoint_separation(r, k), 1.0);
        }
    }
    return forms.materialize();
}

PenaltyFactors calibrate_penalties(const std::string& sequence, const MJTable& mj,
                                   SignConvention sign) {
    const std::size_t beads = sequence.size();
    require_beads(beads, 2);
    PenaltyFactors p;
    for (std::size_t j = 0; j < beads; ++j) {
        for (std::size_t k = j + 2; k < beads; ++k) {
            p.c_obj += pair_weight(mj, sequence[j], sequence[k], sign);
        }
    }
    p.c_continuity = static_cast<double>(beads - 1);
    p.c_overlap = static_cast<double>((beads - 1) * (beads - 2) / 2);
    if (p.c_overlap == 0.0) {
        // Two beads: no pair terms at all; keep the continuity penalty active.
        p.lambda1 = 1.0;
        return p;
    }
    if (p.c_obj == 0.0) {
        throw DataError(
            "objective weights sum to zero, so penalties cannot be calibrated; "
            "pass --lambda1, --lambda2 and --lambda3 explicitly");
    }
    p.lambda1 = std::abs(p.c_obj / p.c_continuity);
    p.lambda2 = std::abs(p.c_obj / p.c_overlap);
    p.lambda3 = 0.5 * p.lambda2;
    return p;
}

BinaryPolynomial assemble(const BinaryPolynomial& obj, const BinaryPolynomial& c1,
                          const BinaryPolynomial& c2, const BinaryPolynomial& c3,
                          const PenaltyFactors& lambda) {
    const std::size_t n = obj.num_vars();
    for (const auto* p : {&c1, &c2, &c3}) {
        if (p->num_vars() != n) {
            throw DataError("variable-count mismatch while assembling: " + std::to_string(n) +
                            " vs " + std::to_string(p->num_vars()));
        }
    }
    BinaryPolynomial out = obj * lambda.lambda0;
    out += c1 * lambda.lambda1;
    out -= c2 * lambda.lambda2;
    out -= c3 * lambda.lambda3;
    return out;
}

Hamiltonian build_hamiltonian(const std::string& sequence, const MJTable& mj,
                              const HamiltonianConfig& config) {
    Hamiltonian h;
    h.sequence = sequence;
    h.beads = sequence.size();
    require_beads(h.beads, 2);
    h.selectors = AxisSelectors::generate(h.beads, config.axis_seed);

    const bool all_overridden = config.lambda1 && config.lambda2 && config.lambda3;
    if (all_overridden) {
        // Still report the calibration intermediates when they are defined.
        try {
            h.penalties = calibrate_penalties(sequence, mj, config.sign);
        } catch (const DataError&) {
            h.penalties = PenaltyFactors{};
        }
    } else {
        h.penalties = calibrate_penalties(sequence, mj, config.sign);
    }
    if (config.lambda1) h.penalties.lambda1 = *config.lambda1;
    if (config.lambda2) h.penalties.lambda2 = *config.lambda2;
    if (config.lambda3) h.penalties.lambda3 = *config.lambda3;

    h.objective = build_objective(sequence, mj, config.sign);
    h.continuity = build_continuity(h.beads, config.continuity);
    h.overlap = build_overlap(h.beads, h.selectors);
    h.crossing = build_crossing(h.beads, h.selectors);
    h.assembled = assemble(h.objective, h.continuity, h.overlap, h.crossing, h.penalties);
    return h;
}

}  // namespace pepfold
