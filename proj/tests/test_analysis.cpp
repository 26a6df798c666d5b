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

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "pepfold/analysis.hpp"
#include "pepfold/error.hpp"
#include "pepfold/io.hpp"

using namespace pepfold;

namespace {

MJTable synthetic_table() { return load_mj_table(PEPFOLD_TEST_DATA "/mj_synthetic.csv"); }

CartesianStructure line(std::size_t n) {
    CartesianStructure s;
    for (std::size_t i = 0; i < n; ++i) s.coords.emplace_back(3.8 * i, 0, 0);
    return s;
}

CartesianStructure chiral() {
    CartesianStructure s;
    s.coords = {{0, 0, 0}, {3.8, 0, 0}, {3.8, 3.8, 0}, {3.8, 3.8, 3.8}};
    return s;
}

CartesianStructure moved(const CartesianStructure& s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    const Eigen::Quaterniond q = Eigen::Quaterniond(u(rng), u(rng), u(rng), u(rng)).normalized();
    const Eigen::Vector3d t(u(rng) * 10, u(rng) * 10, u(rng) * 10);
    CartesianStructure out;
    for (const auto& c : s.coords) out.coords.push_back(q * c + t);
    return out;
}

double cosine(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return a.dot(b) / (a.norm() * b.norm());
}

}  // namespace

TEST(violations, straight_chain_clean) {
    const auto c = conformation_from_turns({{2, 0, 0}, {2, 0, 0}, {2, 0, 0}});
    EXPECT_TRUE(detect_violations(c).empty());
}

TEST(violations, overlap_crossing_and_degenerate) {
    // Square loop: bead 4 returns to bead 0.
    const auto loop = conformation_from_turns({{2, 0, 0}, {0, 2, 0}, {-2, 0, 0}, {0, -2, 0}});
    const auto v = detect_violations(loop);
    ASSERT_EQ(v.overlaps.size(), 1u);
    EXPECT_EQ(v.overlaps[0], (std::pair<std::size_t, std::size_t>{0, 4}));

    // Two axis bonds crossing at a shared midpoint.
    const auto cross = conformation_from_turns({{2, 0, 0}, {-1, 1, 0}, {0, -2, 0}});
    const auto w = detect_violations(cross);
    EXPECT_TRUE(w.overlaps.empty());
    ASSERT_EQ(w.crossings.size(), 1u);
    EXPECT_EQ(w.crossings[0], (std::pair<std::size_t, std::size_t>{0, 2}));

    const auto degenerate = conformation_from_turns({{2, 0, 0}, {0, 0, 0}});
    EXPECT_EQ(detect_violations(degenerate).degenerate_turns, std::vector<std::size_t>{1});
}

TEST(repair, unchanged_when_clean) {
    const auto c = conformation_from_turns({{2, 0, 0}, {1, 1, 0}});
    const auto r = repair(c, detect_violations(c), "ACD", synthetic_table());
    ASSERT_TRUE(r.accepted());
    EXPECT_FALSE(r.moved_bead.has_value());
    EXPECT_EQ(r.conformation->positions, c.positions);
}

TEST(repair, single_overlap_fixed) {
    const auto c = conformation_from_turns({{1, 1, 0}, {1, -1, 0}, {-1, -1, 0}, {-1, 1, 0}});
    const auto v = detect_violations(c);
    ASSERT_EQ(v.total(), 1u);
    const auto r = repair(c, v, "ACDEF", synthetic_table());
    ASSERT_TRUE(r.accepted()) << r.reason;
    ASSERT_TRUE(r.moved_bead.has_value());
    EXPECT_TRUE(detect_violations(*r.conformation).empty());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        changed += r.conformation->positions[i] != c.positions[i];
    }
    EXPECT_LE(changed, 1u);
    for (std::size_t t = 0; t + 1 < c.size(); ++t) {
        EXPECT_TRUE(encode_turn(r.conformation->turn(t)).has_value());
    }
}

TEST(repair, two_overlaps_rejected) {
    const auto c = conformation_from_turns({{2, 0, 0}, {-2, 0, 0}, {2, 0, 0}, {-2, 0, 0}});
    const auto v = detect_violations(c);
    ASSERT_GE(v.total(), 2u);
    const auto r = repair(c, v, "ACDEF", synthetic_table());
    EXPECT_FALSE(r.accepted());
    EXPECT_FALSE(r.reason.empty());
}

TEST(angstrom, axis_and_diagonal) {
    const auto s = to_angstrom(conformation_from_turns({{2, 0, 0}, {2, 0, 0}}));
    EXPECT_NEAR(s.coords[2].x(), 7.6, 1e-12);
    const auto d = to_angstrom(conformation_from_turns({{1, 1, 0}}));
    EXPECT_NEAR(d.coords[1].x(), 3.8 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(d.coords[1].y(), 2.687, 1e-3);
    EXPECT_THROW(to_angstrom(conformation_from_turns({{0, 0, 0}})), DataError);
}

TEST(angstrom, bond_lengths_and_angles) {
    const auto c =
        conformation_from_turns({{1, 1, 0}, {2, 0, 0}, {0, 1, 1}, {0, 0, -2}, {-1, 0, 1}});
    const auto s = to_angstrom(c);
    for (std::size_t t = 0; t + 1 < s.size(); ++t) {
        EXPECT_NEAR((s.coords[t + 1] - s.coords[t]).norm(), 3.8, 1e-6);
    }
    for (std::size_t t = 0; t + 2 < s.size(); ++t) {
        const auto a = c.turn(t), b = c.turn(t + 1);
        const Eigen::Vector3d la(a.dx, a.dy, a.dz), lb(b.dx, b.dy, b.dz);
        EXPECT_NEAR(cosine(s.coords[t + 1] - s.coords[t], s.coords[t + 2] - s.coords[t + 1]),
                    cosine(la, lb), 1e-12);
    }
}

TEST(kabsch, rigid_motion_invariance) {
    const auto a = chiral();
    EXPECT_NEAR(kabsch_rmsd(a, a), 0.0, 1e-9);
    EXPECT_NEAR(kabsch_rmsd(moved(a, 1), a), 0.0, 1e-9);
    const auto b = moved(line(5), 2);
    auto bent = line(5);
    bent.coords[4] += Eigen::Vector3d(0, 2, 1);
    EXPECT_NEAR(kabsch_rmsd(bent, b), kabsch_rmsd(b, bent), 1e-9);
    EXPECT_NEAR(kabsch_rmsd(moved(bent, 5), b), kabsch_rmsd(bent, b), 1e-9);
}

TEST(kabsch, mirror_image_positive) {
    auto m = chiral();
    for (auto& c : m.coords) c.z() = -c.z();
    EXPECT_GT(kabsch_rmsd(m, chiral()), 0.1);
}

TEST(kabsch, errors) {
    EXPECT_THROW(kabsch_rmsd(line(3), line(4)), DataError);
    EXPECT_THROW(kabsch_rmsd(line(2), line(2)), DataError);
    EXPECT_NEAR(kabsch_rmsd(line(4), moved(line(4), 3)), 0.0, 1e-9);
}

TEST(metrics, radius_of_gyration) {
    EXPECT_EQ(radius_of_gyration(line(1)), 0.0);
    EXPECT_NEAR(radius_of_gyration(line(2)), 1.9, 1e-12);
    EXPECT_NEAR(radius_of_gyration(line(3)), std::sqrt(2 * 3.8 * 3.8 / 3), 1e-12);
}

TEST(metrics, contact_energy) {
    const auto mj = synthetic_table();
    EXPECT_DOUBLE_EQ(contact_energy(line(3), "ACD", mj), mj('A', 'D'));
    EXPECT_DOUBLE_EQ(contact_energy(line(5), "ACDEF", mj),
                     mj('A', 'D') + mj('C', 'E') + mj('D', 'F'));
    CartesianStructure far;
    far.coords = {{0, 0, 0}, {3.8, 0, 0}, {3.8, 8.0, 0}};
    EXPECT_EQ(contact_energy(far, "ACD", mj), 0.0);
    EXPECT_THROW(contact_energy(line(3), "AC", mj), DataError);
}

TEST(fes, populations) {
    std::vector<FesSample> s;
    for (std::size_t i = 0; i < 100; ++i) s.push_back({i < 90 ? -5.0 : 0.0, 4.0, i, 1});
    const auto g = build_fes(s, 2, 1);
    EXPECT_EQ(g.counts[g.index(0, 0)], 90u);
    EXPECT_EQ(g.counts[g.index(1, 0)], 10u);
    EXPECT_NEAR(g.free_energy[g.index(0, 0)], 0.0, 1e-12);
    EXPECT_NEAR(g.free_energy[g.index(1, 0)], std::log(9.0), 1e-12);
}

TEST(fes, identical_samples_single_bin) {
    const auto g = build_fes({{1.0, 2.0, 0, 3}, {1.0, 2.0, 1, 1}}, 5, 5);
    std::size_t occupied = 0;
    for (std::size_t i = 0; i < g.counts.size(); ++i) {
        if (g.counts[i]) {
            ++occupied;
            EXPECT_EQ(g.free_energy[i], 0.0);
        } else {
            EXPECT_TRUE(std::isinf(g.free_energy[i]));
        }
    }
    EXPECT_EQ(occupied, 1u);
    EXPECT_THROW(build_fes({}, 3, 3), DataError);
}

TEST(fes, non_negative_with_zero_minimum) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0, 1);
    std::vector<FesSample> s;
    for (std::size_t i = 0; i < 500; ++i) s.push_back({n(rng), 5 + n(rng), i, 1});
    const auto g = build_fes(s);
    double lo = 1e300;
    for (const double f : g.free_energy) {
        EXPECT_GE(f, 0.0);
        lo = std::min(lo, f);
    }
    EXPECT_EQ(lo, 0.0);
}

TEST(representatives, rmsd_statistics) {
    const auto g = build_fes({{-1.0, 3.0, 0, 1}, {-1.0, 3.0, 1, 1}}, 3, 3);
    const std::vector<double> rmsd{2.0, 4.0};
    const auto r = select_representatives(g, rmsd);
    EXPECT_EQ(r.members.size(), 2u);
    EXPECT_EQ(*r.min_rmsd, 2.0);
    EXPECT_EQ(*r.mean_rmsd, 3.0);
    EXPECT_EQ(*r.min_rmsd_member, 0u);

    const auto single =
        select_representatives(build_fes({{0.0, 1.0, 0, 1}}, 2, 2), std::vector<double>{1.5});
    EXPECT_EQ(*single.min_rmsd, 1.5);
    EXPECT_EQ(*single.mean_rmsd, 1.5);
}

TEST(representatives, tie_prefers_lower_contact_energy) {
    const auto g = build_fes({{2.0, 1.0, 0, 1}, {-2.0, 1.0, 1, 1}}, 4, 1);
    const auto r = select_representatives(g);
    EXPECT_EQ(r.bin_e, 0u);
    EXPECT_EQ(r.members, std::vector<std::size_t>{1});
    EXPECT_FALSE(r.min_rmsd.has_value());
}
