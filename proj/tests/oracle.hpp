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

// Independent geometric reference for the folding Hamiltonian. Turns are
// decoded straight from the closed-form coordinate updates in plain doubles;
// nothing here goes through the library's lattice or polynomial code.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

using Vec = std::array<double, 3>;

inline Vec turn(const int* q) {
    const double q1 = q[0], q2 = q[1], q3 = q[2], q4 = q[3], q5 = q[4];
    const double da = 0.5 - 0.5 * q1 - q2 + q1 * q2;
    const double db = 0.5 + 0.5 * q1 - q3 - q1 * q2;
    return {q4 * q5 * da + q4 * (1 - q5) * db, (1 - q4) * q5 * da + q4 * q5 * db,
            q4 * (1 - q5) * da + (1 - q4) * q5 * db};
}

inline std::vector<Vec> turns(const std::vector<int>& bits) {
    std::vector<Vec> out;
    for (std::size_t t = 0; t + 5 <= bits.size(); t += 5) out.push_back(turn(&bits[t]));
    return out;
}

inline std::vector<Vec> positions(const std::vector<int>& bits) {
    std::vector<Vec> p{{0, 0, 0}};
    for (const auto& d : turns(bits)) {
        const auto& b = p.back();
        p.push_back({b[0] + d[0], b[1] + d[1], b[2] + d[2]});
    }
    return p;
}

inline double dist2(const Vec& a, const Vec& b) {
    double s = 0;
    for (int c = 0; c < 3; ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
    return s;
}

// weights[j][k] for k >= j+2.
inline double objective(const std::vector<int>& bits,
                        const std::vector<std::vector<double>>& weights) {
    const auto p = positions(bits);
    double e = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (std::size_t k = j + 2; k < p.size(); ++k) e += weights[j][k] * dist2(p[j], p[k]);
    }
    return e;
}

inline double continuity(const std::vector<int>& bits, bool strict) {
    double e = 0;
    for (const auto& d : turns(bits)) {
        if (strict) {
            e += (d[0] == 0 && d[1] == 0 && d[2] == 0) ? 1.0 : 0.0;
        } else {
            e += (1 - d[0] * d[0]) * (1 - d[1] * d[1]) * (1 - d[2] * d[2]);
        }
    }
    return e;
}

// axis(i, j) returns 0, 1 or 2 for bead pair (i, j).
template <typename AxisFn>
double overlap(const std::vector<int>& bits, AxisFn axis) {
    const auto p = positions(bits);
    double e = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 2; j < p.size(); ++j) {
            const int a = axis(i, j);
            e += (p[j][a] - p[i][a]) * (p[j][a] - p[i][a]);
        }
    }
    return e;
}

// Bond r joins beads r and r+1; the separation is between bond midpoints.
template <typename AxisFn>
double crossing(const std::vector<int>& bits, AxisFn axis) {
    const auto p = positions(bits);
    const std::size_t bonds = p.size() - 1;
    double e = 0;
    for (std::size_t r = 0; r < bonds; ++r) {
        for (std::size_t k = r + 2; k < bonds; ++k) {
            const int a = axis(r, k);
            const double mr = 0.5 * (p[r][a] + p[r + 1][a]);
            const double mk = 0.5 * (p[k][a] + p[k + 1][a]);
            e += (mk - mr) * (mk - mr);
        }
    }
    return e;
}

inline std::vector<int> bits_of(std::uint64_t index, std::size_t n) {
    std::vector<int> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<int>((index >> i) & 1U);
    return b;
}

}  // namespace oracle
