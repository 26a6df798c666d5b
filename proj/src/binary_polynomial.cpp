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

#include "pepfold/binary_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pepfold/error.hpp"

namespace pepfold {

BinaryPolynomial::BinaryPolynomial(std::size_t num_vars,
                                   std::initializer_list<std::pair<Monomial, double>> terms)
    : num_vars_(num_vars) {
    for (const auto& [vars, c] : terms) add_term(vars, c);
}

BinaryPolynomial BinaryPolynomial::constant(std::size_t num_vars, double value) {
    BinaryPolynomial p(num_vars);
    p.add_term({}, value);
    return p;
}

BinaryPolynomial BinaryPolynomial::variable(std::size_t num_vars, std::uint32_t index) {
    BinaryPolynomial p(num_vars);
    p.add_term({index}, 1.0);
    return p;
}

void BinaryPolynomial::add_term(Monomial vars, double coefficient) {
    if (coefficient == 0.0) return;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (!vars.empty() && vars.back() >= num_vars_) {
        throw DataError("variable index " + std::to_string(vars.back()) +
                        " out of range for a polynomial over " + std::to_string(num_vars_) +
                        " variables");
    }
    auto [it, inserted] = terms_.try_emplace(std::move(vars), coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double BinaryPolynomial::coefficient(const Monomial& vars) const {
    const auto it = terms_.find(vars);
    return it == terms_.end() ? 0.0 : it->second;
}

std::size_t BinaryPolynomial::degree() const {
    std::size_t d = 0;
    for (const auto& [vars, c] : terms_) d = std::max(d, vars.size());
    return d;
}

double BinaryPolynomial::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [vars, c] : terms_) {
        if (!vars.empty()) m = std::max(m, std::abs(c));
    }
    return m;
}

double BinaryPolynomial::min_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [vars, c] : terms_) {
        if (vars.empty()) continue;
        if (m == 0.0 || std::abs(c) < m) m = std::abs(c);
    }
    return m;
}

double BinaryPolynomial::evaluate(const Bits& bits) const {
    if (bits.size() != num_vars_) {
        throw DataError("bitstring length mismatch: polynomial has " + std::to_string(num_vars_) +
                        " variables, got " + std::to_string(bits.size()) + " bits");
    }
    double total = 0.0;
    for (const auto& [vars, c] : terms_) {
        bool on = true;
        for (const auto v : vars) {
            if (!bits[v]) {
                on = false;
                break;
            }
        }
        if (on) total += c;
    }
    return total;
}

void BinaryPolynomial::check_compatible(const BinaryPolynomial& other) const {
    if (other.num_vars_ != num_vars_) {
        throw DataError("variable-count mismatch: " + std::to_string(num_vars_) + " vs " +
                        std::to_string(other.num_vars_));
    }
}

BinaryPolynomial& BinaryPolynomial::operator+=(const BinaryPolynomial& other) {
    check_compatible(other);
    for (const auto& [vars, c] : other.terms_) add_term(vars, c);
    return *this;
}

BinaryPolynomial& BinaryPolynomial::operator-=(const BinaryPolynomial& other) {
    check_compatible(other);
    for (const auto& [vars, c] : other.terms_) add_term(vars, -c);
    return *this;
}

BinaryPolynomial& BinaryPolynomial::operator*=(double scale) {
    if (scale == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= scale;
        it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

Monomial merge_monomials(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

BinaryPolynomial operator*(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    a.check_compatible(b);
    BinaryPolynomial out(a.num_vars_);
    for (const auto& [va, ca] : a.terms_) {
        for (const auto& [vb, cb] : b.terms_) {
            out.add_term(merge_monomials(va, vb), ca * cb);
        }
    }
    return out;
}

BinaryPolynomial truncate_to_quadratic(const BinaryPolynomial& poly) {
    BinaryPolynomial out(poly.num_vars());
    for (const auto& [vars, c] : poly.terms()) {
        if (vars.size() <= 2) out.add_term(vars, c);
    }
    return out;
}

}  // namespace pepfold
