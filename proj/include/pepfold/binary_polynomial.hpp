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
#include <initializer_list>
#include <map>
#include <vector>

#include "pepfold/bits.hpp"

namespace pepfold {

/// Strictly increasing variable indices; the empty monomial is the constant.
using Monomial = std::vector<std::uint32_t>;

/// Multilinear polynomial over binary variables with real coefficients.
/// q*q is reduced to q on insertion and exact zeros are never stored, so two
/// polynomials are equal iff their term maps are equal.
class BinaryPolynomial {
   public:
    using TermMap = std::map<Monomial, double>;

    BinaryPolynomial() = default;
    explicit BinaryPolynomial(std::size_t num_vars) : num_vars_(num_vars) {}
    BinaryPolynomial(std::size_t num_vars,
                     std::initializer_list<std::pair<Monomial, double>> terms);

    static BinaryPolynomial constant(std::size_t num_vars, double value);
    static BinaryPolynomial variable(std::size_t num_vars, std::uint32_t index);

    std::size_t num_vars() const { return num_vars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    /// Adds `coefficient` to the term over `vars` (any order, repeats allowed).
    void add_term(Monomial vars, double coefficient);

    double coefficient(const Monomial& vars) const;
    double constant_term() const { return coefficient({}); }

    std::size_t degree() const;

    /// Largest |coefficient| over non-constant terms (0 if none).
    double max_abs_coefficient() const;
    /// Smallest nonzero |coefficient| over non-constant terms (0 if none).
    double min_abs_coefficient() const;

    /// Throws DataError if bits.size() != num_vars().
    double evaluate(const Bits& bits) const;

    BinaryPolynomial& operator+=(const BinaryPolynomial& other);
    BinaryPolynomial& operator-=(const BinaryPolynomial& other);
    BinaryPolynomial& operator*=(double scale);

    friend BinaryPolynomial operator+(BinaryPolynomial a, const BinaryPolynomial& b) {
        return a += b;
    }
    friend BinaryPolynomial operator-(BinaryPolynomial a, const BinaryPolynomial& b) {
        return a -= b;
    }
    friend BinaryPolynomial operator*(BinaryPolynomial a, double s) { return a *= s; }
    friend BinaryPolynomial operator*(double s, BinaryPolynomial a) { return a *= s; }
    friend BinaryPolynomial operator*(const BinaryPolynomial& a, const BinaryPolynomial& b);

    friend bool operator==(const BinaryPolynomial&, const BinaryPolynomial&) = default;

   private:
    void check_compatible(const BinaryPolynomial& other) const;

    std::size_t num_vars_ = 0;
    TermMap terms_;
};

/// Drops every term of degree 3 or more.
BinaryPolynomial truncate_to_quadratic(const BinaryPolynomial& poly);

/// Union of two sorted monomials (multilinear product of the monomials).
Monomial merge_monomials(const Monomial& a, const Monomial& b);

}  // namespace pepfold
