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

#include "pepfold/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "pepfold/error.hpp"
#include "pepfold/rng.hpp"

namespace pepfold {

bool operator==(const Sample& a, const Sample& b) {
    return a.bits == b.bits && a.energy == b.energy && a.count == b.count && a.source == b.source;
}

void SampleSet::add(const Bits& bits, double energy, std::size_t count, const std::string& source) {
    const auto it = index_.find(bits);
    if (it != index_.end()) {
        records_[it->second].count += count;
        return;
    }
    index_.emplace(bits, records_.size());
    records_.push_back({bits, energy, count, source});
}

void SampleSet::merge(const SampleSet& other) {
    for (const auto& r : other.records_) add(r.bits, r.energy, r.count, r.source);
    sort();
}

const Sample& SampleSet::best() const {
    return *std::min_element(records_.begin(), records_.end(),
                             [](const Sample& a, const Sample& b) {
                                 return std::tie(a.energy, a.bits) < std::tie(b.energy, b.bits);
                             });
}

std::size_t SampleSet::total_count() const {
    std::size_t n = 0;
    for (const auto& r : records_) n += r.count;
    return n;
}

void SampleSet::rescore(const BinaryPolynomial& poly) {
    for (auto& r : records_) r.energy = poly.evaluate(r.bits);
    sort();
}

void SampleSet::sort() {
    std::stable_sort(records_.begin(), records_.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.bits < b.bits;
    });
    reindex();
}

void SampleSet::reindex() {
    index_.clear();
    for (std::size_t i = 0; i < records_.size(); ++i) index_.emplace(records_[i].bits, i);
}

CompiledPolynomial::CompiledPolynomial(const BinaryPolynomial& poly) : num_vars_(poly.num_vars()) {
    std::vector<std::vector<std::uint32_t>> incidence(num_vars_);
    term_begin_.push_back(0);
    for (const auto& [vars, c] : poly.terms()) {
        if (vars.empty()) {
            constant_ += c;
            continue;
        }
        const auto id = static_cast<std::uint32_t>(coeff_.size());
        coeff_.push_back(c);
        for (const auto v : vars) {
            term_vars_.push_back(v);
            incidence[v].push_back(id);
        }
        term_begin_.push_back(static_cast<std::uint32_t>(term_vars_.size()));
    }
    var_begin_.push_back(0);
    for (const auto& list : incidence) {
        var_terms_.insert(var_terms_.end(), list.begin(), list.end());
        var_begin_.push_back(static_cast<std::uint32_t>(var_terms_.size()));
    }
}

void CompiledPolynomial::reset(const Bits& bits) {
    if (bits.size() != num_vars_) {
        throw DataError("bitstring length mismatch: expected " + std::to_string(num_vars_) +
                        ", got " + std::to_string(bits.size()));
    }
    state_ = bits;
    zeros_.assign(coeff_.size(), 0);
    energy_ = constant_;
    for (std::size_t t = 0; t < coeff_.size(); ++t) {
        for (auto i = term_begin_[t]; i < term_begin_[t + 1]; ++i) {
            if (!state_[term_vars_[i]]) ++zeros_[t];
        }
        if (zeros_[t] == 0) energy_ += coeff_[t];
    }
}

double CompiledPolynomial::delta(std::uint32_t v) const {
    const std::uint32_t self_zero = state_[v] ? 0U : 1U;
    double sum = 0.0;
    for (auto i = var_begin_[v]; i < var_begin_[v + 1]; ++i) {
        const auto t = var_terms_[i];
        if (zeros_[t] == self_zero) sum += coeff_[t];
    }
    return state_[v] ? -sum : sum;
}

void CompiledPolynomial::flip(std::uint32_t v, double delta) {
    const bool to_one = !state_[v];
    for (auto i = var_begin_[v]; i < var_begin_[v + 1]; ++i) {
        const auto t = var_terms_[i];
        if (to_one) {
            --zeros_[t];
        } else {
            ++zeros_[t];
        }
    }
    state_[v] = to_one ? 1 : 0;
    energy_ += delta;
}

AnnealSchedule AnnealSchedule::defaults_for(const BinaryPolynomial& poly) {
    AnnealSchedule s;
    const double hi = poly.max_abs_coefficient();
    const double lo = poly.min_abs_coefficient();
    s.t_start = hi > 0.0 ? 10.0 * hi : 1.0;
    s.t_end = lo > 0.0 ? 1e-3 * lo : 1e-3;
    if (s.t_end > s.t_start) s.t_end = s.t_start;
    return s;
}

namespace {

Sample anneal_once(const BinaryPolynomial& poly, const AnnealSchedule& schedule,
                   std::uint64_t seed) {
    const std::size_t n = poly.num_vars();
    Rng rng(seed);
    CompiledPolynomial state(poly);
    Bits init(n);
    for (auto& b : init) b = static_cast<std::uint8_t>(rng.below(2));
    state.reset(init);

    Bits best = state.state();
    double best_energy = state.energy();

    std::vector<std::uint32_t> order(n);
    for (std::uint32_t i = 0; i < n; ++i) order[i] = i;

    const double ratio = schedule.t_end / schedule.t_start;
    const double denom = schedule.sweeps > 1 ? static_cast<double>(schedule.sweeps - 1) : 1.0;
    const double tol = 1e-9 * std::max(1.0, poly.max_abs_coefficient());

    for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
        const double temperature = schedule.t_start * std::pow(ratio, sweep / denom);
        rng.shuffle(order);
        for (const auto v : order) {
            const double d = state.delta(v);
            if (d > 0.0 && rng.uniform() >= std::exp(-d / temperature)) continue;
            state.flip(v, d);
            if (schedule.verify_energy) {
                const double full = poly.evaluate(state.state());
                if (std::abs(full - state.energy()) > tol) {
                    throw std::logic_error("incremental energy drifted from full evaluation");
                }
            }
            if (state.energy() < best_energy) {
                best_energy = state.energy();
                best = state.state();
            }
        }
    }
    // Report the exact energy rather than the accumulated one.
    return {best, poly.evaluate(best), 1, "sa"};
}

}  // namespace

SampleSet simulated_annealing(const BinaryPolynomial& poly, const AnnealSchedule& schedule) {
    if (poly.empty() || poly.num_vars() == 0) {
        throw DataError("simulated annealing needs a nonempty polynomial");
    }
    if (!(schedule.t_end > 0.0) || !(schedule.t_start >= schedule.t_end) || schedule.sweeps < 1 ||
        schedule.restarts < 1) {
        throw DataError(
            "degenerate annealing schedule: need t_start >= t_end > 0, sweeps >= 1, "
            "restarts >= 1");
    }
    std::vector<Sample> results(schedule.restarts);
    unsigned workers = schedule.threads ? schedule.threads : std::thread::hardware_concurrency();
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(schedule.restarts)));

    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t r = w; r < schedule.restarts; r += workers) {
                        results[r] = anneal_once(poly, schedule, derive_seed(schedule.seed, r));
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    SampleSet out;
    for (const auto& s : results) out.add(s.bits, s.energy, 1, s.source);
    out.sort();
    return out;
}

BruteForceResult brute_force(const BinaryPolynomial& poly, std::size_t cap) {
    const std::size_t n = poly.num_vars();
    if (n > cap) {
        throw CapabilityError("brute force refuses " + std::to_string(n) +
                              " variables: the enumeration cap is " + std::to_string(cap));
    }
    if (n >= 63) throw CapabilityError("brute force supports at most 62 variables");

    CompiledPolynomial state(poly);
    state.reset(Bits(n, 0));
    Bits best = state.state();
    double best_energy = state.energy();
    const double tol = 1e-9 * std::max(1.0, poly.max_abs_coefficient());

    // Gray-code walk: one flip per step.
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        const auto v = static_cast<std::uint32_t>(std::countr_zero(i));
        state.flip(v);
        const double e = state.energy();
        if (e < best_energy - tol) {
            best_energy = e;
            best = state.state();
        } else if (e <= best_energy + tol && state.state() < best) {
            best = state.state();
            best_energy = std::min(best_energy, e);
        }
    }
    return {best, poly.evaluate(best)};
}

}  // namespace pepfold
