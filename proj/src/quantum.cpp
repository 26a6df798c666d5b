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

#include "pepfold/quantum.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pepfold/error.hpp"
#include "pepfold/rng.hpp"

namespace pepfold {

double PauliHamiltonian::expectation(const Bits& basis_state) const {
    if (basis_state.size() != num_qubits) {
        throw DataError("basis state has " + std::to_string(basis_state.size()) +
                        " qubits, Hamiltonian has " + std::to_string(num_qubits));
    }
    double total = 0.0;
    for (const auto& term : terms) {
        int parity = 0;
        for (const auto q : term.qubits) parity ^= basis_state[q];
        total += parity ? -term.coefficient : term.coefficient;
    }
    return total;
}

PauliHamiltonian to_pauli(const BinaryPolynomial& poly) {
    std::map<Monomial, double> acc;
    Monomial subset;
    for (const auto& [vars, c] : poly.terms()) {
        const std::size_t k = vars.size();
        if (k >= 32) throw CapabilityError("monomial degree too large for Pauli expansion");
        const double scale = std::ldexp(c, -static_cast<int>(k));
        // prod (1 - Z_i)/2 = 2^-k sum_{T subset S} (-1)^{|T|} Z_T
        for (std::uint32_t m = 0; m < (1U << k); ++m) {
            subset.clear();
            for (std::size_t i = 0; i < k; ++i) {
                if (m & (1U << i)) subset.push_back(vars[i]);
            }
            acc[subset] += (std::popcount(m) & 1) ? -scale : scale;
        }
    }
    PauliHamiltonian h;
    h.num_qubits = poly.num_vars();
    for (auto& [qubits, c] : acc) {
        if (c != 0.0) h.terms.push_back({qubits, c});
    }
    return h;
}

std::size_t pauli_term_count(const BinaryPolynomial& poly) { return to_pauli(poly).terms.size(); }

namespace {

std::string format_coefficient(double c) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), c);
    std::string s(buf, res.ptr);
    if (c >= 0.0 && s.front() != '-') s.insert(s.begin(), '+');
    return s;
}

}  // namespace

void write_pauli_text(std::ostream& out, const PauliHamiltonian& h) {
    for (const auto& term : h.terms) {
        out << format_coefficient(term.coefficient) << ' ';
        if (term.qubits.empty()) {
            out << 'I';
        } else {
            for (const auto q : term.qubits) out << 'Z' << q;
        }
        out << '\n';
    }
}

PauliHamiltonian read_pauli_text(std::istream& in, std::size_t num_qubits) {
    PauliHamiltonian h;
    h.num_qubits = num_qubits;
    std::map<Monomial, double> acc;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string coeff_text, op;
        if (!(ls >> coeff_text >> op)) {
            throw DataError("line " + std::to_string(lineno) + ": expected '<coefficient> <op>'");
        }
        double c = 0.0;
        const char* first = coeff_text.data() + (coeff_text[0] == '+' ? 1 : 0);
        const auto res = std::from_chars(first, coeff_text.data() + coeff_text.size(), c);
        if (res.ec != std::errc{} || res.ptr != coeff_text.data() + coeff_text.size()) {
            throw DataError("line " + std::to_string(lineno) + ": bad coefficient '" + coeff_text +
                            "'");
        }
        Monomial qubits;
        if (op != "I") {
            std::size_t pos = 0;
            while (pos < op.size()) {
                if (op[pos] != 'Z') {
                    throw DataError("line " + std::to_string(lineno) + ": bad operator '" + op +
                                    "'");
                }
                std::uint32_t q = 0;
                const auto r = std::from_chars(op.data() + pos + 1, op.data() + op.size(), q);
                if (r.ec != std::errc{} || q >= num_qubits) {
                    throw DataError("line " + std::to_string(lineno) + ": bad qubit in '" + op +
                                    "'");
                }
                qubits.push_back(q);
                pos = static_cast<std::size_t>(r.ptr - op.data());
            }
            std::sort(qubits.begin(), qubits.end());
        }
        acc[qubits] += c;
    }
    for (auto& [qubits, c] : acc) {
        if (c != 0.0) h.terms.push_back({qubits, c});
    }
    return h;
}

std::vector<double> diagonal(const PauliHamiltonian& h) {
    if (h.num_qubits > kDenseQubitCap) {
        throw CapabilityError("dense diagonal needs " + std::to_string(h.num_qubits) +
                              " qubits; the statevector cap is " + std::to_string(kDenseQubitCap));
    }
    const std::size_t dim = std::size_t{1} << h.num_qubits;
    std::vector<double> f(dim, 0.0);
    for (const auto& term : h.terms) {
        std::size_t mask = 0;
        for (const auto q : term.qubits) mask |= std::size_t{1} << q;
        f[mask] += term.coefficient;
    }
    // Walsh-Hadamard transform: f[b] <- sum_T f[T] (-1)^{|T & b|}.
    for (std::size_t len = 1; len < dim; len <<= 1) {
        for (std::size_t i = 0; i < dim; i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                const double a = f[j], b = f[j + len];
                f[j] = a + b;
                f[j + len] = a - b;
            }
        }
    }
    return f;
}

namespace {

using Complex = std::complex<double>;

void apply_1q(StateVector& psi, std::size_t q, const Complex (&u)[2][2]) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t i = 0; i < psi.size(); i += stride << 1) {
        for (std::size_t j = i; j < i + stride; ++j) {
            const Complex a = psi[j], b = psi[j + stride];
            psi[j] = u[0][0] * a + u[0][1] * b;
            psi[j + stride] = u[1][0] * a + u[1][1] * b;
        }
    }
}

void apply_ry(StateVector& psi, std::size_t q, double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const Complex u[2][2] = {{c, -s}, {s, c}};
    apply_1q(psi, q, u);
}

void apply_rz(StateVector& psi, std::size_t q, double theta) {
    const Complex m = std::polar(1.0, -theta / 2), p = std::polar(1.0, theta / 2);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= (i & bit) ? p : m;
}

void apply_cx(StateVector& psi, std::size_t control, std::size_t target) {
    const std::size_t cb = std::size_t{1} << control, tb = std::size_t{1} << target;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if ((i & cb) && !(i & tb)) std::swap(psi[i], psi[i | tb]);
    }
}

}  // namespace

StateVector simulate_ansatz(const AnsatzConfig& config) {
    const std::size_t n = config.num_qubits;
    if (n > kDenseQubitCap) {
        throw CapabilityError("ansatz has " + std::to_string(n) +
                              " qubits; the statevector cap is " + std::to_string(kDenseQubitCap));
    }
    if (config.theta.size() != config.parameter_count()) {
        throw DataError("ansatz expects " + std::to_string(config.parameter_count()) +
                        " parameters, got " + std::to_string(config.theta.size()));
    }
    StateVector psi(std::size_t{1} << n, Complex{0.0, 0.0});
    psi[0] = 1.0;
    std::size_t k = 0;
    for (std::size_t layer = 0; layer <= config.layers; ++layer) {
        for (std::size_t q = 0; q < n; ++q) apply_ry(psi, q, config.theta[k++]);
        for (std::size_t q = 0; q < n; ++q) apply_rz(psi, q, config.theta[k++]);
        if (layer == config.layers || n < 2) continue;
        if (config.entanglement == Entanglement::Circular && n > 2) apply_cx(psi, n - 1, 0);
        for (std::size_t q = 0; q + 1 < n; ++q) apply_cx(psi, q, q + 1);
    }
    return psi;
}

std::vector<std::uint64_t> sample_basis_states(const StateVector& state, std::size_t shots,
                                               std::uint64_t seed) {
    std::vector<double> cumulative(state.size());
    double total = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        total += std::norm(state[i]);
        cumulative[i] = total;
    }
    Rng rng(seed);
    std::vector<std::uint64_t> out(shots);
    for (auto& s : out) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            // u rounded up to the total: take the last state with nonzero weight.
            --it;
            while (it != cumulative.begin() && *it == *(it - 1)) --it;
        }
        s = static_cast<std::uint64_t>(it - cumulative.begin());
    }
    return out;
}

double cvar(std::vector<double> energies, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DataError("CVaR alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (energies.empty()) throw DataError("CVaR of an empty sample");
    const double raw = alpha * static_cast<double>(energies.size());
    auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    k = std::clamp<std::size_t>(k, 1, energies.size());
    std::nth_element(energies.begin(), energies.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     energies.end());
    std::sort(energies.begin(), energies.begin() + static_cast<std::ptrdiff_t>(k));
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += energies[i];
    return sum / static_cast<double>(k);
}

double cvar_energy(const PauliHamiltonian& h, const StateVector& state, std::size_t shots,
                   double alpha, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DataError("CVaR alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    const auto diag = diagonal(h);
    if (diag.size() != state.size()) {
        throw DataError("state dimension does not match the Hamiltonian");
    }
    const auto draws = sample_basis_states(state, shots, seed);
    std::vector<double> energies;
    energies.reserve(draws.size());
    for (const auto b : draws) energies.push_back(diag[b]);
    return cvar(std::move(energies), alpha);
}

SimplexResult minimize_simplex(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> x0, const SimplexOptions& options) {
    const std::size_t n = x0.size();
    const double dn = static_cast<double>(std::max<std::size_t>(n, 1));
    const double reflect = 1.0;
    const double expand = 1.0 + 2.0 / dn;
    const double contract = 0.75 - 1.0 / (2.0 * dn);
    const double shrink = 1.0 - 1.0 / dn;

    SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) -> std::optional<double> {
        if (evals >= options.max_evaluations) return std::nullopt;
        ++evals;
        const double v = f(x);
        if (v < best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };

    std::vector<std::vector<double>> pts{x0};
    std::vector<double> vals;
    auto finish = [&] {
        best.evaluations = evals;
        if (best.x.empty()) best.x = x0;
        return best;
    };
    if (auto v = eval(x0)) {
        vals.push_back(*v);
    } else {
        return finish();
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto x = x0;
        x[i] += options.initial_step;
        const auto v = eval(x);
        if (!v) return finish();
        pts.push_back(std::move(x));
        vals.push_back(*v);
    }

    std::vector<std::size_t> order(n + 1);
    while (true) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        {
            std::vector<std::vector<double>> p2;
            std::vector<double> v2;
            for (const auto i : order) {
                p2.push_back(std::move(pts[i]));
                v2.push_back(vals[i]);
            }
            pts = std::move(p2);
            vals = std::move(v2);
        }
        if (vals[n] - vals[0] <= options.f_tolerance) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / dn;
        }
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t d = 0; d < n; ++d) x[d] = centroid[d] + t * (pts[n][d] - centroid[d]);
            return x;
        };

        const auto xr = along(-reflect);
        const auto fr = eval(xr);
        if (!fr) break;
        if (*fr < vals[0]) {
            const auto xe = along(-reflect * expand);
            const auto fe = eval(xe);
            if (!fe) break;
            if (*fe < *fr) {
                pts[n] = xe;
                vals[n] = *fe;
            } else {
                pts[n] = xr;
                vals[n] = *fr;
            }
            continue;
        }
        if (*fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = *fr;
            continue;
        }
        const bool outside = *fr < vals[n];
        const auto xc = outside ? along(-reflect * contract) : along(contract);
        const auto fc = eval(xc);
        if (!fc) break;
        if ((outside && *fc <= *fr) || (!outside && *fc < vals[n])) {
            pts[n] = xc;
            vals[n] = *fc;
            continue;
        }
        bool exhausted = false;
        for (std::size_t i = 1; i <= n && !exhausted; ++i) {
            for (std::size_t d = 0; d < n; ++d) {
                pts[i][d] = pts[0][d] + shrink * (pts[i][d] - pts[0][d]);
            }
            const auto v = eval(pts[i]);
            if (!v) {
                exhausted = true;
            } else {
                vals[i] = *v;
            }
        }
        if (exhausted) break;
    }
    return finish();
}

VqeResult vqe_minimize(const PauliHamiltonian& h, const AnsatzConfig& ansatz,
                       const VqeConfig& config) {
    if (h.num_qubits != ansatz.num_qubits) {
        throw DataError("ansatz has " + std::to_string(ansatz.num_qubits) +
                        " qubits, Hamiltonian has " + std::to_string(h.num_qubits));
    }
    if (!(config.cvar_alpha > 0.0 && config.cvar_alpha <= 1.0)) {
        throw DataError("CVaR alpha must lie in (0, 1]");
    }
    if (config.shots == 0) throw DataError("shots must be positive");
    const auto diag = diagonal(h);
    const std::size_t n = h.num_qubits;

    AnsatzConfig work = ansatz;
    std::vector<double> x0;
    if (config.initial_theta) {
        x0 = *config.initial_theta;
        if (x0.size() != work.parameter_count()) {
            throw DataError("initial parameters have length " + std::to_string(x0.size()) +
                            ", ansatz expects " + std::to_string(work.parameter_count()));
        }
    } else {
        Rng rng(derive_seed(config.seed, 0xA5A5));
        x0.resize(work.parameter_count());
        for (auto& t : x0) t = (2.0 * rng.uniform() - 1.0) * std::numbers::pi;
    }

    VqeResult result;
    std::vector<std::size_t> counts(diag.size(), 0);
    std::uint64_t call = 0;
    auto objective = [&](const std::vector<double>& theta) {
        work.theta = theta;
        const auto psi = simulate_ansatz(work);
        const auto draws = sample_basis_states(psi, config.shots, derive_seed(config.seed, call++));
        std::vector<double> energies;
        energies.reserve(draws.size());
        for (const auto b : draws) {
            ++counts[b];
            energies.push_back(diag[b]);
        }
        const double e = cvar(std::move(energies), config.cvar_alpha);
        if (!std::isfinite(e)) throw std::runtime_error("VQE produced a non-finite energy");
        result.trace.push_back(e);
        return e;
    };

    const auto opt = minimize_simplex(
        objective, x0, {config.max_iterations, config.initial_step, config.f_tolerance});
    result.theta = opt.x;
    result.energy = opt.value;
    result.evaluations = opt.evaluations;
    for (std::size_t b = 0; b < counts.size(); ++b) {
        if (counts[b]) result.samples.add(bits_from_index(b, n), diag[b], counts[b], "vqe");
    }
    result.samples.sort();
    return result;
}

}  // namespace pepfold
