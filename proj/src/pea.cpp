// Copyright 2026 The quditpea Authors
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

#include "quditpea/pea.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quditpea {
namespace {

// Below this |delta| the closed form is replaced by its limit, 1.
constexpr double kSingularityGuard = 1e-9;

}  // namespace

Readout readout(std::span<const double> weights) {
    if (weights.empty()) throw std::invalid_argument("readout: empty distribution");
    Readout r;
    double best = weights[0];
    for (std::size_t i = 1; i < weights.size(); ++i) {
        if (weights[i] > best + kTieTolerance) {
            best = weights[i];
            r.digit = i;
        }
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (i != r.digit && std::abs(weights[i] - best) <= kTieTolerance) r.tie = true;
    }
    return r;
}

Readout readout(const ProbVector& dist) { return readout(dist.probs()); }

PeaOutcome run_pea(const UnitaryOp& u, const QuditState& target, std::size_t d_control,
                   const std::optional<DiagonalUnitary>& control_rotation) {
    if (target.dims().size() != 1 || target.size() != u.dim()) {
        throw DimensionError("run_pea: target of size " + std::to_string(target.size()) +
                             " does not match unitary dim " + std::to_string(u.dim()));
    }
    if (!target.is_normalized()) throw std::invalid_argument("run_pea: target is not normalized");
    if (control_rotation && control_rotation->dim() != d_control) {
        throw DimensionError("run_pea: control rotation dim " +
                             std::to_string(control_rotation->dim()) + " != " +
                             std::to_string(d_control));
    }

    QuditState state = tensor(QuditState::basis(d_control, 0), target);
    state = apply(dft(d_control), state, 0);
    state = apply(mvcg(u, d_control), state);
    if (control_rotation) state = apply(control_rotation->to_op(), state, 0);
    state = apply(dft(d_control, true), state, 0);

    std::vector<double> kickback(d_control);
    for (std::size_t j = 0; j < d_control; ++j) {
        const UnitaryOp uj = unitary_power(u, j);
        cplx overlap{};
        for (std::size_t r = 0; r < u.dim(); ++r) {
            cplx row{};
            for (std::size_t c = 0; c < u.dim(); ++c) row += uj(r, c) * target[c];
            overlap += std::conj(target[r]) * row;
        }
        kickback[j] = std::abs(overlap) > 0.0 ? wrap_phase(std::arg(overlap)) : 0.0;
    }

    ProbVector dist = probabilities(state, 0);
    const Readout r = readout(dist);
    return PeaOutcome{std::move(dist), r.digit, r.tie, std::move(kickback)};
}

double collapse_probability(std::size_t n, double phi, std::size_t d) {
    if (d == 0 || n >= d) {
        throw std::out_of_range("collapse_probability: digit " + std::to_string(n) +
                                " out of range for d = " + std::to_string(d));
    }
    // Reduce delta to (-pi, pi] so the small-angle branch sees every image of 0.
    double delta = wrap_phase(phi - kTwoPi * static_cast<double>(n) / static_cast<double>(d));
    if (delta > kPi) delta -= kTwoPi;
    if (std::abs(delta) < kSingularityGuard) return 1.0;
    const double dd = static_cast<double>(d);
    const double num = std::sin(0.5 * dd * delta);
    const double den = dd * std::sin(0.5 * delta);
    return (num * num) / (den * den);
}

std::vector<double> collapse_distribution(double phi, std::size_t d) {
    std::vector<double> out(d);
    for (std::size_t n = 0; n < d; ++n) out[n] = collapse_probability(n, phi, d);
    return out;
}

}  // namespace quditpea
