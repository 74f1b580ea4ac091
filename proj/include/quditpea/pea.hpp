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

#pragma once

/// \file pea.hpp
/// \brief Ideal single-control-qudit phase estimation:
///   |0>_c |psi>  --DFT(c)-->  --MVCG(U)-->  --DFT^-1(c)-->  measure c.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "quditpea/core.hpp"
#include "quditpea/gates.hpp"

namespace quditpea {

/// Argmax of a distribution. Ties go to the smallest index and set `tie`.
struct Readout {
    std::size_t digit = 0;
    bool tie = false;
};

struct PeaOutcome {
    ProbVector distribution;
    std::size_t readout_digit = 0;
    bool tie = false;
    /// arg <psi|U^j|psi> per control level j; equals j*phi for an eigenstate.
    std::vector<double> kickback_phases;
};

/// Entries within this distance of the maximum count as tied.
inline constexpr double kTieTolerance = 1e-12;

Readout readout(const ProbVector& dist);
Readout readout(std::span<const double> weights);

/// Brute-force circuit simulation on the full (control, target) register.
/// `control_rotation`, when set, is applied to the control between the MVCG
/// and the inverse DFT (the iterative-PEA feedback gate).
PeaOutcome run_pea(const UnitaryOp& u, const QuditState& target, std::size_t d_control,
                   const std::optional<DiagonalUnitary>& control_rotation = std::nullopt);

/// Probability that the control collapses to |n> for an eigenstate with
/// eigenphase phi:
///   C(n, phi) = |sum_j e^{i j (phi - 2 pi n/d)}|^2 / d^2
///             = sin^2(d delta/2) / (d^2 sin^2(delta/2)),  delta = phi - 2 pi n/d.
/// Throws std::out_of_range when n >= d.
double collapse_probability(std::size_t n, double phi, std::size_t d);

/// C(0..d-1, phi).
std::vector<double> collapse_distribution(double phi, std::size_t d);

}  // namespace quditpea
