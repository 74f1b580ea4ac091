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

#include <cstdint>
#include <span>
#include <vector>

#include "quditpea/core.hpp"

namespace quditpea {

/// diag(e^{i phi_0}, ..., e^{i phi_{d-1}}) with phases kept in [0, 2*pi).
class DiagonalUnitary {
  public:
    explicit DiagonalUnitary(std::vector<double> phases);

    std::size_t dim() const noexcept { return phases_.size(); }
    const std::vector<double>& phases() const noexcept { return phases_; }
    double phase(std::size_t k) const { return phases_[k]; }

    UnitaryOp to_op() const;

  private:
    std::vector<double> phases_;
};

/// d-point DFT, entry (k, j) = e^{+2 pi i jk/d} / sqrt(d); the inverse flag
/// flips the sign (conjugate transpose).
UnitaryOp dft(std::size_t d, bool inverse = false);

DiagonalUnitary diagonal_unitary(std::span<const double> phases);

/// diag(e^{2 pi i k/d}), the qudit Pauli-Z.
DiagonalUnitary generalized_z(std::size_t d);

/// Diagonal powers multiply phases by x modulo 2*pi (binary doubling keeps
/// the reduction error at O(log x) ulps).
DiagonalUnitary unitary_power(const DiagonalUnitary& u, std::uint64_t x);

/// Exponentiation by squaring; u^0 = I.
UnitaryOp unitary_power(const UnitaryOp& u, std::uint64_t x);

/// Multi-value controlled gate sum_j |j><j| (x) U^j on a (control, target)
/// register of dimension d_control * u.dim(). Each U^j is formed directly,
/// not by cascading U.
UnitaryOp mvcg(const UnitaryOp& u, std::size_t d_control);

/// Diagonal fast path for mvcg; each block is diag(e^{i j phi_k}).
UnitaryOp mvcg(const DiagonalUnitary& u, std::size_t d_control);

/// Qudit feedback rotation diag(e^{i j theta}). Applied after the MVCG it
/// shifts every kickback phase phi to phi + theta.
DiagonalUnitary phase_rotation(double theta, std::size_t d);

}  // namespace quditpea
