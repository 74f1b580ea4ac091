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

/// \file core.hpp
/// \brief Dense state-vector and operator algebra for small composite qudit
/// registers.
///
/// Basis ordering follows the register listing: the first subsystem is the
/// most significant digit, so for a control qudit of dimension d_c and a
/// target of dimension d_t the joint index is j * d_t + tau.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quditpea {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Tolerance for "this vector is normalized".
inline constexpr double kNormTolerance = 1e-12;
/// Tolerance for check_unitary.
inline constexpr double kUnitaryTolerance = 1e-10;

/// Raised on dimension mismatches and other precondition failures.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Reduces an angle to [0, 2*pi).
double wrap_phase(double radians);

/// Complex amplitude vector over a composite register.
class QuditState {
  public:
    QuditState(std::vector<std::size_t> dims, std::vector<cplx> amplitudes);

    /// |index> in a register with the given subsystem dimensions.
    static QuditState basis(std::vector<std::size_t> dims, std::size_t index);
    /// Single qudit |level> of dimension d.
    static QuditState basis(std::size_t d, std::size_t level);
    /// (1/sqrt(d)) sum_k |k>.
    static QuditState uniform(std::size_t d);

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<cplx>& amplitudes() const noexcept { return amps_; }
    std::size_t size() const noexcept { return amps_.size(); }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const;
    bool is_normalized() const;

  private:
    std::vector<std::size_t> dims_;
    std::vector<cplx> amps_;
};

/// Square complex matrix, row-major. Unitarity is not enforced on
/// construction; use check_unitary.
class UnitaryOp {
  public:
    UnitaryOp(std::size_t dim, std::vector<cplx> entries);

    static UnitaryOp identity(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<cplx>& entries() const noexcept { return entries_; }
    const cplx& operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }

    UnitaryOp adjoint() const;
    UnitaryOp operator*(const UnitaryOp& rhs) const;

    /// Largest entrywise modulus of (this - other).
    double max_deviation(const UnitaryOp& other) const;

  private:
    std::size_t dim_;
    std::vector<cplx> entries_;
};

/// Measurement distribution over basis outcomes.
class ProbVector {
  public:
    explicit ProbVector(std::vector<double> probs);

    const std::vector<double>& probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }

  private:
    std::vector<double> probs_;
};

struct UnitarityReport {
    bool pass;
    double max_deviation;
};

/// Kronecker product; dims are concatenated.
QuditState tensor(const QuditState& a, const QuditState& b);

/// (I x ... x op x ... x I)|s>, op acting on one subsystem.
QuditState apply(const UnitaryOp& op, const QuditState& s, std::size_t subsystem);

/// op|s>, op acting on the whole register.
QuditState apply(const UnitaryOp& op, const QuditState& s);

/// Marginal outcome probabilities of one subsystem. Requires a normalized
/// state.
ProbVector probabilities(const QuditState& s, std::size_t subsystem);

/// Reports max |(U^dagger U - I)_kl|; passes iff <= kUnitaryTolerance.
UnitarityReport check_unitary(const UnitaryOp& op);

}  // namespace quditpea
