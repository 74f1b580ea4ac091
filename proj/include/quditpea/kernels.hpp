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

/// \file kernels.hpp
/// \brief Data-parallel inner loops with a scalar reference implementation
/// and an AVX2/FMA variant chosen at runtime.
///
/// The scalar namespace is the reference; SIMD variants must agree with it
/// to within a few ulps of the accumulated magnitude (tests/test_kernels.cpp).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace quditpea::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Best instruction set this binary was built with and the CPU supports.
Isa detected_isa();

/// ISA currently used by the dispatching entry points.
Isa active_isa();

/// Overrides dispatch; throws std::invalid_argument when the ISA is
/// unavailable. Intended for tests and benchmarks.
void force_isa(Isa isa);

/// Batched small dense matvec over a register viewed as [outer][dim][inner]:
///   out[o][k][i] = sum_j mat[k][j] * in[o][j][i]
/// `mat` is dim x dim row-major. `in` and `out` must not alias.
void apply_strided(std::span<const cplx> mat, std::size_t dim, std::span<const cplx> in,
                   std::span<cplx> out, std::size_t outer, std::size_t inner);

/// sum_k |v_k|^2
double norm_squared(std::span<const cplx> v);

/// Least-squares objective on a phase grid. For every grid point g with
/// unit phasor z_g = cos_g + i sin_g,
///   out[g] = sum_n (target[n] - |sum_{j<d} (z_g w_n)^j|^2 / d^2)^2
/// with d = target.size() and w_n = exp(-2 pi i n / d).
void mse_grid(std::span<const double> target, std::span<const double> cos_grid,
              std::span<const double> sin_grid, std::span<double> out);

namespace scalar {
void apply_strided(const cplx* mat, std::size_t dim, const cplx* in, cplx* out,
                   std::size_t outer, std::size_t inner);
double norm_squared(const cplx* v, std::size_t n);
void mse_grid(const double* target, std::size_t d, const double* cos_grid,
              const double* sin_grid, double* out, std::size_t n);
}  // namespace scalar

namespace avx2 {
void apply_strided(const cplx* mat, std::size_t dim, const cplx* in, cplx* out,
                   std::size_t outer, std::size_t inner);
double norm_squared(const cplx* v, std::size_t n);
void mse_grid(const double* target, std::size_t d, const double* cos_grid,
              const double* sin_grid, double* out, std::size_t n);
}  // namespace avx2

}  // namespace quditpea::kernels
