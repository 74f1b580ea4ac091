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

// Reference kernels. Complex products are spelled out in real arithmetic so
// the SIMD variants can mirror the same operation order.

#include <cmath>

#include "quditpea/kernels.hpp"

namespace quditpea::kernels::scalar {

void apply_strided(const cplx* mat, std::size_t dim, const cplx* in, cplx* out,
                   std::size_t outer, std::size_t inner) {
    for (std::size_t o = 0; o < outer; ++o) {
        const cplx* x = in + o * dim * inner;
        cplx* y = out + o * dim * inner;
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t i = 0; i < inner; ++i) {
                double re = 0.0;
                double im = 0.0;
                for (std::size_t j = 0; j < dim; ++j) {
                    const cplx m = mat[k * dim + j];
                    const cplx v = x[j * inner + i];
                    re += m.real() * v.real() - m.imag() * v.imag();
                    im += m.real() * v.imag() + m.imag() * v.real();
                }
                y[k * inner + i] = {re, im};
            }
        }
    }
}

double norm_squared(const cplx* v, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
    }
    return acc;
}

void mse_grid(const double* target, std::size_t d, const double* cos_grid,
              const double* sin_grid, double* out, std::size_t n) {
    const double inv_d2 = 1.0 / static_cast<double>(d * d);
    for (std::size_t g = 0; g < n; ++g) {
        double acc = 0.0;
        for (std::size_t level = 0; level < d; ++level) {
            const double arg = -2.0 * M_PI * static_cast<double>(level) / static_cast<double>(d);
            const double wr = std::cos(arg);
            const double wi = std::sin(arg);
            const double ur = cos_grid[g] * wr - sin_grid[g] * wi;
            const double ui = cos_grid[g] * wi + sin_grid[g] * wr;
            double pr = 1.0, pi = 0.0;
            double sr = 0.0, si = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                sr += pr;
                si += pi;
                const double nr = pr * ur - pi * ui;
                pi = pr * ui + pi * ur;
                pr = nr;
            }
            const double diff = target[level] - (sr * sr + si * si) * inv_d2;
            acc += diff * diff;
        }
        out[g] = acc;
    }
}

}  // namespace quditpea::kernels::scalar
