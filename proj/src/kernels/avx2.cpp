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

// AVX2 + FMA kernels. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after the dispatcher has checked the CPU.

#include <immintrin.h>

#include <cmath>

#include "quditpea/kernels.hpp"

namespace quditpea::kernels::avx2 {
namespace {

// (a + ib) * x for a packed pair of complex numbers x.
inline __m256d cmul_broadcast(__m256d re, __m256d im, __m256d x) {
    const __m256d x_swap = _mm256_permute_pd(x, 0b0101);
    return _mm256_fmaddsub_pd(re, x, _mm256_mul_pd(im, x_swap));
}

// Lane-wise complex product of two packed pairs.
inline __m256d cmul(__m256d m, __m256d x) {
    const __m256d m_re = _mm256_movedup_pd(m);
    const __m256d m_im = _mm256_permute_pd(m, 0b1111);
    return cmul_broadcast(m_re, m_im, x);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void apply_strided(const cplx* mat, std::size_t dim, const cplx* in, cplx* out,
                   std::size_t outer, std::size_t inner) {
    const auto* m = reinterpret_cast<const double*>(mat);
    if (inner >= 2) {
        // Vectorize along the contiguous inner index, two amplitudes per register.
        for (std::size_t o = 0; o < outer; ++o) {
            const auto* x = reinterpret_cast<const double*>(in + o * dim * inner);
            auto* y = reinterpret_cast<double*>(out + o * dim * inner);
            for (std::size_t k = 0; k < dim; ++k) {
                std::size_t i = 0;
                for (; i + 2 <= inner; i += 2) {
                    __m256d acc = _mm256_setzero_pd();
                    for (std::size_t j = 0; j < dim; ++j) {
                        const __m256d re = _mm256_set1_pd(m[2 * (k * dim + j)]);
                        const __m256d im = _mm256_set1_pd(m[2 * (k * dim + j) + 1]);
                        const __m256d v = _mm256_loadu_pd(x + 2 * (j * inner + i));
                        acc = _mm256_add_pd(acc, cmul_broadcast(re, im, v));
                    }
                    _mm256_storeu_pd(y + 2 * (k * inner + i), acc);
                }
                for (; i < inner; ++i) {
                    double re = 0.0, im = 0.0;
                    for (std::size_t j = 0; j < dim; ++j) {
                        const double mr = m[2 * (k * dim + j)];
                        const double mi = m[2 * (k * dim + j) + 1];
                        const double vr = x[2 * (j * inner + i)];
                        const double vi = x[2 * (j * inner + i) + 1];
                        re += mr * vr - mi * vi;
                        im += mr * vi + mi * vr;
                    }
                    y[2 * (k * inner + i)] = re;
                    y[2 * (k * inner + i) + 1] = im;
                }
            }
        }
        return;
    }

    // inner == 1: each output is a row dot product; vectorize along the row.
    for (std::size_t o = 0; o < outer; ++o) {
        const auto* x = reinterpret_cast<const double*>(in + o * dim);
        auto* y = reinterpret_cast<double*>(out + o * dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const double* row = m + 2 * k * dim;
            __m256d acc = _mm256_setzero_pd();
            std::size_t j = 0;
            for (; j + 2 <= dim; j += 2) {
                acc = _mm256_add_pd(acc, cmul(_mm256_loadu_pd(row + 2 * j),
                                              _mm256_loadu_pd(x + 2 * j)));
            }
            alignas(32) double lanes[4];
            _mm256_store_pd(lanes, acc);
            double re = lanes[0] + lanes[2];
            double im = lanes[1] + lanes[3];
            for (; j < dim; ++j) {
                re += row[2 * j] * x[2 * j] - row[2 * j + 1] * x[2 * j + 1];
                im += row[2 * j] * x[2 * j + 1] + row[2 * j + 1] * x[2 * j];
            }
            y[2 * k] = re;
            y[2 * k + 1] = im;
        }
    }
}

double norm_squared(const cplx* v, std::size_t n) {
    const auto* p = reinterpret_cast<const double*>(v);
    const std::size_t count = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d x = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(x, x, acc);
    }
    double total = hsum(acc);
    for (; i < count; ++i) total += p[i] * p[i];
    return total;
}

void mse_grid(const double* target, std::size_t d, const double* cos_grid,
              const double* sin_grid, double* out, std::size_t n) {
    const double inv_d2 = 1.0 / static_cast<double>(d * d);
    const __m256d inv_d2_v = _mm256_set1_pd(inv_d2);
    const __m256d one = _mm256_set1_pd(1.0);

    std::size_t g = 0;
    for (; g + 4 <= n; g += 4) {
        const __m256d c = _mm256_loadu_pd(cos_grid + g);
        const __m256d s = _mm256_loadu_pd(sin_grid + g);
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t level = 0; level < d; ++level) {
            const double arg = -2.0 * M_PI * static_cast<double>(level) / static_cast<double>(d);
            const __m256d wr = _mm256_set1_pd(std::cos(arg));
            const __m256d wi = _mm256_set1_pd(std::sin(arg));
            const __m256d ur = _mm256_fmsub_pd(c, wr, _mm256_mul_pd(s, wi));
            const __m256d ui = _mm256_fmadd_pd(c, wi, _mm256_mul_pd(s, wr));
            __m256d pr = one;
            __m256d pi = _mm256_setzero_pd();
            __m256d sr = _mm256_setzero_pd();
            __m256d si = _mm256_setzero_pd();
            for (std::size_t j = 0; j < d; ++j) {
                sr = _mm256_add_pd(sr, pr);
                si = _mm256_add_pd(si, pi);
                const __m256d nr = _mm256_fmsub_pd(pr, ur, _mm256_mul_pd(pi, ui));
                pi = _mm256_fmadd_pd(pr, ui, _mm256_mul_pd(pi, ur));
                pr = nr;
            }
            const __m256d mag = _mm256_fmadd_pd(sr, sr, _mm256_mul_pd(si, si));
            const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(target[level]),
                                               _mm256_mul_pd(mag, inv_d2_v));
            acc = _mm256_fmadd_pd(diff, diff, acc);
        }
        _mm256_storeu_pd(out + g, acc);
    }
    if (g < n) {
        scalar::mse_grid(target, d, cos_grid + g, sin_grid + g, out + g, n - g);
    }
}

}  // namespace quditpea::kernels::avx2
