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

#include <atomic>
#include <stdexcept>
#include <string>

#include "quditpea/kernels.hpp"

namespace quditpea::kernels {
namespace {

Isa probe_cpu() {
#if defined(QUDITPEA_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return Isa::Avx2;
    }
#endif
    return Isa::Scalar;
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{detected_isa()};
    return isa;
}

void require_size(std::size_t have, std::size_t need, const char* what) {
    if (have < need) {
        throw std::invalid_argument(std::string("kernel buffer too small: ") + what);
    }
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
    }
    return "unknown";
}

Isa detected_isa() {
    static const Isa isa = probe_cpu();
    return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) {
        throw std::invalid_argument("AVX2 kernels are not available on this CPU/build");
    }
    active().store(isa, std::memory_order_relaxed);
}

void apply_strided(std::span<const cplx> mat, std::size_t dim, std::span<const cplx> in,
                   std::span<cplx> out, std::size_t outer, std::size_t inner) {
    require_size(mat.size(), dim * dim, "matrix");
    require_size(in.size(), outer * dim * inner, "input");
    require_size(out.size(), outer * dim * inner, "output");
#if defined(QUDITPEA_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::Avx2) {
        avx2::apply_strided(mat.data(), dim, in.data(), out.data(), outer, inner);
        return;
    }
#endif
    scalar::apply_strided(mat.data(), dim, in.data(), out.data(), outer, inner);
}

double norm_squared(std::span<const cplx> v) {
#if defined(QUDITPEA_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::Avx2) return avx2::norm_squared(v.data(), v.size());
#endif
    return scalar::norm_squared(v.data(), v.size());
}

void mse_grid(std::span<const double> target, std::span<const double> cos_grid,
              std::span<const double> sin_grid, std::span<double> out) {
    require_size(sin_grid.size(), cos_grid.size(), "sin grid");
    require_size(out.size(), cos_grid.size(), "output");
#if defined(QUDITPEA_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::Avx2) {
        avx2::mse_grid(target.data(), target.size(), cos_grid.data(), sin_grid.data(),
                       out.data(), cos_grid.size());
        return;
    }
#endif
    scalar::mse_grid(target.data(), target.size(), cos_grid.data(), sin_grid.data(),
                     out.data(), cos_grid.size());
}

}  // namespace quditpea::kernels
