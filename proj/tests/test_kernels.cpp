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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "quditpea/kernels.hpp"
#include "test_util.hpp"

using namespace quditpea;
namespace k = quditpea::kernels;

namespace {

bool have_avx2() { return k::detected_isa() == k::Isa::Avx2; }

}  // namespace

TEST_CASE("kernels: isa names and dispatch") {
    CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
    CHECK(k::isa_name(k::Isa::Avx2) == "avx2");
    const auto original = k::active_isa();
    k::force_isa(k::Isa::Scalar);
    CHECK(k::active_isa() == k::Isa::Scalar);
    if (have_avx2()) {
        k::force_isa(k::Isa::Avx2);
        CHECK(k::active_isa() == k::Isa::Avx2);
    } else {
        CHECK_THROWS(k::force_isa(k::Isa::Avx2));
    }
    k::force_isa(original);
}

TEST_CASE("kernels: apply_strided scalar matches avx2") {
    if (!have_avx2()) return;
    std::mt19937_64 rng(11);
    for (std::size_t dim : {2, 3, 4, 5, 8, 9, 16}) {
        for (std::size_t outer : {1, 2, 3}) {
            for (std::size_t inner : {1, 2, 3, 5, 8}) {
                const auto mat = testing::random_vector(rng, dim * dim);
                const auto in = testing::random_vector(rng, outer * dim * inner);
                std::vector<cplx> a(in.size()), b(in.size());
                k::scalar::apply_strided(mat.data(), dim, in.data(), a.data(), outer, inner);
                k::avx2::apply_strided(mat.data(), dim, in.data(), b.data(), outer, inner);
                CHECK(testing::max_abs_diff(a, b) < 1e-12);
            }
        }
    }
}

TEST_CASE("kernels: apply_strided computes the matrix action") {
    // 2x2 on the middle subsystem of [2,2,2]: check against explicit index arithmetic.
    std::mt19937_64 rng(5);
    const auto mat = testing::random_vector(rng, 4);
    const auto in = testing::random_vector(rng, 8);
    std::vector<cplx> out(8);
    k::apply_strided(mat, 2, in, out, 2, 2);
    for (std::size_t o = 0; o < 2; ++o) {
        for (std::size_t r = 0; r < 2; ++r) {
            for (std::size_t i = 0; i < 2; ++i) {
                cplx expect = mat[r * 2 + 0] * in[o * 4 + 0 * 2 + i] + mat[r * 2 + 1] * in[o * 4 + 1 * 2 + i];
                CHECK(std::abs(out[o * 4 + r * 2 + i] - expect) < 1e-14);
            }
        }
    }
}

TEST_CASE("kernels: norm_squared scalar matches avx2") {
    std::mt19937_64 rng(3);
    for (std::size_t n : {0, 1, 2, 3, 7, 8, 9, 31, 100, 1001}) {
        const auto v = testing::random_vector(rng, n);
        double ref = 0.0;
        for (auto z : v) ref += std::norm(z);
        CHECK(std::abs(k::scalar::norm_squared(v.data(), n) - ref) <= 1e-12 * (1.0 + ref));
        if (have_avx2()) {
            CHECK(std::abs(k::avx2::norm_squared(v.data(), n) - ref) <= 1e-12 * (1.0 + ref));
        }
    }
}

TEST_CASE("kernels: mse_grid scalar matches avx2 and direct evaluation") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t d : {2, 3, 5, 8}) {
        for (std::size_t n : {1, 3, 4, 17, 1000}) {
            std::vector<double> target(d);
            double s = 0.0;
            for (auto& t : target) s += (t = u(rng));
            for (auto& t : target) t /= s;
            std::vector<double> c(n), sn(n), phis(n);
            for (std::size_t i = 0; i < n; ++i) {
                phis[i] = kTwoPi * u(rng);
                c[i] = std::cos(phis[i]);
                sn[i] = std::sin(phis[i]);
            }
            std::vector<double> a(n), b(n);
            k::scalar::mse_grid(target.data(), d, c.data(), sn.data(), a.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                double ref = 0.0;
                for (std::size_t m = 0; m < d; ++m) {
                    cplx acc{};
                    for (std::size_t j = 0; j < d; ++j) {
                        acc += std::polar(1.0, static_cast<double>(j) * (phis[i] - kTwoPi * m / d));
                    }
                    const double p = std::norm(acc) / static_cast<double>(d * d);
                    ref += (target[m] - p) * (target[m] - p);
                }
                CHECK(std::abs(a[i] - ref) < 1e-12);
            }
            if (have_avx2()) {
                k::avx2::mse_grid(target.data(), d, c.data(), sn.data(), b.data(), n);
                CHECK(testing::max_abs_diff(a, b) < 1e-12);
            }
        }
    }
}
