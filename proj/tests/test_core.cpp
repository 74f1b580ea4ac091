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

#include "quditpea/gates.hpp"
#include "quditpea/pea.hpp"
#include "test_util.hpp"

using namespace quditpea;

TEST_CASE("tensor: examples") {
    const auto e0 = tensor(QuditState::basis(3, 0), QuditState::basis(3, 0));
    CHECK(e0.dims() == std::vector<std::size_t>{3, 3});
    REQUIRE(e0.size() == 9);
    CHECK(e0[0] == cplx(1.0));
    for (std::size_t i = 1; i < 9; ++i) CHECK(e0[i] == cplx(0.0));

    for (std::size_t tau = 0; tau < 3; ++tau) {
        const auto s = tensor(QuditState::uniform(3), QuditState::basis(3, tau));
        for (std::size_t i = 0; i < 9; ++i) {
            const double expect = (i % 3 == tau) ? 1.0 / std::sqrt(3.0) : 0.0;
            CHECK(std::abs(s[i] - expect) < 1e-15);
        }
        CHECK(s.is_normalized());
    }

    const double h = 1.0 / std::sqrt(2.0);
    const QuditState plus({2}, {h, h});
    const QuditState minus({2}, {h, -h});
    const auto pm = tensor(plus, minus);
    const double expect[] = {0.5, -0.5, 0.5, -0.5};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(pm[i] - expect[i]) < 1e-15);
}

TEST_CASE("tensor: associativity is exact") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = testing::random_state(rng, {2});
        const auto b = testing::random_state(rng, {3});
        const auto c = testing::random_state(rng, {4});
        const auto left = tensor(tensor(a, b), c);
        const auto right = tensor(a, tensor(b, c));
        CHECK(left.dims() == right.dims());
        CHECK(testing::max_abs_diff(left.amplitudes(), right.amplitudes()) < 1e-15);
    }
    // Integer amplitudes make every product exact, so index order can be compared bit for bit.
    std::uniform_int_distribution<int> small(-8, 8);
    auto ints = [&](std::size_t d) {
        std::vector<cplx> v(d);
        for (auto& z : v) z = {double(small(rng)), double(small(rng))};
        return QuditState({d}, v);
    };
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = ints(2), b = ints(3), c = ints(5);
        CHECK(tensor(tensor(a, b), c).amplitudes() == tensor(a, tensor(b, c)).amplitudes());
    }
}

TEST_CASE("state construction errors") {
    CHECK_THROWS_AS(QuditState({3}, {1.0, 0.0}), DimensionError);
    CHECK_THROWS_AS(QuditState({}, {}), DimensionError);
    CHECK_THROWS_AS(QuditState::basis(3, 3), DimensionError);
    CHECK_THROWS_AS(UnitaryOp(2, {1.0}), DimensionError);
}

TEST_CASE("apply: examples") {
    std::mt19937_64 rng(2);
    const auto s = testing::random_state(rng, {3, 2});
    CHECK(apply(UnitaryOp::identity(3), s, 0).amplitudes() == s.amplitudes());

    const auto f = apply(dft(3), QuditState::basis(3, 0), 0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(f[i] - 1.0 / std::sqrt(3.0)) < 1e-15);

    const auto u1 = generalized_z(3).to_op();
    const auto k = apply(u1, QuditState::basis(3, 1), 0);
    CHECK(std::abs(k[1] - std::polar(1.0, kTwoPi / 3.0)) < 1e-15);
    CHECK(std::abs(k[0]) == 0.0);
    CHECK(std::abs(k[2]) == 0.0);
}

TEST_CASE("apply: dimension mismatch names dims") {
    const auto s = QuditState::basis(std::vector<std::size_t>{3, 2}, 0);
    try {
        (void)apply(UnitaryOp::identity(3), s, 1);
        FAIL("expected DimensionError");
    } catch (const DimensionError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("3") != std::string::npos);
        CHECK(msg.find("expected 2") != std::string::npos);
    }
    CHECK_THROWS_AS((void)apply(UnitaryOp::identity(2), s, 2), DimensionError);
    CHECK_THROWS_AS((void)apply(UnitaryOp::identity(3), s), DimensionError);
}

TEST_CASE("apply: norm preservation over random unitaries") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(2, 6);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t da = pick(rng), db = pick(rng);
        const auto s = testing::random_state(rng, {da, db});
        const std::size_t sub = trial % 2;
        const auto u = testing::random_unitary(rng, sub == 0 ? da : db);
        REQUIRE(check_unitary(u).pass);
        CHECK(std::abs(apply(u, s, sub).norm_squared() - 1.0) < 1e-12);
    }
}

TEST_CASE("apply: subsystem 0 of a product state factorizes") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = testing::random_state(rng, {3});
        const auto b = testing::random_state(rng, {4});
        const auto u = testing::random_unitary(rng, 3);
        const auto lhs = apply(u, tensor(a, b), 0);
        const auto rhs = tensor(apply(u, a, 0), b);
        CHECK(testing::max_abs_diff(lhs.amplitudes(), rhs.amplitudes()) < 1e-12);
    }
}

TEST_CASE("probabilities: examples") {
    const auto p2 = probabilities(QuditState::basis(3, 2), 0);
    CHECK(p2.probs() == std::vector<double>{0.0, 0.0, 1.0});

    const auto pu = probabilities(QuditState::uniform(3), 0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(pu[i] - 1.0 / 3.0) < 1e-15);

    // Control marginal after DFT, kickback at 0.351 pi on |1>_t, inverse DFT.
    const auto u2 = diagonal_unitary(std::vector<double>{0.0, 0.351 * kPi, 1.045 * kPi});
    auto s = tensor(QuditState::basis(3, 0), QuditState::basis(3, 1));
    s = apply(dft(3), s, 0);
    s = apply(mvcg(u2, 3), s);
    s = apply(dft(3, true), s, 0);
    const auto p = probabilities(s, 0);
    CHECK(std::abs(p[0] - 0.402116) < 1e-6);
    CHECK(std::abs(p[1] - 0.487456) < 1e-6);
    CHECK(std::abs(p[2] - 0.110428) < 1e-6);
    // Target marginal is untouched: all weight on |1>_t.
    CHECK(std::abs(probabilities(s, 1)[1] - 1.0) < 1e-12);
}

TEST_CASE("probabilities: rejects unnormalized input") {
    CHECK_THROWS_AS((void)probabilities(QuditState({2}, {1.0, 1.0}), 0), std::invalid_argument);
    CHECK_THROWS_AS(ProbVector({0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(ProbVector({1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("check_unitary: examples") {
    const auto id = check_unitary(UnitaryOp::identity(3));
    CHECK(id.pass);
    CHECK(id.max_deviation == 0.0);
    CHECK(check_unitary(dft(3)).pass);
    const auto ones = check_unitary(UnitaryOp(3, std::vector<cplx>(9, 1.0)));
    CHECK_FALSE(ones.pass);
    CHECK(ones.max_deviation > 1.0);
}

TEST_CASE("wrap_phase reduces into [0, 2pi)") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(std::abs(wrap_phase(-kPi / 2) - 1.5 * kPi) < 1e-15);
    CHECK(std::abs(wrap_phase(5 * kPi) - kPi) < 1e-14);
    CHECK(wrap_phase(kTwoPi) == 0.0);
    CHECK(wrap_phase(-1e-300) < kTwoPi);
}
