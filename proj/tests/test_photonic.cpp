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

#include "quditpea/bessel.hpp"
#include "quditpea/pea.hpp"
#include "quditpea/photonic.hpp"
#include "test_util.hpp"

using namespace quditpea;

namespace {

const std::vector<double> kU1{0.0, 2 * kPi / 3, 4 * kPi / 3};
const std::vector<double> kU2{0.0, 0.351 * kPi, 1.045 * kPi};
// Root of J0(m) = J2(m), from an independent root finder.
constexpr double kRootOracle = 1.8411837813406593;

EomDrive root_drive() { return {equalizing_modulation_index(3), 27.0, 0.0}; }

}  // namespace

TEST_CASE("geometry: defaults and derived layout") {
    const PhotonicGeometry g;
    CHECK(validate_geometry(g).empty());
    CHECK(g.sideband_step() == 2);
    CHECK(g.center_level() == 1);
    CHECK(g.site_of_level(0) == -2);
    CHECK(g.site_of_level(1) == 0);
    CHECK(g.site_of_level(2) == 2);
    CHECK(std::abs(g.bin_spacing_freq * g.daughter_spacing - 48.6) < 1e-12);
}

TEST_CASE("geometry: violations") {
    PhotonicGeometry fourier;
    fourier.daughter_spacing = 0.01;
    auto v = validate_geometry(fourier);
    REQUIRE(v.size() == 1);
    CHECK(v[0].invariant == "Fourier limit");
    CHECK(v[0].detail.find("0.54") != std::string::npos);

    PhotonicGeometry wide;
    wide.d = 8;
    v = validate_geometry(wide);
    REQUIRE(v.size() == 1);
    CHECK(v[0].invariant == "daughter-bin containment");
    CHECK(v[0].detail.find("6.3") != std::string::npos);

    PhotonicGeometry odd;
    odd.mix_drive_freq = 25.0;
    v = validate_geometry(odd);
    REQUIRE(v.size() == 1);
    CHECK(v[0].invariant == "sideband commensurability");

    PhotonicGeometry negative;
    negative.dispersion = -2.0;
    CHECK_FALSE(validate_geometry(negative).empty());
    CHECK_THROWS_AS(eom_operator(root_drive(), 24, negative), GeometryError);
}

TEST_CASE("eom: zero drive is the identity") {
    const auto op = eom_operator({0.0, 27.0, 0.0}, 24);
    CHECK(op.matrix().max_deviation(UnitaryOp::identity(49)) < 1e-15);
}

TEST_CASE("eom: entries into the centre are balanced near 1.843 rad") {
    const auto op = eom_operator({1.843, 27.0, 0.0}, 24);
    const double a = std::abs(op.entry(-2, 0));
    const double b = std::abs(op.entry(0, 0));
    const double c = std::abs(op.entry(2, 0));
    CHECK(std::abs(a - b) / b < 0.01);
    CHECK(std::abs(c - b) / b < 0.01);
    // Entry m -> m+k is J_k.
    CHECK(std::abs(op.entry(3, 4) - bessel_j(1, 1.843)) < 1e-15);
    CHECK(std::abs(op.entry(4, 3) - bessel_j(-1, 1.843)) < 1e-15);
}

TEST_CASE("eom: truncation keeps computational columns") {
    const auto drive = root_drive();
    const auto op = eom_operator(drive, 24);
    for (int site : {-2, 0, 2}) CHECK(op.column_norm_squared(site) >= 1.0 - 1e-6);
    for (int k = 20; k <= 30; ++k) CHECK(truncation_leakage(drive, k) < kLeakageBound);
    CHECK_THROWS_WITH_AS(eom_operator(drive, 4), doctest::Contains("leakage bound"), std::invalid_argument);
    CHECK_THROWS(eom_operator(drive, 1));
    CHECK_THROWS(eom_operator({-1.0, 27.0, 0.0}, 24));
}

TEST_CASE("equalizing_modulation_index: root properties") {
    const double m = equalizing_modulation_index(3);
    CHECK(std::abs(m - kRootOracle) < 1e-9);
    CHECK(std::abs(bessel_j(0, m) - bessel_j(2, m)) < 1e-8);
    CHECK(std::abs(bessel_j(0, m) * bessel_j(0, m) - 0.09987) < 1e-4);
    CHECK_THROWS_AS(equalizing_modulation_index(4), std::domain_error);
    CHECK_THROWS_AS(equalizing_modulation_index(3, 7), std::domain_error);
}

TEST_CASE("projection_probability: examples") {
    const auto drive = root_drive();
    const PhotonicGeometry g;
    const double j0 = bessel_j(0, drive.modulation_index);
    const double j2 = bessel_j(2, drive.modulation_index);
    const std::vector<double> zero{0, 0, 0};
    const double p0 = projection_probability(zero, 0, g, drive);
    CHECK(std::abs(p0 - (j2 + j0 + j2) * (j2 + j0 + j2) / 3) < 1e-12);
    CHECK(std::abs(p0 - 0.2996) < 1e-3);
    CHECK(projection_probability(kU1, 0, g, drive) < 1e-8);
    CHECK(std::abs(projection_probability(kU1, 1, g, drive) - p0) < 1e-12);
    CHECK_THROWS(projection_probability(kU1, 3, g, drive));
    CHECK_THROWS(projection_probability(std::vector<double>{0, 0}, 0, g, drive));
}

TEST_CASE("projection_probability: pulse shaper and RF delay realizations agree") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    const PhotonicGeometry g;
    for (double m : {1.2, 1.843, equalizing_modulation_index(3), 2.4}) {
        const EomDrive drive{m, 27.0, 0.0};
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> ph{u(rng), u(rng), u(rng)};
            for (std::size_t n = 0; n < 3; ++n) {
                const double a = projection_probability(ph, n, g, drive, ProjectionRealization::PulseShaper);
                const double b = projection_probability(ph, n, g, drive, ProjectionRealization::RfDelay);
                CHECK(std::abs(a - b) < 1e-12);
            }
        }
    }
    CHECK(std::abs(rf_delay_for_setting(1, g) - kPi / 3) < 1e-15);
}

TEST_CASE("photonic pipeline reproduces the ideal distribution") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    const PhotonicGeometry g;
    const auto drive = root_drive();
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> ph{u(rng), u(rng), u(rng)};
        if (trial == 0) ph = kU2;
        const auto probs = detection_probabilities(ph, g, drive);
        REQUIRE(probs.size() == 3);
        for (std::size_t tau = 0; tau < 3; ++tau) {
            double total = 0.0;
            for (double p : probs[tau]) total += p;
            for (std::size_t n = 0; n < 3; ++n) {
                CHECK(std::abs(probs[tau][n] / total - collapse_probability(n, ph[tau], 3)) < 1e-9);
            }
        }
    }
}

TEST_CASE("mvcg_phase_mask: examples") {
    const PhotonicGeometry g;
    const auto m1 = mvcg_phase_mask(kU1, g);
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t tau = 0; tau < 3; ++tau) {
            CHECK(std::abs(m1.slot(j, tau) - wrap_phase(kTwoPi * j * tau / 3)) < 1e-12);
        }
    }
    const auto m0 = mvcg_phase_mask(std::vector<double>{0, 0, 0}, g);
    for (const auto& s : m0.segments()) CHECK(s.phase == 0.0);
    const auto m2 = mvcg_phase_mask(kU2, g);
    CHECK(std::abs(m2.slot(2, 2) - 0.09 * kPi) < 1e-12);
    CHECK(std::abs(m2.slot_center(2, 1) - 7.8) < 1e-12);
    CHECK(std::abs(m2.phase_at(7.8 + 0.3) - m2.slot(2, 1)) < 1e-15);
    CHECK(m2.phase_at(4.0) == 0.0);
    CHECK(m2.segments().size() == 9);

    PhotonicGeometry bad;
    bad.d = 8;
    CHECK_THROWS_AS(mvcg_phase_mask(std::vector<double>(8, 0.0), bad), GeometryError);
    CHECK_THROWS(mvcg_phase_mask(std::vector<double>{0, 0}, g));
}

TEST_CASE("mvcg_phase_mask: induced operator equals the controlled gate") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    const PhotonicGeometry g;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> ph{u(rng), u(rng), u(rng)};
        const auto mask = mvcg_phase_mask(ph, g);
        CHECK(mask.induced_operator().max_deviation(mvcg(diagonal_unitary(ph), 3)) < 1e-12);
        for (std::size_t tau = 0; tau < 3; ++tau) {
            const auto k = kickback_phases(mask, tau);
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(std::abs(std::polar(1.0, k[j]) - std::polar(1.0, j * ph[tau])) < 1e-12);
            }
        }
    }
}

TEST_CASE("simulate_counts: examples") {
    const PhotonicGeometry g;
    const auto drive = root_drive();
    const auto t1 = simulate_counts(kU1, g, drive, DetectorModel{}, 1);
    REQUIRE(t1.counts.size() == 3);
    CHECK(t1.d == 3);
    CHECK(t1.seed == 1);
    for (std::size_t tau = 0; tau < 3; ++tau) {
        std::uint64_t row = 0;
        for (auto c : t1.counts[tau]) row += c;
        CHECK(row > 0);
        CHECK(static_cast<double>(t1.counts[tau][tau]) >= 0.97 * static_cast<double>(row));
    }

    const auto zero = simulate_counts(kU2, g, drive, DetectorModel{0.0, 1.0, 0.0}, 1);
    for (const auto& row : zero.counts)
        for (auto c : row) CHECK(c == 0);

    // About 3e4 detected photons per eigenstate row.
    const double per_row = 3e4 / (3 * bessel_j(0, drive.modulation_index) * bessel_j(0, drive.modulation_index));
    const auto t2 = simulate_counts(kU2, g, drive, DetectorModel{per_row, 1.0, 0.0}, 2);
    for (std::size_t tau = 0; tau < 3; ++tau) {
        double total = 0.0;
        for (auto c : t2.counts[tau]) total += static_cast<double>(c);
        CHECK(std::abs(total - 3e4) < 5 * std::sqrt(3e4));
        for (std::size_t n = 0; n < 3; ++n) {
            const double p = collapse_probability(n, kU2[tau], 3);
            const double e = static_cast<double>(t2.counts[tau][n]) / total;
            CHECK(std::abs(e - p) <= 3 * std::sqrt(p * (1 - p) / total) + 1e-12);
        }
    }
    CHECK_THROWS(simulate_counts(kU2, g, drive, DetectorModel{-1.0, 1.0, 0.0}, 1));
}

TEST_CASE("simulate_counts: dark counts add a floor") {
    const auto t = simulate_counts(kU1, PhotonicGeometry{}, root_drive(), DetectorModel{0.0, 1.0, 1e4}, 3);
    for (const auto& row : t.counts)
        for (auto c : row) CHECK(std::abs(static_cast<double>(c) - 1e4) < 600);
}

TEST_CASE("simulate_counts: seed determinism") {
    const auto drive = root_drive();
    const auto a = simulate_counts(kU2, PhotonicGeometry{}, drive, DetectorModel{}, 7);
    const auto b = simulate_counts(kU2, PhotonicGeometry{}, drive, DetectorModel{}, 7);
    const auto c = simulate_counts(kU2, PhotonicGeometry{}, drive, DetectorModel{}, 8);
    CHECK(a.counts == b.counts);
    CHECK(a.counts != c.counts);
}

TEST_CASE("simulate_counts: Poisson means") {
    const PhotonicGeometry g;
    const auto drive = root_drive();
    const DetectorModel det{2000.0, 1.0, 0.0};
    const auto probs = detection_probabilities(kU2, g, drive);
    constexpr int kSeeds = 500;
    std::vector<std::vector<double>> sum(3, std::vector<double>(3, 0.0));
    for (int s = 0; s < kSeeds; ++s) {
        const auto t = simulate_counts(kU2, g, drive, det, 1000 + s);
        for (std::size_t tau = 0; tau < 3; ++tau)
            for (std::size_t n = 0; n < 3; ++n) sum[tau][n] += static_cast<double>(t.counts[tau][n]);
    }
    for (std::size_t tau = 0; tau < 3; ++tau) {
        for (std::size_t n = 0; n < 3; ++n) {
            const double mean = det.flux * probs[tau][n];
            const double sigma = std::sqrt(mean);
            CAPTURE(tau);
            CAPTURE(n);
            CHECK(std::abs(sum[tau][n] / kSeeds - mean) <= 5 * sigma / std::sqrt(double(kSeeds)) + 1e-12);
        }
    }
}
