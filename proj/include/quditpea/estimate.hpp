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

/// \file estimate.hpp
/// \brief Phase retrieval from projection counts, error metrics, and the
/// iterative (digit-by-digit) PEA driver.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "quditpea/photonic.hpp"

namespace quditpea {

/// One eigenstate's counts normalized over the d projection settings.
struct NormalizedCounts {
    std::vector<double> e;
    /// Zero when the row came from pre-normalized weights.
    std::uint64_t total_counts = 0;
    /// Binomial sqrt(e (1 - e) / total); empty when total_counts is 0.
    std::vector<double> std_error;

    std::size_t dim() const noexcept { return e.size(); }
};

/// Throws std::invalid_argument on an all-zero row.
NormalizedCounts normalize(std::span<const std::uint64_t> counts);
/// Same for non-negative real weights (e.g. published normalized rows).
NormalizedCounts normalize_weights(std::span<const double> weights);

struct FitResult {
    double phi_hat = 0.0;   // [0, 2 pi)
    double residual = 0.0;  // sum_n (E_n - C(n, phi_hat))^2
    std::optional<double> circular_error_fraction;
};

inline constexpr std::size_t kFitGridPoints = 10000;
inline constexpr double kFitTolerance = 1e-10;
inline constexpr std::size_t kFitCandidates = 8;

/// Least-squares phase: argmin over phi of sum_n (E_n - C(n, phi))^2.
/// Uniform grid of kFitGridPoints; golden-section down to kFitTolerance radians
/// on the cells of the kFitCandidates lowest grid minima and on both sides of
/// every digit center; the lowest refined objective wins.
FitResult mse_fit(const NormalizedCounts& counts, std::optional<double> true_phase = std::nullopt);

/// Wraparound phase error |phi - phi_hat|_circ / 2 pi, in [0, 0.5].
double circular_error(double phi, double phi_hat);

/// Diagonal counts over all counts (raw-count weighting).
double fidelity(const CountTable& table);
double fidelity(const std::vector<std::vector<std::uint64_t>>& counts);
/// Mean of the diagonal entries of per-eigenstate normalized rows.
double fidelity(std::span<const NormalizedCounts> rows);

enum class Backend { Ideal, Photonic };

struct PhotonicBackend {
    PhotonicGeometry geometry;
    EomDrive drive;
    DetectorModel detector;
};

struct IterationRecord {
    std::size_t k = 0;        // 1-based iteration
    std::uint64_t x = 0;      // d^(n-k)
    double theta = 0.0;       // feedback rotation, rad
    std::size_t measured_digit = 0;
    double running_phase = 0.0;  // 2 pi * 0.a_{n-k+1}...a_n (estimate of x * phi)
    bool tie = false;
};

struct IterativeRequest {
    std::vector<double> u_phases;
    std::size_t eigenstate = 0;
    std::size_t n_digits = 1;
    std::size_t d = 3;
    Backend backend = Backend::Ideal;
    std::uint64_t seed = 0;
    PhotonicBackend photonic;  // used by Backend::Photonic
};

struct IterativeResult {
    std::vector<IterationRecord> records;
    /// a_1 ... a_n, most significant first.
    std::vector<std::size_t> digits;
    double phase = 0.0;  // 2 pi * sum_i a_i d^-i
    bool tie = false;
};

/// Iteration k applies the MVCG of U^(d^(n-k)), the feedback rotation
/// theta_k = -sum_{i<k} phi_i / d^(k-i) with phi_i = 2 pi a_i / d (the digit
/// announced by iteration i), and one single-qudit readout. Digits come out
/// least significant first.
IterativeResult iterative_pea(const IterativeRequest& request);

/// Feedback angle for iteration k (1-based) from the digits measured so far.
double feedback_angle(std::span<const std::size_t> measured_digits, std::size_t d);

struct CurveRow {
    double phi;
    std::vector<double> probs;  // C(0..d-1, phi)
};

/// C(n, phi) sampled at `resolution` points phi_i = 2 pi i / (resolution - 1).
std::vector<CurveRow> curve_table(std::size_t d, std::size_t resolution);

}  // namespace quditpea
