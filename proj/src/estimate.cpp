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

#include "quditpea/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "quditpea/gates.hpp"
#include "quditpea/kernels.hpp"
#include "quditpea/pea.hpp"
#include "quditpea/random.hpp"

namespace quditpea {
namespace {

struct PhaseGrid {
    std::vector<double> cos;
    std::vector<double> sin;
};

const PhaseGrid& fit_grid() {
    static const PhaseGrid grid = [] {
        PhaseGrid g;
        g.cos.resize(kFitGridPoints);
        g.sin.resize(kFitGridPoints);
        for (std::size_t i = 0; i < kFitGridPoints; ++i) {
            const double phi = kTwoPi * static_cast<double>(i) / static_cast<double>(kFitGridPoints);
            g.cos[i] = std::cos(phi);
            g.sin[i] = std::sin(phi);
        }
        return g;
    }();
    return grid;
}

double objective(std::span<const double> e, double phi) {
    double acc = 0.0;
    for (std::size_t n = 0; n < e.size(); ++n) {
        const double diff = e[n] - collapse_probability(n, phi, e.size());
        acc += diff * diff;
    }
    return acc;
}

// Golden-section minimum of the objective on [a, b] to kFitTolerance.
double golden_section(std::span<const double> e, double a, double b) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(e, c);
    double fd = objective(e, d);
    while (b - a > kFitTolerance) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(e, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(e, d);
        }
    }
    return 0.5 * (a + b);
}

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

NormalizedCounts normalize(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (counts.empty() || total == 0) {
        throw std::invalid_argument("normalize: row has no counts");
    }
    NormalizedCounts out;
    out.total_counts = total;
    out.e.resize(counts.size());
    out.std_error.resize(counts.size());
    const double t = static_cast<double>(total);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out.e[i] = static_cast<double>(counts[i]) / t;
        out.std_error[i] = std::sqrt(out.e[i] * (1.0 - out.e[i]) / t);
    }
    return out;
}

NormalizedCounts normalize_weights(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw std::invalid_argument("normalize_weights: weights must be finite and >= 0");
        }
        total += w;
    }
    if (weights.empty() || total <= 0.0) throw std::invalid_argument("normalize_weights: row is zero");
    NormalizedCounts out;
    out.e.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) out.e[i] = weights[i] / total;
    return out;
}

FitResult mse_fit(const NormalizedCounts& counts, std::optional<double> true_phase) {
    const std::span<const double> e = counts.e;
    if (e.size() < 2) throw std::invalid_argument("mse_fit: need d >= 2 entries");

    const PhaseGrid& grid = fit_grid();
    std::vector<double> values(kFitGridPoints);
    kernels::mse_grid(e, grid.cos, grid.sin, values);

    const double step = kTwoPi / static_cast<double>(kFitGridPoints);
    const double dim = static_cast<double>(e.size());

    // Candidate brackets (unwrapped angles; the objective is 2 pi periodic).
    // Every digit center c is a reflection symmetry, C(n, c+x) = C(2c-n, c-x), so
    // near a center the objective has two almost equally deep wells, one per side;
    // grid resolution cannot tell them apart. Refine the lowest grid minima plus
    // one half-bracket on each side of every center and keep the best.
    std::vector<std::size_t> minima;
    for (std::size_t i = 0; i < kFitGridPoints; ++i) {
        const double left = values[(i + kFitGridPoints - 1) % kFitGridPoints];
        const double right = values[(i + 1) % kFitGridPoints];
        if (values[i] <= left && values[i] <= right) minima.push_back(i);
    }
    const std::size_t keep = std::min<std::size_t>(minima.size(), kFitCandidates);
    std::partial_sort(minima.begin(), minima.begin() + static_cast<std::ptrdiff_t>(keep), minima.end(),
                      [&](std::size_t a, std::size_t b) {
                          return values[a] < values[b] || (values[a] == values[b] && a < b);
                      });
    minima.resize(keep);

    std::vector<std::pair<double, double>> brackets;
    for (std::size_t i : minima) {
        const double center = step * static_cast<double>(i);
        brackets.emplace_back(center - step, center + step);
    }
    for (std::size_t m = 0; m < e.size(); ++m) {
        const double center = kTwoPi * static_cast<double>(m) / dim;
        brackets.emplace_back(center - step, center);
        brackets.emplace_back(center, center + step);
    }

    double phi = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    for (const auto& [lo, hi] : brackets) {
        const double x = golden_section(e, lo, hi);
        for (double candidate : {x, lo, hi}) {
            const double f = objective(e, candidate);
            if (f < residual) {
                residual = f;
                phi = candidate;
            }
        }
    }

    FitResult result;
    result.phi_hat = wrap_phase(phi);
    result.residual = residual;
    if (true_phase) result.circular_error_fraction = circular_error(*true_phase, result.phi_hat);
    return result;
}

double circular_error(double phi, double phi_hat) {
    const double delta = wrap_phase(phi - phi_hat);
    return std::min(delta, kTwoPi - delta) / kTwoPi;
}

double fidelity(const std::vector<std::vector<std::uint64_t>>& counts) {
    std::uint64_t diagonal = 0;
    std::uint64_t total = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (counts[r].size() != counts.size()) {
            throw DimensionError("fidelity: count table is not square");
        }
        for (std::size_t c = 0; c < counts[r].size(); ++c) {
            total += counts[r][c];
            if (r == c) diagonal += counts[r][c];
        }
    }
    if (total == 0) throw std::invalid_argument("fidelity: empty count table");
    return static_cast<double>(diagonal) / static_cast<double>(total);
}

double fidelity(const CountTable& table) { return fidelity(table.counts); }

double fidelity(std::span<const NormalizedCounts> rows) {
    if (rows.empty()) throw std::invalid_argument("fidelity: empty table");
    double acc = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].dim() != rows.size()) throw DimensionError("fidelity: table is not square");
        acc += rows[r].e[r];
    }
    return acc / static_cast<double>(rows.size());
}

double feedback_angle(std::span<const std::size_t> measured_digits, std::size_t d) {
    const std::size_t k = measured_digits.size() + 1;
    const double dd = static_cast<double>(d);
    double theta = 0.0;
    for (std::size_t i = 1; i < k; ++i) {
        const double phi_i = kTwoPi * static_cast<double>(measured_digits[i - 1]) / dd;
        theta -= phi_i / std::pow(dd, static_cast<double>(k - i));
    }
    return theta;
}

IterativeResult iterative_pea(const IterativeRequest& req) {
    if (req.n_digits < 1) throw std::invalid_argument("iterative_pea: n_digits must be >= 1");
    if (req.d < 2) throw DimensionError("iterative_pea: d must be >= 2");
    if (req.eigenstate >= req.u_phases.size()) {
        throw std::out_of_range("iterative_pea: eigenstate " + std::to_string(req.eigenstate) +
                                " out of range for " + std::to_string(req.u_phases.size()) +
                                " phases");
    }
    if (req.backend == Backend::Photonic && req.photonic.geometry.d != req.d) {
        throw DimensionError("iterative_pea: photonic geometry d does not match request d");
    }
    if (static_cast<double>(req.n_digits) * std::log2(static_cast<double>(req.d)) > 62.0) {
        throw std::invalid_argument("iterative_pea: d^n_digits overflows 64-bit powers");
    }

    const DiagonalUnitary u = diagonal_unitary(req.u_phases);
    const QuditState target = QuditState::basis(u.dim(), req.eigenstate);

    IterativeResult result;
    std::vector<std::size_t> measured;  // least significant first
    for (std::size_t k = 1; k <= req.n_digits; ++k) {
        IterationRecord rec;
        rec.k = k;
        rec.x = ipow(req.d, req.n_digits - k);
        rec.theta = feedback_angle(measured, req.d);
        const DiagonalUnitary ux = unitary_power(u, rec.x);
        const DiagonalUnitary rotation = phase_rotation(rec.theta, req.d);

        if (req.backend == Backend::Ideal) {
            const PeaOutcome out = run_pea(ux.to_op(), target, req.d, rotation);
            rec.measured_digit = out.readout_digit;
            rec.tie = out.tie;
        } else {
            const PhaseMask mask = mvcg_phase_mask(ux.phases(), req.photonic.geometry);
            std::vector<double> kick = kickback_phases(mask, req.eigenstate);
            // The feedback rotation is a spectral phase, folded into the pulse shaper.
            for (std::size_t j = 0; j < req.d; ++j) kick[j] = wrap_phase(kick[j] + rotation.phase(j));
            const auto counts =
                sample_projection_counts(kick, req.photonic.geometry, req.photonic.drive,
                                         req.photonic.detector, derive_seed(req.seed, k));
            std::vector<double> weights(counts.begin(), counts.end());
            const Readout r = readout(weights);
            rec.measured_digit = r.digit;
            rec.tie = r.tie;
        }
        measured.push_back(rec.measured_digit);
        result.tie = result.tie || rec.tie;

        double running = 0.0;
        for (std::size_t i = 0; i < measured.size(); ++i) {
            running += static_cast<double>(measured[i]) /
                       std::pow(static_cast<double>(req.d), static_cast<double>(measured.size() - i));
        }
        rec.running_phase = kTwoPi * running;
        result.records.push_back(rec);
    }

    result.digits.assign(measured.rbegin(), measured.rend());
    double fraction = 0.0;
    for (std::size_t i = 0; i < result.digits.size(); ++i) {
        fraction += static_cast<double>(result.digits[i]) /
                    std::pow(static_cast<double>(req.d), static_cast<double>(i + 1));
    }
    result.phase = kTwoPi * fraction;
    return result;
}

std::vector<CurveRow> curve_table(std::size_t d, std::size_t resolution) {
    if (d < 2) throw DimensionError("curve_table: d must be >= 2");
    if (resolution < 2) throw std::invalid_argument("curve_table: resolution must be >= 2");
    std::vector<CurveRow> rows;
    rows.reserve(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        const double phi = kTwoPi * static_cast<double>(i) / static_cast<double>(resolution - 1);
        rows.push_back({phi, collapse_distribution(phi, d)});
    }
    return rows;
}

}  // namespace quditpea
