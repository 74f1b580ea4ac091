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

#include "quditpea/gates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quditpea {
namespace {

void require_dimension(std::size_t d, const char* what) {
    if (d < 2) {
        throw DimensionError(std::string(what) + ": dimension must be >= 2, got " +
                             std::to_string(d));
    }
}

// e^{i 2 pi m / d} with m reduced first, so large products stay exact.
cplx root_of_unity(std::uint64_t m, std::size_t d) {
    const double angle = kTwoPi * static_cast<double>(m % d) / static_cast<double>(d);
    return std::polar(1.0, angle);
}

}  // namespace

DiagonalUnitary::DiagonalUnitary(std::vector<double> phases) : phases_(std::move(phases)) {
    if (phases_.empty()) throw DimensionError("DiagonalUnitary needs at least one phase");
    for (auto& p : phases_) {
        if (!std::isfinite(p)) throw std::invalid_argument("DiagonalUnitary: non-finite phase");
        p = wrap_phase(p);
    }
}

UnitaryOp DiagonalUnitary::to_op() const {
    const std::size_t n = phases_.size();
    std::vector<cplx> e(n * n);
    for (std::size_t k = 0; k < n; ++k) e[k * n + k] = std::polar(1.0, phases_[k]);
    return UnitaryOp(n, std::move(e));
}

UnitaryOp dft(std::size_t d, bool inverse) {
    require_dimension(d, "dft");
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<cplx> e(d * d);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t j = 0; j < d; ++j) {
            const std::uint64_t m = static_cast<std::uint64_t>(j) * k;
            cplx w = root_of_unity(m, d);
            if (inverse) w = std::conj(w);
            e[k * d + j] = scale * w;
        }
    }
    return UnitaryOp(d, std::move(e));
}

DiagonalUnitary diagonal_unitary(std::span<const double> phases) {
    return DiagonalUnitary(std::vector<double>(phases.begin(), phases.end()));
}

DiagonalUnitary generalized_z(std::size_t d) {
    require_dimension(d, "generalized_z");
    std::vector<double> phases(d);
    for (std::size_t k = 0; k < d; ++k) {
        phases[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(d);
    }
    return DiagonalUnitary(std::move(phases));
}

DiagonalUnitary unitary_power(const DiagonalUnitary& u, std::uint64_t x) {
    std::vector<double> phases(u.dim());
    for (std::size_t k = 0; k < u.dim(); ++k) {
        double acc = 0.0;
        double base = u.phase(k);
        for (std::uint64_t e = x; e != 0; e >>= 1) {
            if (e & 1U) acc = wrap_phase(acc + base);
            base = wrap_phase(2.0 * base);
        }
        phases[k] = acc;
    }
    return DiagonalUnitary(std::move(phases));
}

UnitaryOp unitary_power(const UnitaryOp& u, std::uint64_t x) {
    UnitaryOp result = UnitaryOp::identity(u.dim());
    UnitaryOp base = u;
    for (std::uint64_t e = x; e != 0; e >>= 1) {
        if (e & 1U) result = result * base;
        if (e > 1) base = base * base;
    }
    return result;
}

UnitaryOp mvcg(const UnitaryOp& u, std::size_t d_control) {
    require_dimension(d_control, "mvcg");
    if (const auto report = check_unitary(u); !report.pass) {
        throw std::invalid_argument("mvcg: target operator is not unitary (deviation " +
                                    std::to_string(report.max_deviation) + ")");
    }
    const std::size_t t = u.dim();
    const std::size_t n = d_control * t;
    std::vector<cplx> e(n * n);
    for (std::size_t j = 0; j < d_control; ++j) {
        const UnitaryOp block = unitary_power(u, j);
        for (std::size_t r = 0; r < t; ++r) {
            for (std::size_t c = 0; c < t; ++c) e[(j * t + r) * n + (j * t + c)] = block(r, c);
        }
    }
    return UnitaryOp(n, std::move(e));
}

UnitaryOp mvcg(const DiagonalUnitary& u, std::size_t d_control) {
    require_dimension(d_control, "mvcg");
    const std::size_t t = u.dim();
    const std::size_t n = d_control * t;
    std::vector<cplx> e(n * n);
    for (std::size_t j = 0; j < d_control; ++j) {
        const DiagonalUnitary block = unitary_power(u, j);
        for (std::size_t r = 0; r < t; ++r) {
            e[(j * t + r) * n + (j * t + r)] = std::polar(1.0, block.phase(r));
        }
    }
    return UnitaryOp(n, std::move(e));
}

DiagonalUnitary phase_rotation(double theta, std::size_t d) {
    require_dimension(d, "phase_rotation");
    const DiagonalUnitary step(std::vector<double>{theta});
    std::vector<double> phases(d);
    for (std::size_t j = 0; j < d; ++j) phases[j] = unitary_power(step, j).phase(0);
    return DiagonalUnitary(std::move(phases));
}

}  // namespace quditpea
