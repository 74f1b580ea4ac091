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

#include "quditpea/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "quditpea/kernels.hpp"

namespace quditpea {
namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::string dims_string(const std::vector<std::size_t>& dims) {
    std::string out = "[";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(dims[i]);
    }
    return out + "]";
}

}  // namespace

double wrap_phase(double radians) {
    double r = std::fmod(radians, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

QuditState::QuditState(std::vector<std::size_t> dims, std::vector<cplx> amplitudes)
    : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    if (dims_.empty()) throw DimensionError("QuditState needs at least one subsystem");
    for (auto d : dims_) {
        if (d == 0) throw DimensionError("QuditState subsystem dimension must be positive");
    }
    if (amps_.size() != product(dims_)) {
        throw DimensionError("QuditState: dims " + dims_string(dims_) + " need " +
                             std::to_string(product(dims_)) + " amplitudes, got " +
                             std::to_string(amps_.size()));
    }
}

QuditState QuditState::basis(std::vector<std::size_t> dims, std::size_t index) {
    const std::size_t n = product(dims);
    if (index >= n) {
        throw DimensionError("basis index " + std::to_string(index) + " out of range for dims " +
                             dims_string(dims));
    }
    std::vector<cplx> amps(n);
    amps[index] = 1.0;
    return QuditState(std::move(dims), std::move(amps));
}

QuditState QuditState::basis(std::size_t d, std::size_t level) {
    return basis(std::vector<std::size_t>{d}, level);
}

QuditState QuditState::uniform(std::size_t d) {
    if (d == 0) throw DimensionError("uniform state needs d >= 1");
    return QuditState({d}, std::vector<cplx>(d, 1.0 / std::sqrt(static_cast<double>(d))));
}

double QuditState::norm_squared() const { return kernels::norm_squared(amps_); }

bool QuditState::is_normalized() const {
    return std::abs(norm_squared() - 1.0) <= kNormTolerance;
}

UnitaryOp::UnitaryOp(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim_ == 0) throw DimensionError("UnitaryOp dimension must be positive");
    if (entries_.size() != dim_ * dim_) {
        throw DimensionError("UnitaryOp of dim " + std::to_string(dim_) + " needs " +
                             std::to_string(dim_ * dim_) + " entries, got " +
                             std::to_string(entries_.size()));
    }
}

UnitaryOp UnitaryOp::identity(std::size_t dim) {
    std::vector<cplx> e(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
    return UnitaryOp(dim, std::move(e));
}

UnitaryOp UnitaryOp::adjoint() const {
    std::vector<cplx> e(dim_ * dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) e[c * dim_ + r] = std::conj(entries_[r * dim_ + c]);
    }
    return UnitaryOp(dim_, std::move(e));
}

UnitaryOp UnitaryOp::operator*(const UnitaryOp& rhs) const {
    if (rhs.dim_ != dim_) {
        throw DimensionError("operator product: dims " + std::to_string(dim_) + " and " +
                             std::to_string(rhs.dim_));
    }
    std::vector<cplx> e(dim_ * dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t k = 0; k < dim_; ++k) {
            const cplx a = entries_[r * dim_ + k];
            if (a == cplx{}) continue;
            for (std::size_t c = 0; c < dim_; ++c) e[r * dim_ + c] += a * rhs.entries_[k * dim_ + c];
        }
    }
    return UnitaryOp(dim_, std::move(e));
}

double UnitaryOp::max_deviation(const UnitaryOp& other) const {
    if (other.dim_ != dim_) {
        throw DimensionError("max_deviation: dims " + std::to_string(dim_) + " and " +
                             std::to_string(other.dim_));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
    }
    return worst;
}

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("ProbVector must not be empty");
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0 + kNormTolerance)) {
            throw std::invalid_argument("ProbVector entry outside [0,1]: " + std::to_string(p));
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw std::invalid_argument("ProbVector does not sum to 1 (sum = " + std::to_string(total) +
                                    ")");
    }
}

QuditState tensor(const QuditState& a, const QuditState& b) {
    std::vector<std::size_t> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    std::vector<cplx> amps(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) amps[i * b.size() + j] = a[i] * b[j];
    }
    return QuditState(std::move(dims), std::move(amps));
}

QuditState apply(const UnitaryOp& op, const QuditState& s, std::size_t subsystem) {
    const auto& dims = s.dims();
    if (subsystem >= dims.size()) {
        throw DimensionError("apply: subsystem " + std::to_string(subsystem) +
                             " out of range for dims " + dims_string(dims));
    }
    if (op.dim() != dims[subsystem]) {
        throw DimensionError("apply: operator dim " + std::to_string(op.dim()) +
                             " does not match subsystem " + std::to_string(subsystem) +
                             " of dims " + dims_string(dims) + " (expected " +
                             std::to_string(dims[subsystem]) + ")");
    }
    std::size_t outer = 1;
    for (std::size_t i = 0; i < subsystem; ++i) outer *= dims[i];
    std::size_t inner = 1;
    for (std::size_t i = subsystem + 1; i < dims.size(); ++i) inner *= dims[i];

    std::vector<cplx> out(s.size());
    kernels::apply_strided(op.entries(), op.dim(), s.amplitudes(), out, outer, inner);
    return QuditState(dims, std::move(out));
}

QuditState apply(const UnitaryOp& op, const QuditState& s) {
    if (op.dim() != s.size()) {
        throw DimensionError("apply: operator dim " + std::to_string(op.dim()) +
                             " does not match register dims " + dims_string(s.dims()) +
                             " (expected " + std::to_string(s.size()) + ")");
    }
    std::vector<cplx> out(s.size());
    kernels::apply_strided(op.entries(), op.dim(), s.amplitudes(), out, 1, 1);
    return QuditState(s.dims(), std::move(out));
}

ProbVector probabilities(const QuditState& s, std::size_t subsystem) {
    const auto& dims = s.dims();
    if (subsystem >= dims.size()) {
        throw DimensionError("probabilities: subsystem " + std::to_string(subsystem) +
                             " out of range for dims " + dims_string(dims));
    }
    const double norm = s.norm_squared();
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw std::invalid_argument("probabilities: state is not normalized (norm^2 = " +
                                    std::to_string(norm) + ")");
    }
    std::size_t inner = 1;
    for (std::size_t i = subsystem + 1; i < dims.size(); ++i) inner *= dims[i];
    const std::size_t d = dims[subsystem];

    std::vector<double> probs(d, 0.0);
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        probs[(idx / inner) % d] += std::norm(s[idx]);
    }
    for (auto& p : probs) p = std::min(p, 1.0);
    return ProbVector(std::move(probs));
}

UnitarityReport check_unitary(const UnitaryOp& op) {
    const std::size_t n = op.dim();
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            cplx acc{};
            for (std::size_t k = 0; k < n; ++k) acc += std::conj(op(k, r)) * op(k, c);
            if (r == c) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return {worst <= kUnitaryTolerance, worst};
}

}  // namespace quditpea
