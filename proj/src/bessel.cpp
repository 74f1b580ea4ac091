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

#include "quditpea/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace quditpea {
namespace {

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;

}  // namespace

std::vector<double> bessel_j_table(int max_order, double x) {
    if (max_order < 0) throw std::invalid_argument("bessel_j_table: negative max_order");
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_j_table: non-finite argument");

    std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    const double ax = std::abs(x);
    if (ax == 0.0) {
        out[0] = 1.0;
        return out;
    }

    // Start well above both the requested order and the turning point |x|;
    // the recurrence is stable downward and the start error decays like
    // (x / 2k)^k.
    const int base = std::max(max_order, static_cast<int>(std::ceil(ax)));
    int start = base + 30 + static_cast<int>(std::sqrt(80.0 * base));
    start += start % 2;

    double next = 0.0;  // J_{k+1}
    double cur = 1e-300;  // J_k, arbitrary seed
    double even_sum = 0.0;
    for (int k = start; k > 0; --k) {
        const double prev = (2.0 * k / ax) * cur - next;  // J_{k-1}
        next = cur;
        cur = prev;
        if (std::abs(cur) > kRescaleAbove) {
            cur *= kRescaleBy;
            next *= kRescaleBy;
            even_sum *= kRescaleBy;
            for (auto& v : out) v *= kRescaleBy;
        }
        const int order = k - 1;
        if (order <= max_order) out[static_cast<std::size_t>(order)] = cur;
        if (order > 0 && order % 2 == 0) even_sum += cur;
    }
    const double norm = cur + 2.0 * even_sum;
    for (auto& v : out) v /= norm;

    if (x < 0.0) {
        for (std::size_t n = 1; n < out.size(); n += 2) out[n] = -out[n];
    }
    return out;
}

double bessel_j(int order, double x) {
    const int n = std::abs(order);
    const double value = bessel_j_table(n, x)[static_cast<std::size_t>(n)];
    return (order < 0 && (n % 2 == 1)) ? -value : value;
}

}  // namespace quditpea
