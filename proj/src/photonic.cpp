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

#include "quditpea/photonic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "quditpea/bessel.hpp"
#include "quditpea/gates.hpp"
#include "quditpea/random.hpp"

namespace quditpea {
namespace {

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string join_violations(const std::vector<GeometryViolation>& violations) {
    std::string out = "invalid photonic geometry:";
    for (const auto& v : violations) out += " [" + v.invariant + ": " + v.detail + "]";
    return out;
}

void require_valid(const PhotonicGeometry& geometry) {
    if (auto violations = validate_geometry(geometry); !violations.empty()) {
        throw GeometryError(violations);
    }
}

void require_valid(const EomDrive& drive) {
    if (!std::isfinite(drive.modulation_index) || drive.modulation_index < 0.0) {
        throw std::invalid_argument("EomDrive: modulation_index must be finite and >= 0, got " +
                                    format_value(drive.modulation_index));
    }
    if (!std::isfinite(drive.delay_phase)) {
        throw std::invalid_argument("EomDrive: delay_phase must be finite");
    }
}

void require_valid(const DetectorModel& detector) {
    for (double v : {detector.flux, detector.integration_time, detector.dark_rate}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("DetectorModel: flux, integration_time and dark_rate must "
                                        "be finite and >= 0");
        }
    }
}

int max_abs_site(const PhotonicGeometry& geometry) {
    int worst = 0;
    for (std::size_t j = 0; j < geometry.d; ++j) {
        worst = std::max(worst, std::abs(geometry.site_of_level(j)));
    }
    return worst;
}

}  // namespace

int PhotonicGeometry::sideband_step() const {
    return static_cast<int>(std::llround(bin_spacing_freq / mix_drive_freq));
}

int PhotonicGeometry::center_level() const { return static_cast<int>((d - 1) / 2); }

int PhotonicGeometry::site_of_level(std::size_t j) const {
    return sideband_step() * (static_cast<int>(j) - center_level());
}

GeometryError::GeometryError(const std::vector<GeometryViolation>& violations)
    : std::invalid_argument(join_violations(violations)) {}

std::vector<GeometryViolation> validate_geometry(const PhotonicGeometry& g) {
    std::vector<GeometryViolation> out;
    const std::pair<const char*, double> positive[] = {
        {"bin_spacing_freq", g.bin_spacing_freq}, {"comb_drive_freq", g.comb_drive_freq},
        {"mix_drive_freq", g.mix_drive_freq},     {"daughter_spacing", g.daughter_spacing},
        {"time_bin_spacing", g.time_bin_spacing}, {"repetition_period", g.repetition_period},
        {"time_bin_fwhm", g.time_bin_fwhm},       {"dispersion", g.dispersion},
    };
    for (const auto& [name, value] : positive) {
        if (!std::isfinite(value) || value <= 0.0) {
            out.push_back({"positive", std::string(name) + " = " + format_value(value)});
        }
    }
    if (g.d < 2) out.push_back({"dimension", "d = " + std::to_string(g.d) + " < 2"});
    if (!out.empty()) return out;

    const double ratio = g.bin_spacing_freq / g.mix_drive_freq;
    if (std::llround(ratio) < 1 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        out.push_back({"sideband commensurability",
                       "bin_spacing_freq / mix_drive_freq = " + format_value(g.bin_spacing_freq) +
                           " / " + format_value(g.mix_drive_freq) + " = " + format_value(ratio) +
                           " is not a positive integer"});
    }
    const double tbp = g.bin_spacing_freq * g.daughter_spacing;
    if (!(tbp > 1.0)) {
        out.push_back({"Fourier limit", "bin_spacing_freq * daughter_spacing = " +
                                            format_value(g.bin_spacing_freq) + " GHz * " +
                                            format_value(g.daughter_spacing) +
                                            " ns = " + format_value(tbp) + " <= 1"});
    }
    const double span = static_cast<double>(g.d - 1) * g.daughter_spacing;
    if (!(span < g.time_bin_spacing)) {
        out.push_back({"daughter-bin containment",
                       "(d-1) * daughter_spacing = " + std::to_string(g.d - 1) + " * " +
                           format_value(g.daughter_spacing) + " ns = " + format_value(span) +
                           " ns >= time_bin_spacing " + format_value(g.time_bin_spacing) + " ns"});
    }
    return out;
}

LatticeOperator::LatticeOperator(int truncation, UnitaryOp matrix)
    : truncation_(truncation), matrix_(std::move(matrix)) {
    if (matrix_.dim() != static_cast<std::size_t>(2 * truncation_ + 1)) {
        throw DimensionError("LatticeOperator: matrix dim does not match truncation");
    }
}

std::size_t LatticeOperator::index(int site) const {
    if (site < -truncation_ || site > truncation_) {
        throw std::out_of_range("lattice site " + std::to_string(site) + " outside +-" +
                                std::to_string(truncation_));
    }
    return static_cast<std::size_t>(site + truncation_);
}

cplx LatticeOperator::entry(int from, int to) const { return matrix_(index(to), index(from)); }

double LatticeOperator::column_norm_squared(int site) const {
    const std::size_t col = index(site);
    double acc = 0.0;
    for (std::size_t r = 0; r < matrix_.dim(); ++r) acc += std::norm(matrix_(r, col));
    return acc;
}

LatticeState::LatticeState(int truncation, std::vector<cplx> amps, std::vector<int> sites)
    : truncation_(truncation), amps_(std::move(amps)), sites_(std::move(sites)) {}

LatticeState LatticeState::from_control(std::span<const cplx> control,
                                        const PhotonicGeometry& geometry, int truncation) {
    if (control.size() != geometry.d) {
        throw DimensionError("LatticeState: " + std::to_string(control.size()) +
                             " control amplitudes for d = " + std::to_string(geometry.d));
    }
    if (truncation < max_abs_site(geometry)) {
        throw std::invalid_argument("LatticeState: truncation " + std::to_string(truncation) +
                                    " cannot hold computational site " +
                                    std::to_string(max_abs_site(geometry)));
    }
    std::vector<cplx> amps(static_cast<std::size_t>(2 * truncation + 1));
    std::vector<int> sites(geometry.d);
    for (std::size_t j = 0; j < geometry.d; ++j) {
        sites[j] = geometry.site_of_level(j);
        amps[static_cast<std::size_t>(sites[j] + truncation)] = control[j];
    }
    return LatticeState(truncation, std::move(amps), std::move(sites));
}

cplx LatticeState::at_site(int site) const {
    if (site < -truncation_ || site > truncation_) return {};
    return amps_[static_cast<std::size_t>(site + truncation_)];
}

double LatticeState::norm_squared() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
}

LatticeState LatticeState::apply(const LatticeOperator& op) const {
    if (op.truncation() != truncation_) {
        throw DimensionError("LatticeState::apply: truncation mismatch");
    }
    const QuditState in({amps_.size()}, amps_);
    QuditState out = quditpea::apply(op.matrix(), in);
    return LatticeState(truncation_, out.amplitudes(), sites_);
}

double truncation_leakage(const EomDrive& drive, int truncation, const PhotonicGeometry& geometry) {
    require_valid(drive);
    const int reach = truncation + max_abs_site(geometry) + 80;
    const auto j = bessel_j_table(reach, drive.modulation_index);
    double worst = 0.0;
    for (std::size_t level = 0; level < geometry.d; ++level) {
        const int site = geometry.site_of_level(level);
        // Orders k with |site + k| > K fall off the lattice.
        double lost = 0.0;
        for (int k = -reach; k <= reach; ++k) {
            if (std::abs(site + k) > truncation) lost += j[static_cast<std::size_t>(std::abs(k))] *
                                                         j[static_cast<std::size_t>(std::abs(k))];
        }
        worst = std::max(worst, lost);
    }
    return worst;
}

LatticeOperator eom_operator(const EomDrive& drive, int truncation,
                             const PhotonicGeometry& geometry) {
    require_valid(drive);
    require_valid(geometry);
    const int needed = max_abs_site(geometry);
    if (truncation < needed) {
        throw std::invalid_argument("eom_operator: truncation K = " + std::to_string(truncation) +
                                    " is smaller than the outermost computational site " +
                                    std::to_string(needed));
    }
    if (const double leak = truncation_leakage(drive, truncation, geometry); leak > kLeakageBound) {
        throw std::invalid_argument("eom_operator: truncation K = " + std::to_string(truncation) +
                                    " loses " + format_value(leak) +
                                    " of a computational bin's norm, above the leakage bound " +
                                    format_value(kLeakageBound) + "; increase K");
    }

    const int span = 2 * truncation;
    const auto bessel = bessel_j_table(span, drive.modulation_index);
    const auto coefficient = [&](int k) {
        const double magnitude = bessel[static_cast<std::size_t>(std::abs(k))];
        const double signed_mag = (k < 0 && (-k) % 2 == 1) ? -magnitude : magnitude;
        return std::polar(1.0, k * drive.delay_phase) * signed_mag;
    };

    const std::size_t n = static_cast<std::size_t>(span + 1);
    std::vector<cplx> e(n * n);
    for (std::size_t to = 0; to < n; ++to) {
        for (std::size_t from = 0; from < n; ++from) {
            e[to * n + from] = coefficient(static_cast<int>(to) - static_cast<int>(from));
        }
    }
    return LatticeOperator(truncation, UnitaryOp(n, std::move(e)));
}

double equalizing_modulation_index(std::size_t d, int sideband_step) {
    if (d != 3) {
        throw std::domain_error("equalizing_modulation_index: no equal-magnitude scattering point "
                                "for d = " + std::to_string(d) + " (only d = 3 is supported)");
    }
    const auto imbalance = [sideband_step](double m) {
        return std::abs(bessel_j(0, m)) - std::abs(bessel_j(sideband_step, m));
    };
    double lo = 1.5;
    double hi = 2.2;
    double f_lo = imbalance(lo);
    const double f_hi = imbalance(hi);
    if (!(f_lo * f_hi < 0.0)) {
        throw std::domain_error("equalizing_modulation_index: |J_0| - |J_" +
                                std::to_string(sideband_step) +
                                "| does not change sign on [1.5, 2.2]");
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = imbalance(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double rf_delay_for_setting(std::size_t setting, const PhotonicGeometry& geometry) {
    return kTwoPi * static_cast<double>(setting) /
           (static_cast<double>(geometry.sideband_step()) * static_cast<double>(geometry.d));
}

double projection_probability(std::span<const double> kickback, std::size_t setting,
                              const PhotonicGeometry& geometry, const EomDrive& drive,
                              ProjectionRealization realization, int truncation) {
    if (kickback.size() != geometry.d) {
        throw DimensionError("projection_probability: " + std::to_string(kickback.size()) +
                             " phases for d = " + std::to_string(geometry.d));
    }
    if (setting >= geometry.d) {
        throw std::out_of_range("projection_probability: setting " + std::to_string(setting) +
                                " out of range");
    }
    const double dd = static_cast<double>(geometry.d);
    const double scale = 1.0 / std::sqrt(dd);
    EomDrive mixer = drive;
    std::vector<cplx> control(geometry.d);
    for (std::size_t j = 0; j < geometry.d; ++j) {
        double phase = kickback[j];
        if (realization == ProjectionRealization::PulseShaper) {
            phase -= kTwoPi * static_cast<double>((j * setting) % geometry.d) / dd;
        }
        control[j] = std::polar(scale, phase);
    }
    if (realization == ProjectionRealization::RfDelay) {
        mixer.delay_phase += rf_delay_for_setting(setting, geometry);
    }
    const LatticeOperator op = eom_operator(mixer, truncation, geometry);
    const LatticeState out = LatticeState::from_control(control, geometry, truncation).apply(op);
    return std::norm(out.at_site(0));
}

PhaseMask::PhaseMask(PhotonicGeometry geometry, std::size_t time_bins,
                     std::vector<double> slot_phases)
    : geometry_(geometry), time_bins_(time_bins), slot_phases_(std::move(slot_phases)) {
    if (slot_phases_.size() != geometry_.d * time_bins_) {
        throw DimensionError("PhaseMask: slot count does not match d * time_bins");
    }
}

double PhaseMask::slot(std::size_t level, std::size_t time_bin) const {
    return slot_phases_.at(level * time_bins_ + time_bin);
}

double PhaseMask::slot_center(std::size_t level, std::size_t time_bin) const {
    return static_cast<double>(time_bin) * geometry_.time_bin_spacing +
           static_cast<double>(level) * geometry_.daughter_spacing;
}

double PhaseMask::phase_at(double t_ns) const {
    const double period = geometry_.repetition_period;
    const double t = std::fmod(std::fmod(t_ns, period) + period, period);
    const double half = 0.5 * geometry_.daughter_spacing;
    double best_distance = half;
    double phase = 0.0;
    for (std::size_t tau = 0; tau < time_bins_; ++tau) {
        for (std::size_t j = 0; j < geometry_.d; ++j) {
            double delta = std::abs(t - slot_center(j, tau));
            delta = std::min(delta, period - delta);
            if (delta < best_distance) {
                best_distance = delta;
                phase = slot(j, tau);
            }
        }
    }
    return phase;
}

std::vector<PhaseMask::Segment> PhaseMask::segments() const {
    std::vector<Segment> out;
    const double half = 0.5 * geometry_.daughter_spacing;
    for (std::size_t tau = 0; tau < time_bins_; ++tau) {
        for (std::size_t j = 0; j < geometry_.d; ++j) {
            const double c = slot_center(j, tau);
            out.push_back({c - half, c + half, slot(j, tau), j, tau});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Segment& a, const Segment& b) { return a.start < b.start; });
    return out;
}

UnitaryOp PhaseMask::induced_operator() const {
    const std::size_t n = geometry_.d * time_bins_;
    std::vector<cplx> e(n * n);
    for (std::size_t j = 0; j < geometry_.d; ++j) {
        for (std::size_t tau = 0; tau < time_bins_; ++tau) {
            const std::size_t idx = j * time_bins_ + tau;
            e[idx * n + idx] = std::polar(1.0, phase_at(slot_center(j, tau)));
        }
    }
    return UnitaryOp(n, std::move(e));
}

PhaseMask mvcg_phase_mask(std::span<const double> u_phases, const PhotonicGeometry& geometry) {
    require_valid(geometry);
    if (u_phases.size() != geometry.d) {
        throw DimensionError("mvcg_phase_mask: " + std::to_string(u_phases.size()) +
                             " unitary phases for d = " + std::to_string(geometry.d));
    }
    const std::size_t time_bins = u_phases.size();
    if (static_cast<double>(time_bins) * geometry.time_bin_spacing > geometry.repetition_period) {
        throw GeometryError({{"repetition period",
                              std::to_string(time_bins) + " time bins * " +
                                  format_value(geometry.time_bin_spacing) + " ns exceed " +
                                  format_value(geometry.repetition_period) + " ns"}});
    }
    const DiagonalUnitary u = diagonal_unitary(u_phases);
    std::vector<double> slots(geometry.d * time_bins);
    for (std::size_t j = 0; j < geometry.d; ++j) {
        const DiagonalUnitary uj = unitary_power(u, j);
        for (std::size_t tau = 0; tau < time_bins; ++tau) slots[j * time_bins + tau] = uj.phase(tau);
    }
    return PhaseMask(geometry, time_bins, std::move(slots));
}

std::vector<double> kickback_phases(const PhaseMask& mask, std::size_t time_bin) {
    if (time_bin >= mask.time_bins()) {
        throw std::out_of_range("kickback_phases: time bin " + std::to_string(time_bin));
    }
    const std::size_t d = mask.control_dim();
    const QuditState in = tensor(QuditState::uniform(d), QuditState::basis(mask.time_bins(), time_bin));
    const QuditState out = apply(mask.induced_operator(), in);
    std::vector<double> phases(d);
    for (std::size_t j = 0; j < d; ++j) {
        phases[j] = wrap_phase(std::arg(out[j * mask.time_bins() + time_bin]));
    }
    return phases;
}

std::vector<std::vector<double>> detection_probabilities(std::span<const double> u_phases,
                                                         const PhotonicGeometry& geometry,
                                                         const EomDrive& drive) {
    const PhaseMask mask = mvcg_phase_mask(u_phases, geometry);
    std::vector<std::vector<double>> out(mask.time_bins(), std::vector<double>(geometry.d));
    for (std::size_t tau = 0; tau < mask.time_bins(); ++tau) {
        const auto kick = kickback_phases(mask, tau);
        for (std::size_t n = 0; n < geometry.d; ++n) {
            out[tau][n] = projection_probability(kick, n, geometry, drive);
        }
    }
    return out;
}

std::vector<std::uint64_t> sample_projection_counts(std::span<const double> kickback,
                                                    const PhotonicGeometry& geometry,
                                                    const EomDrive& drive,
                                                    const DetectorModel& detector,
                                                    std::uint64_t stream_seed) {
    require_valid(detector);
    std::vector<std::uint64_t> row(geometry.d, 0);
    for (std::size_t n = 0; n < geometry.d; ++n) {
        const double p = projection_probability(kickback, n, geometry, drive);
        const double mean = (detector.flux * p + detector.dark_rate) * detector.integration_time;
        if (!(mean > 0.0)) continue;
        std::mt19937_64 gen(derive_seed(stream_seed, n));
        std::poisson_distribution<std::uint64_t> poisson(mean);
        row[n] = poisson(gen);
    }
    return row;
}

CountTable simulate_counts(std::span<const double> u_phases, const PhotonicGeometry& geometry,
                           const EomDrive& drive, const DetectorModel& detector,
                           std::uint64_t seed) {
    require_valid(geometry);
    require_valid(drive);
    require_valid(detector);
    const PhaseMask mask = mvcg_phase_mask(u_phases, geometry);

    CountTable table;
    table.d = geometry.d;
    table.geometry = geometry;
    table.drive = drive;
    table.seed = seed;
    table.counts.reserve(mask.time_bins());
    for (std::size_t tau = 0; tau < mask.time_bins(); ++tau) {
        const auto kick = kickback_phases(mask, tau);
        table.counts.push_back(
            sample_projection_counts(kick, geometry, drive, detector, derive_seed(seed, tau)));
    }
    return table;
}

}  // namespace quditpea
