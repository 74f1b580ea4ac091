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

/// \file photonic.hpp
/// \brief Device-level model of a time/frequency-bin single-photon PEA.
///
/// Control register: d frequency bins spaced by bin_spacing_freq. Target
/// register: time bins spaced by time_bin_spacing. The MVCG is a temporal
/// phase mask applied between two opposite-dispersion gratings, which split
/// each time bin into frequency-labelled daughter bins. The inverse DFT is
/// realized probabilistically by one phase modulator at mix_drive_freq that
/// scatters every computational bin onto a central bin, followed by a
/// bandpass filter and a photon counter.
///
/// Frequencies are in GHz, times in ns, phases in radians.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quditpea/core.hpp"

namespace quditpea {

struct PhotonicGeometry {
    double bin_spacing_freq = 54.0;  // GHz, between computational frequency bins
    double comb_drive_freq = 18.0;   // GHz, comb-generating modulator
    double mix_drive_freq = 27.0;    // GHz, inverse-DFT modulator
    double daughter_spacing = 0.9;   // ns
    double time_bin_spacing = 6.0;   // ns
    double repetition_period = 24.0; // ns
    double time_bin_fwhm = 0.2;      // ns
    double dispersion = 2.0;         // ns/nm
    std::size_t d = 3;

    /// Lattice sites (in units of mix_drive_freq) between neighbouring bins.
    int sideband_step() const;
    /// Control level that maps onto lattice site 0 (the detected bin).
    int center_level() const;
    /// Lattice site of control level j: step * (j - center).
    int site_of_level(std::size_t j) const;
};

struct GeometryViolation {
    std::string invariant;
    std::string detail;
};

class GeometryError : public std::invalid_argument {
  public:
    explicit GeometryError(const std::vector<GeometryViolation>& violations);
};

/// Empty when the geometry is usable.
std::vector<GeometryViolation> validate_geometry(const PhotonicGeometry& geometry);

struct EomDrive {
    double modulation_index = 0.0;
    double drive_freq = 27.0;
    /// Phase per sideband order from the RF delay (entry m -> m+k picks up
    /// e^{i k delay_phase}).
    double delay_phase = 0.0;
};

/// How the projection setting n is imprinted before frequency mixing.
enum class ProjectionRealization {
    /// Spectral pre-phase -2 pi j n / d on bin j (pulse shaper).
    PulseShaper,
    /// RF delay on the mixing modulator, delay_phase += rf_delay_for_setting(n).
    RfDelay,
};

inline constexpr int kDefaultTruncation = 24;
/// Maximum norm a computational bin may lose to the lattice edges.
inline constexpr double kLeakageBound = 1e-8;

/// Sideband scattering matrix on sites -K..K (index = site + K).
class LatticeOperator {
  public:
    LatticeOperator(int truncation, UnitaryOp matrix);

    int truncation() const noexcept { return truncation_; }
    const UnitaryOp& matrix() const noexcept { return matrix_; }
    std::size_t index(int site) const;
    /// Amplitude transferred from site `from` to site `to`.
    cplx entry(int from, int to) const;
    /// sum over kept sites of |entry(site, .)|^2
    double column_norm_squared(int site) const;

  private:
    int truncation_;
    UnitaryOp matrix_;
};

/// Single-photon amplitude over the truncated frequency lattice.
class LatticeState {
  public:
    /// Places control amplitude j on site step*(j - center).
    static LatticeState from_control(std::span<const cplx> control,
                                     const PhotonicGeometry& geometry, int truncation);

    int truncation() const noexcept { return truncation_; }
    const std::vector<cplx>& amplitudes() const noexcept { return amps_; }
    const std::vector<int>& computational_sites() const noexcept { return sites_; }
    cplx at_site(int site) const;
    double norm_squared() const;

    LatticeState apply(const LatticeOperator& op) const;

  private:
    LatticeState(int truncation, std::vector<cplx> amps, std::vector<int> sites);

    int truncation_;
    std::vector<cplx> amps_;
    std::vector<int> sites_;
};

/// entry(m -> m+k) = J_k(index) e^{i k delay_phase}. Throws
/// std::invalid_argument when K cannot hold the computational sites or any
/// of them would leak more than kLeakageBound past the lattice edge.
LatticeOperator eom_operator(const EomDrive& drive, int truncation,
                             const PhotonicGeometry& geometry = {});

/// Worst norm lost off the lattice edge over the computational sites.
double truncation_leakage(const EomDrive& drive, int truncation,
                          const PhotonicGeometry& geometry = {});

/// Modulation index on [1.5, 2.2] where |J_0| = |J_step|, so every bin of a
/// qutrit scatters onto the centre with equal magnitude. Bisection to full
/// double precision. Only d = 3 has such a point; other d throw.
double equalizing_modulation_index(std::size_t d, int sideband_step = 2);

/// delay_phase equivalent to the spectral pre-phase of setting n.
double rf_delay_for_setting(std::size_t setting, const PhotonicGeometry& geometry);

/// Probability of a detection in the central bin for control amplitudes
/// (1/sqrt d) e^{i kickback_phases[j]} under projection setting n, evaluated
/// by propagating the lattice state through the mixing modulator.
double projection_probability(std::span<const double> kickback_phases, std::size_t setting,
                              const PhotonicGeometry& geometry, const EomDrive& drive,
                              ProjectionRealization realization = ProjectionRealization::PulseShaper,
                              int truncation = kDefaultTruncation);

/// Temporal phase pattern driving the MVCG modulator.
class PhaseMask {
  public:
    struct Segment {
        double start;  // ns
        double end;    // ns
        double phase;  // rad
        std::size_t level;
        std::size_t time_bin;
    };

    PhaseMask(PhotonicGeometry geometry, std::size_t time_bins, std::vector<double> slot_phases);

    std::size_t control_dim() const noexcept { return geometry_.d; }
    std::size_t time_bins() const noexcept { return time_bins_; }
    /// Phase carried by daughter slot (frequency level j, time bin tau).
    double slot(std::size_t level, std::size_t time_bin) const;
    /// Centre of the slot after the first grating delays level j by j*dt.
    double slot_center(std::size_t level, std::size_t time_bin) const;
    /// Piecewise-constant mask value; zero outside every slot.
    double phase_at(double t_ns) const;
    /// Slots in time order.
    std::vector<Segment> segments() const;

    /// Joint (control, target) operator seen by a photon: split by the first
    /// grating, phase_at() at its daughter slot, recombined by the second.
    UnitaryOp induced_operator() const;

  private:
    PhotonicGeometry geometry_;
    std::size_t time_bins_;
    std::vector<double> slot_phases_;
};

/// Slot (j, tau) carries j * u_phases[tau] mod 2 pi. Throws GeometryError.
PhaseMask mvcg_phase_mask(std::span<const double> u_phases, const PhotonicGeometry& geometry);

struct DetectorModel {
    double flux = 3.5e4;            // detected photons/s at unit probability
    double integration_time = 1.0;  // s
    double dark_rate = 0.0;         // counts/s
};

struct CountTable {
    std::size_t d = 0;
    /// counts[tau][n]: eigenstate tau, projection setting n.
    std::vector<std::vector<std::uint64_t>> counts;
    PhotonicGeometry geometry;
    EomDrive drive;
    std::uint64_t seed = 0;
};

/// Control-register phases after the photonic MVCG for eigenstate tau.
std::vector<double> kickback_phases(const PhaseMask& mask, std::size_t time_bin);

/// Noiseless detection probabilities p[tau][n].
std::vector<std::vector<double>> detection_probabilities(std::span<const double> u_phases,
                                                         const PhotonicGeometry& geometry,
                                                         const EomDrive& drive);

/// Poisson counts for every setting n given control phases, one generator
/// stream per setting derived from `stream_seed`.
std::vector<std::uint64_t> sample_projection_counts(std::span<const double> kickback,
                                                    const PhotonicGeometry& geometry,
                                                    const EomDrive& drive,
                                                    const DetectorModel& detector,
                                                    std::uint64_t stream_seed);

/// Full pipeline. Mean of cell (tau, n) is
/// (flux * projection_probability + dark_rate) * integration_time.
CountTable simulate_counts(std::span<const double> u_phases, const PhotonicGeometry& geometry,
                           const EomDrive& drive, const DetectorModel& detector,
                           std::uint64_t seed);

}  // namespace quditpea
