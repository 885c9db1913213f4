#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace specmux {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Frequencies are detunings in Hz from the common carrier; durations in s.

/// Evenly spaced spectral channels placed symmetrically about `center_hz`.
struct SpectralModeGrid {
    double center_hz = 0.0;
    double spacing_hz = 8e9;
    int mode_count = 2;

    void validate() const;

    double offset(int mode) const;
    std::vector<double> offsets() const;
    double span() const { return (mode_count - 1) * spacing_hz; }
};

/// Mode indices sorted by distance from the grid center; ties go to the
/// lower-frequency mode first.
std::vector<int> center_outward_order(const SpectralModeGrid& grid);

enum class EnvelopeShape { gaussian };

/// Temporal profile of one time bin. `fwhm_s` is the full width at half
/// maximum of the Gaussian amplitude profile exp(-t^2 / (2 sigma^2)).
struct TemporalEnvelope {
    EnvelopeShape shape = EnvelopeShape::gaussian;
    double fwhm_s = 625e-12;
    double bin_separation_s = 5e-9;

    void validate() const;
    double sigma() const;
};

/// Inner product of the normalized envelope with a copy shifted by `delay_s`.
/// Gaussian profiles give exp(-delay^2 / (4 sigma^2)).
double temporal_overlap(const TemporalEnvelope& envelope, double delay_s);

enum class Station { A, B };

/// Early/late amplitudes of one pulse; squared magnitudes sum to one.
using BinAmplitudes = std::array<complex, 2>;

inline constexpr int kEarly = 0;
inline constexpr int kLate = 1;

BinAmplitudes late_bin();
BinAmplitudes early_bin();

/// One station's multi-mode weak coherent pulse.
struct WeakCoherentPulseSpec {
    Station station = Station::A;
    std::vector<double> mean_photon_number;  // per spectral mode
    std::vector<double> phase_offset_rad;    // deterministic per-mode phase
    BinAmplitudes bins = late_bin();
    TemporalEnvelope envelope;

    std::size_t mode_count() const { return mean_photon_number.size(); }
    void validate() const;
};

/// Uniform pulse: the same mean photon number and zero phase offset in every
/// mode.
WeakCoherentPulseSpec make_pulse(Station station, int modes, double mean_photon_number,
                                 const BinAmplitudes& bins = late_bin(),
                                 const TemporalEnvelope& envelope = {});

/// Coherent amplitude of each (mode, bin): sqrt(mu_m) * w_k * exp(i dtheta_m).
std::vector<BinAmplitudes> mode_amplitudes(const WeakCoherentPulseSpec& spec);

}  // namespace specmux
