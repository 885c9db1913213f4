#pragma once

#include <optional>
#include <vector>

#include "specmux/photonic_core.hpp"
#include "specmux/sweep.hpp"

namespace specmux {

enum class CouplingEnvelope { gaussian, flat };

/// Parameters of a VIPA-based spectral-to-spatial mode mapper.
struct SsmmParams {
    SpectralModeGrid grid;
    double passband_fwhm_hz = 3.2e9;
    // When set, overrides passband_fwhm_hz: the FWHM is chosen so that the
    // power response one grid spacing away is this many dB below the peak.
    std::optional<double> adjacent_rejection_db;
    double peak_coupling = 0.05;
    double envelope_bandwidth_hz = 60e9;
    CouplingEnvelope envelope_shape = CouplingEnvelope::gaussian;
    double nominal_frequency_hz = 0.0;
    // Metadata for reporting fiber positions in the lens focal plane.
    double focal_length_m = 1.0;
    double angular_dispersion_rad_per_hz = 0.5e-12;
};

/// Power transmission T[c][m] of spectral mode m into spatial channel c.
class CrosstalkMatrix {
  public:
    explicit CrosstalkMatrix(int size) : size_(size), entries_(static_cast<std::size_t>(size * size)) {}

    int size() const { return size_; }
    double operator()(int channel, int mode) const { return entries_[index(channel, mode)]; }
    double& operator()(int channel, int mode) { return entries_[index(channel, mode)]; }

    // Lossless, crosstalk-free mapper.
    static CrosstalkMatrix identity(int size);

  private:
    std::size_t index(int c, int m) const { return static_cast<std::size_t>(c * size_ + m); }

    int size_;
    std::vector<double> entries_;
};

/// FWHM of a Gaussian power passband whose response at `spacing_hz` from the
/// peak is `rejection_db` below it.
double passband_fwhm_for_rejection(double spacing_hz, double rejection_db);

class SsmmModel {
  public:
    /// Validates the parameters, including that the resulting device is
    /// passive (column sums <= 1) and diagonally dominant.
    explicit SsmmModel(SsmmParams params);
    SsmmModel() : SsmmModel(SsmmParams{}) {}

    const SsmmParams& params() const { return params_; }
    const SpectralModeGrid& grid() const { return params_.grid; }
    int channel_count() const { return params_.grid.mode_count; }

    double passband_fwhm() const { return passband_fwhm_; }
    /// Normalized Gaussian power passband; 1 at zero detuning.
    double passband(double detuning_hz) const;
    /// Coupling envelope evaluated at a frequency; 1 at the nominal frequency.
    double envelope(double frequency_hz) const;
    /// Ratio between a channel's peak and its response at the adjacent channel
    /// center, in dB.
    double adjacent_rejection_db() const;

    /// Power transmission of light at `frequency_hz` into spatial `channel`.
    double transmission(int channel, double frequency_hz) const;

    CrosstalkMatrix crosstalk_matrix() const;

    /// Fiber position of a channel in the focal plane, relative to the
    /// nominal-frequency spot.
    double spatial_position_m(int channel) const;

  private:
    SsmmParams params_;
    double passband_fwhm_;
};

/// Transmission of every channel sampled on [f_min, f_max] at `step`.
SweepResult frequency_response_scan(const SsmmModel& model, double f_min_hz, double f_max_hz,
                                    double step_hz);

}  // namespace specmux
