#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "specmux/hom_engine.hpp"
#include "specmux/qubit_model.hpp"
#include "specmux/ssmm.hpp"
#include "specmux/sweep.hpp"

namespace specmux {

/// One spectrally multiplexed MDI-QKD configuration. The SSMM grid holds every
/// channel the spectral bandwidth allows; `mode_count` of them are used,
/// filled from the grid center outward.
struct ScenarioConfig {
    std::string name = "custom";
    SsmmParams ssmm;
    int mode_count = 1;
    double hom_visibility = 0.42;
    double source_rate_hz = 80e6;
    double mean_photon_number = 0.1;
    double ec_inefficiency = 1.16;
    DetectorModel detector;
    TimeBinQubitSpec z_qubit{0.0, 1000.0, 10.0, 0.0, Basis::Z};
    TimeBinQubitSpec x_qubit{500.0, 500.0, 10.0, 0.0, Basis::X};
    // Count light leaking in from the other used channels as detector noise.
    bool crosstalk_noise = false;
    int quadrature_nodes = 256;

    int max_modes() const { return ssmm.grid.mode_count; }
    void validate() const;
};

/// Channels that fit in a spectral bandwidth at the given spacing.
int bandwidth_mode_limit(double bandwidth_hz, double spacing_hz);

/// Presets "current", "soa_coupling" and "soa_coupling_dense".
ScenarioConfig scenario_preset(std::string_view name);
std::vector<std::string> scenario_preset_names();

double binary_entropy(double p);

/// Gain and error rate of the Bell-state measurement in one basis.
struct BsmStatistics {
    double gain = 0.0;
    double error = 0.0;
};

/// Phase-averaged BSM statistics for phase-randomized coherent time-bin
/// pulses. Every (port, bin) slot is an independent threshold detection with
/// background click probability `noise`; a psi- (different ports) or psi+
/// (same port) pattern of exactly two clicks, one per bin, heralds success.
BsmStatistics bsm_statistics(Basis basis, const QubitState& zero, const QubitState& one, double transmission_a,
                             double transmission_b, double noise, double mean_photon_number, double overlap,
                             int quadrature_nodes);

/// Yield of single-photon pairs with threshold detectors of background click
/// probability y0.
double single_photon_yield(double transmission_a, double transmission_b, double y0);

/// Phase error of single-photon pairs given the intrinsic X-basis error.
double single_photon_error(double transmission_a, double transmission_b, double y0, double intrinsic_error);

struct ModeKeyRate {
    int channel = 0;
    double transmission = 0.0;  // detector efficiency x SSMM coupling
    double noise = 0.0;         // background click probability per slot
    BsmStatistics z;
    BsmStatistics x;
    double yield_11 = 0.0;
    double error_11 = 0.0;
    double rate_bits_per_s = 0.0;
};

/// Secret key rate of one used mode (index into the center-outward order):
///   R = R_source [P11 Y11 (1 - H(e11)) - Q_Z f H(E_Z)], clipped at 0.
ModeKeyRate mode_key_rate(const ScenarioConfig& scenario, int mode_index);

/// Single-mode rate with the SSMM removed and everything else unchanged.
double baseline_rate(const ScenarioConfig& scenario);

struct RateCurveRow {
    int modes;
    double rate_bits_per_s;
    double enhancement;
};

struct RateCurve {
    std::string scenario;
    double baseline_bits_per_s = 0.0;
    std::vector<RateCurveRow> rows;

    /// Columns M, rate_bits_per_s, enhancement.
    SweepResult table() const;
};

/// Total key rate for M = 1 .. max_modes, relative to the baseline. Throws
/// ConstraintViolation if max_modes exceeds the scenario's channel count.
RateCurve enhancement_curve(const ScenarioConfig& scenario, int max_modes);

}  // namespace specmux
