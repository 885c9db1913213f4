#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "specmux/photonic_core.hpp"
#include "specmux/ssmm.hpp"
#include "specmux/sweep.hpp"

namespace specmux {

/// Threshold single-photon detector.
struct DetectorModel {
    double efficiency = 0.8;
    double dark_click_probability = 1e-6;  // per coincidence window
    double coincidence_window_s = 1e-9;

    void validate() const;
};

/// How the random relative phase between the stations acts on B's modes.
enum class PhaseModel {
    correlated,   // one phase shared by every spectral mode
    independent,  // an independent phase per spectral mode
};

/// Two weak-coherent-pulse trains meeting on a balanced beam splitter whose
/// outputs each feed one SSMM. Output port "+" feeds SSMM 1, port "-" SSMM 2.
struct InterferenceConfig {
    WeakCoherentPulseSpec pulse_a;
    WeakCoherentPulseSpec pulse_b;
    CrosstalkMatrix transfer_1 = CrosstalkMatrix::identity(1);
    CrosstalkMatrix transfer_2 = CrosstalkMatrix::identity(1);
    // detectors[s][c]: detector behind SSMM s+1, channel c.
    std::array<std::vector<DetectorModel>, 2> detectors;
    double delay_s = 0.0;  // B's arrival time relative to A
    PhaseModel phase_model = PhaseModel::correlated;
    // Scales the temporal overlap to absorb residual distinguishability.
    double overlap_deficit = 1.0;
    int quadrature_nodes = 256;

    int mode_count() const { return transfer_1.size(); }
    void validate() const;
};

/// Builds a config whose SSMMs come from device models; both models must share
/// the same spectral grid.
InterferenceConfig make_interference_config(WeakCoherentPulseSpec pulse_a, WeakCoherentPulseSpec pulse_b,
                                            const SsmmModel& ssmm_1, const SsmmModel& ssmm_2,
                                            const DetectorModel& detector);

/// Same detector model on every output.
std::array<std::vector<DetectorModel>, 2> uniform_detectors(int channels, const DetectorModel& detector);

/// Per-mode interference term <A_m|B_m>: sqrt(mu_A mu_B) times the temporal
/// overlap of the two bin-resolved pulses (including the overlap deficit) and
/// the stations' relative phase offset. Its magnitude never exceeds
/// sqrt(mu_A mu_B).
std::vector<complex> interference_terms(const InterferenceConfig& config);

/// Mean photon numbers leaving the beam splitter for one mode.
struct PortIntensity {
    double plus;
    double minus;
};

/// Port intensities of every mode for the given random phase(s). `phases`
/// holds one value for the correlated model or one per mode otherwise.
std::vector<PortIntensity> port_intensities(const InterferenceConfig& config, std::span<const double> phases);

/// Phase-averaged probability that detector (1, channel_1) and detector
/// (2, channel_2) both click in the same window.
double coincidence_probability(const InterferenceConfig& config, int channel_1, int channel_2);

/// Phase-averaged click probability of detector (ssmm, channel); ssmm is 1 or 2.
double click_probability(const InterferenceConfig& config, int ssmm, int channel);

struct CoincidenceResult {
    std::array<std::vector<double>, 2> singles;  // [ssmm][channel]
    std::vector<std::vector<double>> coincidence;  // [channel_1][channel_2]
    std::vector<std::vector<double>> coincidence_rate_hz;
};

CoincidenceResult simulate(const InterferenceConfig& config, double source_rate_hz);

/// Monte Carlo estimate of coincidence_probability: samples the random phase,
/// Poisson photon numbers at each detector, and dark clicks.
struct MonteCarloEstimate {
    double probability;
    double standard_error;
};
MonteCarloEstimate monte_carlo_coincidence(const InterferenceConfig& config, int channel_1, int channel_2,
                                           std::uint64_t trials, std::uint64_t seed);

/// (C_dist - C_indist) / C_dist.
double visibility(double c_dist, double c_indist);

struct ChannelPair {
    int channel_1 = 0;
    int channel_2 = 0;
};

/// Converts probabilities into counts over an accumulation time, optionally
/// Poisson-sampled.
struct CountsMode {
    double source_rate_hz = 80e6;
    double accumulation_s = 1.0;
    bool poisson = false;
    std::uint64_t seed = 0;
};

struct DipScanOptions {
    double delay_min_s = -1.5e-9;
    double delay_max_s = 1.5e-9;
    int steps = 61;
    std::vector<ChannelPair> pairs;  // empty: every channel pair
    std::optional<CountsMode> counts;
};

/// Coincidences against B's delay, one column per channel pair.
SweepResult hom_dip_scan(const InterferenceConfig& config, const DipScanOptions& options);

struct PhaseScanOptions {
    std::vector<double> theta_rad;
    ChannelPair pair;
    DipScanOptions dip;
};

/// Dip visibility as a function of the phase of B's late bin relative to its
/// early bin. Both stations must send early/late superpositions.
SweepResult phase_scan(const InterferenceConfig& config, const PhaseScanOptions& options);

/// Mean photon numbers in the four (port, bin) detection slots of a time-bin
/// Bell-state measurement, indexed [port][bin] with port 0 = "+".
using SlotIntensities = std::array<std::array<double, 2>, 2>;

/// Beam-splitter algebra for single-mode time-bin pulses with amplitudes
/// already scaled by sqrt(mu * transmission). `overlap` is the temporal mode
/// overlap between the stations; B carries the extra phase `phase_rad`.
SlotIntensities bsm_slot_intensities(const BinAmplitudes& a, const BinAmplitudes& b, double overlap,
                                     double phase_rad);

/// Uniform periodic quadrature nodes on [0, 2 pi).
std::vector<double> phase_nodes(int count);

}  // namespace specmux
