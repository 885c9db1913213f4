#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "specmux/hom_engine.hpp"
#include "specmux/mdi_keyrate.hpp"
#include "specmux/qubit_model.hpp"
#include "specmux/repeater.hpp"
#include "specmux/ssmm.hpp"

namespace specmux {

struct SourceSettings {
    double mean_photon_number_a = 0.1;  // per spectral mode
    double mean_photon_number_b = 0.1;
    TimeBinQubitSpec state_a{0.0, 1000.0, 0.0, 0.0, Basis::Z};
    TimeBinQubitSpec state_b{0.0, 1000.0, 0.0, 0.0, Basis::Z};
    // Station B's spectral mode m carries an extra phase m * step relative to A.
    double sideband_phase_step_rad = kPi / 2.0;
    double source_rate_hz = 80e6;
    TemporalEnvelope envelope;
};

struct HomSettings {
    double delay_min_s = -1.5e-9;
    double delay_max_s = 1.5e-9;
    int steps = 61;
    PhaseModel phase_model = PhaseModel::correlated;
    double overlap_deficit = 0.9486832980505138;  // sqrt(0.9)
    int quadrature_nodes = 256;
    double accumulation_s = 1.0;
};

struct PhaseScanSettings {
    double theta_min_rad = -kPi;
    double theta_max_rad = kPi;
    int points = 25;
    int channel_1 = 0;
    int channel_2 = 0;
    TimeBinQubitSpec state_a{500.0, 500.0, 0.0, 0.0, Basis::X};
    TimeBinQubitSpec state_b{500.0, 500.0, 0.0, 0.0, Basis::X};
};

struct FrequencyScanSettings {
    double min_hz = -6e9;
    double max_hz = 6e9;
    double step_hz = 100e6;
};

struct KeyrateSettings {
    // Channels available to the key-rate scenario; 0 means as many as fit
    // the envelope bandwidth at the SSMM spacing.
    int max_modes = 0;
    // Largest M in the sweep; 0 means max_modes.
    int sweep_modes = 0;
    double hom_visibility = 0.42;
    double mean_photon_number = 0.1;
    double ec_inefficiency = 1.16;
    double source_rate_hz = 80e6;
    bool crosstalk_noise = false;
    int quadrature_nodes = 256;
    TimeBinQubitSpec z_qubit{0.0, 1000.0, 10.0, 0.0, Basis::Z};
    TimeBinQubitSpec x_qubit{500.0, 500.0, 10.0, 0.0, Basis::X};
};

struct OracleSettings {
    int fock_configs = 200;
    int fock_n_max = 8;
    double fock_tolerance = 1e-6;
    std::uint64_t repeater_trials = 1000000;
    std::uint64_t coincidence_trials = 400000;
};

/// Everything a CLI run needs. Default values describe the "current" preset.
struct RunConfig {
    std::string preset = "custom";
    SsmmParams ssmm;
    DetectorModel detector;
    SourceSettings source;
    HomSettings hom;
    PhaseScanSettings phase_scan;
    FrequencyScanSettings frequency_scan;
    KeyrateSettings keyrate;
    LinkConfig link;
    TbpOptions tbp;
    OracleSettings oracle;

    /// Checks every section; InvalidParameter becomes ConfigError naming the
    /// section, ConstraintViolation passes through.
    void validate() const;
};

/// Presets "current", "soa_coupling", "soa_coupling_dense", "matched_mode" and
/// "ideal".
RunConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

/// Parses a JSON document. A top-level "preset" key selects the base values;
/// otherwise `base` is used. Unknown or mistyped fields raise ConfigError with
/// their dotted path.
RunConfig parse_config(std::string_view json_text, const RunConfig& base = preset_config("current"));
RunConfig load_config(const std::string& path, const RunConfig& base = preset_config("current"));

/// Every field, with sorted keys and round-trip number formatting.
std::string canonical_json(const RunConfig& config);

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);
std::string config_digest(const RunConfig& config);

SsmmModel ssmm_model(const RunConfig& config);
InterferenceConfig interference_config(const RunConfig& config);
/// The config with both stations replaced by the given qubit states.
InterferenceConfig interference_config(const RunConfig& config, const TimeBinQubitSpec& state_a,
                                       const TimeBinQubitSpec& state_b);
ScenarioConfig scenario_config(const RunConfig& config);

}  // namespace specmux
