#pragma once

#include <cstdint>

#include "specmux/sweep.hpp"

namespace specmux {

/// A chain of n elementary links over a total distance L.
struct LinkConfig {
    double distance_m = 100e3;
    int links = 2;
    double loss_db_per_m = 0.2e-3;
    double source_rate_hz = 80e6;
    int modes = 10;
    double storage_time_s = 100e-6;
    double fiber_speed_m_per_s = 2e8;
    // Multiplies every per-mode link success probability (1 = ideal BSMs and
    // detectors).
    double efficiency = 1.0;

    void validate() const;
};

/// Success probability of one mode over one elementary link.
double link_transmission(const LinkConfig& cfg);

/// Probability that at least one of `modes` independent attempts succeeds.
/// Returns p itself for a single mode.
double multiplexed_success(double p, int modes);

/// R_source 10^(-alpha L / 10).
double relay_rate(const LinkConfig& cfg);

/// R_source (1 - (1 - 10^(-(alpha L / n) / 10))^M)^n.
double repeater_rate(const LinkConfig& cfg);

struct StorageConstraints {
    double temporal_modes;    // t_store R_source
    double fixed_storage_s;   // (L / n) / v_fiber
    bool feasible;            // t_store >= t_fixed
};

StorageConstraints storage_constraints(const LinkConfig& cfg);

struct TbpOptions {
    double total_bandwidth_hz = 60e9;
    double tbp_constant = 1.0;
    double duty_cycle = 0.05;  // R_source = duty / tau
    double tau_min_s = 10e-12;
    double tau_max_s = 100e-9;
    int points = 121;
    // Upper bound on M from other hardware; 0 means bandwidth-limited only.
    int mode_cap = 0;

    void validate() const;
};

struct TbpOptimum {
    double tau_s;
    int modes;
    double rate_hz;
};

struct TbpResult {
    SweepResult table;  // tau_s, channel_width_hz, modes, source_rate_hz, rate_hz
    TbpOptimum optimum;
};

/// Repeater rate against pulse duration tau on a log grid. Channel width is
/// tbp_constant / tau and M = floor(total_bandwidth / width).
TbpResult tbp_sweep(const LinkConfig& cfg, const TbpOptions& options);

/// Monte Carlo estimate of repeater_rate / R_source from Bernoulli per-mode
/// successes.
struct RepeaterMonteCarlo {
    double probability;
    double standard_error;
};

RepeaterMonteCarlo monte_carlo_repeater(const LinkConfig& cfg, std::uint64_t trials, std::uint64_t seed);

}  // namespace specmux
