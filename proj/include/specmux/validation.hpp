#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "specmux/config.hpp"
#include "specmux/hom_engine.hpp"

namespace specmux {

/// Random config inside the Fock oracle's domain: one or two modes, mu <= 0.2
/// per mode and station, arbitrary overlap, efficiencies, dark clicks,
/// passive transfer matrices and time-bin weights.
InterferenceConfig random_oracle_config(std::mt19937_64& rng);

struct OracleCheck {
    std::string name;
    double value;
    double reference;
    double tolerance;
    bool passed;
};

/// Analytic engine against the truncated-Fock oracle, the closed-form Bessel
/// result, quadrature refinement and Monte Carlo estimates.
std::vector<OracleCheck> run_oracle_suite(const RunConfig& config, std::uint64_t seed);

}  // namespace specmux
