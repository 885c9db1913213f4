#pragma once

#include <stdexcept>

#include "specmux/hom_engine.hpp"

namespace specmux {

class TruncationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct FockOracleResult {
    double probability;
    // Upper bound on the error introduced by truncating every coherent
    // input at n_max photons.
    double truncation_bound;
};

/// Brute-force coincidence probability in a truncated photon-number basis.
///
/// Each spectral mode is treated as two independent two-mode systems: A's
/// pulse with the component of B's pulse that shares A's temporal mode, and
/// vacuum with B's orthogonal remainder. Coherent inputs are expanded up to
/// `n_max` photons, propagated through the exact beam-splitter unitary, and
/// measured with threshold-detector no-click operators
/// (1 - d) * prod_m (1 - eta T[c][m])^n_m. The random phase is averaged with
/// the config's quadrature order.
///
/// Supports at most two spectral modes. Throws TruncationError when
/// n_max < 6 or the Poisson tail beyond n_max could shift the result by more
/// than 1e-8.
FockOracleResult fock_oracle_coincidence(const InterferenceConfig& config, int channel_1, int channel_2,
                                         int n_max = 8);

}  // namespace specmux
