#pragma once

#include "specmux/photonic_core.hpp"

namespace specmux {

enum class Basis { Z, X };

/// Measured signal and background counts that characterize a prepared
/// time-bin qubit.
struct TimeBinQubitSpec {
    double signal_early = 0.0;
    double signal_late = 1000.0;
    double background = 0.0;
    double phase_rad = 0.0;
    Basis basis = Basis::Z;

    void validate() const;
};

/// Pure-state model of an imperfect time-bin qubit,
///   (sqrt(m + b)|e> + e^{i theta} sqrt(1 - m + b)|l>) / sqrt(1 + 2b),
/// with m = S_e / (S_e + S_l) and b = B / (S_e + S_l). The background enters
/// the amplitudes coherently.
struct QubitState {
    complex early;
    complex late;
    double m = 0.0;
    double b = 0.0;

    BinAmplitudes amplitudes() const { return {early, late}; }
};

QubitState build_state(const TimeBinQubitSpec& spec);

struct BasisErrorRates {
    double z;
    double x;
};

/// Error probabilities of a Bell-state measurement between two qubits.
///
/// Z: each state's wrong-bin weight is (b + leak * min(m, 1 - m)) / (1 + 2b);
/// the pair errs when exactly one of the two states lands in the wrong bin.
/// X: 1/2 - V |<psi_A|psi_B>|^2, clipped to [0, 1/2], where V is the
/// coherent-state HOM visibility (0.5 for perfect interference).
BasisErrorRates basis_error_rates(const QubitState& a, const QubitState& b, double hom_visibility,
                                  double leak = 0.0);

}  // namespace specmux
