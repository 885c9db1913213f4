#include "specmux/qubit_model.hpp"

#include <algorithm>
#include <cmath>

#include "specmux/error.hpp"

namespace specmux {

void TimeBinQubitSpec::validate() const
{
    if (!(signal_early >= 0.0) || !(signal_late >= 0.0) || !(background >= 0.0)) {
        throw InvalidParameter("qubit signal and background counts must be >= 0");
    }
    if (!(signal_early + signal_late > 0.0)) {
        throw InvalidParameter("qubit needs a nonzero total signal S_e + S_l");
    }
}

QubitState build_state(const TimeBinQubitSpec& spec)
{
    spec.validate();
    double const signal = spec.signal_early + spec.signal_late;
    QubitState state;
    state.m = spec.signal_early / signal;
    state.b = spec.background / signal;
    double const norm = std::sqrt(1.0 + 2.0 * state.b);
    state.early = complex{std::sqrt(state.m + state.b) / norm, 0.0};
    state.late = std::polar(std::sqrt(1.0 - state.m + state.b) / norm, spec.phase_rad);
    return state;
}

BasisErrorRates basis_error_rates(const QubitState& a, const QubitState& b, double hom_visibility, double leak)
{
    if (!(hom_visibility >= 0.0 && hom_visibility <= 0.5)) {
        throw InvalidParameter("HOM visibility of coherent pulses must lie in [0, 0.5]");
    }
    auto wrong_bin = [leak](const QubitState& s) {
        return (s.b + std::min(s.m, 1.0 - s.m) * leak) / (1.0 + 2.0 * s.b);
    };
    double const za = wrong_bin(a);
    double const zb = wrong_bin(b);
    double const e_z = za + zb - 2.0 * za * zb;

    double const overlap = std::norm(std::conj(a.early) * b.early + std::conj(a.late) * b.late);
    double const e_x = std::clamp(0.5 - hom_visibility * overlap, 0.0, 0.5);
    return {e_z, e_x};
}

}  // namespace specmux
