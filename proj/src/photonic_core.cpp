#include "specmux/photonic_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "specmux/error.hpp"

namespace specmux {

void SpectralModeGrid::validate() const
{
    if (!(spacing_hz > 0.0) || !std::isfinite(spacing_hz)) {
        throw InvalidParameter("grid spacing must be positive, got " + std::to_string(spacing_hz));
    }
    if (mode_count < 1) {
        throw InvalidParameter("grid needs at least one mode, got " + std::to_string(mode_count));
    }
    if (!std::isfinite(center_hz)) {
        throw InvalidParameter("grid center must be finite");
    }
}

double SpectralModeGrid::offset(int mode) const
{
    return center_hz + (mode - 0.5 * (mode_count - 1)) * spacing_hz;
}

std::vector<double> SpectralModeGrid::offsets() const
{
    std::vector<double> out(static_cast<std::size_t>(mode_count));
    for (int m = 0; m < mode_count; ++m) {
        out[static_cast<std::size_t>(m)] = offset(m);
    }
    return out;
}

std::vector<int> center_outward_order(const SpectralModeGrid& grid)
{
    std::vector<int> order(static_cast<std::size_t>(grid.mode_count));
    std::iota(order.begin(), order.end(), 0);
    // Distance in units of the spacing is exact for symmetric grids, so the
    // two members of a +/- pair compare equal and the tie rule applies.
    auto distance = [&](int m) { return std::abs(m - 0.5 * (grid.mode_count - 1)); };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return distance(a) < distance(b); });
    return order;
}

void TemporalEnvelope::validate() const
{
    if (!(fwhm_s > 0.0) || !std::isfinite(fwhm_s)) {
        throw InvalidParameter("pulse fwhm must be positive, got " + std::to_string(fwhm_s));
    }
    if (!(bin_separation_s > fwhm_s)) {
        throw InvalidParameter("time-bin separation must exceed the pulse fwhm");
    }
}

double TemporalEnvelope::sigma() const
{
    return fwhm_s / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

double temporal_overlap(const TemporalEnvelope& envelope, double delay_s)
{
    if (!(envelope.fwhm_s > 0.0)) {
        throw InvalidParameter("pulse fwhm must be positive");
    }
    double const sigma = envelope.sigma();
    return std::exp(-delay_s * delay_s / (4.0 * sigma * sigma));
}

BinAmplitudes late_bin() { return {complex{0.0, 0.0}, complex{1.0, 0.0}}; }
BinAmplitudes early_bin() { return {complex{1.0, 0.0}, complex{0.0, 0.0}}; }

void WeakCoherentPulseSpec::validate() const
{
    if (mean_photon_number.empty()) {
        throw InvalidParameter("pulse must describe at least one spectral mode");
    }
    if (phase_offset_rad.size() != mean_photon_number.size()) {
        throw InvalidParameter("pulse phase offsets and photon numbers differ in length");
    }
    for (double mu : mean_photon_number) {
        if (!(mu >= 0.0) || !std::isfinite(mu)) {
            throw InvalidParameter("mean photon number must be finite and >= 0");
        }
    }
    double const norm = std::norm(bins[kEarly]) + std::norm(bins[kLate]);
    if (std::abs(norm - 1.0) > 1e-12) {
        throw InvalidParameter("time-bin amplitudes are not normalized (sum |w|^2 = " +
                               std::to_string(norm) + ")");
    }
    envelope.validate();
}

WeakCoherentPulseSpec make_pulse(Station station, int modes, double mean_photon_number,
                                 const BinAmplitudes& bins, const TemporalEnvelope& envelope)
{
    WeakCoherentPulseSpec spec;
    spec.station = station;
    spec.mean_photon_number.assign(static_cast<std::size_t>(modes), mean_photon_number);
    spec.phase_offset_rad.assign(static_cast<std::size_t>(modes), 0.0);
    spec.bins = bins;
    spec.envelope = envelope;
    return spec;
}

std::vector<BinAmplitudes> mode_amplitudes(const WeakCoherentPulseSpec& spec)
{
    spec.validate();
    std::vector<BinAmplitudes> out(spec.mode_count());
    for (std::size_t m = 0; m < spec.mode_count(); ++m) {
        complex const scale =
            std::sqrt(spec.mean_photon_number[m]) * std::polar(1.0, spec.phase_offset_rad[m]);
        out[m] = {scale * spec.bins[kEarly], scale * spec.bins[kLate]};
    }
    return out;
}

}  // namespace specmux
