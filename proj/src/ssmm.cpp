#include "specmux/ssmm.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "specmux/error.hpp"

namespace specmux {
namespace {

// 4 ln 2: converts (x / FWHM)^2 into the exponent of a Gaussian.
double const kFwhmExponent = 4.0 * std::log(2.0);

}  // namespace

CrosstalkMatrix CrosstalkMatrix::identity(int size)
{
    CrosstalkMatrix t(size);
    for (int i = 0; i < size; ++i) {
        t(i, i) = 1.0;
    }
    return t;
}

double passband_fwhm_for_rejection(double spacing_hz, double rejection_db)
{
    if (!(rejection_db > 0.0) || !std::isfinite(rejection_db)) {
        throw InvalidParameter("adjacent rejection must be positive, got " +
                               std::to_string(rejection_db));
    }
    // 10 log10(exp(4 ln2 s^2 / w^2)) = R  =>  w = s sqrt(10 log10(e) 4 ln2 / R)
    return spacing_hz * std::sqrt(10.0 * std::log10(std::exp(1.0)) * kFwhmExponent / rejection_db);
}

SsmmModel::SsmmModel(SsmmParams params) : params_(std::move(params))
{
    params_.grid.validate();
    if (!(params_.peak_coupling >= 0.0 && params_.peak_coupling <= 1.0)) {
        throw InvalidParameter("peak coupling must lie in [0, 1], got " +
                               std::to_string(params_.peak_coupling));
    }
    passband_fwhm_ = params_.adjacent_rejection_db
                         ? passband_fwhm_for_rejection(params_.grid.spacing_hz, *params_.adjacent_rejection_db)
                         : params_.passband_fwhm_hz;
    if (!(passband_fwhm_ > 0.0) || !std::isfinite(passband_fwhm_)) {
        throw InvalidParameter("passband fwhm must be positive");
    }
    if (params_.envelope_shape == CouplingEnvelope::gaussian) {
        if (!(params_.envelope_bandwidth_hz > 0.0)) {
            throw InvalidParameter("envelope bandwidth must be positive");
        }
        // Outermost channel centers may sit up to half a spacing outside the
        // band edge.
        if (params_.grid.span() > params_.envelope_bandwidth_hz + params_.grid.spacing_hz) {
            throw ConstraintViolation(
                std::to_string(params_.grid.mode_count) + " modes at " + format_number(params_.grid.spacing_hz * 1e-9) +
                " GHz spacing exceed the " + format_number(params_.envelope_bandwidth_hz * 1e-9) +
                " GHz spectral bandwidth");
        }
    }

    auto const t = crosstalk_matrix();
    for (int m = 0; m < t.size(); ++m) {
        double column = 0.0;
        for (int c = 0; c < t.size(); ++c) {
            column += t(c, m);
            if (c != m && t(c, m) >= t(m, m) && t(m, m) > 0.0) {
                throw InvalidParameter("crosstalk into channel " + std::to_string(c) +
                                       " is not below the direct transmission of mode " +
                                       std::to_string(m));
            }
        }
        if (column > 1.0) {
            throw InvalidParameter("mode " + std::to_string(m) +
                                   " has total transmission above 1; passband too wide for the grid");
        }
    }
}

double SsmmModel::passband(double detuning_hz) const
{
    double const x = detuning_hz / passband_fwhm_;
    return std::exp(-kFwhmExponent * x * x);
}

double SsmmModel::envelope(double frequency_hz) const
{
    if (params_.envelope_shape == CouplingEnvelope::flat) {
        return std::isfinite(frequency_hz) ? 1.0 : 0.0;
    }
    double const x = (frequency_hz - params_.nominal_frequency_hz) / params_.envelope_bandwidth_hz;
    return std::exp(-kFwhmExponent * x * x);
}

double SsmmModel::adjacent_rejection_db() const
{
    return -10.0 * std::log10(passband(params_.grid.spacing_hz));
}

double SsmmModel::transmission(int channel, double frequency_hz) const
{
    if (channel < 0 || channel >= channel_count()) {
        throw InvalidParameter("channel index " + std::to_string(channel) + " out of range [0, " +
                               std::to_string(channel_count()) + ")");
    }
    // The coupling envelope belongs to the output fiber position, so it is
    // evaluated at the channel center; the passband is what depends on the
    // light's frequency.
    double const center = params_.grid.offset(channel);
    double const detuning = frequency_hz - center;
    if (!std::isfinite(detuning)) {
        return 0.0;
    }
    return params_.peak_coupling * envelope(center) * passband(detuning);
}

CrosstalkMatrix SsmmModel::crosstalk_matrix() const
{
    int const n = channel_count();
    CrosstalkMatrix t(n);
    for (int c = 0; c < n; ++c) {
        for (int m = 0; m < n; ++m) {
            t(c, m) = transmission(c, params_.grid.offset(m));
        }
    }
    return t;
}

double SsmmModel::spatial_position_m(int channel) const
{
    double const detuning = params_.grid.offset(channel) - params_.nominal_frequency_hz;
    return params_.focal_length_m * params_.angular_dispersion_rad_per_hz * detuning;
}

SweepResult frequency_response_scan(const SsmmModel& model, double f_min_hz, double f_max_hz,
                                    double step_hz)
{
    if (!(f_min_hz < f_max_hz) || !(step_hz > 0.0)) {
        throw InvalidParameter("frequency scan needs f_min < f_max and a positive step");
    }
    SweepResult out;
    out.columns.push_back("frequency_hz");
    for (int c = 0; c < model.channel_count(); ++c) {
        out.columns.push_back("transmission_ch" + std::to_string(c + 1));
    }
    auto const points = static_cast<std::size_t>(std::floor((f_max_hz - f_min_hz) / step_hz + 1e-9)) + 1;
    out.rows.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        double const f = f_min_hz + static_cast<double>(i) * step_hz;
        std::vector<double> row{f};
        for (int c = 0; c < model.channel_count(); ++c) {
            row.push_back(model.transmission(c, f));
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace specmux
