#include "specmux/mdi_keyrate.hpp"

#include <array>
#include <cmath>
#include <string>

#include "specmux/error.hpp"
#include "specmux/parallel.hpp"

namespace specmux {
namespace {

struct SlotClicks {
    std::array<std::array<double, 2>, 2> click;  // [port][bin]
};

// Probability that exactly the two given slots click.
double exactly(const SlotClicks& s, int port_e, int port_l)
{
    double p = 1.0;
    for (int port = 0; port < 2; ++port) {
        for (int bin = 0; bin < 2; ++bin) {
            bool const wanted = (bin == kEarly && port == port_e) || (bin == kLate && port == port_l);
            double const c = s.click[static_cast<std::size_t>(port)][static_cast<std::size_t>(bin)];
            p *= wanted ? c : 1.0 - c;
        }
    }
    return p;
}

TimeBinQubitSpec swapped_bins(TimeBinQubitSpec spec)
{
    std::swap(spec.signal_early, spec.signal_late);
    return spec;
}

// The two Z-basis states: bit 0 in the early bin, bit 1 in the late bin.
std::array<QubitState, 2> z_states(const ScenarioConfig& s)
{
    auto const late_heavy = s.z_qubit.signal_late >= s.z_qubit.signal_early ? s.z_qubit : swapped_bins(s.z_qubit);
    return {build_state(swapped_bins(late_heavy)), build_state(late_heavy)};
}

std::array<QubitState, 2> x_states(const ScenarioConfig& s)
{
    auto plus = s.x_qubit;
    plus.phase_rad = 0.0;
    auto minus = s.x_qubit;
    minus.phase_rad = kPi;
    return {build_state(plus), build_state(minus)};
}

struct ModeLink {
    double transmission;
    double noise;
};

ModeLink mode_link(const ScenarioConfig& s, const SsmmModel& ssmm, const std::vector<int>& used, int channel)
{
    auto const t = ssmm.crosstalk_matrix();
    ModeLink link{s.detector.efficiency * t(channel, channel), s.detector.dark_click_probability};
    if (s.crosstalk_noise) {
        // Each port carries mu photons of every used mode per pulse, spread
        // over two bins.
        double leak = 0.0;
        for (int other : used) {
            if (other != channel) {
                leak += s.detector.efficiency * t(channel, other) * 0.5 * s.mean_photon_number;
            }
        }
        link.noise = -std::expm1(std::log1p(-s.detector.dark_click_probability) - leak);
    }
    return link;
}

double rate_for_link(const ScenarioConfig& s, double transmission, double noise, ModeKeyRate& out)
{
    auto const z = z_states(s);
    auto const x = x_states(s);
    double const overlap = std::sqrt(2.0 * s.hom_visibility);
    double const mu = s.mean_photon_number;

    out.transmission = transmission;
    out.noise = noise;
    out.z = bsm_statistics(Basis::Z, z[0], z[1], transmission, transmission, noise, mu, overlap, s.quadrature_nodes);
    out.x = bsm_statistics(Basis::X, x[0], x[1], transmission, transmission, noise, mu, overlap, s.quadrature_nodes);

    double const intrinsic = basis_error_rates(x[0], x[0], s.hom_visibility).x;
    out.yield_11 = single_photon_yield(transmission, transmission, noise);
    out.error_11 = out.yield_11 > 0.0 ? single_photon_error(transmission, transmission, noise, intrinsic) : 0.5;

    double const p11 = mu * mu * std::exp(-2.0 * mu);
    double const secret = p11 * out.yield_11 * (1.0 - binary_entropy(out.error_11)) -
                          out.z.gain * s.ec_inefficiency * binary_entropy(out.z.error);
    out.rate_bits_per_s = s.source_rate_hz * std::max(0.0, secret);
    return out.rate_bits_per_s;
}

}  // namespace

void ScenarioConfig::validate() const
{
    SsmmModel const check(ssmm);
    detector.validate();
    z_qubit.validate();
    x_qubit.validate();
    if (mode_count < 1 || mode_count > max_modes()) {
        throw ConstraintViolation("scenario uses " + std::to_string(mode_count) + " modes but only " +
                                  std::to_string(max_modes()) + " fit the spectral bandwidth");
    }
    if (!(hom_visibility >= 0.0 && hom_visibility <= 0.5)) {
        throw InvalidParameter("HOM visibility must lie in [0, 0.5]");
    }
    if (!(source_rate_hz > 0.0) || !(mean_photon_number > 0.0) || !(ec_inefficiency >= 1.0)) {
        throw InvalidParameter("source rate and mean photon number must be positive, f >= 1");
    }
    if (quadrature_nodes < 8) {
        throw InvalidParameter("phase quadrature needs at least 8 nodes");
    }
}

int bandwidth_mode_limit(double bandwidth_hz, double spacing_hz)
{
    if (!(bandwidth_hz > 0.0) || !(spacing_hz > 0.0)) {
        throw InvalidParameter("bandwidth and spacing must be positive");
    }
    return std::max(1, static_cast<int>(std::floor(bandwidth_hz / spacing_hz + 1e-9)));
}

std::vector<std::string> scenario_preset_names() { return {"current", "soa_coupling", "soa_coupling_dense"}; }

ScenarioConfig scenario_preset(std::string_view name)
{
    ScenarioConfig s;
    s.name = std::string(name);
    s.ssmm.grid.center_hz = 0.0;
    s.ssmm.grid.spacing_hz = 8e9;
    s.ssmm.envelope_bandwidth_hz = 60e9;
    s.ssmm.grid.mode_count = bandwidth_mode_limit(s.ssmm.envelope_bandwidth_hz, s.ssmm.grid.spacing_hz);
    s.ssmm.adjacent_rejection_db = 10.0;
    s.ssmm.peak_coupling = 0.05;
    if (name == "current") {
        // measured: 5% coupling, adjacent rejection at most 10 dB
    } else if (name == "soa_coupling") {
        s.ssmm.peak_coupling = 0.5;
    } else if (name == "soa_coupling_dense") {
        s.ssmm.peak_coupling = 0.5;
        s.ssmm.grid.spacing_hz = 3.2e9;
        s.ssmm.adjacent_rejection_db.reset();
        s.ssmm.passband_fwhm_hz = 3.2e9;
        s.ssmm.grid.mode_count = 20;
    } else {
        throw ConfigError("preset", "unknown scenario preset '" + std::string(name) + "'");
    }
    s.mode_count = s.ssmm.grid.mode_count;
    return s;
}

double binary_entropy(double p)
{
    if (p <= 0.0 || p >= 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

BsmStatistics bsm_statistics(Basis basis, const QubitState& zero, const QubitState& one, double transmission_a,
                             double transmission_b, double noise, double mean_photon_number, double overlap,
                             int quadrature_nodes)
{
    std::array<const QubitState*, 2> const states{&zero, &one};
    double const scale_a = std::sqrt(mean_photon_number * transmission_a);
    double const scale_b = std::sqrt(mean_photon_number * transmission_b);
    double const log_keep = std::log1p(-noise);
    auto const nodes = phase_nodes(quadrature_nodes);
    double const weight = 0.25 / static_cast<double>(nodes.size());

    double gain = 0.0;
    double wrong = 0.0;
    for (int bit_a = 0; bit_a < 2; ++bit_a) {
        for (int bit_b = 0; bit_b < 2; ++bit_b) {
            auto amp_a = states[static_cast<std::size_t>(bit_a)]->amplitudes();
            auto amp_b = states[static_cast<std::size_t>(bit_b)]->amplitudes();
            for (auto& v : amp_a) {
                v *= scale_a;
            }
            for (auto& v : amp_b) {
                v *= scale_b;
            }
            for (double phi : nodes) {
                auto const lambda = bsm_slot_intensities(amp_a, amp_b, overlap, phi);
                SlotClicks slots;
                for (std::size_t port = 0; port < 2; ++port) {
                    for (std::size_t bin = 0; bin < 2; ++bin) {
                        slots.click[port][bin] = -std::expm1(log_keep - lambda[port][bin]);
                    }
                }
                double const psi_minus = exactly(slots, 0, 1) + exactly(slots, 1, 0);
                double const psi_plus = exactly(slots, 0, 0) + exactly(slots, 1, 1);
                gain += weight * (psi_minus + psi_plus);
                bool const same = bit_a == bit_b;
                if (basis == Basis::Z) {
                    // Z-basis heralds always mean opposite bins.
                    wrong += same ? weight * (psi_minus + psi_plus) : 0.0;
                } else {
                    // psi- anticorrelates the X outcomes, psi+ correlates them.
                    wrong += weight * (same ? psi_minus : psi_plus);
                }
            }
        }
    }
    return {gain, gain > 0.0 ? wrong / gain : 0.0};
}

double single_photon_yield(double ta, double tb, double y0)
{
    double const keep = (1.0 - y0) * (1.0 - y0);
    return keep * (0.5 * ta * tb + (2.0 * ta + 2.0 * tb - 3.0 * ta * tb) * y0 + 4.0 * (1.0 - ta) * (1.0 - tb) * y0 * y0);
}

double single_photon_error(double ta, double tb, double y0, double intrinsic_error)
{
    double const yield = single_photon_yield(ta, tb, y0);
    double const keep = (1.0 - y0) * (1.0 - y0);
    return (0.5 * yield - (0.5 - intrinsic_error) * keep * 0.5 * ta * tb) / yield;
}

ModeKeyRate mode_key_rate(const ScenarioConfig& scenario, int mode_index)
{
    scenario.validate();
    if (mode_index < 0 || mode_index >= scenario.mode_count) {
        throw InvalidParameter("mode index " + std::to_string(mode_index) + " out of range [0, " +
                               std::to_string(scenario.mode_count) + ")");
    }
    SsmmModel const ssmm(scenario.ssmm);
    auto order = center_outward_order(ssmm.grid());
    order.resize(static_cast<std::size_t>(scenario.mode_count));
    int const channel = order[static_cast<std::size_t>(mode_index)];
    auto const link = mode_link(scenario, ssmm, order, channel);

    ModeKeyRate out;
    out.channel = channel;
    rate_for_link(scenario, link.transmission, link.noise, out);
    return out;
}

double baseline_rate(const ScenarioConfig& scenario)
{
    scenario.validate();
    ModeKeyRate out;
    return rate_for_link(scenario, scenario.detector.efficiency, scenario.detector.dark_click_probability, out);
}

SweepResult RateCurve::table() const
{
    SweepResult out;
    out.columns = {"M", "rate_bits_per_s", "enhancement"};
    for (const auto& row : rows) {
        out.rows.push_back({static_cast<double>(row.modes), row.rate_bits_per_s, row.enhancement});
    }
    return out;
}

RateCurve enhancement_curve(const ScenarioConfig& scenario, int max_modes)
{
    if (max_modes < 1) {
        throw InvalidParameter("need at least one mode");
    }
    if (max_modes > scenario.max_modes()) {
        throw ConstraintViolation("M = " + std::to_string(max_modes) + " exceeds the bandwidth limit of " +
                                  std::to_string(scenario.max_modes()) + " modes for scenario '" +
                                  scenario.name + "'");
    }
    RateCurve curve;
    curve.scenario = scenario.name;
    curve.baseline_bits_per_s = baseline_rate(scenario);
    curve.rows.resize(static_cast<std::size_t>(max_modes));
    parallel_for(static_cast<std::size_t>(max_modes), [&](std::size_t i) {
        ScenarioConfig s = scenario;
        s.mode_count = static_cast<int>(i) + 1;
        double total = 0.0;
        for (int k = 0; k < s.mode_count; ++k) {
            total += mode_key_rate(s, k).rate_bits_per_s;
        }
        double const enhancement = curve.baseline_bits_per_s > 0.0 ? total / curve.baseline_bits_per_s : 0.0;
        curve.rows[i] = {s.mode_count, total, enhancement};
    });
    return curve;
}

}  // namespace specmux
