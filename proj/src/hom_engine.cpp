#include "specmux/hom_engine.hpp"

#include <cmath>
#include <string>

#include "specmux/dip_fit.hpp"
#include "specmux/error.hpp"
#include "specmux/parallel.hpp"

namespace specmux {
namespace {

double no_click_factor(const DetectorModel& d) { return 1.0 - d.dark_click_probability; }

// 1 - (1 - d) exp(-lambda), without cancellation for small arguments.
double click(double log_no_dark, double lambda) { return -std::expm1(log_no_dark - lambda); }

void check_channel(const InterferenceConfig& config, int channel)
{
    if (channel < 0 || channel >= config.mode_count()) {
        throw InvalidParameter("channel index " + std::to_string(channel) + " out of range [0, " +
                               std::to_string(config.mode_count()) + ")");
    }
}

// Light reaching one detector, as a function of the random phase:
// lambda(phi) = offset + Re(sum_m amplitude_m exp(i phi_m)).
struct DetectorLoad {
    double offset = 0.0;
    std::vector<double> mode_offset;
    std::vector<complex> mode_amplitude;
};

DetectorLoad detector_load(const InterferenceConfig& config, const std::vector<complex>& terms, int ssmm,
                           int channel)
{
    auto const& t = ssmm == 1 ? config.transfer_1 : config.transfer_2;
    double const eta = config.detectors[static_cast<std::size_t>(ssmm - 1)][static_cast<std::size_t>(channel)].efficiency;
    double const sign = ssmm == 1 ? 1.0 : -1.0;
    DetectorLoad load;
    int const modes = config.mode_count();
    load.mode_offset.resize(static_cast<std::size_t>(modes));
    load.mode_amplitude.resize(static_cast<std::size_t>(modes));
    for (int m = 0; m < modes; ++m) {
        auto const mi = static_cast<std::size_t>(m);
        double const base = 0.5 * (config.pulse_a.mean_photon_number[mi] + config.pulse_b.mean_photon_number[mi]);
        double const w = eta * t(channel, m);
        load.mode_offset[mi] = w * base;
        load.mode_amplitude[mi] = sign * w * terms[mi];
        load.offset += load.mode_offset[mi];
    }
    return load;
}

// Average of exp(-offset - Re(c exp(i phi))) over phi.
double mean_no_click_exponent(double offset, complex amplitude, const std::vector<double>& nodes)
{
    double sum = 0.0;
    for (double phi : nodes) {
        sum += std::exp(-offset - std::real(amplitude * std::polar(1.0, phi)));
    }
    return sum / static_cast<double>(nodes.size());
}

std::string pair_label(const ChannelPair& pair)
{
    return "ch" + std::to_string(pair.channel_1 + 1) + "_ch" + std::to_string(pair.channel_2 + 1);
}

}  // namespace

void DetectorModel::validate() const
{
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw InvalidParameter("detector efficiency must lie in [0, 1]");
    }
    if (!(dark_click_probability >= 0.0 && dark_click_probability < 1.0)) {
        throw InvalidParameter("dark click probability must lie in [0, 1)");
    }
    if (!(coincidence_window_s > 0.0)) {
        throw InvalidParameter("coincidence window must be positive");
    }
}

void InterferenceConfig::validate() const
{
    pulse_a.validate();
    pulse_b.validate();
    auto const modes = static_cast<std::size_t>(mode_count());
    if (transfer_2.size() != transfer_1.size()) {
        throw InvalidParameter("the two SSMMs must share the same spectral grid");
    }
    if (pulse_a.mode_count() != modes || pulse_b.mode_count() != modes) {
        throw InvalidParameter("pulse mode count does not match the SSMM grid");
    }
    if (pulse_a.envelope.fwhm_s != pulse_b.envelope.fwhm_s ||
        pulse_a.envelope.bin_separation_s != pulse_b.envelope.bin_separation_s) {
        throw InvalidParameter("both stations must use the same temporal envelope");
    }
    for (const auto* t : {&transfer_1, &transfer_2}) {
        for (int c = 0; c < t->size(); ++c) {
            for (int m = 0; m < t->size(); ++m) {
                double const v = (*t)(c, m);
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw InvalidParameter("SSMM transmission outside [0, 1]");
                }
            }
        }
    }
    for (const auto& side : detectors) {
        if (side.size() != modes) {
            throw InvalidParameter("need one detector per SSMM channel");
        }
        for (const auto& d : side) {
            d.validate();
        }
    }
    if (!(overlap_deficit >= 0.0 && overlap_deficit <= 1.0)) {
        throw InvalidParameter("overlap deficit must lie in [0, 1]");
    }
    if (quadrature_nodes < 8) {
        throw InvalidParameter("phase quadrature needs at least 8 nodes");
    }
}

std::array<std::vector<DetectorModel>, 2> uniform_detectors(int channels, const DetectorModel& detector)
{
    std::vector<DetectorModel> side(static_cast<std::size_t>(channels), detector);
    return {side, side};
}

InterferenceConfig make_interference_config(WeakCoherentPulseSpec pulse_a, WeakCoherentPulseSpec pulse_b,
                                            const SsmmModel& ssmm_1, const SsmmModel& ssmm_2,
                                            const DetectorModel& detector)
{
    auto const& g1 = ssmm_1.grid();
    auto const& g2 = ssmm_2.grid();
    if (g1.mode_count != g2.mode_count || g1.spacing_hz != g2.spacing_hz || g1.center_hz != g2.center_hz) {
        throw InvalidParameter("the two SSMMs must share the same spectral grid");
    }
    InterferenceConfig config;
    config.pulse_a = std::move(pulse_a);
    config.pulse_b = std::move(pulse_b);
    config.pulse_a.station = Station::A;
    config.pulse_b.station = Station::B;
    config.transfer_1 = ssmm_1.crosstalk_matrix();
    config.transfer_2 = ssmm_2.crosstalk_matrix();
    config.detectors = uniform_detectors(g1.mode_count, detector);
    config.validate();
    return config;
}

std::vector<double> phase_nodes(int count)
{
    std::vector<double> nodes(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        nodes[static_cast<std::size_t>(k)] = 2.0 * kPi * k / count;
    }
    return nodes;
}

std::vector<complex> interference_terms(const InterferenceConfig& config)
{
    auto const& env = config.pulse_a.envelope;
    double const separation = env.bin_separation_s;
    // Temporal overlap of A's pulse with B's delayed pulse, summed over every
    // bin pairing.
    complex overlap{0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            double const shift = config.delay_s + (k - j) * separation;
            overlap += std::conj(config.pulse_a.bins[static_cast<std::size_t>(j)]) *
                       config.pulse_b.bins[static_cast<std::size_t>(k)] * temporal_overlap(env, shift);
        }
    }
    overlap *= config.overlap_deficit;
    // Bins are only approximately orthogonal; keep the overlap physical.
    if (std::abs(overlap) > 1.0) {
        overlap /= std::abs(overlap);
    }

    std::vector<complex> terms(static_cast<std::size_t>(config.mode_count()));
    for (std::size_t m = 0; m < terms.size(); ++m) {
        double const mu_a = config.pulse_a.mean_photon_number[m];
        double const mu_b = config.pulse_b.mean_photon_number[m];
        double const relative_phase = config.pulse_b.phase_offset_rad[m] - config.pulse_a.phase_offset_rad[m];
        terms[m] = std::sqrt(mu_a * mu_b) * overlap * std::polar(1.0, relative_phase);
    }
    return terms;
}

std::vector<PortIntensity> port_intensities(const InterferenceConfig& config, std::span<const double> phases)
{
    auto const terms = interference_terms(config);
    std::size_t const modes = terms.size();
    if (phases.size() != 1 && phases.size() != modes) {
        throw InvalidParameter("need one phase, or one phase per mode");
    }
    std::vector<PortIntensity> out(modes);
    for (std::size_t m = 0; m < modes; ++m) {
        double const phi = phases.size() == 1 ? phases[0] : phases[m];
        double const base = 0.5 * (config.pulse_a.mean_photon_number[m] + config.pulse_b.mean_photon_number[m]);
        double const cross = std::real(terms[m] * std::polar(1.0, phi));
        out[m] = {base + cross, base - cross};
    }
    return out;
}

double coincidence_probability(const InterferenceConfig& config, int channel_1, int channel_2)
{
    config.validate();
    check_channel(config, channel_1);
    check_channel(config, channel_2);
    auto const terms = interference_terms(config);
    auto const load_1 = detector_load(config, terms, 1, channel_1);
    auto const load_2 = detector_load(config, terms, 2, channel_2);
    auto const& det_1 = config.detectors[0][static_cast<std::size_t>(channel_1)];
    auto const& det_2 = config.detectors[1][static_cast<std::size_t>(channel_2)];
    auto const nodes = phase_nodes(config.quadrature_nodes);

    if (config.phase_model == PhaseModel::correlated) {
        complex amp_1{0.0, 0.0};
        complex amp_2{0.0, 0.0};
        for (std::size_t m = 0; m < terms.size(); ++m) {
            amp_1 += load_1.mode_amplitude[m];
            amp_2 += load_2.mode_amplitude[m];
        }
        double const log_1 = std::log1p(-det_1.dark_click_probability);
        double const log_2 = std::log1p(-det_2.dark_click_probability);
        double sum = 0.0;
        for (double phi : nodes) {
            complex const rot = std::polar(1.0, phi);
            double const lambda_1 = load_1.offset + std::real(amp_1 * rot);
            double const lambda_2 = load_2.offset + std::real(amp_2 * rot);
            sum += click(log_1, lambda_1) * click(log_2, lambda_2);
        }
        return sum / static_cast<double>(nodes.size());
    }

    // Independent phases: the no-click exponentials factorize over modes.
    double none_1 = no_click_factor(det_1);
    double none_2 = no_click_factor(det_2);
    double none_both = no_click_factor(det_1) * no_click_factor(det_2);
    for (std::size_t m = 0; m < terms.size(); ++m) {
        none_1 *= mean_no_click_exponent(load_1.mode_offset[m], load_1.mode_amplitude[m], nodes);
        none_2 *= mean_no_click_exponent(load_2.mode_offset[m], load_2.mode_amplitude[m], nodes);
        none_both *= mean_no_click_exponent(load_1.mode_offset[m] + load_2.mode_offset[m],
                                            load_1.mode_amplitude[m] + load_2.mode_amplitude[m], nodes);
    }
    return 1.0 - none_1 - none_2 + none_both;
}

double click_probability(const InterferenceConfig& config, int ssmm, int channel)
{
    config.validate();
    check_channel(config, channel);
    if (ssmm != 1 && ssmm != 2) {
        throw InvalidParameter("ssmm index must be 1 or 2");
    }
    auto const terms = interference_terms(config);
    auto const load = detector_load(config, terms, ssmm, channel);
    auto const& det = config.detectors[static_cast<std::size_t>(ssmm - 1)][static_cast<std::size_t>(channel)];
    auto const nodes = phase_nodes(config.quadrature_nodes);
    double none = no_click_factor(det);
    if (config.phase_model == PhaseModel::correlated) {
        complex amp{0.0, 0.0};
        for (auto a : load.mode_amplitude) {
            amp += a;
        }
        none *= mean_no_click_exponent(load.offset, amp, nodes);
    } else {
        for (std::size_t m = 0; m < terms.size(); ++m) {
            none *= mean_no_click_exponent(load.mode_offset[m], load.mode_amplitude[m], nodes);
        }
    }
    return 1.0 - none;
}

CoincidenceResult simulate(const InterferenceConfig& config, double source_rate_hz)
{
    int const n = config.mode_count();
    CoincidenceResult out;
    for (int s = 0; s < 2; ++s) {
        for (int c = 0; c < n; ++c) {
            out.singles[static_cast<std::size_t>(s)].push_back(click_probability(config, s + 1, c));
        }
    }
    out.coincidence.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    out.coincidence_rate_hz = out.coincidence;
    for (int c1 = 0; c1 < n; ++c1) {
        for (int c2 = 0; c2 < n; ++c2) {
            double const p = coincidence_probability(config, c1, c2);
            out.coincidence[static_cast<std::size_t>(c1)][static_cast<std::size_t>(c2)] = p;
            out.coincidence_rate_hz[static_cast<std::size_t>(c1)][static_cast<std::size_t>(c2)] = p * source_rate_hz;
        }
    }
    return out;
}

MonteCarloEstimate monte_carlo_coincidence(const InterferenceConfig& config, int channel_1, int channel_2,
                                           std::uint64_t trials, std::uint64_t seed)
{
    config.validate();
    check_channel(config, channel_1);
    check_channel(config, channel_2);
    if (trials == 0) {
        throw InvalidParameter("Monte Carlo needs at least one trial");
    }
    auto const terms = interference_terms(config);
    auto const load_1 = detector_load(config, terms, 1, channel_1);
    auto const load_2 = detector_load(config, terms, 2, channel_2);
    double const d_1 = config.detectors[0][static_cast<std::size_t>(channel_1)].dark_click_probability;
    double const d_2 = config.detectors[1][static_cast<std::size_t>(channel_2)].dark_click_probability;

    auto rng = point_rng(seed, 0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::vector<double> phases(terms.size());
    std::uint64_t hits = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        if (config.phase_model == PhaseModel::correlated) {
            std::fill(phases.begin(), phases.end(), angle(rng));
        } else {
            for (auto& p : phases) {
                p = angle(rng);
            }
        }
        double lambda_1 = load_1.offset;
        double lambda_2 = load_2.offset;
        for (std::size_t m = 0; m < terms.size(); ++m) {
            complex const rot = std::polar(1.0, phases[m]);
            lambda_1 += std::real(load_1.mode_amplitude[m] * rot);
            lambda_2 += std::real(load_2.mode_amplitude[m] * rot);
        }
        auto const photons_1 = lambda_1 > 0.0 ? std::poisson_distribution<long>(lambda_1)(rng) : 0L;
        auto const photons_2 = lambda_2 > 0.0 ? std::poisson_distribution<long>(lambda_2)(rng) : 0L;
        bool const click_1 = photons_1 > 0 || uniform(rng) < d_1;
        bool const click_2 = photons_2 > 0 || uniform(rng) < d_2;
        hits += (click_1 && click_2) ? 1 : 0;
    }
    double const p = static_cast<double>(hits) / static_cast<double>(trials);
    return {p, std::sqrt(std::max(p * (1.0 - p), 1.0 / static_cast<double>(trials)) / static_cast<double>(trials))};
}

double visibility(double c_dist, double c_indist)
{
    if (!(c_dist > 0.0)) {
        throw InvalidParameter("visibility is undefined when the distinguishable count is zero");
    }
    if (c_indist < 0.0) {
        throw InvalidParameter("coincidence counts cannot be negative");
    }
    return (c_dist - c_indist) / c_dist;
}

SweepResult hom_dip_scan(const InterferenceConfig& config, const DipScanOptions& options)
{
    config.validate();
    if (options.steps < 3) {
        throw InvalidParameter("a dip scan needs at least 3 steps");
    }
    if (!(options.delay_min_s < options.delay_max_s)) {
        throw InvalidParameter("dip scan delay range is empty");
    }
    auto pairs = options.pairs;
    if (pairs.empty()) {
        for (int c1 = 0; c1 < config.mode_count(); ++c1) {
            for (int c2 = 0; c2 < config.mode_count(); ++c2) {
                pairs.push_back({c1, c2});
            }
        }
    }
    for (const auto& pair : pairs) {
        check_channel(config, pair.channel_1);
        check_channel(config, pair.channel_2);
    }

    SweepResult out;
    out.columns.push_back("delay_s");
    for (const auto& pair : pairs) {
        out.columns.push_back((options.counts ? "counts_" : "p_cc_") + pair_label(pair));
    }
    auto const steps = static_cast<std::size_t>(options.steps);
    out.rows.assign(steps, std::vector<double>(pairs.size() + 1));

    parallel_for(steps, [&](std::size_t i) {
        InterferenceConfig point = config;
        point.delay_s = options.delay_min_s +
                        (options.delay_max_s - options.delay_min_s) * static_cast<double>(i) /
                            static_cast<double>(steps - 1);
        auto& row = out.rows[i];
        row[0] = point.delay_s;
        auto rng = options.counts ? point_rng(options.counts->seed, i) : std::mt19937_64{};
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            double value = coincidence_probability(point, pairs[k].channel_1, pairs[k].channel_2);
            if (options.counts) {
                value *= options.counts->source_rate_hz * options.counts->accumulation_s;
                if (options.counts->poisson && value > 0.0) {
                    value = static_cast<double>(std::poisson_distribution<long long>(value)(rng));
                }
            }
            row[k + 1] = value;
        }
    });
    return out;
}

SweepResult phase_scan(const InterferenceConfig& config, const PhaseScanOptions& options)
{
    for (const auto* pulse : {&config.pulse_a, &config.pulse_b}) {
        if (std::abs(pulse->bins[kEarly]) == 0.0 || std::abs(pulse->bins[kLate]) == 0.0) {
            throw InvalidParameter("phase scan needs early/late superposition states at both stations");
        }
    }
    if (options.theta_rad.empty()) {
        throw InvalidParameter("phase scan needs at least one phase value");
    }
    DipScanOptions dip = options.dip;
    dip.pairs = {options.pair};

    SweepResult out;
    out.columns = {"theta_rad", "visibility"};
    out.rows.reserve(options.theta_rad.size());
    for (double theta : options.theta_rad) {
        InterferenceConfig point = config;
        point.pulse_b.bins[kLate] *= std::polar(1.0, theta);
        auto const scan = hom_dip_scan(point, dip);
        auto const fit = fit_gaussian_dip(scan, 1);
        out.rows.push_back({theta, fit.visibility});
    }
    return out;
}

SlotIntensities bsm_slot_intensities(const BinAmplitudes& a, const BinAmplitudes& b, double overlap,
                                     double phase_rad)
{
    complex const rot = std::polar(1.0, phase_rad);
    SlotIntensities out{};
    for (std::size_t bin = 0; bin < 2; ++bin) {
        complex const a_k = a[bin];
        complex const b_par = overlap * b[bin] * rot;
        // The part of B's pulse orthogonal to A's splits evenly without
        // interfering.
        double const b_perp = (1.0 - overlap * overlap) * std::norm(b[bin]);
        out[0][bin] = 0.5 * std::norm(a_k + b_par) + 0.5 * b_perp;
        out[1][bin] = 0.5 * std::norm(a_k - b_par) + 0.5 * b_perp;
    }
    return out;
}

}  // namespace specmux
