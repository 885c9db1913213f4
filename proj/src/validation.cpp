#include "specmux/validation.hpp"

#include <cmath>

#include "specmux/fock_oracle.hpp"
#include "specmux/parallel.hpp"
#include "specmux/repeater.hpp"

namespace specmux {

InterferenceConfig random_oracle_config(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int const modes = unit(rng) < 0.5 ? 1 : 2;

    auto random_bins = [&] {
        double const weight = unit(rng);
        return BinAmplitudes{std::sqrt(weight), std::polar(std::sqrt(1.0 - weight), 2.0 * kPi * unit(rng))};
    };
    auto random_pulse = [&](Station station) {
        auto pulse = make_pulse(station, modes, 0.0, random_bins());
        for (int m = 0; m < modes; ++m) {
            pulse.mean_photon_number[static_cast<std::size_t>(m)] = 0.2 * unit(rng);
            pulse.phase_offset_rad[static_cast<std::size_t>(m)] = 2.0 * kPi * unit(rng);
        }
        return pulse;
    };
    // Column-substochastic transfer matrix.
    auto random_transfer = [&] {
        CrosstalkMatrix t(modes);
        for (int m = 0; m < modes; ++m) {
            double budget = unit(rng);
            for (int c = 0; c < modes; ++c) {
                double const share = c == modes - 1 ? budget : budget * unit(rng);
                t(c, m) = share;
                budget -= share;
            }
        }
        return t;
    };

    InterferenceConfig config;
    config.pulse_a = random_pulse(Station::A);
    config.pulse_b = random_pulse(Station::B);
    config.transfer_1 = random_transfer();
    config.transfer_2 = random_transfer();
    for (auto& side : config.detectors) {
        side.clear();
        for (int c = 0; c < modes; ++c) {
            DetectorModel d;
            d.efficiency = unit(rng);
            d.dark_click_probability = 1e-3 * unit(rng);
            side.push_back(d);
        }
    }
    double const sigma = config.pulse_a.envelope.sigma();
    config.delay_s = 4.0 * sigma * (2.0 * unit(rng) - 1.0);
    config.overlap_deficit = unit(rng);
    config.phase_model = unit(rng) < 0.5 ? PhaseModel::correlated : PhaseModel::independent;
    return config;
}

std::vector<OracleCheck> run_oracle_suite(const RunConfig& config, std::uint64_t seed)
{
    std::vector<OracleCheck> checks;
    auto add = [&](std::string name, double value, double reference, double tolerance) {
        checks.push_back({std::move(name), value, reference, tolerance, std::abs(value - reference) <= tolerance});
    };

    // Analytic engine against the truncated-Fock oracle.
    {
        auto const count = static_cast<std::size_t>(config.oracle.fock_configs);
        std::vector<double> diff(count);
        parallel_for(count, [&](std::size_t i) {
            auto rng = point_rng(seed, i);
            auto const ic = random_oracle_config(rng);
            std::uniform_int_distribution<int> channel(0, ic.mode_count() - 1);
            int const c1 = channel(rng);
            int const c2 = channel(rng);
            double const analytic = coincidence_probability(ic, c1, c2);
            double const fock = fock_oracle_coincidence(ic, c1, c2, config.oracle.fock_n_max).probability;
            diff[i] = std::abs(analytic - fock);
        });
        double worst = 0.0;
        for (double d : diff) {
            worst = std::max(worst, d);
        }
        add("fock_max_abs_diff", worst, 0.0, config.oracle.fock_tolerance);
    }

    // Ideal single mode: p_cc = 1 - 2 e^{-mu} I0(mu) + e^{-2 mu} with mu = 0.1.
    InterferenceConfig ideal;
    ideal.pulse_a = make_pulse(Station::A, 1, 0.1);
    ideal.pulse_b = make_pulse(Station::B, 1, 0.1);
    DetectorModel perfect;
    perfect.efficiency = 1.0;
    perfect.dark_click_probability = 0.0;
    ideal.detectors = uniform_detectors(1, perfect);
    {
        double const mu = 0.1;
        double const closed = 1.0 - 2.0 * std::exp(-mu) * std::cyl_bessel_i(0.0, mu) + std::exp(-2.0 * mu);
        add("ideal_pcc_bessel", coincidence_probability(ideal, 0, 0), closed, 1e-12);
    }

    // Doubling the phase quadrature order.
    {
        auto ic = interference_config(config);
        double const base = coincidence_probability(ic, 0, 0);
        ic.quadrature_nodes *= 2;
        double const refined = coincidence_probability(ic, 0, 0);
        add("quadrature_doubling_rel", std::abs(refined - base) / std::max(base, 1e-300), 0.0, 1e-10);
    }

    // Monte Carlo of the coincidence probability, 4 standard errors.
    {
        auto const mc = monte_carlo_coincidence(ideal, 0, 0, config.oracle.coincidence_trials, seed ^ 0x5bd1e995ULL);
        add("coincidence_mc", mc.probability, coincidence_probability(ideal, 0, 0), 4.0 * mc.standard_error);
    }

    // Monte Carlo of the repeater success probability, 3 standard errors.
    {
        LinkConfig link = config.link;
        auto const mc = monte_carlo_repeater(link, config.oracle.repeater_trials, seed ^ 0x9e3779b97f4a7c15ULL);
        add("repeater_mc", mc.probability, repeater_rate(link) / link.source_rate_hz, 3.0 * mc.standard_error);
    }
    return checks;
}

}  // namespace specmux
