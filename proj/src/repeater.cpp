#include "specmux/repeater.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "specmux/error.hpp"

namespace specmux {

void LinkConfig::validate() const
{
    if (!(distance_m > 0.0) || links < 1 || !(source_rate_hz > 0.0) || !(fiber_speed_m_per_s > 0.0)) {
        throw InvalidParameter("distance, link count, source rate and fiber speed must be positive");
    }
    if (!(loss_db_per_m >= 0.0) || !std::isfinite(loss_db_per_m)) {
        throw InvalidParameter("fiber loss must be finite and >= 0");
    }
    if (modes < 1) {
        throw InvalidParameter("mode count must be >= 1");
    }
    if (!(storage_time_s >= 0.0)) {
        throw InvalidParameter("storage time must be >= 0");
    }
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw InvalidParameter("efficiency must lie in [0, 1]");
    }
}

double link_transmission(const LinkConfig& cfg)
{
    cfg.validate();
    double const link_db = cfg.loss_db_per_m * cfg.distance_m / cfg.links;
    return cfg.efficiency * std::pow(10.0, -link_db / 10.0);
}

double multiplexed_success(double p, int modes)
{
    if (modes < 1 || !(p >= 0.0 && p <= 1.0)) {
        throw InvalidParameter("need p in [0, 1] and at least one mode");
    }
    if (modes == 1) {
        return p;
    }
    // 1 - (1 - p)^M without cancellation for small p
    return -std::expm1(modes * std::log1p(-p));
}

double relay_rate(const LinkConfig& cfg)
{
    LinkConfig single = cfg;
    single.links = 1;
    return cfg.source_rate_hz * link_transmission(single);
}

double repeater_rate(const LinkConfig& cfg)
{
    double const p = multiplexed_success(link_transmission(cfg), cfg.modes);
    return cfg.source_rate_hz * std::pow(p, cfg.links);
}

StorageConstraints storage_constraints(const LinkConfig& cfg)
{
    cfg.validate();
    double const fixed = cfg.distance_m / cfg.links / cfg.fiber_speed_m_per_s;
    return {cfg.storage_time_s * cfg.source_rate_hz, fixed, cfg.storage_time_s >= fixed};
}

void TbpOptions::validate() const
{
    if (!(total_bandwidth_hz > 0.0) || !(tbp_constant > 0.0)) {
        throw InvalidParameter("total bandwidth and TBP constant must be positive");
    }
    if (!(duty_cycle > 0.0 && duty_cycle <= 1.0)) {
        throw InvalidParameter("duty cycle must lie in (0, 1]");
    }
    if (points < 1 || !(tau_min_s > 0.0) || !(tau_max_s >= tau_min_s)) {
        throw InvalidParameter("pulse-duration grid is empty");
    }
    if (mode_cap < 0) {
        throw InvalidParameter("mode cap must be >= 0");
    }
}

TbpResult tbp_sweep(const LinkConfig& cfg, const TbpOptions& options)
{
    cfg.validate();
    options.validate();
    TbpResult result;
    result.table.columns = {"tau_s", "channel_width_hz", "modes", "source_rate_hz", "rate_hz"};
    result.optimum = {0.0, 0, -1.0};
    double const log_min = std::log(options.tau_min_s);
    double const log_step =
        options.points > 1 ? (std::log(options.tau_max_s) - log_min) / (options.points - 1) : 0.0;
    for (int i = 0; i < options.points; ++i) {
        double const tau = std::exp(log_min + log_step * i);
        double const width = options.tbp_constant / tau;
        double fitting = std::floor(options.total_bandwidth_hz / width * (1.0 + 1e-12));
        if (options.mode_cap > 0) {
            fitting = std::min(fitting, static_cast<double>(options.mode_cap));
        }
        int const modes = static_cast<int>(std::min(fitting, static_cast<double>(std::numeric_limits<int>::max())));
        double const source = options.duty_cycle / tau;
        double rate = 0.0;
        if (modes >= 1) {
            LinkConfig point = cfg;
            point.modes = modes;
            point.source_rate_hz = source;
            rate = repeater_rate(point);
        }
        result.table.rows.push_back({tau, width, static_cast<double>(modes), source, rate});
        if (rate > result.optimum.rate_hz) {
            result.optimum = {tau, modes, rate};
        }
    }
    return result;
}

RepeaterMonteCarlo monte_carlo_repeater(const LinkConfig& cfg, std::uint64_t trials, std::uint64_t seed)
{
    if (trials < 2) {
        throw InvalidParameter("need at least two trials");
    }
    double const p = link_transmission(cfg);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution attempt(p);
    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        bool all_links = true;
        for (int link = 0; link < cfg.links; ++link) {
            bool any_mode = false;
            for (int m = 0; m < cfg.modes; ++m) {
                // draw every mode so the stream layout is fixed
                any_mode = attempt(rng) || any_mode;
            }
            all_links = all_links && any_mode;
        }
        successes += all_links ? 1U : 0U;
    }
    double const n = static_cast<double>(trials);
    double const estimate = static_cast<double>(successes) / n;
    return {estimate, std::sqrt(estimate * (1.0 - estimate) / (n - 1.0))};
}

}  // namespace specmux
