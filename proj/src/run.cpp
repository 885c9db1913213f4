#include "specmux/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include <json.hpp>

#include "specmux/config.hpp"
#include "specmux/dip_fit.hpp"
#include "specmux/error.hpp"
#include "specmux/validation.hpp"

namespace specmux {
namespace {

namespace fs = std::filesystem;

class OracleFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Context {
    const RunOptions& options;
    const RunConfig& config;
    std::ostream& log;
    std::vector<std::string> outputs;

    void write(const std::string& name, const std::function<void(std::ostream&)>& body)
    {
        fs::path const path = fs::path(options.out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write '" + path.string() + "'");
        }
        body(out);
        if (!out) {
            throw std::runtime_error("write failed for '" + path.string() + "'");
        }
        outputs.push_back(name);
    }

    void write(const std::string& name, const SweepResult& table)
    {
        write(name, [&](std::ostream& out) { table.write_csv(out); });
    }

    std::optional<CountsMode> counts() const
    {
        if (!options.counts) {
            return std::nullopt;
        }
        return CountsMode{config.source.source_rate_hz, config.hom.accumulation_s, options.poisson, options.seed};
    }

    DipScanOptions dip_options() const
    {
        DipScanOptions dip;
        dip.delay_min_s = config.hom.delay_min_s;
        dip.delay_max_s = config.hom.delay_max_s;
        dip.steps = config.hom.steps;
        dip.counts = counts();
        return dip;
    }
};

void freq_response(Context& ctx)
{
    SsmmModel const model = ssmm_model(ctx.config);
    const auto& scan = ctx.config.frequency_scan;
    auto const table = frequency_response_scan(model, scan.min_hz, scan.max_hz, scan.step_hz);
    ctx.write("freq_response.csv", table);
    for (int c = 0; c < model.channel_count(); ++c) {
        auto const column = table.column(static_cast<std::size_t>(c) + 1);
        auto const peak = std::max_element(column.begin(), column.end()) - column.begin();
        char line[128];
        std::snprintf(line, sizeof line, "channel %d: peak %.6g at %.6g GHz\n", c + 1, column[static_cast<std::size_t>(peak)],
                      table.rows[static_cast<std::size_t>(peak)][0] * 1e-9);
        ctx.log << line;
    }
}

DipFit fit_or_best(const SweepResult& scan, std::size_t column)
{
    try {
        return fit_gaussian_dip(scan, column);
    } catch (const FitError& e) {
        return e.best();
    }
}

void hom_dip(Context& ctx)
{
    auto const ic = interference_config(ctx.config);
    auto const scan = hom_dip_scan(ic, ctx.dip_options());
    ctx.write("hom_dip.csv", scan);

    SweepResult fits;
    fits.columns = {"channel_1",  "channel_2",       "baseline",      "visibility",
                    "visibility_stderr", "center_s", "width_s", "residual_norm", "converged"};
    std::size_t column = 1;
    for (int c1 = 0; c1 < ic.mode_count(); ++c1) {
        for (int c2 = 0; c2 < ic.mode_count(); ++c2, ++column) {
            auto const fit = fit_or_best(scan, column);
            fits.rows.push_back({static_cast<double>(c1 + 1), static_cast<double>(c2 + 1), fit.baseline,
                                 fit.visibility, fit.standard_error[1], fit.center_s, fit.width_s, fit.residual_norm,
                                 fit.converged ? 1.0 : 0.0});
            char line[128];
            std::snprintf(line, sizeof line, "pair (%d,%d): V = %.4f\n", c1 + 1, c2 + 1, fit.visibility);
            ctx.log << line;
        }
    }
    ctx.write("hom_dip_fits.csv", fits);
}

void phase_scan_cmd(Context& ctx)
{
    const auto& ps = ctx.config.phase_scan;
    auto const ic = interference_config(ctx.config, ps.state_a, ps.state_b);
    PhaseScanOptions options;
    for (int i = 0; i < ps.points; ++i) {
        double const frac = ps.points > 1 ? static_cast<double>(i) / (ps.points - 1) : 0.0;
        options.theta_rad.push_back(ps.theta_min_rad + (ps.theta_max_rad - ps.theta_min_rad) * frac);
    }
    options.pair = {ps.channel_1, ps.channel_2};
    options.dip = ctx.dip_options();
    ctx.write("phase_scan.csv", phase_scan(ic, options));
}

void write_curve(Context& ctx, const ScenarioConfig& scenario, int sweep_modes)
{
    auto const curve = enhancement_curve(scenario, sweep_modes > 0 ? sweep_modes : scenario.max_modes());
    ctx.write("keyrate_" + scenario.name + ".csv", curve.table());
    char line[160];
    std::snprintf(line, sizeof line, "%s: baseline %.6g bit/s, enhancement at M=%d: %.4f\n", scenario.name.c_str(),
                  curve.baseline_bits_per_s, curve.rows.back().modes, curve.rows.back().enhancement);
    ctx.log << line;
}

void keyrate_sweep(Context& ctx)
{
    if (ctx.options.preset || ctx.options.config_path) {
        write_curve(ctx, scenario_config(ctx.config), ctx.config.keyrate.sweep_modes);
        return;
    }
    for (const auto& name : scenario_preset_names()) {
        auto const preset = preset_config(name);
        write_curve(ctx, scenario_config(preset), preset.keyrate.sweep_modes);
    }
}

void repeater_cmd(Context& ctx)
{
    LinkConfig link = ctx.config.link;
    auto const storage = storage_constraints(link);
    SweepResult table;
    table.columns = {"modes",           "link_success",    "relay_rate_hz",  "repeater_rate_hz",
                     "temporal_modes",  "fixed_storage_s", "storage_feasible"};
    int const max_modes = link.modes;
    for (int m = 1; m <= max_modes; ++m) {
        link.modes = m;
        table.rows.push_back({static_cast<double>(m), multiplexed_success(link_transmission(link), m), relay_rate(link),
                              repeater_rate(link), storage.temporal_modes, storage.fixed_storage_s,
                              storage.feasible ? 1.0 : 0.0});
    }
    ctx.write("repeater_rate.csv", table);
    char line[200];
    std::snprintf(line, sizeof line, "relay %.6g Hz, repeater (M=%d) %.6g Hz, t_fixed %.6g s (%s)\n", relay_rate(link),
                  max_modes, repeater_rate(link), storage.fixed_storage_s,
                  storage.feasible ? "feasible" : "infeasible");
    ctx.log << line;
}

void tbp_cmd(Context& ctx)
{
    auto const result = tbp_sweep(ctx.config.link, ctx.config.tbp);
    ctx.write("tbp_sweep.csv", result.table);
    SweepResult optimum;
    optimum.columns = {"tau_s", "modes", "rate_hz"};
    optimum.rows.push_back({result.optimum.tau_s, static_cast<double>(result.optimum.modes), result.optimum.rate_hz});
    ctx.write("tbp_optimum.csv", optimum);
    char line[160];
    std::snprintf(line, sizeof line, "optimum: tau %.6g s, M = %d, rate %.6g Hz\n", result.optimum.tau_s,
                  result.optimum.modes, result.optimum.rate_hz);
    ctx.log << line;
}

void validate_oracle(Context& ctx)
{
    auto const checks = run_oracle_suite(ctx.config, ctx.options.seed);
    ctx.write("validate_oracle.csv", [&](std::ostream& out) {
        out << "check,value,reference,tolerance,pass\n";
        for (const auto& c : checks) {
            out << c.name << ',' << format_number(c.value) << ',' << format_number(c.reference) << ','
                << format_number(c.tolerance) << ',' << (c.passed ? 1 : 0) << '\n';
        }
    });
    bool all = true;
    for (const auto& c : checks) {
        char line[200];
        std::snprintf(line, sizeof line, "%-26s %-4s value %.6e  reference %.6e  tolerance %.3e\n", c.name.c_str(),
                      c.passed ? "PASS" : "FAIL", c.value, c.reference, c.tolerance);
        ctx.log << line;
        all = all && c.passed;
    }
    if (!all) {
        throw OracleFailure("oracle validation failed");
    }
}

const std::map<std::string, void (*)(Context&)>& commands()
{
    static const std::map<std::string, void (*)(Context&)> table{
        {"freq-response", freq_response}, {"hom-dip", hom_dip},       {"phase-scan", phase_scan_cmd},
        {"keyrate-sweep", keyrate_sweep}, {"repeater-rate", repeater_cmd}, {"tbp-sweep", tbp_cmd},
        {"validate-oracle", validate_oracle},
    };
    return table;
}

void write_manifest(Context& ctx)
{
    nlohmann::json j;
    j["subcommand"] = ctx.options.subcommand;
    j["config_path"] = ctx.options.config_path ? nlohmann::json(*ctx.options.config_path) : nlohmann::json(nullptr);
    j["preset"] = ctx.config.preset;
    j["seed"] = ctx.options.seed;
    j["out_dir"] = ctx.options.out_dir;
    j["counts"] = ctx.options.counts;
    j["poisson"] = ctx.options.poisson;
    j["version"] = kVersion;
    j["config_digest"] = config_digest(ctx.config);
    j["outputs"] = ctx.outputs;
    std::string const name = ctx.options.subcommand + "_manifest.json";
    std::ofstream out(fs::path(ctx.options.out_dir) / name, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("cannot write manifest");
    }
}

RunConfig resolve_config(const RunOptions& options)
{
    RunConfig const base = preset_config(options.preset.value_or("current"));
    if (options.config_path) {
        RunConfig loaded = load_config(*options.config_path, base);
        if (options.preset && loaded.preset != *options.preset) {
            if (loaded.preset != "custom") {
                throw ConfigError("preset", "config file selects '" + loaded.preset + "' but --preset is '" +
                                                *options.preset + "'");
            }
            loaded.preset = *options.preset;
        }
        return loaded;
    }
    base.validate();
    return base;
}

}  // namespace

std::vector<std::string> subcommand_names()
{
    std::vector<std::string> names;
    for (const auto& entry : commands()) {
        names.push_back(entry.first);
    }
    return names;
}

int run(const RunOptions& options, std::ostream& log, std::ostream& err)
{
    try {
        auto const it = commands().find(options.subcommand);
        if (it == commands().end()) {
            err << "error: unknown subcommand '" << options.subcommand << "'\n";
            return kExitFailure;
        }
        RunConfig const config = resolve_config(options);
        fs::create_directories(options.out_dir);
        Context ctx{options, config, log, {}};
        ctx.write(options.subcommand + "_config.json", [&](std::ostream& out) { out << canonical_json(config); });
        int code = kExitOk;
        try {
            it->second(ctx);
        } catch (const OracleFailure& e) {
            err << "error: " << e.what() << '\n';
            code = kExitOracleFailure;
        }
        write_manifest(ctx);
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const ConstraintViolation& e) {
        err << "constraint violation: " << e.what() << '\n';
        return kExitConstraintViolation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace specmux
