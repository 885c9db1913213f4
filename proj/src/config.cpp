#include "specmux/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "specmux/error.hpp"

namespace specmux {
namespace {

using nlohmann::json;

std::string join_path(const std::string& path, std::string_view key)
{
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

// Reads the fields of one JSON object, remembering which keys were consumed
// so leftovers can be reported.
class Fields {
  public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) {
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    void number(const char* key, double& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number()) {
                throw ConfigError(join_path(path_, key), "expected a number");
            }
            out = v->get<double>();
        }
    }

    void optional_number(const char* key, std::optional<double>& out)
    {
        if (const json* v = find(key)) {
            if (v->is_null()) {
                out.reset();
            } else if (v->is_number()) {
                out = v->get<double>();
            } else {
                throw ConfigError(join_path(path_, key), "expected a number or null");
            }
        }
    }

    void integer(const char* key, int& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number_integer() || v->get<std::int64_t>() < std::numeric_limits<int>::min() ||
                v->get<std::int64_t>() > std::numeric_limits<int>::max()) {
                throw ConfigError(join_path(path_, key), "expected an integer");
            }
            out = v->get<int>();
        }
    }

    void count(const char* key, std::uint64_t& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number_unsigned()) {
                throw ConfigError(join_path(path_, key), "expected a non-negative integer");
            }
            out = v->get<std::uint64_t>();
        }
    }

    void boolean(const char* key, bool& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) {
                throw ConfigError(join_path(path_, key), "expected true or false");
            }
            out = v->get<bool>();
        }
    }

    template <class Enum>
    void choice(const char* key, Enum& out, std::initializer_list<std::pair<const char*, Enum>> options)
    {
        if (const json* v = find(key)) {
            if (v->is_string()) {
                for (const auto& [name, value] : options) {
                    if (v->get<std::string>() == name) {
                        out = value;
                        return;
                    }
                }
            }
            std::string allowed;
            for (const auto& option : options) {
                allowed += allowed.empty() ? "" : ", ";
                allowed += option.first;
            }
            throw ConfigError(join_path(path_, key), "expected one of: " + allowed);
        }
    }

    template <class Fn>
    void object(const char* key, Fn&& read)
    {
        if (const json* v = find(key)) {
            Fields sub(*v, join_path(path_, key));
            read(sub);
            sub.finish();
        }
    }

    void skip(const char* key) { seen_.insert(key); }

    void finish() const
    {
        for (const auto& item : j_.items()) {
            if (!seen_.contains(item.key())) {
                throw ConfigError(join_path(path_, item.key()), "unknown field");
            }
        }
    }

  private:
    const json* find(const char* key)
    {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_qubit(Fields& f, TimeBinQubitSpec& q)
{
    f.number("signal_early", q.signal_early);
    f.number("signal_late", q.signal_late);
    f.number("background", q.background);
    f.number("phase_rad", q.phase_rad);
    f.choice("basis", q.basis, {{"Z", Basis::Z}, {"X", Basis::X}});
}

json qubit_json(const TimeBinQubitSpec& q)
{
    return {{"signal_early", q.signal_early},
            {"signal_late", q.signal_late},
            {"background", q.background},
            {"phase_rad", q.phase_rad},
            {"basis", q.basis == Basis::Z ? "Z" : "X"}};
}

void read_config(const json& root, RunConfig& c)
{
    Fields top(root, "");
    top.skip("preset");
    top.object("ssmm", [&](Fields& f) {
        f.number("center_hz", c.ssmm.grid.center_hz);
        f.number("spacing_hz", c.ssmm.grid.spacing_hz);
        f.integer("mode_count", c.ssmm.grid.mode_count);
        f.number("passband_fwhm_hz", c.ssmm.passband_fwhm_hz);
        f.optional_number("adjacent_rejection_db", c.ssmm.adjacent_rejection_db);
        f.number("peak_coupling", c.ssmm.peak_coupling);
        f.number("envelope_bandwidth_hz", c.ssmm.envelope_bandwidth_hz);
        f.choice("envelope_shape", c.ssmm.envelope_shape,
                 {{"gaussian", CouplingEnvelope::gaussian}, {"flat", CouplingEnvelope::flat}});
        f.number("nominal_frequency_hz", c.ssmm.nominal_frequency_hz);
        f.number("focal_length_m", c.ssmm.focal_length_m);
        f.number("angular_dispersion_rad_per_hz", c.ssmm.angular_dispersion_rad_per_hz);
    });
    top.object("detector", [&](Fields& f) {
        f.number("efficiency", c.detector.efficiency);
        f.number("dark_click_probability", c.detector.dark_click_probability);
        f.number("coincidence_window_s", c.detector.coincidence_window_s);
    });
    top.object("source", [&](Fields& f) {
        f.number("mean_photon_number_a", c.source.mean_photon_number_a);
        f.number("mean_photon_number_b", c.source.mean_photon_number_b);
        f.object("state_a", [&](Fields& q) { read_qubit(q, c.source.state_a); });
        f.object("state_b", [&](Fields& q) { read_qubit(q, c.source.state_b); });
        f.number("sideband_phase_step_rad", c.source.sideband_phase_step_rad);
        f.number("source_rate_hz", c.source.source_rate_hz);
        f.number("pulse_fwhm_s", c.source.envelope.fwhm_s);
        f.number("bin_separation_s", c.source.envelope.bin_separation_s);
    });
    top.object("hom", [&](Fields& f) {
        f.number("delay_min_s", c.hom.delay_min_s);
        f.number("delay_max_s", c.hom.delay_max_s);
        f.integer("steps", c.hom.steps);
        f.choice("phase_model", c.hom.phase_model,
                 {{"correlated", PhaseModel::correlated}, {"independent", PhaseModel::independent}});
        f.number("overlap_deficit", c.hom.overlap_deficit);
        f.integer("quadrature_nodes", c.hom.quadrature_nodes);
        f.number("accumulation_s", c.hom.accumulation_s);
    });
    top.object("phase_scan", [&](Fields& f) {
        f.number("theta_min_rad", c.phase_scan.theta_min_rad);
        f.number("theta_max_rad", c.phase_scan.theta_max_rad);
        f.integer("points", c.phase_scan.points);
        f.integer("channel_1", c.phase_scan.channel_1);
        f.integer("channel_2", c.phase_scan.channel_2);
        f.object("state_a", [&](Fields& q) { read_qubit(q, c.phase_scan.state_a); });
        f.object("state_b", [&](Fields& q) { read_qubit(q, c.phase_scan.state_b); });
    });
    top.object("frequency_scan", [&](Fields& f) {
        f.number("min_hz", c.frequency_scan.min_hz);
        f.number("max_hz", c.frequency_scan.max_hz);
        f.number("step_hz", c.frequency_scan.step_hz);
    });
    top.object("keyrate", [&](Fields& f) {
        f.integer("max_modes", c.keyrate.max_modes);
        f.integer("sweep_modes", c.keyrate.sweep_modes);
        f.number("hom_visibility", c.keyrate.hom_visibility);
        f.number("mean_photon_number", c.keyrate.mean_photon_number);
        f.number("ec_inefficiency", c.keyrate.ec_inefficiency);
        f.number("source_rate_hz", c.keyrate.source_rate_hz);
        f.boolean("crosstalk_noise", c.keyrate.crosstalk_noise);
        f.integer("quadrature_nodes", c.keyrate.quadrature_nodes);
        f.object("z_qubit", [&](Fields& q) { read_qubit(q, c.keyrate.z_qubit); });
        f.object("x_qubit", [&](Fields& q) { read_qubit(q, c.keyrate.x_qubit); });
    });
    top.object("link", [&](Fields& f) {
        f.number("distance_m", c.link.distance_m);
        f.integer("links", c.link.links);
        f.number("loss_db_per_m", c.link.loss_db_per_m);
        f.number("source_rate_hz", c.link.source_rate_hz);
        f.integer("modes", c.link.modes);
        f.number("storage_time_s", c.link.storage_time_s);
        f.number("fiber_speed_m_per_s", c.link.fiber_speed_m_per_s);
        f.number("efficiency", c.link.efficiency);
    });
    top.object("tbp", [&](Fields& f) {
        f.number("total_bandwidth_hz", c.tbp.total_bandwidth_hz);
        f.number("tbp_constant", c.tbp.tbp_constant);
        f.number("duty_cycle", c.tbp.duty_cycle);
        f.number("tau_min_s", c.tbp.tau_min_s);
        f.number("tau_max_s", c.tbp.tau_max_s);
        f.integer("points", c.tbp.points);
        f.integer("mode_cap", c.tbp.mode_cap);
    });
    top.object("oracle", [&](Fields& f) {
        f.integer("fock_configs", c.oracle.fock_configs);
        f.integer("fock_n_max", c.oracle.fock_n_max);
        f.number("fock_tolerance", c.oracle.fock_tolerance);
        f.count("repeater_trials", c.oracle.repeater_trials);
        f.count("coincidence_trials", c.oracle.coincidence_trials);
    });
    top.finish();
}

json config_json(const RunConfig& c)
{
    json j;
    j["preset"] = c.preset;
    j["ssmm"] = {{"center_hz", c.ssmm.grid.center_hz},
                 {"spacing_hz", c.ssmm.grid.spacing_hz},
                 {"mode_count", c.ssmm.grid.mode_count},
                 {"passband_fwhm_hz", c.ssmm.passband_fwhm_hz},
                 {"adjacent_rejection_db",
                  c.ssmm.adjacent_rejection_db ? json(*c.ssmm.adjacent_rejection_db) : json(nullptr)},
                 {"peak_coupling", c.ssmm.peak_coupling},
                 {"envelope_bandwidth_hz", c.ssmm.envelope_bandwidth_hz},
                 {"envelope_shape", c.ssmm.envelope_shape == CouplingEnvelope::gaussian ? "gaussian" : "flat"},
                 {"nominal_frequency_hz", c.ssmm.nominal_frequency_hz},
                 {"focal_length_m", c.ssmm.focal_length_m},
                 {"angular_dispersion_rad_per_hz", c.ssmm.angular_dispersion_rad_per_hz}};
    j["detector"] = {{"efficiency", c.detector.efficiency},
                     {"dark_click_probability", c.detector.dark_click_probability},
                     {"coincidence_window_s", c.detector.coincidence_window_s}};
    j["source"] = {{"mean_photon_number_a", c.source.mean_photon_number_a},
                   {"mean_photon_number_b", c.source.mean_photon_number_b},
                   {"state_a", qubit_json(c.source.state_a)},
                   {"state_b", qubit_json(c.source.state_b)},
                   {"sideband_phase_step_rad", c.source.sideband_phase_step_rad},
                   {"source_rate_hz", c.source.source_rate_hz},
                   {"pulse_fwhm_s", c.source.envelope.fwhm_s},
                   {"bin_separation_s", c.source.envelope.bin_separation_s}};
    j["hom"] = {{"delay_min_s", c.hom.delay_min_s},
                {"delay_max_s", c.hom.delay_max_s},
                {"steps", c.hom.steps},
                {"phase_model", c.hom.phase_model == PhaseModel::correlated ? "correlated" : "independent"},
                {"overlap_deficit", c.hom.overlap_deficit},
                {"quadrature_nodes", c.hom.quadrature_nodes},
                {"accumulation_s", c.hom.accumulation_s}};
    j["phase_scan"] = {{"theta_min_rad", c.phase_scan.theta_min_rad},
                       {"theta_max_rad", c.phase_scan.theta_max_rad},
                       {"points", c.phase_scan.points},
                       {"channel_1", c.phase_scan.channel_1},
                       {"channel_2", c.phase_scan.channel_2},
                       {"state_a", qubit_json(c.phase_scan.state_a)},
                       {"state_b", qubit_json(c.phase_scan.state_b)}};
    j["frequency_scan"] = {{"min_hz", c.frequency_scan.min_hz},
                           {"max_hz", c.frequency_scan.max_hz},
                           {"step_hz", c.frequency_scan.step_hz}};
    j["keyrate"] = {{"max_modes", c.keyrate.max_modes},
                    {"sweep_modes", c.keyrate.sweep_modes},
                    {"hom_visibility", c.keyrate.hom_visibility},
                    {"mean_photon_number", c.keyrate.mean_photon_number},
                    {"ec_inefficiency", c.keyrate.ec_inefficiency},
                    {"source_rate_hz", c.keyrate.source_rate_hz},
                    {"crosstalk_noise", c.keyrate.crosstalk_noise},
                    {"quadrature_nodes", c.keyrate.quadrature_nodes},
                    {"z_qubit", qubit_json(c.keyrate.z_qubit)},
                    {"x_qubit", qubit_json(c.keyrate.x_qubit)}};
    j["link"] = {{"distance_m", c.link.distance_m},
                 {"links", c.link.links},
                 {"loss_db_per_m", c.link.loss_db_per_m},
                 {"source_rate_hz", c.link.source_rate_hz},
                 {"modes", c.link.modes},
                 {"storage_time_s", c.link.storage_time_s},
                 {"fiber_speed_m_per_s", c.link.fiber_speed_m_per_s},
                 {"efficiency", c.link.efficiency}};
    j["tbp"] = {{"total_bandwidth_hz", c.tbp.total_bandwidth_hz},
                {"tbp_constant", c.tbp.tbp_constant},
                {"duty_cycle", c.tbp.duty_cycle},
                {"tau_min_s", c.tbp.tau_min_s},
                {"tau_max_s", c.tbp.tau_max_s},
                {"points", c.tbp.points},
                {"mode_cap", c.tbp.mode_cap}};
    j["oracle"] = {{"fock_configs", c.oracle.fock_configs},
                   {"fock_n_max", c.oracle.fock_n_max},
                   {"fock_tolerance", c.oracle.fock_tolerance},
                   {"repeater_trials", c.oracle.repeater_trials},
                   {"coincidence_trials", c.oracle.coincidence_trials}};
    return j;
}

template <class Fn>
void check_section(const char* path, Fn&& fn)
{
    try {
        fn();
    } catch (const InvalidParameter& e) {
        throw ConfigError(path, e.what());
    }
}

void check_qubit(const std::string& path, const TimeBinQubitSpec& q)
{
    check_section(path.c_str(), [&] { q.validate(); });
}

}  // namespace

void RunConfig::validate() const
{
    check_section("ssmm", [&] { SsmmModel const check(ssmm); });
    check_section("detector", [&] { detector.validate(); });
    check_qubit("source.state_a", source.state_a);
    check_qubit("source.state_b", source.state_b);
    check_section("source", [&] {
        source.envelope.validate();
        if (!(source.mean_photon_number_a >= 0.0) || !(source.mean_photon_number_b >= 0.0)) {
            throw InvalidParameter("mean photon numbers must be >= 0");
        }
        if (!std::isfinite(source.sideband_phase_step_rad)) {
            throw InvalidParameter("sideband phase step must be finite");
        }
        if (!(source.source_rate_hz > 0.0)) {
            throw InvalidParameter("source rate must be positive");
        }
    });
    check_section("hom", [&] {
        if (hom.steps < 3 || !(hom.delay_max_s > hom.delay_min_s)) {
            throw InvalidParameter("delay scan needs at least 3 steps over a non-empty range");
        }
        if (!(hom.accumulation_s > 0.0)) {
            throw InvalidParameter("accumulation time must be positive");
        }
        interference_config(*this).validate();
    });
    check_qubit("phase_scan.state_a", phase_scan.state_a);
    check_qubit("phase_scan.state_b", phase_scan.state_b);
    check_section("phase_scan", [&] {
        if (phase_scan.points < 1 || !(phase_scan.theta_max_rad >= phase_scan.theta_min_rad)) {
            throw InvalidParameter("phase grid is empty");
        }
        int const channels = ssmm.grid.mode_count;
        if (phase_scan.channel_1 < 0 || phase_scan.channel_1 >= channels || phase_scan.channel_2 < 0 ||
            phase_scan.channel_2 >= channels) {
            throw InvalidParameter("channel index out of range");
        }
    });
    check_section("frequency_scan", [&] {
        if (!(frequency_scan.max_hz > frequency_scan.min_hz) || !(frequency_scan.step_hz > 0.0)) {
            throw InvalidParameter("frequency scan needs min_hz < max_hz and a positive step");
        }
    });
    check_qubit("keyrate.z_qubit", keyrate.z_qubit);
    check_qubit("keyrate.x_qubit", keyrate.x_qubit);
    check_section("keyrate", [&] {
        if (keyrate.max_modes < 0 || keyrate.sweep_modes < 0) {
            throw InvalidParameter("max_modes and sweep_modes must be >= 0");
        }
        scenario_config(*this).validate();
    });
    check_section("link", [&] { link.validate(); });
    check_section("tbp", [&] { tbp.validate(); });
    check_section("oracle", [&] {
        if (oracle.fock_configs < 1 || oracle.fock_n_max < 6 || !(oracle.fock_tolerance > 0.0) ||
            oracle.repeater_trials < 2 || oracle.coincidence_trials < 2) {
            throw InvalidParameter("oracle sample sizes and tolerance must be positive, n_max >= 6");
        }
    });
}

std::vector<std::string> preset_names()
{
    return {"current", "soa_coupling", "soa_coupling_dense", "matched_mode", "ideal"};
}

RunConfig preset_config(std::string_view name)
{
    RunConfig c;
    c.preset = std::string(name);
    c.ssmm.grid = {0.0, 8e9, 2};
    c.ssmm.adjacent_rejection_db = 10.0;
    c.ssmm.peak_coupling = 0.05;
    if (name == "current") {
    } else if (name == "soa_coupling") {
        c.ssmm.peak_coupling = 0.5;
    } else if (name == "soa_coupling_dense") {
        c.ssmm.peak_coupling = 0.5;
        c.ssmm.grid.spacing_hz = 3.2e9;
        c.ssmm.adjacent_rejection_db.reset();
        c.ssmm.passband_fwhm_hz = 3.2e9;
        c.keyrate.max_modes = 20;
    } else if (name == "matched_mode") {
        // the red-shifted sideband alone
        c.ssmm.grid = {-4e9, 8e9, 1};
    } else if (name == "ideal") {
        c.ssmm.grid = {0.0, 8e9, 1};
        c.ssmm.peak_coupling = 1.0;
        c.ssmm.adjacent_rejection_db.reset();
        c.ssmm.passband_fwhm_hz = 1e9;
        c.ssmm.envelope_shape = CouplingEnvelope::flat;
        c.detector.efficiency = 1.0;
        c.detector.dark_click_probability = 0.0;
        c.hom.overlap_deficit = 1.0;
    } else {
        throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
    }
    return c;
}

RunConfig parse_config(std::string_view json_text, const RunConfig& base)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("<root>", "expected an object");
    }
    RunConfig c = base;
    if (auto it = root.find("preset"); it != root.end()) {
        if (!it->is_string()) {
            throw ConfigError("preset", "expected a string");
        }
        c = preset_config(it->get<std::string>());
    } else {
        c.preset = "custom";
    }
    read_config(root, c);
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path, const RunConfig& base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("<file>", "cannot open '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), base);
}

std::string canonical_json(const RunConfig& config) { return config_json(config).dump(2) + "\n"; }

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string config_digest(const RunConfig& config)
{
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_json(config).dump())));
    return buffer;
}

SsmmModel ssmm_model(const RunConfig& config) { return SsmmModel(config.ssmm); }

InterferenceConfig interference_config(const RunConfig& config)
{
    return interference_config(config, config.source.state_a, config.source.state_b);
}

InterferenceConfig interference_config(const RunConfig& config, const TimeBinQubitSpec& state_a,
                                       const TimeBinQubitSpec& state_b)
{
    int const modes = config.ssmm.grid.mode_count;
    auto pulse_a = make_pulse(Station::A, modes, config.source.mean_photon_number_a,
                              build_state(state_a).amplitudes(), config.source.envelope);
    auto pulse_b = make_pulse(Station::B, modes, config.source.mean_photon_number_b,
                              build_state(state_b).amplitudes(), config.source.envelope);
    for (int m = 0; m < modes; ++m) {
        pulse_b.phase_offset_rad[static_cast<std::size_t>(m)] = m * config.source.sideband_phase_step_rad;
    }
    SsmmModel const ssmm(config.ssmm);
    auto ic = make_interference_config(std::move(pulse_a), std::move(pulse_b), ssmm, ssmm, config.detector);
    ic.phase_model = config.hom.phase_model;
    ic.overlap_deficit = config.hom.overlap_deficit;
    ic.quadrature_nodes = config.hom.quadrature_nodes;
    return ic;
}

ScenarioConfig scenario_config(const RunConfig& config)
{
    ScenarioConfig s;
    s.name = config.preset;
    s.ssmm = config.ssmm;
    s.ssmm.grid.center_hz = config.ssmm.nominal_frequency_hz;
    s.ssmm.grid.mode_count = config.keyrate.max_modes > 0
                                 ? config.keyrate.max_modes
                                 : bandwidth_mode_limit(config.ssmm.envelope_bandwidth_hz, config.ssmm.grid.spacing_hz);
    s.mode_count = s.ssmm.grid.mode_count;
    s.hom_visibility = config.keyrate.hom_visibility;
    s.source_rate_hz = config.keyrate.source_rate_hz;
    s.mean_photon_number = config.keyrate.mean_photon_number;
    s.ec_inefficiency = config.keyrate.ec_inefficiency;
    s.detector = config.detector;
    s.z_qubit = config.keyrate.z_qubit;
    s.x_qubit = config.keyrate.x_qubit;
    s.crosstalk_noise = config.keyrate.crosstalk_noise;
    s.quadrature_nodes = config.keyrate.quadrature_nodes;
    return s;
}

}  // namespace specmux
