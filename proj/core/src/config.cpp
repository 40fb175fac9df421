#include "bodymass/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <fstream>
#include <functional>
#include <sstream>

#include "bodymass/export.hpp"
#include "bodymass/presets.hpp"

namespace bodymass {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

long long parse_int(std::string_view s) {
    s = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("not an unsigned integer: '" + std::string(s) + "'");
    }
    return v;
}

bool parse_bool(std::string_view s) {
    s = trim(s);
    if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "off" || s == "no") return false;
    throw ConfigError("not a boolean: '" + std::string(s) + "'");
}

std::vector<double> parse_list(std::string_view s, std::size_t n) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = s.find(',', pos);
        out.push_back(parse_double(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (out.size() != n) {
        throw ConfigError("expected " + std::to_string(n) + " comma-separated values, got " +
                          std::to_string(out.size()));
    }
    return out;
}

std::string join(std::initializer_list<double> v) {
    std::string out;
    for (double d : v) {
        if (!out.empty()) out += ", ";
        out += format_double(d);
    }
    return out;
}

struct Entry {
    std::string key;
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <class Access>
Entry real(std::string key, Access acc) {
    return {std::move(key), [acc](ScenarioConfig& c, std::string_view v) { acc(c) = parse_double(v); },
            [acc](const ScenarioConfig& c) { return format_double(acc(c)); }};
}

template <class Access>
Entry integer(std::string key, Access acc) {
    return {std::move(key),
            [acc](ScenarioConfig& c, std::string_view v) {
                const long long i = parse_int(v);
                if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) throw ConfigError("integer out of range");
                acc(c) = static_cast<int>(i);
            },
            [acc](const ScenarioConfig& c) { return std::to_string(acc(c)); }};
}

template <class Access>
Entry boolean(std::string key, Access acc) {
    return {std::move(key), [acc](ScenarioConfig& c, std::string_view v) { acc(c) = parse_bool(v); },
            [acc](const ScenarioConfig& c) {
                return std::string(acc(c) ? "true" : "false");
            }};
}

template <class Access>
Entry vec3(std::string key, Access acc) {
    return {std::move(key),
            [acc](ScenarioConfig& c, std::string_view v) {
                const auto l = parse_list(v, 3);
                auto& dst = acc(c);
                for (int i = 0; i < 3; ++i) dst[i] = l[static_cast<std::size_t>(i)];
            },
            [acc](const ScenarioConfig& c) {
                const auto& s = acc(c);
                return join({s[0], s[1], s[2]});
            }};
}

#define BM_FIELD(path) [](auto& c) -> auto& { return c.path; }

void add_composition(std::vector<Entry>& t, const std::string& prefix,
                     BodyComposition ScenarioConfig::*member) {
    t.push_back(real(prefix + ".f_kg", [member](auto& c) -> auto& { return (c.*member).f_kg; }));
    t.push_back(real(prefix + ".l_kg", [member](auto& c) -> auto& { return (c.*member).l_kg; }));
    t.push_back(real(prefix + ".ecf_kg", [member](auto& c) -> auto& { return (c.*member).ecf_kg; }));
}

std::vector<Entry> build_table() {
    std::vector<Entry> t;
    t.push_back({"name", [](ScenarioConfig& c, std::string_view v) { c.name = std::string(trim(v)); },
                 [](const ScenarioConfig& c) { return c.name; }});
    t.push_back({"controller",
                 [](ScenarioConfig& c, std::string_view v) { c.controller = parse_controller(trim(v)); },
                 [](const ScenarioConfig& c) { return std::string(to_string(c.controller)); }});
    t.push_back(vec3("output_selector", BM_FIELD(output_selector)));
    t.push_back(integer("days", BM_FIELD(days)));
    t.push_back(real("dt_days", BM_FIELD(dt_days)));
    t.push_back({"integrator",
                 [](ScenarioConfig& c, std::string_view v) { c.integrator = parse_integrator(trim(v)); },
                 [](const ScenarioConfig& c) { return std::string(to_string(c.integrator)); }});
    t.push_back({"plant_fidelity",
                 [](ScenarioConfig& c, std::string_view v) { c.plant_fidelity = parse_fidelity(trim(v)); },
                 [](const ScenarioConfig& c) { return std::string(to_string(c.plant_fidelity)); }});
    t.push_back(boolean("auto_calibrate", BM_FIELD(auto_calibrate)));
    t.push_back(real("nominal_ei", BM_FIELD(nominal_ei)));
    t.push_back(real("open_delta", BM_FIELD(open_delta)));
    t.push_back(boolean("observer_enabled", BM_FIELD(observer_enabled)));

    t.push_back(real("reference.y0", BM_FIELD(reference.y0)));
    t.push_back(real("reference.s0", BM_FIELD(reference.s0)));
    t.push_back(real("reference.yt", BM_FIELD(reference.yt)));
    t.push_back(real("reference.st", BM_FIELD(reference.st)));
    t.push_back(integer("reference.horizon_days", BM_FIELD(reference.horizon_days)));
    t.push_back(boolean("reference.setpoint", BM_FIELD(reference.setpoint)));

    t.push_back(real("disturbance.ei_coeff", BM_FIELD(disturbance.ei_coeff)));
    t.push_back(real("disturbance.delta_coeff", BM_FIELD(disturbance.delta_coeff)));
    t.push_back(real("disturbance.r_coeff", BM_FIELD(disturbance.r_coeff)));
    t.push_back(real("disturbance.bm_noise_kg", BM_FIELD(disturbance.bm_noise_kg)));
    t.push_back({"disturbance.seed",
                 [](ScenarioConfig& c, std::string_view v) { c.disturbance.seed = parse_u64(v); },
                 [](const ScenarioConfig& c) { return std::to_string(c.disturbance.seed); }});

    add_composition(t, "initial_state", &ScenarioConfig::initial_state);
    add_composition(t, "initial_estimate", &ScenarioConfig::initial_estimate);

    t.push_back(real("params.k1", BM_FIELD(params.k1)));
    t.push_back(real("params.k2", BM_FIELD(params.k2)));
    t.push_back(real("params.k3", BM_FIELD(params.k3)));
    t.push_back(real("params.rho_f", BM_FIELD(params.rho_f)));
    t.push_back(real("params.rho_l", BM_FIELD(params.rho_l)));
    t.push_back(real("params.kk", BM_FIELD(params.kk)));
    t.push_back(real("params.rho_w", BM_FIELD(params.rho_w)));
    t.push_back(real("params.na", BM_FIELD(params.na)));
    t.push_back(real("params.zeta_na", BM_FIELD(params.zeta_na)));
    t.push_back(real("params.zeta_ci", BM_FIELD(params.zeta_ci)));
    t.push_back(real("params.beta", BM_FIELD(params.beta)));
    t.push_back(real("params.gamma_l", BM_FIELD(params.gamma_l)));
    t.push_back(real("params.gamma_f", BM_FIELD(params.gamma_f)));
    t.push_back(real("params.eta_l", BM_FIELD(params.eta_l)));
    t.push_back(real("params.eta_f", BM_FIELD(params.eta_f)));
    t.push_back(real("params.ecf_init", BM_FIELD(params.ecf_init)));
    t.push_back(real("params.z1", BM_FIELD(params.z1)));
    t.push_back(real("params.ci_b", BM_FIELD(params.ci_b)));
    t.push_back(real("params.a", BM_FIELD(params.a)));
    t.push_back(real("params.b", BM_FIELD(params.b)));
    t.push_back(real("params.k_const", BM_FIELD(params.k_const)));

    t.push_back(real("baseline.ei_bar", BM_FIELD(baseline.ei_bar)));
    t.push_back(real("baseline.f_bar", BM_FIELD(baseline.f_bar)));
    t.push_back(real("baseline.l_bar", BM_FIELD(baseline.l_bar)));
    t.push_back(real("baseline.pa_bar", BM_FIELD(baseline.pa_bar)));

    t.push_back(vec3("observer.g1", BM_FIELD(observer.g1)));
    t.push_back(vec3("observer.g2", BM_FIELD(observer.g2)));
    t.push_back(real("observer.k_q", BM_FIELD(observer.k_q)));
    t.push_back(integer("observer.t_period", BM_FIELD(observer.t_period)));
    t.push_back(boolean("observer.full_state_measurement", BM_FIELD(observer.full_state_measurement)));

    t.push_back({"observer.hold",
                 [](ScenarioConfig& c, std::string_view v) { c.observer.hold = parse_periodic_hold(trim(v)); },
                 [](const ScenarioConfig& c) { return std::string(to_string(c.observer.hold)); }});

    t.push_back(real("tdc.gbar", BM_FIELD(tdc.gbar)));
    t.push_back(real("tdc.pi_gain", BM_FIELD(tdc.pi_gain)));
    t.push_back(real("tdc.delta0", BM_FIELD(tdc.delta0)));
    t.push_back(real("tdc.delta_max", BM_FIELD(tdc.delta_max)));

    t.push_back(real("switching.delta0", BM_FIELD(switching.delta0)));
    t.push_back(real("switching.k1_gain", BM_FIELD(switching.k1_gain)));
    t.push_back(real("switching.xi", BM_FIELD(switching.xi)));
    t.push_back(real("switching.k2_gain", BM_FIELD(switching.k2_gain)));
    t.push_back(real("switching.k3_gain", BM_FIELD(switching.k3_gain)));
    t.push_back(real("switching.delta_max", BM_FIELD(switching.delta_max)));
    t.push_back(boolean("switching.conditional_integration", BM_FIELD(switching.conditional_integration)));

    t.push_back(real("alloc.lambda_fl", BM_FIELD(alloc.lambda_fl)));
    t.push_back(real("alloc.lambda_sm", BM_FIELD(alloc.lambda_sm)));
    t.push_back(real("alloc.gamma_smc", BM_FIELD(alloc.gamma_smc)));
    t.push_back(real("alloc.boundary_layer", BM_FIELD(alloc.boundary_layer)));
    // W is diagonal: "w11, w22"
    t.push_back({"alloc.w_mat",
                 [](ScenarioConfig& c, std::string_view v) {
                     const auto l = parse_list(v, 2);
                     c.alloc.w_mat << l[0], 0.0, 0.0, l[1];
                 },
                 [](const ScenarioConfig& c) { return join({c.alloc.w_mat(0, 0), c.alloc.w_mat(1, 1)}); }});
    t.push_back({"alloc.u_bar",
                 [](ScenarioConfig& c, std::string_view v) {
                     const auto l = parse_list(v, 2);
                     c.alloc.u_bar = {l[0], l[1]};
                 },
                 [](const ScenarioConfig& c) { return join({c.alloc.u_bar(0), c.alloc.u_bar(1)}); }});
    t.push_back(real("alloc.ei_bar", BM_FIELD(alloc.ei_bar)));
    t.push_back(real("alloc.rho1", BM_FIELD(alloc.rho1)));
    t.push_back(real("alloc.rho2", BM_FIELD(alloc.rho2)));
    t.push_back(real("alloc.tau", BM_FIELD(alloc.tau)));
    t.push_back(real("alloc.delta_min", BM_FIELD(alloc.delta_min)));
    t.push_back(real("alloc.delta_max", BM_FIELD(alloc.delta_max)));
    return t;
}

#undef BM_FIELD

const std::vector<Entry>& table() {
    static const std::vector<Entry> t = build_table();
    return t;
}

const Entry& find_entry(std::string_view key) {
    const std::string full = resolve_key(key);
    for (const auto& e : table()) {
        if (e.key == full) return e;
    }
    throw ConfigError("unknown key '" + std::string(key) + "'");
}

} // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& e : table()) k.push_back(e.key);
        return k;
    }();
    return keys;
}

std::string resolve_key(std::string_view key_in) {
    const std::string_view key = trim(key_in);
    std::vector<std::string> hits;
    for (const auto& e : table()) {
        if (e.key == key) return e.key;
        const auto dot = e.key.rfind('.');
        if (key.find('.') == std::string_view::npos && dot != std::string::npos &&
            std::string_view(e.key).substr(dot + 1) == key) {
            hits.push_back(e.key);
        }
    }
    if (hits.size() == 1) return hits.front();
    if (hits.empty()) throw ConfigError("unknown key '" + std::string(key) + "'");
    std::string msg = "ambiguous key '" + std::string(key) + "':";
    for (const auto& h : hits) msg += " " + h;
    throw ConfigError(msg);
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
    const Entry& e = find_entry(key);
    try {
        e.set(cfg, value);
    } catch (const ConfigError& err) {
        throw ConfigError(e.key + ": " + err.what());
    } catch (const std::invalid_argument& err) {
        throw ConfigError(e.key + ": " + err.what());
    }
}

std::string get_setting(const ScenarioConfig& cfg, std::string_view key) {
    return find_entry(key).get(cfg);
}

ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base, std::string_view origin) {
    ScenarioConfig cfg = base;
    bool any_setting = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "empty key");

        try {
            if (key == "preset") {
                if (any_setting) throw ConfigError("'preset' must come before other settings");
                cfg = make_preset(value);
            } else {
                apply_setting(cfg, key, value);
            }
        } catch (const std::exception& err) {
            throw ConfigError(where + err.what());
        }
        any_setting = true;
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::filesystem::path& path, const ScenarioConfig& base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base, path.string());
}

std::string dump_config(const ScenarioConfig& cfg) {
    std::string out;
    for (const auto& e : table()) out += e.key + " = " + e.get(cfg) + "\n";
    return out;
}

std::pair<std::string, std::string> split_override(std::string_view kv) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos || trim(kv.substr(0, eq)).empty()) {
        throw ConfigError("override must look like key=value: '" + std::string(kv) + "'");
    }
    return {std::string(trim(kv.substr(0, eq))), std::string(trim(kv.substr(eq + 1)))};
}

} // namespace bodymass
