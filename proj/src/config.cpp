#include "subnetsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace subnetsim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out))
        throw ConfigError("field '" + std::string(key) + "': expected a finite number, got '" +
                          std::string(v) + "'");
    return out;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view v) {
    Int out{};
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("field '" + std::string(key) + "': expected an integer, got '" +
                          std::string(v) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("field '" + std::string(key) + "': expected true or false, got '" +
                      std::string(v) + "'");
}

struct Field {
    std::function<void(SimConfig&, std::string_view)> set;
    std::function<std::string(const SimConfig&)> get;
};

// Ordered as in the canonical document.
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = [] {
        std::vector<std::pair<std::string, Field>> t;
        auto real = [&t](const char* name, double SimConfig::*m) {
            t.emplace_back(name, Field{[m, name](SimConfig& c, std::string_view v) {
                                           c.*m = parse_double(name, v);
                                       },
                                       [m](const SimConfig& c) { return format_number(c.*m); }});
        };
        auto integer = [&t](const char* name, int SimConfig::*m) {
            t.emplace_back(name, Field{[m, name](SimConfig& c, std::string_view v) {
                                           c.*m = parse_integer<int>(name, v);
                                       },
                                       [m](const SimConfig& c) { return std::to_string(c.*m); }});
        };
        auto mode_real = [&t](const char* name, double PowerMode::*m) {
            t.emplace_back(name, Field{[m, name](SimConfig& c, std::string_view v) {
                                           c.power_mode.*m = parse_double(name, v);
                                       },
                                       [m](const SimConfig& c) {
                                           return format_number(c.power_mode.*m);
                                       }});
        };

        real("hall_side_m", &SimConfig::hall_side_m);
        real("hall_height_m", &SimConfig::hall_height_m);
        integer("num_subnetworks", &SimConfig::num_subnetworks);
        real("subnetwork_radius_m", &SimConfig::subnetwork_radius_m);
        real("min_center_separation_m", &SimConfig::min_center_separation_m);
        integer("sensors_per_subnetwork", &SimConfig::sensors_per_subnetwork);
        integer("total_antennas", &SimConfig::total_antennas);
        integer("aps_per_subnetwork", &SimConfig::aps_per_subnetwork);
        real("ap_height_m", &SimConfig::ap_height_m);
        real("sensor_height_m", &SimConfig::sensor_height_m);
        real("carrier_freq_ghz", &SimConfig::carrier_freq_ghz);
        real("bandwidth_hz", &SimConfig::bandwidth_hz);
        real("packet_duration_s", &SimConfig::packet_duration_s);
        real("packet_error_rate", &SimConfig::packet_error_rate);
        real("uplink_fraction", &SimConfig::uplink_fraction);
        real("noise_psd_dbm_hz", &SimConfig::noise_psd_dbm_hz);
        real("noise_figure_db", &SimConfig::noise_figure_db);
        real("lbt_threshold_dbm", &SimConfig::lbt_threshold_dbm);
        t.emplace_back("power_mode",
                       Field{[](SimConfig& c, std::string_view v) {
                                 if (v == "fixed")
                                     c.power_mode.kind = PowerModeKind::Fixed;
                                 else if (v == "apr")
                                     c.power_mode.kind = PowerModeKind::Apr;
                                 else
                                     throw ConfigError("field 'power_mode': expected fixed or apr, got '" +
                                                       std::string(v) + "'");
                             },
                             [](const SimConfig& c) { return to_string(c.power_mode.kind); }});
        mode_real("fixed_power_dbm", &PowerMode::fixed_dbm);
        mode_real("apr_start_dbm", &PowerMode::apr_start_dbm);
        mode_real("apr_step_db", &PowerMode::apr_step_db);
        mode_real("apr_floor_dbm", &PowerMode::apr_floor_dbm);
        real("clutter_size_m", &SimConfig::clutter_size_m);
        real("clutter_density", &SimConfig::clutter_density);
        real("effective_clutter_height_m", &SimConfig::effective_clutter_height_m);
        real("shadow_sigma_los_db", &SimConfig::shadow_sigma_los_db);
        real("shadow_sigma_nlos_db", &SimConfig::shadow_sigma_nlos_db);
        integer("num_drops", &SimConfig::num_drops);
        integer("fading_realizations_per_drop", &SimConfig::fading_realizations_per_drop);
        t.emplace_back("master_seed",
                       Field{[](SimConfig& c, std::string_view v) {
                                 c.master_seed = parse_integer<std::uint64_t>("master_seed", v);
                             },
                             [](const SimConfig& c) { return std::to_string(c.master_seed); }});
        t.emplace_back("include_deferred_interference",
                       Field{[](SimConfig& c, std::string_view v) {
                                 c.include_deferred_interference =
                                     parse_bool("include_deferred_interference", v);
                             },
                             [](const SimConfig& c) {
                                 return std::string(c.include_deferred_interference ? "true" : "false");
                             }});
        return t;
    }();
    return table;
}

const Field* find_field(std::string_view key) {
    for (const auto& [name, field] : fields())
        if (name == key) return &field;
    return nullptr;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid configuration: " + what);
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) return "0";
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string to_string(PowerModeKind kind) {
    return kind == PowerModeKind::Fixed ? "fixed" : "apr";
}

void validate(const SimConfig& c) {
    require(c.num_subnetworks >= 1, "num_subnetworks must be >= 1");
    require(c.sensors_per_subnetwork >= 1, "sensors_per_subnetwork must be >= 1");
    require(c.total_antennas >= 1, "total_antennas must be >= 1");
    require(c.aps_per_subnetwork >= 1, "aps_per_subnetwork must be >= 1");
    require(c.total_antennas % c.aps_per_subnetwork == 0,
            "total_antennas (" + std::to_string(c.total_antennas) +
                ") must be divisible by aps_per_subnetwork (" + std::to_string(c.aps_per_subnetwork) + ")");
    require(c.total_antennas >= c.sensors_per_subnetwork,
            "zero-forcing needs total_antennas >= sensors_per_subnetwork");
    require(c.hall_side_m > 0 && c.hall_height_m > 0 && c.subnetwork_radius_m > 0 &&
                c.min_center_separation_m > 0 && c.ap_height_m > 0 && c.sensor_height_m > 0 &&
                c.clutter_size_m > 0 && c.effective_clutter_height_m > 0,
            "all lengths must be > 0");
    require(c.ap_height_m <= c.hall_height_m && c.sensor_height_m <= c.hall_height_m,
            "AP and sensor heights must not exceed hall_height_m");
    require(2.0 * c.subnetwork_radius_m <= c.hall_side_m, "sub-network disk must fit inside the hall");
    require(c.uplink_fraction > 0 && c.uplink_fraction <= 1, "uplink_fraction must be in (0, 1]");
    require(c.packet_error_rate > 0 && c.packet_error_rate < 0.5, "packet_error_rate must be in (0, 0.5)");
    require(c.clutter_density > 0 && c.clutter_density < 1, "clutter_density must be in (0, 1)");
    require(c.carrier_freq_ghz > 0, "carrier_freq_ghz must be > 0");
    require(c.bandwidth_hz > 0, "bandwidth_hz must be > 0");
    require(c.packet_duration_s > 0, "packet_duration_s must be > 0");
    require(c.shadow_sigma_los_db >= 0 && c.shadow_sigma_nlos_db >= 0, "shadowing sigmas must be >= 0");
    require(c.num_drops >= 1, "num_drops must be >= 1");
    require(c.fading_realizations_per_drop >= 1, "fading_realizations_per_drop must be >= 1");
    if (c.power_mode.kind == PowerModeKind::Apr) {
        require(c.power_mode.apr_step_db > 0, "apr_step_db must be > 0");
        require(c.power_mode.apr_floor_dbm <= c.power_mode.apr_start_dbm,
                "apr_floor_dbm must not exceed apr_start_dbm");
    }
}

SimConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
    std::map<std::string, std::string, std::less<>> entries;
    std::map<std::string, int, std::less<>> line_of;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        if (!find_field(key))
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        if (auto it = line_of.find(key); it != line_of.end())
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) +
                              "' (first set on line " + std::to_string(it->second) + ")");
        entries.emplace(std::string(key), std::string(value));
        line_of.emplace(std::string(key), line_no);
    }

    for (const auto& [key, value] : overrides) {
        if (!find_field(key)) throw ConfigError("override: unknown key '" + key + "'");
        entries[key] = value;
    }

    for (const char* required : {"num_subnetworks", "aps_per_subnetwork"})
        if (!entries.contains(required))
            throw ConfigError(std::string("missing required field '") + required + "'");

    SimConfig cfg;
    for (const auto& [key, value] : entries) {
        try {
            find_field(key)->set(cfg, value);
        } catch (const ConfigError& e) {
            auto it = line_of.find(key);
            if (it != line_of.end() && !std::any_of(overrides.begin(), overrides.end(),
                                                    [&](const auto& o) { return o.first == key; }))
                throw ConfigError("line " + std::to_string(it->second) + ": " + e.what());
            throw;
        }
    }
    validate(cfg);
    return cfg;
}

std::string serialize_config(const SimConfig& cfg) {
    std::ostringstream out;
    for (const auto& [name, field] : fields()) out << name << " = " << field.get(cfg) << '\n';
    return out.str();
}

}  // namespace subnetsim
