#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace subnetsim {

/// Raised for malformed documents and for configurations that break an invariant.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PowerModeKind { Fixed, Apr };

/// Sensor transmit-power policy: a fixed level under baseline LBT, or the
/// adaptive power reduction loop.
struct PowerMode {
    PowerModeKind kind = PowerModeKind::Apr;
    double fixed_dbm = -15.0;
    double apr_start_dbm = -15.0;
    double apr_step_db = 1.0;
    double apr_floor_dbm = -60.0;

    static PowerMode fixed(double dbm) {
        PowerMode m;
        m.kind = PowerModeKind::Fixed;
        m.fixed_dbm = dbm;
        return m;
    }
    static PowerMode apr(double start_dbm = -15.0, double step_db = 1.0, double floor_dbm = -60.0) {
        PowerMode m;
        m.kind = PowerModeKind::Apr;
        m.apr_start_dbm = start_dbm;
        m.apr_step_db = step_db;
        m.apr_floor_dbm = floor_dbm;
        return m;
    }

    bool operator==(const PowerMode&) const = default;
};

/// Scenario description for one campaign. Defaults reproduce the factory-hall
/// scenario (100 m hall, 5 m sub-network radius, 20 antennas, 100 MHz at 6 GHz).
struct SimConfig {
    // geometry
    double hall_side_m = 100.0;
    double hall_height_m = 15.0;
    int num_subnetworks = 1;
    double subnetwork_radius_m = 5.0;
    double min_center_separation_m = 10.0;
    int sensors_per_subnetwork = 5;
    int total_antennas = 20;
    int aps_per_subnetwork = 20;
    double ap_height_m = 5.0;
    double sensor_height_m = 1.5;

    // radio
    double carrier_freq_ghz = 6.0;
    double bandwidth_hz = 1e8;
    double packet_duration_s = 50e-6;
    double packet_error_rate = 1e-6;
    double uplink_fraction = 0.4;
    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 9.0;
    double lbt_threshold_dbm = -72.0;
    PowerMode power_mode;

    // propagation (InF-DL)
    double clutter_size_m = 2.0;
    double clutter_density = 0.6;
    double effective_clutter_height_m = 10.0;
    double shadow_sigma_los_db = 4.3;
    double shadow_sigma_nlos_db = 3.5;

    // Monte-Carlo
    int num_drops = 1000;
    int fading_realizations_per_drop = 1;
    std::uint64_t master_seed = 1;

    // When set, sensors of deferred sub-networks still count as interferers
    // in the rate computation of surviving sub-networks.
    bool include_deferred_interference = false;

    int antennas_per_ap() const { return total_antennas / aps_per_subnetwork; }
    int total_sensors() const { return num_subnetworks * sensors_per_subnetwork; }
    int total_aps() const { return num_subnetworks * aps_per_subnetwork; }

    bool operator==(const SimConfig&) const = default;
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Parses a flat `key = value` document. `#` starts a comment. Unknown and
/// duplicate keys are rejected; `num_subnetworks` and `aps_per_subnetwork` are
/// required, everything else falls back to the defaults above. Entries in
/// `overrides` replace (or supply) document values before validation.
SimConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});

/// Canonical document for `cfg`; `parse_config(serialize_config(c)) == c`.
std::string serialize_config(const SimConfig& cfg);

/// Throws ConfigError naming the first violated invariant.
void validate(const SimConfig& cfg);

/// Shortest decimal representation that round-trips, '.' separator, no grouping.
std::string format_number(double value);

std::string to_string(PowerModeKind kind);

}  // namespace subnetsim
