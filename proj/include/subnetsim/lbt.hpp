#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subnetsim/channel.hpp"
#include "subnetsim/config.hpp"

namespace subnetsim {

/// APR could not clear the threshold before reaching the configured floor.
class AprFloorReached : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Per-sensor transmit powers (W). Under APR every sensor shares one level.
struct PowerAllocation {
    std::vector<double> power_w;
    std::optional<double> common_power_dbm;
    int apr_steps_applied = 0;

    static PowerAllocation uniform(int num_sensors, double dbm);

    int size() const { return static_cast<int>(power_w.size()); }
    double power_dbm(int sensor) const { return watt_to_dbm(power_w.at(sensor)); }
};

struct DeferralDecision {
    std::vector<int> deferred;                 // sorted sub-network indices
    std::vector<double> ap_interference_w;     // per AP, W per antenna

    bool is_deferred(int b) const;
    double max_interference_w() const;
};

/// (1 / M_{a_b}) * sum over sensors outside AP a's sub-network of mu_l |h_{l,a}|^2.
double ap_uncontrolled_interference(const ChannelState& state, const PowerAllocation& powers, int ap);

/// The same quantity for every AP in global order.
std::vector<double> all_ap_uncontrolled_interference(const ChannelState& state, const PowerAllocation& powers);

/// One-shot sensing with all sensors active: sub-network b defers iff some AP
/// of b senses strictly more than the threshold.
DeferralDecision lbt_deferral_set(const ChannelState& state, const PowerAllocation& powers, double threshold_dbm);

/// Largest common level start - k * step (k >= 0) at which every AP senses
/// strictly less than the threshold. Throws AprFloorReached below the floor.
PowerAllocation apr_power(const ChannelState& state, const SimConfig& cfg);

/// Fixed mode: configured level plus LBT deferrals. APR mode: apr_power and
/// an empty deferral set.
std::pair<PowerAllocation, DeferralDecision> resolve_power_mode(const SimConfig& cfg, const ChannelState& state);

}  // namespace subnetsim
