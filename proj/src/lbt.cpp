#include "subnetsim/lbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subnetsim {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

PowerAllocation PowerAllocation::uniform(int num_sensors, double dbm) {
    PowerAllocation p;
    p.power_w.assign(num_sensors, dbm_to_watt(dbm));
    p.common_power_dbm = dbm;
    return p;
}

bool DeferralDecision::is_deferred(int b) const {
    return std::binary_search(deferred.begin(), deferred.end(), b);
}

double DeferralDecision::max_interference_w() const {
    if (ap_interference_w.empty()) return 0.0;
    return *std::max_element(ap_interference_w.begin(), ap_interference_w.end());
}

namespace {

void check_sizes(const ChannelState& state, const PowerAllocation& powers) {
    if (powers.size() != state.dims().num_sensors())
        throw std::invalid_argument("power allocation does not cover every sensor");
}

// Sum over antennas of each AP in sub-network b of sum_l mu_l |h|^2, external l only.
Eigen::VectorXd external_power_per_antenna(const ChannelState& state, const PowerAllocation& powers, int b) {
    const auto& dims = state.dims();
    Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(powers.power_w.data(), dims.num_sensors());
    mu.segment(dims.first_sensor(b), dims.sensors_per_subnetwork).setZero();
    return state.received(b).cwiseAbs2() * mu;
}

}  // namespace

double ap_uncontrolled_interference(const ChannelState& state, const PowerAllocation& powers, int ap) {
    check_sizes(state, powers);
    const auto& dims = state.dims();
    if (ap < 0 || ap >= dims.num_aps()) throw std::out_of_range("AP index out of range");
    const int b = dims.subnetwork_of_ap(ap);
    const int row = (ap - dims.first_ap(b)) * dims.antennas_per_ap;

    double total = 0.0;
    for (int l = 0; l < dims.num_sensors(); ++l) {
        if (dims.subnetwork_of_sensor(l) == b) continue;
        total += powers.power_w[l] * state.received(b).col(l).segment(row, dims.antennas_per_ap).squaredNorm();
    }
    return total / dims.antennas_per_ap;
}

std::vector<double> all_ap_uncontrolled_interference(const ChannelState& state, const PowerAllocation& powers) {
    check_sizes(state, powers);
    const auto& dims = state.dims();
    std::vector<double> out;
    out.reserve(dims.num_aps());
    for (int b = 0; b < dims.subnetworks; ++b) {
        const Eigen::VectorXd per_antenna = external_power_per_antenna(state, powers, b);
        for (int a = 0; a < dims.aps_per_subnetwork; ++a)
            out.push_back(per_antenna.segment(a * dims.antennas_per_ap, dims.antennas_per_ap).sum() /
                          dims.antennas_per_ap);
    }
    return out;
}

DeferralDecision lbt_deferral_set(const ChannelState& state, const PowerAllocation& powers, double threshold_dbm) {
    const auto& dims = state.dims();
    DeferralDecision d;
    d.ap_interference_w = all_ap_uncontrolled_interference(state, powers);
    const double threshold_w = dbm_to_watt(threshold_dbm);
    for (int b = 0; b < dims.subnetworks; ++b) {
        const auto first = d.ap_interference_w.begin() + dims.first_ap(b);
        if (std::any_of(first, first + dims.aps_per_subnetwork, [&](double i) { return i > threshold_w; }))
            d.deferred.push_back(b);
    }
    return d;
}

PowerAllocation apr_power(const ChannelState& state, const SimConfig& cfg) {
    const auto& mode = cfg.power_mode;
    const int n = state.dims().num_sensors();

    // Interference is linear in the common power, so evaluate it once at 1 W.
    const auto unit = all_ap_uncontrolled_interference(state, PowerAllocation::uniform(n, 30.0));
    const double unit_max = unit.empty() ? 0.0 : *std::max_element(unit.begin(), unit.end());
    const double unit_max_dbm = watt_to_dbm(unit_max);

    // Levels that land on the threshold up to rounding count as not clearing it.
    constexpr double boundary_db = 1e-9;
    for (int k = 0;; ++k) {
        const double level = mode.apr_start_dbm - k * mode.apr_step_db;
        if (level < mode.apr_floor_dbm)
            throw AprFloorReached("APR reached the " + format_number(mode.apr_floor_dbm) +
                                  " dBm floor without clearing the LBT threshold");
        if (unit_max_dbm - 30.0 + level < cfg.lbt_threshold_dbm - boundary_db) {
            auto p = PowerAllocation::uniform(n, level);
            p.apr_steps_applied = k;
            return p;
        }
    }
}

std::pair<PowerAllocation, DeferralDecision> resolve_power_mode(const SimConfig& cfg, const ChannelState& state) {
    const int n = state.dims().num_sensors();
    if (cfg.power_mode.kind == PowerModeKind::Fixed) {
        auto powers = PowerAllocation::uniform(n, cfg.power_mode.fixed_dbm);
        auto decision = lbt_deferral_set(state, powers, cfg.lbt_threshold_dbm);
        return {std::move(powers), std::move(decision)};
    }
    auto powers = apr_power(state, cfg);
    DeferralDecision decision;
    decision.ap_interference_w = all_ap_uncontrolled_interference(state, powers);
    return {std::move(powers), std::move(decision)};
}

}  // namespace subnetsim
