#pragma once

#include <optional>
#include <span>
#include <vector>

#include "subnetsim/beamforming.hpp"
#include "subnetsim/channel.hpp"
#include "subnetsim/config.hpp"
#include "subnetsim/lbt.hpp"

namespace subnetsim {

/// Receiver noise power over the full bandwidth, noise figure included.
struct NoiseBudget {
    double sigma_n_sq_w = 0.0;
};

NoiseBudget noise_power(const SimConfig& cfg);

/// Post-combining powers for one sensor (W).
struct SignalPowers {
    double signal = 0.0;        // mu_o |f_o^H h_o|^2
    double controlled = 0.0;    // same-sub-network sensors
    double uncontrolled = 0.0;  // sensors of other sub-networks
};

struct SensorMetrics {
    double p_signal = 0.0;
    double p_ci = 0.0;
    double p_ui = 0.0;
    double sinr = 0.0;
    double rate_bps = 0.0;
    bool deferred = false;
};

/// Powers seen by sensor `local` of sub-network b after combining with f_o.
/// `emitting_power_w[l]` is sensor l's radiated power; silent sensors carry 0.
SignalPowers sensor_powers(const ZfBeamformer& beamformer, const ChannelState& state,
                           std::span<const double> emitting_power_w, int b, int local);

/// p_signal / (p_ci + p_ui + sigma_n^2 |f_o|^2).
double sinr(double p_signal, double p_ci, double p_ui, double f_norm_sq, const NoiseBudget& noise);

/// Inverse of the standard Gaussian tail function Q, for p in (0, 1).
double q_inv(double p);

/// Normal-approximation finite-blocklength rate in bit/s, clamped at 0.
double fbl_rate(double gamma, const SimConfig& cfg);

/// Metrics for every sensor in global order, given one ZF combiner per
/// non-deferred sub-network. Deferred sub-networks get rate 0; their sensors
/// radiate nothing unless cfg.include_deferred_interference is set.
std::vector<SensorMetrics> evaluate_all_sensors(const ChannelState& state,
                                                const std::vector<std::optional<ZfBeamformer>>& beamformers,
                                                const PowerAllocation& powers, const NoiseBudget& noise,
                                                const DeferralDecision& deferral, const SimConfig& cfg);

/// ZF combiners for all non-deferred sub-networks. Throws RankDeficientChannel.
std::vector<std::optional<ZfBeamformer>> build_beamformers(const ChannelState& state, const DeferralDecision& deferral);

/// Convenience: builds the combiners and evaluates all sensors.
std::vector<SensorMetrics> evaluate_all_sensors(const ChannelState& state, const PowerAllocation& powers,
                                                const NoiseBudget& noise, const DeferralDecision& deferral,
                                                const SimConfig& cfg);

}  // namespace subnetsim
