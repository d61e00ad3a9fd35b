#pragma once

#include <vector>

#include <Eigen/Dense>

#include "subnetsim/config.hpp"
#include "subnetsim/random.hpp"
#include "subnetsim/topology.hpp"

namespace subnetsim {

/// Probability of line of sight in the InF-DL sub-scenario:
/// exp(-d_2d / k) with k = -clutter_size / ln(1 - clutter_density).
double los_probability(double d_2d, double clutter_size_m, double clutter_density);
double los_probability(double d_2d, const SimConfig& cfg);

/// InF path loss in dB (d_3d in m, carrier in GHz). Distances below 1 m are
/// clamped to 1 m. NLOS is the InF-DL law max(PL_DL, PL_LOS, PL_SL).
double pathloss_db(double d_3d, double carrier_ghz, bool los);

/// Zero-mean log-normal shadowing draw in dB.
double shadowing_db(bool los, const SimConfig& cfg, Rng& rng);

struct LargeScaleGain {
    double beta = 1.0;  // linear power gain, 10^(-(pathloss_db + shadow_db)/10)
    bool los = false;
    double pathloss_db = 0.0;
    double shadow_db = 0.0;
};

LargeScaleGain large_scale_beta(const Position3D& sensor, const Position3D& ap, const SimConfig& cfg, Rng& rng);

/// m i.i.d. CN(0, 1) entries.
Eigen::VectorXcd small_scale_vector(int m, Rng& rng);

/// Index bookkeeping shared by channel, beamforming and MAC code. Every
/// sub-network has the same number of sensors, APs and antennas per AP.
struct ChannelDims {
    int subnetworks = 1;
    int sensors_per_subnetwork = 1;
    int aps_per_subnetwork = 1;
    int antennas_per_ap = 1;

    static ChannelDims from(const SimConfig& cfg) {
        return {cfg.num_subnetworks, cfg.sensors_per_subnetwork, cfg.aps_per_subnetwork, cfg.antennas_per_ap()};
    }

    int num_sensors() const { return subnetworks * sensors_per_subnetwork; }
    int num_aps() const { return subnetworks * aps_per_subnetwork; }
    int antennas_per_subnetwork() const { return aps_per_subnetwork * antennas_per_ap; }
    int subnetwork_of_sensor(int o) const { return o / sensors_per_subnetwork; }
    int subnetwork_of_ap(int a) const { return a / aps_per_subnetwork; }
    int first_sensor(int b) const { return b * sensors_per_subnetwork; }
    int first_ap(int b) const { return b * aps_per_subnetwork; }
};

/// Large-scale gains for all O x A links of one drop (held across fading realizations).
class LargeScaleMap {
public:
    LargeScaleMap(ChannelDims dims, std::vector<LargeScaleGain> gains);
    /// Every link with the same gain; used for controlled experiments.
    static LargeScaleMap uniform(ChannelDims dims, double beta);

    const ChannelDims& dims() const { return dims_; }
    const LargeScaleGain& at(int sensor, int ap) const { return gains_[index(sensor, ap)]; }

private:
    std::size_t index(int sensor, int ap) const {
        return static_cast<std::size_t>(sensor) * dims_.num_aps() + ap;
    }

    ChannelDims dims_;
    std::vector<LargeScaleGain> gains_;
};

/// Draws LOS state, path loss and shadowing for every sensor-AP link,
/// iterating sensors in global order and APs in global order.
LargeScaleMap draw_large_scale(const Topology& topology, const SimConfig& cfg, Rng& rng);

/// Channel vectors h_{o,a} = sqrt(beta_{o,a}) g_{o,a} for one fading realization.
///
/// Storage is per receiving sub-network: received(b) is an M x O matrix whose
/// column l stacks h_{l,a} over the APs of sub-network b in AP order (M_{a_b}
/// rows per AP). Sub-network b's own channel H^b is the block of columns owned
/// by its sensors.
class ChannelState {
public:
    ChannelState(ChannelDims dims, std::vector<Eigen::MatrixXcd> received);

    const ChannelDims& dims() const { return dims_; }
    const Eigen::MatrixXcd& received(int b) const { return received_.at(b); }

    /// h_{o,a} for sensor o and AP a (global indices).
    Eigen::VectorXcd link(int sensor, int ap) const;

private:
    ChannelDims dims_;
    std::vector<Eigen::MatrixXcd> received_;
};

/// Redraws small-scale fading on top of a fixed large-scale map.
ChannelState draw_channel_state(const LargeScaleMap& large_scale, Rng& rng);

/// Large-scale and small-scale draws in one step (single fading realization).
ChannelState build_channel_state(const Topology& topology, const SimConfig& cfg, Rng& rng);

}  // namespace subnetsim
