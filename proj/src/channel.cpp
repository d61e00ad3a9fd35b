#include "subnetsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subnetsim {

double los_probability(double d_2d, double clutter_size_m, double clutter_density) {
    if (!(clutter_density > 0.0 && clutter_density < 1.0))
        throw std::domain_error("clutter density must lie in (0, 1)");
    if (!(clutter_size_m > 0.0)) throw std::domain_error("clutter size must be positive");
    if (d_2d < 0.0) throw std::domain_error("negative 2D distance");
    const double k = -clutter_size_m / std::log1p(-clutter_density);
    return std::exp(-d_2d / k);
}

double los_probability(double d_2d, const SimConfig& cfg) {
    return los_probability(d_2d, cfg.clutter_size_m, cfg.clutter_density);
}

double pathloss_db(double d_3d, double carrier_ghz, bool los) {
    if (!(d_3d > 0.0)) throw std::domain_error("3D distance must be positive");
    if (!(carrier_ghz > 0.0)) throw std::domain_error("carrier frequency must be positive");
    const double log_d = std::log10(std::max(d_3d, 1.0));
    const double log_f = std::log10(carrier_ghz);
    const double pl_los = 31.84 + 21.5 * log_d + 19.0 * log_f;
    if (los) return pl_los;
    const double pl_dl = 18.6 + 35.7 * log_d + 20.0 * log_f;
    const double pl_sl = 33.0 + 25.5 * log_d + 20.0 * log_f;
    return std::max({pl_dl, pl_los, pl_sl});
}

double shadowing_db(bool los, const SimConfig& cfg, Rng& rng) {
    const double sigma = los ? cfg.shadow_sigma_los_db : cfg.shadow_sigma_nlos_db;
    if (sigma == 0.0) return 0.0;
    std::normal_distribution<double> n(0.0, sigma);
    return n(rng);
}

namespace {

// Per-link draws with the configuration-dependent constants hoisted.
class LargeScaleSampler {
public:
    explicit LargeScaleSampler(const SimConfig& cfg)
        : inv_k_(-std::log1p(-cfg.clutter_density) / cfg.clutter_size_m),
          log_f_(std::log10(cfg.carrier_freq_ghz)),
          sigma_los_(cfg.shadow_sigma_los_db),
          sigma_nlos_(cfg.shadow_sigma_nlos_db) {
        los_probability(0.0, cfg);
        pathloss_db(1.0, cfg.carrier_freq_ghz, true);
    }

    LargeScaleGain draw(const Position3D& sensor, const Position3D& ap, Rng& rng) {
        LargeScaleGain g;
        g.los = unit_(rng) < std::exp(-horizontal_distance(sensor, ap) * inv_k_);
        const double log_d = std::log10(std::max(distance_3d(sensor, ap), 1.0));
        const double pl_los = 31.84 + 21.5 * log_d + 19.0 * log_f_;
        g.pathloss_db = g.los ? pl_los
                              : std::max({18.6 + 35.7 * log_d + 20.0 * log_f_, pl_los,
                                          33.0 + 25.5 * log_d + 20.0 * log_f_});
        const double sigma = g.los ? sigma_los_ : sigma_nlos_;
        g.shadow_db = sigma == 0.0 ? 0.0 : sigma * normal_(rng);
        g.beta = std::exp(-(g.pathloss_db + g.shadow_db) * kDbToNeper);
        return g;
    }

private:
    static constexpr double kDbToNeper = 0.23025850929940458;  // ln(10) / 10

    double inv_k_;
    double log_f_;
    double sigma_los_;
    double sigma_nlos_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

LargeScaleGain large_scale_beta(const Position3D& sensor, const Position3D& ap, const SimConfig& cfg, Rng& rng) {
    return LargeScaleSampler(cfg).draw(sensor, ap, rng);
}

Eigen::VectorXcd small_scale_vector(int m, Rng& rng) {
    if (m < 1) throw std::invalid_argument("antenna count must be >= 1");
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    Eigen::VectorXcd g(m);
    for (int k = 0; k < m; ++k) {
        const double re = n(rng);
        const double im = n(rng);
        g[k] = {re, im};
    }
    return g;
}

LargeScaleMap::LargeScaleMap(ChannelDims dims, std::vector<LargeScaleGain> gains)
    : dims_(dims), gains_(std::move(gains)) {
    if (gains_.size() != static_cast<std::size_t>(dims_.num_sensors()) * dims_.num_aps())
        throw std::invalid_argument("large-scale map size does not match dimensions");
}

LargeScaleMap LargeScaleMap::uniform(ChannelDims dims, double beta) {
    LargeScaleGain g;
    g.beta = beta;
    g.pathloss_db = -10.0 * std::log10(beta);
    return LargeScaleMap(dims, std::vector<LargeScaleGain>(
                                   static_cast<std::size_t>(dims.num_sensors()) * dims.num_aps(), g));
}

LargeScaleMap draw_large_scale(const Topology& topology, const SimConfig& cfg, Rng& rng) {
    const auto dims = ChannelDims::from(cfg);
    if (topology.num_sensors() != dims.num_sensors() || topology.num_aps() != dims.num_aps())
        throw std::invalid_argument("topology does not match configuration");

    std::vector<LargeScaleGain> gains;
    gains.reserve(static_cast<std::size_t>(dims.num_sensors()) * dims.num_aps());
    LargeScaleSampler sampler(cfg);
    for (int o = 0; o < dims.num_sensors(); ++o) {
        const auto& s = topology.sensor_position(o);
        for (int a = 0; a < dims.num_aps(); ++a) gains.push_back(sampler.draw(s, topology.ap_position(a), rng));
    }
    return LargeScaleMap(dims, std::move(gains));
}

ChannelState::ChannelState(ChannelDims dims, std::vector<Eigen::MatrixXcd> received)
    : dims_(dims), received_(std::move(received)) {
    if (static_cast<int>(received_.size()) != dims_.subnetworks)
        throw std::invalid_argument("one received-channel matrix per sub-network required");
    for (const auto& m : received_)
        if (m.rows() != dims_.antennas_per_subnetwork() || m.cols() != dims_.num_sensors())
            throw std::invalid_argument("received-channel matrix has wrong shape");
}

Eigen::VectorXcd ChannelState::link(int sensor, int ap) const {
    const int b = dims_.subnetwork_of_ap(ap);
    const int row = (ap - dims_.first_ap(b)) * dims_.antennas_per_ap;
    return received_.at(b).col(sensor).segment(row, dims_.antennas_per_ap);
}

ChannelState draw_channel_state(const LargeScaleMap& large_scale, Rng& rng) {
    const auto& dims = large_scale.dims();
    const int m_ap = dims.antennas_per_ap;
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));

    std::vector<Eigen::MatrixXcd> received;
    received.reserve(dims.subnetworks);
    for (int b = 0; b < dims.subnetworks; ++b) {
        Eigen::MatrixXcd h(dims.antennas_per_subnetwork(), dims.num_sensors());
        for (int o = 0; o < dims.num_sensors(); ++o) {
            for (int a_local = 0; a_local < dims.aps_per_subnetwork; ++a_local) {
                const double amp = std::sqrt(large_scale.at(o, dims.first_ap(b) + a_local).beta);
                for (int k = 0; k < m_ap; ++k) {
                    const double re = n(rng);
                    const double im = n(rng);
                    h(a_local * m_ap + k, o) = {amp * re, amp * im};
                }
            }
        }
        received.push_back(std::move(h));
    }
    return ChannelState(dims, std::move(received));
}

ChannelState build_channel_state(const Topology& topology, const SimConfig& cfg, Rng& rng) {
    const auto large = draw_large_scale(topology, cfg, rng);
    return draw_channel_state(large, rng);
}

}  // namespace subnetsim
