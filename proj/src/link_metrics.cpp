#include "subnetsim/link_metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace subnetsim {

namespace {

// Wichura's AS241 (PPND16): standard normal quantile, about 1e-16 relative.
double normal_quantile(double p) {
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((r * 5226.495278852545925 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                     1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
                  4.6303378461565452959) * r + 1.42343711074968357734) /
                (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                     0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
                  2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                     0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
                  5.4637849111641143699) * r + 6.6579046435011037772) /
                (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                     7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                  0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -value : value;
}

}  // namespace

NoiseBudget noise_power(const SimConfig& cfg) {
    if (!(cfg.bandwidth_hz > 0.0)) throw std::domain_error("bandwidth must be positive");
    const double dbm = cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz) + cfg.noise_figure_db;
    return {std::pow(10.0, (dbm - 30.0) / 10.0)};
}

SignalPowers sensor_powers(const ZfBeamformer& beamformer, const ChannelState& state,
                           std::span<const double> emitting_power_w, int b, int local) {
    const auto& dims = state.dims();
    if (static_cast<int>(emitting_power_w.size()) != dims.num_sensors())
        throw std::invalid_argument("one emitted power per sensor required");
    const int own = dims.first_sensor(b) + local;

    // 1 x O row of f_o^H h_l^b over every sensor l in the system.
    const Eigen::RowVectorXcd projections = beamformer.column(local).adjoint() * state.received(b);

    SignalPowers out;
    for (int l = 0; l < dims.num_sensors(); ++l) {
        const double p = emitting_power_w[l] * std::norm(projections[l]);
        if (l == own)
            out.signal = p;
        else if (dims.subnetwork_of_sensor(l) == b)
            out.controlled += p;
        else
            out.uncontrolled += p;
    }
    return out;
}

double sinr(double p_signal, double p_ci, double p_ui, double f_norm_sq, const NoiseBudget& noise) {
    if (p_signal == 0.0) return 0.0;
    return p_signal / (p_ci + p_ui + noise.sigma_n_sq_w * f_norm_sq);
}

double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: probability must lie in (0, 1)");
    double x = -normal_quantile(p);
    // One Newton step on Q(x) - p.
    const double err = 0.5 * std::erfc(x / std::numbers::sqrt2) - p;
    const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (density > 0.0) x += err / density;
    return x;
}

double fbl_rate(double gamma, const SimConfig& cfg) {
    if (gamma < 0.0) throw std::domain_error("fbl_rate: negative SINR");
    const double capacity = std::log2(1.0 + gamma);
    const double dispersion = std::sqrt(1.0 - 1.0 / ((1.0 + gamma) * (1.0 + gamma)));
    const double penalty = dispersion * q_inv(cfg.packet_error_rate) /
                           std::sqrt(cfg.packet_duration_s * cfg.bandwidth_hz) * std::numbers::log2e;
    const double rate = cfg.uplink_fraction * cfg.bandwidth_hz * (capacity - penalty);
    return rate > 0.0 ? rate : 0.0;
}

std::vector<std::optional<ZfBeamformer>> build_beamformers(const ChannelState& state, const DeferralDecision& deferral) {
    std::vector<std::optional<ZfBeamformer>> out(state.dims().subnetworks);
    for (int b = 0; b < state.dims().subnetworks; ++b)
        if (!deferral.is_deferred(b)) out[b] = zf_matrix(stack_subnetwork_channel(state, b));
    return out;
}

std::vector<SensorMetrics> evaluate_all_sensors(const ChannelState& state,
                                                const std::vector<std::optional<ZfBeamformer>>& beamformers,
                                                const PowerAllocation& powers, const NoiseBudget& noise,
                                                const DeferralDecision& deferral, const SimConfig& cfg) {
    const auto& dims = state.dims();
    if (powers.size() != dims.num_sensors()) throw std::invalid_argument("power allocation size mismatch");
    if (static_cast<int>(beamformers.size()) != dims.subnetworks)
        throw std::invalid_argument("one beamformer slot per sub-network required");

    Eigen::VectorXd emitting = Eigen::Map<const Eigen::VectorXd>(powers.power_w.data(), dims.num_sensors());
    if (!cfg.include_deferred_interference)
        for (int b : deferral.deferred) emitting.segment(dims.first_sensor(b), dims.sensors_per_subnetwork).setZero();

    std::vector<SensorMetrics> out(dims.num_sensors());
    for (int b = 0; b < dims.subnetworks; ++b) {
        const int first = dims.first_sensor(b);
        if (deferral.is_deferred(b)) {
            for (int o = 0; o < dims.sensors_per_subnetwork; ++o) out[first + o].deferred = true;
            continue;
        }
        if (!beamformers[b]) throw std::invalid_argument("missing beamformer for an active sub-network");
        const auto& F = beamformers[b]->F;

        // O_b x O received powers after combining, |f_o^H h_l^b|^2 mu_l.
        const Eigen::MatrixXd gains = (F.adjoint() * state.received(b)).cwiseAbs2();
        for (int o = 0; o < dims.sensors_per_subnetwork; ++o) {
            SensorMetrics& m = out[first + o];
            double own_block = 0.0;
            double outside = 0.0;
            for (int l = 0; l < dims.num_sensors(); ++l) {
                const double p = gains(o, l) * emitting[l];
                if (l >= first && l < first + dims.sensors_per_subnetwork)
                    own_block += l == first + o ? 0.0 : p;
                else
                    outside += p;
            }
            m.p_signal = gains(o, first + o) * emitting[first + o];
            m.p_ci = own_block;
            m.p_ui = outside;
            m.sinr = sinr(m.p_signal, m.p_ci, m.p_ui, F.col(o).squaredNorm(), noise);
            m.rate_bps = fbl_rate(m.sinr, cfg);
        }
    }
    return out;
}

std::vector<SensorMetrics> evaluate_all_sensors(const ChannelState& state, const PowerAllocation& powers,
                                                const NoiseBudget& noise, const DeferralDecision& deferral,
                                                const SimConfig& cfg) {
    return evaluate_all_sensors(state, build_beamformers(state, deferral), powers, noise, deferral, cfg);
}

}  // namespace subnetsim
