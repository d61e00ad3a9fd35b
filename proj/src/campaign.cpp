#include "subnetsim/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "subnetsim/beamforming.hpp"
#include "subnetsim/channel.hpp"
#include "subnetsim/lbt.hpp"
#include "subnetsim/link_metrics.hpp"
#include "subnetsim/random.hpp"
#include "subnetsim/topology.hpp"

namespace subnetsim {

DropResult run_drop(const SimConfig& cfg, int drop_index, std::uint64_t master_seed) {
    const std::uint64_t seed = drop_seed(master_seed, static_cast<std::uint64_t>(drop_index));

    Rng topo_rng = make_stream(seed, StreamTag::Topology);
    const Topology topology = build_topology(cfg, topo_rng);

    Rng large_rng = make_stream(seed, StreamTag::LargeScale);
    const LargeScaleMap large_scale = draw_large_scale(topology, cfg, large_rng);
    const NoiseBudget noise = noise_power(cfg);
    const auto& dims = large_scale.dims();

    DropResult result;
    result.drop_index = drop_index;
    result.topology_hash = topology.hash();
    result.samples.reserve(static_cast<std::size_t>(cfg.fading_realizations_per_drop) * dims.num_sensors());

    for (int r = 0; r < cfg.fading_realizations_per_drop; ++r) {
        RealizationRecord record;
        record.drop = drop_index;
        record.realization = r;

        Rng fading_rng = make_stream(seed, StreamTag::SmallScale, static_cast<std::uint64_t>(r));
        const ChannelState state = draw_channel_state(large_scale, fading_rng);
        try {
            const auto [powers, deferral] = resolve_power_mode(cfg, state);
            const auto metrics = evaluate_all_sensors(state, powers, noise, deferral, cfg);

            record.deferred_subnetworks = static_cast<int>(deferral.deferred.size());
            record.apr_steps = powers.apr_steps_applied;
            record.power_dbm = powers.common_power_dbm.value_or(powers.power_dbm(0));
            const double max_i = deferral.max_interference_w();
            record.max_ap_interference_dbm = max_i > 0.0 ? watt_to_dbm(max_i) : -INFINITY;

            for (int o = 0; o < dims.num_sensors(); ++o) {
                const auto& m = metrics[o];
                SensorSample s;
                s.drop = drop_index;
                s.realization = r;
                s.subnetwork = dims.subnetwork_of_sensor(o);
                s.sensor = o - dims.first_sensor(s.subnetwork);
                s.tx_power_dbm = powers.power_dbm(o);
                s.deferred = m.deferred;
                s.sinr = m.sinr;
                s.rate_bps = m.rate_bps;
                if (m.deferred) ++result.deferred_sensor_samples;
                result.samples.push_back(s);
            }
        } catch (const RankDeficientChannel& e) {
            record.aborted = true;
            record.abort_reason = e.what();
        } catch (const AprFloorReached& e) {
            record.aborted = true;
            record.abort_reason = e.what();
        }
        if (record.aborted) ++result.aborted_realizations;
        result.realizations.push_back(std::move(record));
    }
    return result;
}

Ecdf ecdf(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("ecdf: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    Ecdf e;
    e.sample_count = sorted.size();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!e.values.empty() && sorted[i] == e.values.back()) {
            e.cumulative_counts.back() = i + 1;
        } else {
            e.values.push_back(sorted[i]);
            e.cumulative_counts.push_back(i + 1);
        }
    }
    return e;
}

double quantile(const Ecdf& e, double p, bool* sufficient) {
    if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("quantile: probability must lie in (0, 1]");
    if (e.sample_count == 0) throw std::invalid_argument("quantile: empty ECDF");
    const double n = static_cast<double>(e.sample_count);
    if (sufficient) *sufficient = n * p >= 1.0 - 1e-9;

    // Smallest count k with k / n >= p, tolerant to p * n rounding just above an integer.
    const double target = std::ceil(p * n - 1e-9 * std::max(1.0, p * n));
    const auto needed = static_cast<std::size_t>(std::max(1.0, target));
    const auto it = std::lower_bound(e.cumulative_counts.begin(), e.cumulative_counts.end(), needed);
    return e.values[static_cast<std::size_t>(it - e.cumulative_counts.begin())];
}

std::vector<double> CampaignResult::rates() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.rate_bps);
    return out;
}

std::vector<double> CampaignResult::powers_dbm() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.tx_power_dbm);
    return out;
}

int worker_threads(int requested, int jobs) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SUBNETSIM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::clamp(n, 1, std::max(1, jobs));
}

CampaignResult aggregate(const SimConfig& cfg, std::vector<DropResult> drops) {
    CampaignResult out;
    out.config = cfg;

    std::size_t total = 0;
    for (const auto& d : drops) total += d.samples.size();
    out.samples.reserve(total);

    std::size_t deferred = 0;
    for (auto& d : drops) {
        out.topology_hashes.push_back(d.topology_hash);
        out.aborted_realizations += d.aborted_realizations;
        if (d.failed()) ++out.failed_drops;
        deferred += static_cast<std::size_t>(d.deferred_sensor_samples);
        out.samples.insert(out.samples.end(), d.samples.begin(), d.samples.end());
        std::move(d.realizations.begin(), d.realizations.end(), std::back_inserter(out.realizations));
        d.samples = {};
    }
    if (out.samples.empty()) throw std::runtime_error("campaign produced no samples: every drop failed");

    const auto rates = out.rates();
    out.rate_ecdf = ecdf(rates);
    out.power_ecdf = ecdf(out.powers_dbm());
    for (double p : kReportedQuantiles) {
        QuantileEntry q;
        q.probability = p;
        q.value = quantile(out.rate_ecdf, p, &q.sufficient);
        out.rate_quantiles.push_back(q);
    }
    const auto zeros = std::count(rates.begin(), rates.end(), 0.0);
    out.zero_rate_fraction = static_cast<double>(zeros) / static_cast<double>(rates.size());
    out.deferral_fraction = static_cast<double>(deferred) / static_cast<double>(rates.size());
    return out;
}

CampaignResult run_campaign(const SimConfig& cfg, int threads, const ProgressCallback& progress) {
    validate(cfg);
    const int total = cfg.num_drops;
    std::vector<DropResult> drops(total);

    std::atomic<int> next{0};
    std::atomic<int> completed{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::mutex progress_mutex;

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= total) return;
            try {
                drops[i] = run_drop(cfg, i, cfg.master_seed);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(total);
                return;
            }
            const int done = completed.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(done, total);
            }
        }
    };

    const int n = worker_threads(threads, total);
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return aggregate(cfg, std::move(drops));
}

}  // namespace subnetsim
