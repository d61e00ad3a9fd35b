#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "subnetsim/config.hpp"

namespace subnetsim {

/// One pooled per-sensor observation.
struct SensorSample {
    int drop = 0;
    int realization = 0;
    int subnetwork = 0;
    int sensor = 0;  // index inside the sub-network
    double tx_power_dbm = 0.0;
    bool deferred = false;
    double sinr = 0.0;  // linear
    double rate_bps = 0.0;
};

/// Per fading realization MAC diagnostics.
struct RealizationRecord {
    int drop = 0;
    int realization = 0;
    bool aborted = false;
    std::string abort_reason;
    int deferred_subnetworks = 0;
    int apr_steps = 0;
    double power_dbm = 0.0;
    double max_ap_interference_dbm = 0.0;
};

struct DropResult {
    int drop_index = 0;
    std::uint64_t topology_hash = 0;
    std::vector<SensorSample> samples;
    std::vector<RealizationRecord> realizations;
    int deferred_sensor_samples = 0;
    int aborted_realizations = 0;

    bool failed() const { return aborted_realizations == static_cast<int>(realizations.size()); }
};

/// Samples a topology and large-scale map for the drop, then for each fading
/// realization draws fast fading, resolves the power mode, builds ZF combiners
/// for the active sub-networks and evaluates every sensor. Degenerate
/// realizations (ill-conditioned Gram matrix, APR floor) are recorded as
/// aborted and contribute no samples.
DropResult run_drop(const SimConfig& cfg, int drop_index, std::uint64_t master_seed);

/// Empirical CDF over the distinct sample values.
struct Ecdf {
    std::vector<double> values;                 // strictly increasing
    std::vector<std::size_t> cumulative_counts; // samples <= values[i]
    std::size_t sample_count = 0;

    std::size_t size() const { return values.size(); }
    double probability(std::size_t i) const {
        return static_cast<double>(cumulative_counts[i]) / static_cast<double>(sample_count);
    }
};

Ecdf ecdf(std::span<const double> samples);

/// Lower empirical quantile: the smallest value whose cumulative probability
/// reaches p. `sufficient`, when given, reports whether n * p >= 1.
double quantile(const Ecdf& e, double p, bool* sufficient = nullptr);

struct QuantileEntry {
    double probability = 0.0;
    double value = 0.0;
    bool sufficient = true;
};

struct CampaignResult {
    SimConfig config;
    std::vector<SensorSample> samples;  // drop, realization, sub-network, sensor order
    std::vector<RealizationRecord> realizations;
    std::vector<std::uint64_t> topology_hashes;
    Ecdf rate_ecdf;
    Ecdf power_ecdf;
    std::vector<QuantileEntry> rate_quantiles;  // at 0.01 and 0.001
    double zero_rate_fraction = 0.0;
    double deferral_fraction = 0.0;
    int aborted_realizations = 0;
    int failed_drops = 0;

    std::vector<double> rates() const;
    std::vector<double> powers_dbm() const;
};

inline constexpr double kReportedQuantiles[] = {0.01, 0.001};

using ProgressCallback = std::function<void(int completed, int total)>;

/// Worker count: `requested` (0 = hardware concurrency), capped by the
/// SUBNETSIM_THREADS environment variable when set, and by `jobs`.
int worker_threads(int requested, int jobs);

/// Runs cfg.num_drops drops, possibly in parallel, and pools the samples in
/// drop order. The output does not depend on the number of workers.
CampaignResult run_campaign(const SimConfig& cfg, int threads = 0, const ProgressCallback& progress = {});

/// Pools finished drops; exposed so that callers can aggregate drop subsets.
CampaignResult aggregate(const SimConfig& cfg, std::vector<DropResult> drops);

}  // namespace subnetsim
