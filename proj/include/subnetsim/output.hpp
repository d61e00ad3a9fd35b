#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "subnetsim/campaign.hpp"

namespace subnetsim {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputOptions {
    bool write_svg = false;
};

/// Writes into `dir` (created if needed):
///   rates.csv        drop,subnetwork,sensor,tx_power_dbm,deferred,sinr_db,rate_bps
///   cdf.csv          value,cumulative_probability of the pooled rates
///   power_cdf.csv    value,cumulative_probability of the pooled transmit powers
///   drops.csv        per fading realization MAC diagnostics
///   summary.txt      low-CDF rate quantiles, deferral and zero-rate fractions
///   config.cfg       the configuration that produced the result
///   rate_cdf.svg     only with OutputOptions::write_svg
/// Returns the written paths in that order.
std::vector<std::filesystem::path> write_campaign_outputs(const CampaignResult& result,
                                                          const std::filesystem::path& dir,
                                                          const OutputOptions& options = {});

void write_ecdf_csv(const Ecdf& e, const std::filesystem::path& path);
std::string summary_text(const CampaignResult& result);

}  // namespace subnetsim
