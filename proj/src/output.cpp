#include "subnetsim/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace subnetsim {

namespace fs = std::filesystem;

namespace {

std::ofstream open_for_writing(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw OutputError("write to '" + path.string() + "' failed");
}

std::string db(double linear) {
    return linear > 0.0 ? format_number(10.0 * std::log10(linear)) : "-inf";
}

std::string quantile_key(double p) {
    return "rate_cdf_" + format_number(p) + "_bps";
}

void write_svg(const CampaignResult& result, const fs::path& path) {
    const auto& e = result.rate_ecdf;
    constexpr double width = 640, height = 420, margin = 50;
    const double x_max = std::max(e.values.back() / 1e6, 1e-9);

    std::ostringstream poly;
    const std::size_t stride = std::max<std::size_t>(1, e.size() / 2000);
    double prev_y = height - margin;
    for (std::size_t i = 0; i < e.size(); i += stride) {
        const double x = margin + (width - 2 * margin) * (e.values[i] / 1e6) / x_max;
        const double y = height - margin - (height - 2 * margin) * e.probability(i);
        poly << format_number(x) << ',' << format_number(prev_y) << ' ' << format_number(x) << ','
             << format_number(y) << ' ';
        prev_y = y;
    }
    const double x_end = width - margin;
    poly << format_number(x_end) << ',' << format_number(margin);

    auto out = open_for_writing(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n"
        << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"" << poly.str() << "\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << "Uplink rate [Mbit/s] (max " << format_number(std::round(x_max * 100) / 100) << ")</text>\n"
        << "<text x=\"16\" y=\"" << height / 2 << "\" transform=\"rotate(-90 16 " << height / 2
        << ")\" text-anchor=\"middle\" font-size=\"13\">CDF</text>\n"
        << "</svg>\n";
    finish(out, path);
}

}  // namespace

void write_ecdf_csv(const Ecdf& e, const fs::path& path) {
    auto out = open_for_writing(path);
    out << "value,cumulative_probability\n";
    for (std::size_t i = 0; i < e.size(); ++i)
        out << format_number(e.values[i]) << ',' << format_number(e.probability(i)) << '\n';
    finish(out, path);
}

std::string summary_text(const CampaignResult& result) {
    const auto& cfg = result.config;
    std::ostringstream s;
    s << "samples: " << result.samples.size() << '\n';
    for (const auto& q : result.rate_quantiles) s << quantile_key(q.probability) << ": " << format_number(q.value) << '\n';
    s << "deferral_fraction: " << format_number(result.deferral_fraction) << '\n'
      << "zero_rate_fraction: " << format_number(result.zero_rate_fraction) << '\n'
      << "aborted_realizations: " << result.aborted_realizations << '\n'
      << "failed_drops: " << result.failed_drops << '\n'
      << "num_subnetworks: " << cfg.num_subnetworks << '\n'
      << "aps_per_subnetwork: " << cfg.aps_per_subnetwork << '\n'
      << "power_mode: " << to_string(cfg.power_mode.kind) << '\n';
    if (cfg.power_mode.kind == PowerModeKind::Fixed)
        s << "fixed_power_dbm: " << format_number(cfg.power_mode.fixed_dbm) << '\n';
    s << "clutter_density: " << format_number(cfg.clutter_density) << '\n'
      << "shadow_sigma_los_db: " << format_number(cfg.shadow_sigma_los_db) << '\n'
      << "shadow_sigma_nlos_db: " << format_number(cfg.shadow_sigma_nlos_db) << '\n'
      << "num_drops: " << cfg.num_drops << '\n'
      << "fading_realizations_per_drop: " << cfg.fading_realizations_per_drop << '\n'
      << "master_seed: " << cfg.master_seed << '\n';
    for (const auto& q : result.rate_quantiles)
        if (!q.sufficient)
            s << "warning: fewer than " << format_number(1.0 / q.probability) << " samples for the "
              << format_number(q.probability) << " quantile\n";
    return s.str();
}

std::vector<fs::path> write_campaign_outputs(const CampaignResult& result, const fs::path& dir,
                                             const OutputOptions& options) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw OutputError("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::vector<fs::path> manifest;

    {
        const auto path = dir / "rates.csv";
        auto out = open_for_writing(path);
        out << "drop,subnetwork,sensor,tx_power_dbm,deferred,sinr_db,rate_bps\n";
        for (const auto& s : result.samples)
            out << s.drop << ',' << s.subnetwork << ',' << s.sensor << ',' << format_number(s.tx_power_dbm) << ','
                << (s.deferred ? 1 : 0) << ',' << db(s.sinr) << ',' << format_number(s.rate_bps) << '\n';
        finish(out, path);
        manifest.push_back(path);
    }

    write_ecdf_csv(result.rate_ecdf, dir / "cdf.csv");
    manifest.push_back(dir / "cdf.csv");
    write_ecdf_csv(result.power_ecdf, dir / "power_cdf.csv");
    manifest.push_back(dir / "power_cdf.csv");

    {
        const auto path = dir / "drops.csv";
        auto out = open_for_writing(path);
        out << "drop,realization,aborted,deferred_subnetworks,apr_steps,power_dbm,max_ap_interference_dbm\n";
        for (const auto& r : result.realizations)
            out << r.drop << ',' << r.realization << ',' << (r.aborted ? 1 : 0) << ',' << r.deferred_subnetworks
                << ',' << r.apr_steps << ',' << format_number(r.power_dbm) << ','
                << format_number(r.max_ap_interference_dbm) << '\n';
        finish(out, path);
        manifest.push_back(path);
    }

    {
        const auto path = dir / "summary.txt";
        auto out = open_for_writing(path);
        out << summary_text(result);
        finish(out, path);
        manifest.push_back(path);
    }

    {
        const auto path = dir / "config.cfg";
        auto out = open_for_writing(path);
        out << serialize_config(result.config);
        finish(out, path);
        manifest.push_back(path);
    }

    if (options.write_svg) {
        write_svg(result, dir / "rate_cdf.svg");
        manifest.push_back(dir / "rate_cdf.svg");
    }
    return manifest;
}

}  // namespace subnetsim
