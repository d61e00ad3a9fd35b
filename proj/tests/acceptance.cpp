// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "subnetsim/beamforming.hpp"
#include "subnetsim/campaign.hpp"
#include "subnetsim/channel.hpp"
#include "subnetsim/lbt.hpp"
#include "subnetsim/link_metrics.hpp"
#include "subnetsim/output.hpp"
#include "subnetsim/random.hpp"
#include "subnetsim/topology.hpp"

using namespace subnetsim;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

SimConfig cell(int b, int aps, int drops) {
    SimConfig c;
    c.num_subnetworks = b;
    c.aps_per_subnetwork = aps;
    c.num_drops = drops;
    c.power_mode = PowerMode::apr();
    return c;
}

double q(const CampaignResult& r, double p) { return quantile(r.rate_ecdf, p); }

void zf_property() {
    const auto t0 = Clock::now();
    Rng rng(20240601);
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        Eigen::MatrixXcd h(20, 5);
        for (int c = 0; c < 5; ++c)
            for (int r = 0; r < 20; ++r) h(r, c) = {n(rng), n(rng)};
        const auto F = zf_matrix(h).F;
        const Eigen::MatrixXcd e = F.adjoint() * h - Eigen::MatrixXcd::Identity(5, 5);
        worst = std::max(worst, e.cwiseAbs().maxCoeff());
    }
    const double secs = seconds_since(t0);
    report(1, "ZF correctness", worst < 1e-9 && secs < 10.0,
           "max |F^H H - I| = " + fmt("%.3e", worst) + " over 10^4 matrices in " + fmt("%.2f", secs) + " s");
}

void rate_oracle() {
    SimConfig c;
    // Independently evaluated at 50-digit precision.
    const double frozen = 134514003.75496691;
    const double runtime_oracle = c.uplink_fraction * c.bandwidth_hz *
                                  (std::log2(11.0) - std::sqrt(1.0 - 1.0 / 121.0) *
                                                         oracle::q_inv_bisection(c.packet_error_rate) /
                                                         std::sqrt(c.packet_duration_s * c.bandwidth_hz) *
                                                         std::log2(std::exp(1.0)));
    const double got = fbl_rate(10.0, c);
    const double rel = std::abs(got - frozen) / frozen;
    const double rel_rt = std::abs(got - runtime_oracle) / runtime_oracle;
    bool shannon = true;
    for (int i = 0; i < 1000; ++i) {
        const double gamma = std::pow(10.0, -3.0 + 9.0 * i / 999.0);
        if (fbl_rate(gamma, c) > c.uplink_fraction * c.bandwidth_hz * std::log2(1.0 + gamma)) shannon = false;
    }
    const bool zero = fbl_rate(0.0, c) == 0.0;
    report(2, "finite-blocklength rate", rel < 1e-4 && rel_rt < 1e-4 && zero && shannon,
           "R(10) = " + fmt("%.6f", got) + " bit/s, rel err " + fmt("%.2e", rel) + "; R(0) = " +
               (zero ? "0" : "nonzero") + "; Shannon bound " + (shannon ? "held" : "violated") +
               " on 1000 points");
}

void noise_budget() {
    SimConfig c;
    const double dbm = watt_to_dbm(noise_power(c).sigma_n_sq_w);
    report(3, "noise budget", std::abs(dbm + 85.0) < 1e-9, "sigma_n^2 = " + fmt("%.12f", dbm) + " dBm");
}

// Max over APs of the per-antenna external power, computed straight from the
// stored channel columns.
double max_ap_interference(const ChannelState& s, double mu_w) {
    const auto& d = s.dims();
    double best = 0.0;
    for (int b = 0; b < d.subnetworks; ++b) {
        const auto& r = s.received(b);
        for (int a = 0; a < d.aps_per_subnetwork; ++a) {
            double sum = 0.0;
            for (int l = 0; l < d.num_sensors(); ++l) {
                if (d.subnetwork_of_sensor(l) == b) continue;
                for (int k = 0; k < d.antennas_per_ap; ++k) sum += mu_w * std::norm(r(a * d.antennas_per_ap + k, l));
            }
            best = std::max(best, sum / d.antennas_per_ap);
        }
    }
    return best;
}

struct AprCheck {
    int drops_checked = 0;
    int violations = 0;
    std::string first_violation;
};

AprCheck recheck_apr(const CampaignResult& r) {
    const auto& cfg = r.config;
    const double thr = dbm_to_watt(cfg.lbt_threshold_dbm);
    // Levels exactly on the threshold count as violating; allow rounding.
    const double thr_tol = thr * (1.0 - 1e-9);
    std::vector<int> bad(r.realizations.size(), 0);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < r.realizations.size();) {
            const auto& rec = r.realizations[i];
            if (rec.aborted || rec.deferred_subnetworks != 0) {
                bad[i] = 1;
                continue;
            }
            const auto seed = drop_seed(cfg.master_seed, rec.drop);
            Rng t = make_stream(seed, StreamTag::Topology);
            const auto topo = build_topology(cfg, t);
            Rng l = make_stream(seed, StreamTag::LargeScale);
            const auto large = draw_large_scale(topo, cfg, l);
            Rng f = make_stream(seed, StreamTag::SmallScale, rec.realization);
            const auto state = draw_channel_state(large, f);
            const double at = max_ap_interference(state, dbm_to_watt(rec.power_dbm));
            const double above = max_ap_interference(state, dbm_to_watt(rec.power_dbm + cfg.power_mode.apr_step_db));
            const bool compliant = at < thr;
            const bool tight = rec.power_dbm == cfg.power_mode.apr_start_dbm || above >= thr_tol;
            if (!compliant || !tight) bad[i] = 2;
        }
    };
    {
        std::vector<std::jthread> pool;
        const int n = worker_threads(0, static_cast<int>(r.realizations.size()));
        for (int i = 0; i < n; ++i) pool.emplace_back(work);
    }
    AprCheck out;
    out.drops_checked = static_cast<int>(r.realizations.size());
    for (std::size_t i = 0; i < bad.size(); ++i)
        if (bad[i]) {
            if (out.violations++ == 0)
                out.first_violation = "drop " + std::to_string(r.realizations[i].drop) +
                                      (bad[i] == 1 ? " aborted or deferred" : " not step-optimal");
        }
    return out;
}

// F_hi(x) >= F_lo(x) everywhere: `hi` lies left of `lo`. On failure `where`
// names the first crossing.
bool dominates_left(const Ecdf& hi, const Ecdf& lo, std::string& where) {
    std::vector<double> xs = hi.values;
    xs.insert(xs.end(), lo.values.begin(), lo.values.end());
    std::sort(xs.begin(), xs.end());
    const auto cdf = [](const Ecdf& e, double x) {
        const auto it = std::upper_bound(e.values.begin(), e.values.end(), x);
        if (it == e.values.begin()) return 0.0;
        return e.probability(static_cast<std::size_t>(it - e.values.begin() - 1));
    };
    for (double x : xs)
        if (cdf(hi, x) < cdf(lo, x)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "crosses at %.0f dBm: %.4f vs %.4f", x, cdf(hi, x), cdf(lo, x));
            where = buf;
            return false;
        }
    return true;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void determinism() {
    auto c = cell(30, 5, 24);
    c.power_mode = PowerMode::fixed(-15.0);
    c.master_seed = 4242;
    const auto base = fs::temp_directory_path() / "subnetsim_acceptance_det";
    fs::remove_all(base);
    const int counts[] = {1, 4, 1};
    std::vector<fs::path> dirs;
    for (int i = 0; i < 3; ++i) {
        dirs.push_back(base / ("run" + std::to_string(i)));
        write_campaign_outputs(run_campaign(c, counts[i]), dirs.back());
    }
    bool same = true;
    for (const char* f : {"rates.csv", "cdf.csv", "power_cdf.csv", "drops.csv"})
        for (int i = 1; i < 3; ++i) same = same && slurp(dirs[0] / f) == slurp(dirs[i] / f);
    const auto bytes = fs::file_size(dirs[0] / "rates.csv");
    fs::remove_all(base);
    report(9, "determinism", same,
           std::string(same ? "byte-identical" : "differing") + " CSVs across runs with 1, 4, 1 workers (rates.csv " +
               std::to_string(bytes) + " bytes)");
}

}  // namespace

int main() {
    std::printf("acceptance: %u hardware threads, %d workers\n", std::thread::hardware_concurrency(),
                worker_threads(0, 1 << 20));

    zf_property();
    rate_oracle();
    noise_budget();

    // Full grid: 12 cells x 1000 drops under APR, timed as one batch.
    const int subnets[] = {1, 30, 50, 100};
    const int aps[] = {20, 5, 1};
    std::map<std::pair<int, int>, CampaignResult> grid;
    const auto grid_t0 = Clock::now();
    for (int b : subnets)
        for (int a : aps) {
            const auto t0 = Clock::now();
            grid[{b, a}] = run_campaign(cell(b, a, 1000));
            const auto& r = grid[{b, a}];
            std::printf("  grid B=%d A_b=%d: %zu samples, 0.01/0.001-CDF %.2f/%.2f Mbit/s, %.1f s\n", b, a,
                        r.samples.size(), q(r, 0.01) / 1e6, q(r, 0.001) / 1e6, seconds_since(t0));
            std::fflush(stdout);
        }
    const double grid_secs = seconds_since(grid_t0);

    {
        int checked = 0, violations = 0;
        bool zero_deferral = true;
        std::string first;
        for (int b : {30, 50, 100})
            for (int a : aps) {
                const auto& r = grid[{b, a}];
                if (r.deferral_fraction != 0.0) zero_deferral = false;
                const auto chk = recheck_apr(r);
                checked += chk.drops_checked;
                if (chk.violations && first.empty())
                    first = " (B=" + std::to_string(b) + " A_b=" + std::to_string(a) + ": " + chk.first_violation + ")";
                violations += chk.violations;
            }
        report(4, "APR guarantee", zero_deferral && violations == 0 && checked == 9000,
               std::string("deferral fraction ") + (zero_deferral ? "0" : "nonzero") + " in all 9 cells; " +
                   std::to_string(violations) + " of " + std::to_string(checked) +
                   " drops fail independent step-optimality recheck" + first);
    }

    {
        double frac[3];
        const int levels[] = {-15, -20, -25};
        std::string detail;
        for (int i = 0; i < 3; ++i) {
            auto c = cell(30, 20, 1000);
            c.power_mode = PowerMode::fixed(levels[i]);
            frac[i] = run_campaign(c).zero_rate_fraction;
            detail += (i ? ", " : "") + std::to_string(levels[i]) + " dBm " + fmt("%.3f%%", 100.0 * frac[i]);
        }
        const bool ok = frac[0] > frac[1] && frac[1] > frac[2] && frac[0] >= 0.05 && frac[0] <= 0.30 && frac[2] < 0.01;
        report(5, "baseline LBT zero-rate trend", ok, "zero-rate fraction " + detail);
    }

    // B=1 cells need 30000 drops to reach 150000 pooled samples.
    std::map<int, CampaignResult> isolated;
    for (int a : aps) isolated[a] = run_campaign(cell(1, a, 30000));

    {
        bool ok = true;
        std::string detail;
        for (int b : subnets) {
            const auto& r20 = b == 1 ? isolated[20] : grid[{b, 20}];
            const auto& r5 = b == 1 ? isolated[5] : grid[{b, 5}];
            const auto& r1 = b == 1 ? isolated[1] : grid[{b, 1}];
            const std::size_t n = std::min({r20.samples.size(), r5.samples.size(), r1.samples.size()});
            bool cell_ok = n >= 150000;
            for (double p : kReportedQuantiles) cell_ok = cell_ok && q(r20, p) > q(r5, p) && q(r20, p) > q(r1, p);
            ok = ok && cell_ok;
            char buf[200];
            std::snprintf(buf, sizeof buf, "%sB=%d [%.1f/%.1f/%.1f | %.1f/%.1f/%.1f]%s", b == 1 ? "" : "; ", b,
                          q(r20, 0.01) / 1e6, q(r5, 0.01) / 1e6, q(r1, 0.01) / 1e6, q(r20, 0.001) / 1e6,
                          q(r5, 0.001) / 1e6, q(r1, 0.001) / 1e6, cell_ok ? "" : " FAIL");
            detail += buf;
        }
        report(6, "A_b ordering", ok, "Mbit/s as A20/A5/A1 at 0.01 | 0.001: " + detail);
    }

    {
        const double r20 = q(isolated[20], 0.01) / 1e6;
        const double r1 = q(isolated[1], 0.01) / 1e6;
        const bool ok = std::abs(r20 / 132.58 - 1.0) <= 0.30 && std::abs(r1 / 96.38 - 1.0) <= 0.30;
        report(7, "interference-free anchor", ok,
               "B=1 0.01-CDF: A_b=20 " + fmt("%.2f", r20) + " Mbit/s (" + fmt("%+.1f%%", 100.0 * (r20 / 132.58 - 1.0)) +
                   " vs 132.58), A_b=1 " + fmt("%.2f", r1) + " Mbit/s (" + fmt("%+.1f%%", 100.0 * (r1 / 96.38 - 1.0)) +
                   " vs 96.38)");
    }

    {
        bool ok = true;
        std::string detail;
        for (int a : aps) {
            std::string where;
            bool d = dominates_left(grid[{100, a}].power_ecdf, grid[{50, a}].power_ecdf, where);
            if (d) {
                d = dominates_left(grid[{50, a}].power_ecdf, grid[{30, a}].power_ecdf, where);
                if (!d) where = "B=50 vs B=30 " + where;
            } else {
                where = "B=100 vs B=50 " + where;
            }
            ok = ok && d;
            char buf[300];
            std::snprintf(buf, sizeof buf, "%sA_b=%d %s (median %.0f/%.0f/%.0f dBm)", a == 20 ? "" : "; ", a,
                          d ? "ordered" : ("NOT ordered, " + where).c_str(), quantile(grid[{100, a}].power_ecdf, 0.5),
                          quantile(grid[{50, a}].power_ecdf, 0.5), quantile(grid[{30, a}].power_ecdf, 0.5));
            detail += buf;
        }
        report(8, "APR power ECDF ordering B=100 <= B=50 <= B=30", ok, detail);
    }

    determinism();

    report(10, "grid runtime", grid_secs < 1800.0,
           "12 cells x 1000 drops in " + fmt("%.1f", grid_secs) + " s with " +
               std::to_string(worker_threads(0, 1000)) + " worker(s)");

    std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
