#include "subnetsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>

namespace subnetsim {

namespace {

// Total placement attempts before giving up on random sequential placement.
constexpr long kMaxCenterAttempts = 1'000'000;
// Consecutive failures for one center before the partial layout is discarded.
constexpr long kMaxAttemptsPerCenter = 20'000;
// Saturation coverage of random sequential disk placement; above it the
// rejection sampler cannot succeed and the grid is used directly.
constexpr double kRsaJammingCoverage = 0.547;

bool separated(const std::vector<Position3D>& placed, const Position3D& candidate, double min_sep) {
    const double min_sep_sq = min_sep * min_sep;
    for (const auto& p : placed) {
        const double dx = p.x - candidate.x;
        const double dy = p.y - candidate.y;
        if (dx * dx + dy * dy < min_sep_sq) return false;
    }
    return true;
}

std::vector<Position3D> rejection_centers(const SimConfig& cfg, Rng& rng, bool& ok) {
    const double lo = cfg.subnetwork_radius_m;
    const double hi = cfg.hall_side_m - cfg.subnetwork_radius_m;
    std::uniform_real_distribution<double> coord(lo, hi);

    std::vector<Position3D> centers;
    centers.reserve(cfg.num_subnetworks);
    long total = 0;
    long since_last = 0;
    while (total < kMaxCenterAttempts) {
        if (static_cast<int>(centers.size()) == cfg.num_subnetworks) {
            ok = true;
            return centers;
        }
        ++total;
        ++since_last;
        const double x = coord(rng);
        const double y = coord(rng);
        const Position3D candidate{x, y, cfg.ap_height_m};
        if (separated(centers, candidate, cfg.min_center_separation_m)) {
            centers.push_back(candidate);
            since_last = 0;
        } else if (since_last >= kMaxAttemptsPerCenter) {
            centers.clear();
            since_last = 0;
        }
    }
    ok = static_cast<int>(centers.size()) == cfg.num_subnetworks;
    return centers;
}

std::vector<Position3D> grid_centers(const SimConfig& cfg, Rng& rng) {
    const double lo = cfg.subnetwork_radius_m;
    const double hi = cfg.hall_side_m - cfg.subnetwork_radius_m;
    const double span = hi - lo;
    const double sep = cfg.min_center_separation_m;

    const int per_axis = static_cast<int>(std::floor(span / sep + 1e-9)) + 1;
    if (static_cast<long>(per_axis) * per_axis < cfg.num_subnetworks)
        throw PlacementInfeasible("cannot place " + std::to_string(cfg.num_subnetworks) +
                                  " sub-networks with separation " + format_number(sep) +
                                  " m in a " + format_number(cfg.hall_side_m) + " m hall");

    const double pitch = per_axis > 1 ? span / (per_axis - 1) : 0.0;
    const double jitter = per_axis > 1 ? std::max(0.0, (pitch - sep) / 2.0) : 0.0;

    std::vector<int> cells(static_cast<std::size_t>(per_axis) * per_axis);
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(cfg.num_subnetworks);

    std::uniform_real_distribution<double> offset(-jitter, jitter);
    std::vector<Position3D> centers;
    centers.reserve(cells.size());
    for (int cell : cells) {
        const int ix = cell % per_axis;
        const int iy = cell / per_axis;
        double x = lo + ix * pitch;
        double y = lo + iy * pitch;
        if (jitter > 0.0) {
            x = std::clamp(x + offset(rng), lo, hi);
            y = std::clamp(y + offset(rng), lo, hi);
        }
        centers.push_back({x, y, cfg.ap_height_m});
    }
    return centers;
}

}  // namespace

double horizontal_distance(const Position3D& a, const Position3D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double distance_3d(const Position3D& a, const Position3D& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Topology::Topology(double hall_side_m, double hall_height_m, std::vector<SubnetworkLayout> subnetworks)
    : hall_side_(hall_side_m), hall_height_(hall_height_m), subnetworks_(std::move(subnetworks)) {
    sensor_offset_.reserve(subnetworks_.size());
    ap_offset_.reserve(subnetworks_.size());
    for (int b = 0; b < num_subnetworks(); ++b) {
        const auto& s = subnetworks_[b];
        sensor_offset_.push_back(static_cast<int>(sensor_owner_.size()));
        ap_offset_.push_back(static_cast<int>(ap_owner_.size()));
        for (int o = 0; o < static_cast<int>(s.sensor_positions.size()); ++o) sensor_owner_.push_back({b, o});
        for (int a = 0; a < static_cast<int>(s.ap_positions.size()); ++a) ap_owner_.push_back({b, a});
    }
}

int Topology::sensor_index(int b, int local) const {
    if (local < 0 || local >= sensors_in(b)) throw std::out_of_range("sensor index out of range");
    return sensor_offset_[b] + local;
}

int Topology::ap_index(int b, int local) const {
    if (local < 0 || local >= aps_in(b)) throw std::out_of_range("AP index out of range");
    return ap_offset_[b] + local;
}

const Position3D& Topology::sensor_position(int global) const {
    const auto [b, o] = sensor(global);
    return subnetworks_[b].sensor_positions[o];
}

const Position3D& Topology::ap_position(int global) const {
    const auto [b, a] = ap(global);
    return subnetworks_[b].ap_positions[a];
}

std::uint64_t Topology::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](double v) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& s : subnetworks_) {
        for (const auto* group : {&s.ap_positions, &s.sensor_positions})
            for (const auto& p : *group) {
                feed(p.x);
                feed(p.y);
                feed(p.z);
            }
    }
    return h;
}

Position3D sample_in_disk(const Position3D& center, double radius, double z, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double rho = radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    return {center.x + rho * std::cos(theta), center.y + rho * std::sin(theta), z};
}

std::vector<Position3D> sample_subnetwork_centers(const SimConfig& cfg, Rng& rng) {
    if (cfg.num_subnetworks < 1) throw PlacementInfeasible("need at least one sub-network");
    const double lo = cfg.subnetwork_radius_m;
    const double hi = cfg.hall_side_m - cfg.subnetwork_radius_m;
    if (hi < lo) throw PlacementInfeasible("sub-network disk does not fit inside the hall");

    // Fraction of the (separation/2)-padded placement square covered by the
    // exclusion disks; beyond the jamming limit sequential placement stalls.
    const double half = cfg.min_center_separation_m / 2.0;
    const double padded = (hi - lo) + 2.0 * half;
    const double coverage = cfg.num_subnetworks * std::numbers::pi * half * half / (padded * padded);
    if (coverage < kRsaJammingCoverage) {
        bool ok = false;
        auto centers = rejection_centers(cfg, rng, ok);
        if (ok) return centers;
    }
    return grid_centers(cfg, rng);
}

std::vector<Position3D> place_aps(const Position3D& center, const SimConfig& cfg, Rng& rng) {
    std::vector<Position3D> aps;
    aps.reserve(cfg.aps_per_subnetwork);
    aps.push_back({center.x, center.y, cfg.ap_height_m});
    for (int a = 1; a < cfg.aps_per_subnetwork; ++a)
        aps.push_back(sample_in_disk(center, cfg.subnetwork_radius_m, cfg.ap_height_m, rng));
    return aps;
}

std::vector<Position3D> place_sensors(const Position3D& center, const SimConfig& cfg, Rng& rng) {
    std::vector<Position3D> sensors;
    sensors.reserve(cfg.sensors_per_subnetwork);
    for (int o = 0; o < cfg.sensors_per_subnetwork; ++o)
        sensors.push_back(sample_in_disk(center, cfg.subnetwork_radius_m, cfg.sensor_height_m, rng));
    return sensors;
}

Topology build_topology(const SimConfig& cfg, Rng& rng) {
    const auto centers = sample_subnetwork_centers(cfg, rng);
    std::vector<SubnetworkLayout> layouts;
    layouts.reserve(centers.size());
    for (const auto& c : centers) {
        SubnetworkLayout layout;
        layout.center = c;
        layout.ap_positions = place_aps(c, cfg, rng);
        layout.sensor_positions = place_sensors(c, cfg, rng);
        layouts.push_back(std::move(layout));
    }
    return Topology(cfg.hall_side_m, cfg.hall_height_m, std::move(layouts));
}

void write_topology_csv(const Topology& topology, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "entity,global_index,subnetwork,x,y,z\n";
    auto row = [&out](const char* kind, int index, int b, const Position3D& p) {
        out << kind << ',' << index << ',' << b << ',' << format_number(p.x) << ','
            << format_number(p.y) << ',' << format_number(p.z) << '\n';
    };
    for (int b = 0; b < topology.num_subnetworks(); ++b) {
        const auto& s = topology.subnetwork(b);
        row("center", b, b, s.center);
        for (int a = 0; a < topology.aps_in(b); ++a) row("ap", topology.ap_index(b, a), b, s.ap_positions[a]);
        for (int o = 0; o < topology.sensors_in(b); ++o)
            row("sensor", topology.sensor_index(b, o), b, s.sensor_positions[o]);
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace subnetsim
