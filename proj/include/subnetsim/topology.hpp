#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "subnetsim/config.hpp"
#include "subnetsim/random.hpp"

namespace subnetsim {

class PlacementInfeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Position3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Position3D&) const = default;
};

double horizontal_distance(const Position3D& a, const Position3D& b);
double distance_3d(const Position3D& a, const Position3D& b);

/// One sub-network: the CU-co-located AP is always ap_positions[0].
struct SubnetworkLayout {
    Position3D center;
    std::vector<Position3D> ap_positions;
    std::vector<Position3D> sensor_positions;
};

/// (sub-network, position inside the sub-network), both zero-based.
struct LocalIndex {
    int subnetwork = 0;
    int local = 0;

    bool operator==(const LocalIndex&) const = default;
};

/// A full deployment. Global sensor and AP indices are assigned in
/// sub-network order, so sub-network b owns the contiguous block
/// [first_sensor(b), first_sensor(b) + sensors_in(b)).
class Topology {
public:
    Topology(double hall_side_m, double hall_height_m, std::vector<SubnetworkLayout> subnetworks);

    double hall_side_m() const { return hall_side_; }
    double hall_height_m() const { return hall_height_; }

    int num_subnetworks() const { return static_cast<int>(subnetworks_.size()); }
    int num_sensors() const { return static_cast<int>(sensor_owner_.size()); }
    int num_aps() const { return static_cast<int>(ap_owner_.size()); }

    const SubnetworkLayout& subnetwork(int b) const { return subnetworks_.at(b); }
    const std::vector<SubnetworkLayout>& subnetworks() const { return subnetworks_; }

    int first_sensor(int b) const { return sensor_offset_.at(b); }
    int first_ap(int b) const { return ap_offset_.at(b); }
    int sensors_in(int b) const { return static_cast<int>(subnetworks_.at(b).sensor_positions.size()); }
    int aps_in(int b) const { return static_cast<int>(subnetworks_.at(b).ap_positions.size()); }

    int sensor_index(int b, int local) const;
    int ap_index(int b, int local) const;
    LocalIndex sensor(int global) const { return sensor_owner_.at(global); }
    LocalIndex ap(int global) const { return ap_owner_.at(global); }

    const Position3D& sensor_position(int global) const;
    const Position3D& ap_position(int global) const;

    /// FNV-1a over every coordinate; identifies a deployment in drop records.
    std::uint64_t hash() const;

private:
    double hall_side_;
    double hall_height_;
    std::vector<SubnetworkLayout> subnetworks_;
    std::vector<int> sensor_offset_;
    std::vector<int> ap_offset_;
    std::vector<LocalIndex> sensor_owner_;
    std::vector<LocalIndex> ap_owner_;
};

/// Uniform point in the horizontal disk of `radius` around `center`, at height z.
Position3D sample_in_disk(const Position3D& center, double radius, double z, Rng& rng);

/// B centers in [r, side - r]^2 with pairwise horizontal distance >= min
/// separation. Random sequential placement first; if that exhausts its attempt
/// budget, a jittered square grid is subsampled instead.
std::vector<Position3D> sample_subnetwork_centers(const SimConfig& cfg, Rng& rng);

std::vector<Position3D> place_aps(const Position3D& center, const SimConfig& cfg, Rng& rng);
std::vector<Position3D> place_sensors(const Position3D& center, const SimConfig& cfg, Rng& rng);

Topology build_topology(const SimConfig& cfg, Rng& rng);

/// CSV with columns entity,global_index,subnetwork,x,y,z (entity is center, ap or sensor).
void write_topology_csv(const Topology& topology, const std::filesystem::path& path);

}  // namespace subnetsim
