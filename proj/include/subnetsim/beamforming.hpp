#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "subnetsim/channel.hpp"

namespace subnetsim {

/// The Gram matrix H^H H of a channel draw is too ill-conditioned for ZF.
class RankDeficientChannel : public std::runtime_error {
public:
    RankDeficientChannel(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

/// Gram condition numbers above this abort the fading realization.
inline constexpr double kMaxGramCondition = 1e12;

/// H^b: M x O_b, column o stacks sensor o's channels over the sub-network's APs.
Eigen::MatrixXcd stack_subnetwork_channel(const ChannelState& state, int b);

/// Zero-forcing receive combiner F = H (H^H H)^{-1}; column o is f_o.
struct ZfBeamformer {
    Eigen::MatrixXcd F;

    Eigen::Index sensors() const { return F.cols(); }
    auto column(Eigen::Index o) const { return F.col(o); }
};

/// Requires M >= O_b and a Gram matrix with condition number <= kMaxGramCondition.
ZfBeamformer zf_matrix(const Eigen::MatrixXcd& H);

}  // namespace subnetsim
