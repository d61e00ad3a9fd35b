#include "subnetsim/beamforming.hpp"

#include <limits>
#include <string>

namespace subnetsim {

Eigen::MatrixXcd stack_subnetwork_channel(const ChannelState& state, int b) {
    const auto& dims = state.dims();
    if (b < 0 || b >= dims.subnetworks) throw std::out_of_range("sub-network index out of range");
    return state.received(b).middleCols(dims.first_sensor(b), dims.sensors_per_subnetwork);
}

ZfBeamformer zf_matrix(const Eigen::MatrixXcd& H) {
    if (H.cols() == 0 || H.rows() < H.cols())
        throw std::invalid_argument("zero-forcing needs at least as many antennas as sensors");

    const Eigen::MatrixXcd gram = H.adjoint() * H;

    // Hermitian PSD: eigenvalues are real and equal the singular values.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(condition <= kMaxGramCondition))
        throw RankDeficientChannel("Gram matrix condition number " + std::to_string(condition) +
                                       " exceeds limit",
                                   condition);

    // F^H = G^{-1} H^H, solved through the Cholesky factor of G.
    const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw RankDeficientChannel("Cholesky factorization of the Gram matrix failed", condition);
    return {llt.solve(H.adjoint()).adjoint()};
}

}  // namespace subnetsim
