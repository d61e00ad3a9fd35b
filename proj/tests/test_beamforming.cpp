#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "subnetsim/beamforming.hpp"

using namespace subnetsim;

namespace {

Eigen::MatrixXcd random_channel(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd h(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) h(r, c) = {n(rng), n(rng)};
    return h;
}

double max_identity_error(const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& H) {
    const Eigen::MatrixXcd e = F.adjoint() * H - Eigen::MatrixXcd::Identity(H.cols(), H.cols());
    return e.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("identity and scalar channels") {
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(5, 5);
    CHECK(zf_matrix(eye).F.isApprox(eye, 1e-14));

    Eigen::MatrixXcd two(1, 1);
    two(0, 0) = 2.0;
    const auto f = zf_matrix(two);
    CHECK(std::abs(f.F(0, 0) - std::complex<double>(0.5, 0.0)) < 1e-15);
    CHECK(std::abs((f.F.adjoint() * two)(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("random 20x5 channels against an independent solve") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto H = random_channel(20, 5, rng);
        const auto F = zf_matrix(H).F;
        CHECK(max_identity_error(F, H) < 1e-9);

        oracle::CMatrix h(20, std::vector<oracle::cd>(5));
        for (int r = 0; r < 20; ++r)
            for (int c = 0; c < 5; ++c) h[r][c] = H(r, c);
        const auto ref = oracle::zf(h);
        double diff = 0.0, scale = 0.0;
        for (int r = 0; r < 20; ++r)
            for (int c = 0; c < 5; ++c) {
                diff = std::max(diff, std::abs(ref[r][c] - F(r, c)));
                scale = std::max(scale, std::abs(ref[r][c]));
            }
        CHECK(diff / scale < 1e-10);
    }
}

TEST_CASE("nulling and unit response on realistic gains") {
    Rng rng(5);
    std::uniform_real_distribution<double> db(-110.0, -60.0);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::MatrixXcd H = random_channel(20, 5, rng);
        // Distinct large-scale gain per (AP row, sensor), spanning 50 dB.
        for (int r = 0; r < 20; ++r)
            for (int c = 0; c < 5; ++c) H(r, c) *= std::pow(10.0, db(rng) / 20.0);
        const auto F = zf_matrix(H).F;
        for (int o = 0; o < 5; ++o) {
            CHECK(std::abs(F.col(o).dot(H.col(o)) - 1.0) < 1e-9);
            for (int i = 0; i < 5; ++i) {
                if (i == o) continue;
                const double leak = std::abs(F.col(o).dot(H.col(i))) / (F.col(o).norm() * H.col(i).norm());
                CHECK(leak < 1e-9);
            }
        }
    }
}

TEST_CASE("scale covariance") {
    Rng rng(6);
    const auto H = random_channel(20, 5, rng);
    const auto F = zf_matrix(H).F;
    const auto Fs = zf_matrix(3.7 * H).F;
    CHECK(Fs.isApprox(F / 3.7, 1e-12));
    CHECK((Fs.adjoint() * (3.7 * H)).isApprox(F.adjoint() * H, 1e-12));
}

TEST_CASE("AP row-block permutation only permutes F rows") {
    Rng rng(7);
    const ChannelDims dims{1, 5, 5, 4};
    const auto H = random_channel(20, 5, rng);
    std::vector<int> order{3, 0, 4, 1, 2};
    Eigen::MatrixXcd P(20, 5);
    for (int blk = 0; blk < 5; ++blk) P.middleRows(blk * 4, 4) = H.middleRows(order[blk] * 4, 4);
    const auto F = zf_matrix(H).F;
    const auto Fp = zf_matrix(P).F;
    CHECK((Fp.adjoint() * P).isApprox(F.adjoint() * H, 1e-10));
    for (int blk = 0; blk < 5; ++blk)
        CHECK(Fp.middleRows(blk * 4, 4).isApprox(F.middleRows(order[blk] * 4, 4), 1e-10));
    (void)dims;
}

TEST_CASE("stacking picks the sub-network's own sensors") {
    SUBCASE("distributed: 20 single-antenna APs") {
        const ChannelDims dims{3, 5, 20, 1};
        Rng rng(1);
        const auto state = draw_channel_state(LargeScaleMap::uniform(dims, 1.0), rng);
        const auto H = stack_subnetwork_channel(state, 1);
        CHECK(H.rows() == 20);
        CHECK(H.cols() == 5);
        for (int o = 0; o < 5; ++o)
            for (int a = 0; a < 20; ++a) CHECK(H(a, o) == state.link(5 + o, 20 + a)[0]);
    }
    SUBCASE("centralized: one AP holding all antennas") {
        const ChannelDims dims{2, 5, 1, 20};
        Rng rng(2);
        const auto state = draw_channel_state(LargeScaleMap::uniform(dims, 1.0), rng);
        const auto H = stack_subnetwork_channel(state, 0);
        CHECK(H.rows() == 20);
        CHECK(H.cols() == 5);
        for (int o = 0; o < 5; ++o) CHECK(H.col(o) == state.link(o, 0));
    }
}

TEST_CASE("degenerate channels are rejected") {
    Rng rng(9);
    Eigen::MatrixXcd H = random_channel(20, 5, rng);
    H.col(3) = H.col(1);
    CHECK_THROWS_AS(zf_matrix(H), RankDeficientChannel);

    Eigen::MatrixXcd nearly = random_channel(20, 5, rng);
    nearly.col(2) = nearly.col(0) + 1e-9 * nearly.col(4);
    try {
        zf_matrix(nearly);
        FAIL("expected RankDeficientChannel");
    } catch (const RankDeficientChannel& e) {
        CHECK(e.condition() > kMaxGramCondition);
    }

    CHECK_THROWS_AS(zf_matrix(random_channel(4, 5, rng)), std::invalid_argument);
}
