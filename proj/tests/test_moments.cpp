// test_moments.cpp
//
// Trace moments, Newton-Girard conversion, and the moment-based capacity
// path, checked against spectra with known eigenvalues.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "freemimo/moments.hpp"
#include "freemimo/rng.hpp"

using freemimo::CapacityValue;
using freemimo::MomentVector;
using freemimo::SpectrumEstimate;

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kLogDetTol = 1e-9;

// Hermitian matrix with prescribed eigenvalues, conjugated by a random
// unitary-ish rotation built from Householder-free Givens products.
Eigen::MatrixXcd hermitian_with_eigenvalues(const std::vector<double>& eigenvalues,
                                            std::uint64_t seed) {
    const int n = static_cast<int>(eigenvalues.size());
    freemimo::StreamRng rng(seed);
    Eigen::MatrixXcd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = rng.cgauss();
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
    const Eigen::MatrixXcd Q = qr.householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = eigenvalues[static_cast<std::size_t>(i)];
    return Q * d.asDiagonal() * Q.adjoint();
}

}  // namespace

TEST_CASE("trace moments of a diagonal matrix are eigenvalue power means") {
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
    D(0, 0) = 1.0;
    D(1, 1) = 2.0;
    D(2, 2) = 3.0;

    const MomentVector m = freemimo::trace_moments(D, 4);
    REQUIRE(m.order() == 4);
    CHECK(m.m(1) == Catch::Approx((1.0 + 2.0 + 3.0) / 3.0).margin(kExactTol));
    CHECK(m.m(2) == Catch::Approx((1.0 + 4.0 + 9.0) / 3.0).margin(kExactTol));
    CHECK(m.m(3) == Catch::Approx((1.0 + 8.0 + 27.0) / 3.0).margin(kExactTol));
    CHECK(m.m(4) == Catch::Approx((1.0 + 16.0 + 81.0) / 3.0).margin(kExactTol));
}

TEST_CASE("trace moments are rotation invariant") {
    const std::vector<double> eigenvalues = {0.5, 1.25, 2.0, 4.0};
    const Eigen::MatrixXcd M = hermitian_with_eigenvalues(eigenvalues, 7);
    const MomentVector m = freemimo::trace_moments(M, 4);
    for (int j = 1; j <= 4; ++j) {
        double expected = 0.0;
        for (double lambda : eigenvalues) expected += std::pow(lambda, j);
        expected /= static_cast<double>(eigenvalues.size());
        CHECK(m.m(static_cast<std::size_t>(j)) == Catch::Approx(expected).margin(1e-10));
    }
}

TEST_CASE("trace moments reject invalid inputs") {
    CHECK_THROWS_AS(freemimo::trace_moments(Eigen::MatrixXcd::Zero(2, 3), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(freemimo::trace_moments(Eigen::MatrixXcd::Zero(2, 2), 0),
                    std::invalid_argument);

    Eigen::MatrixXcd not_hermitian = Eigen::MatrixXcd::Zero(2, 2);
    not_hermitian(0, 1) = {1.0, 0.0};
    not_hermitian(1, 0) = {2.0, 0.0};  // != conj of (0,1)
    CHECK_THROWS_AS(freemimo::trace_moments(not_hermitian, 2), std::invalid_argument);
}

TEST_CASE("power sums to elementary symmetric polynomials, ranks 1..4") {
    SECTION("three equal eigenvalues (1,1,1)") {
        const SpectrumEstimate s = freemimo::power_sums_to_elementary({3.0, 3.0, 3.0});
        REQUIRE(s.rank() == 3);
        CHECK(s.elementary[0] == Catch::Approx(3.0).margin(kExactTol));
        CHECK(s.elementary[1] == Catch::Approx(3.0).margin(kExactTol));
        CHECK(s.elementary[2] == Catch::Approx(1.0).margin(kExactTol));
    }
    SECTION("eigenvalues (1,2,3)") {
        const SpectrumEstimate s = freemimo::power_sums_to_elementary({6.0, 14.0, 36.0});
        CHECK(s.elementary[0] == Catch::Approx(6.0).margin(kExactTol));
        CHECK(s.elementary[1] == Catch::Approx(11.0).margin(kExactTol));
        CHECK(s.elementary[2] == Catch::Approx(6.0).margin(kExactTol));
    }
    SECTION("eigenvalues (1,2,3,4)") {
        const SpectrumEstimate s =
            freemimo::power_sums_to_elementary({10.0, 30.0, 100.0, 354.0});
        CHECK(s.elementary[0] == Catch::Approx(10.0).margin(kExactTol));
        CHECK(s.elementary[1] == Catch::Approx(35.0).margin(kExactTol));
        CHECK(s.elementary[2] == Catch::Approx(50.0).margin(kExactTol));
        CHECK(s.elementary[3] == Catch::Approx(24.0).margin(kExactTol));
    }
    SECTION("rank outside 1..4 rejected") {
        CHECK_THROWS_AS(freemimo::power_sums_to_elementary({}), std::invalid_argument);
        CHECK_THROWS_AS(freemimo::power_sums_to_elementary({1, 2, 3, 4, 5}),
                        std::invalid_argument);
    }
}

// The third-elementary identity is a known typo trap: the S1*S2 coefficient
// is -3, not -7. With eigenvalues (1,1,1) the correct value is
// e3 = 1*1*1 = 1, while the -7 variant yields -5. Frozen as a regression
// guard so the coefficient cannot silently drift.
TEST_CASE("third elementary symmetric coefficient regression guard") {
    const double s1 = 3.0, s2 = 3.0, s3 = 3.0;
    const double correct = (s1 * s1 * s1 - 3.0 * s1 * s2 + 2.0 * s3) / 6.0;
    const double wrong_variant = (s1 * s1 * s1 - 7.0 * s1 * s2 + 2.0 * s3) / 6.0;

    CHECK(correct == Catch::Approx(1.0).margin(kExactTol));
    CHECK(wrong_variant == Catch::Approx(-5.0).margin(kExactTol));
    CHECK(freemimo::power_sums_to_elementary({s1, s2, s3}).elementary[2] ==
          Catch::Approx(correct).margin(kExactTol));
}

TEST_CASE("capacity from a one-eigenvalue spectrum matches the scalar formula") {
    SpectrumEstimate s;
    s.elementary = {2.5};
    const CapacityValue c = freemimo::capacity_from_spectrum(s, 0.5, 1);
    CHECK_FALSE(c.clamped);
    CHECK(c.bits_per_antenna == Catch::Approx(std::log2(1.0 + 2.5 / 0.5)).margin(kExactTol));
}

TEST_CASE("capacity argument below the floor is clamped and flagged") {
    SpectrumEstimate s;
    s.elementary = {-2.0};  // 1 + (-2)/sigma2 < 0 for sigma2 = 1
    const CapacityValue c = freemimo::capacity_from_spectrum(s, 1.0, 2);
    CHECK(c.clamped);
    CHECK(c.bits_per_antenna ==
          Catch::Approx(std::log2(freemimo::kCapacityArgFloor) / 2.0).margin(kExactTol));
}

TEST_CASE("capacity rejects nonpositive noise and bad antenna count") {
    SpectrumEstimate s;
    s.elementary = {1.0};
    CHECK_THROWS_AS(freemimo::capacity_from_spectrum(s, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(freemimo::capacity_from_spectrum(s, -1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(freemimo::capacity_from_spectrum(s, 1.0, 0), std::invalid_argument);
}

TEST_CASE("log-det capacity equals the moment path for known spectra") {
    // Eigenvalues of H H^H / m chosen freely; both paths must agree:
    // (1/n) log2 det(I + A / s2) vs Newton-Girard on the power sums.
    const std::vector<double> eigenvalues = {0.4, 1.1, 2.5, 0.0};  // rank 3 in a 4x4 space
    const Eigen::MatrixXcd A = hermitian_with_eigenvalues(eigenvalues, 99);
    const double sigma2 = 0.3;
    const int n = 4;

    const double direct = freemimo::log2_det_identity_plus(A / sigma2) / n;

    std::vector<double> power_sums(3);
    for (int j = 1; j <= 3; ++j) {
        power_sums[static_cast<std::size_t>(j - 1)] = 0.0;
        for (double lambda : eigenvalues)
            power_sums[static_cast<std::size_t>(j - 1)] += std::pow(lambda, j);
    }
    const CapacityValue via_moments =
        freemimo::capacity_from_spectrum(freemimo::power_sums_to_elementary(power_sums), sigma2, n);

    CHECK_FALSE(via_moments.clamped);
    CHECK(via_moments.bits_per_antenna == Catch::Approx(direct).margin(kLogDetTol));
}

TEST_CASE("low-noise series expansion matches log2(1 + rho) for a flat spectrum") {
    // All eigenvalues equal to 1: sum_k (-1)^{k+1} rho^k / k is the Mercator
    // series for ln(1 + rho).
    const MomentVector flat(std::vector<double>{1.0, 1.0, 1.0, 1.0});
    const double rho = 0.05;
    const double series = freemimo::capacity_taylor(flat, rho, 4);
    const double truncated = (rho - rho * rho / 2.0 + rho * rho * rho / 3.0 -
                              rho * rho * rho * rho / 4.0) /
                             std::log(2.0);
    CHECK(series == Catch::Approx(truncated).margin(kExactTol));
    CHECK(series == Catch::Approx(std::log2(1.0 + rho)).margin(1e-7));

    CHECK_THROWS_AS(freemimo::capacity_taylor(flat, rho, 5), std::invalid_argument);
    CHECK_THROWS_AS(freemimo::capacity_taylor(flat, rho, 0), std::invalid_argument);
}

TEST_CASE("moment vector finiteness check") {
    MomentVector good(std::vector<double>{1.0, -2.0});
    CHECK(good.all_finite());
    MomentVector bad(std::vector<double>{1.0, std::nan("")});
    CHECK_FALSE(bad.all_finite());
}
