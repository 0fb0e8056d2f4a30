#include <doctest.h>

#include <cmath>
#include <random>

#include "celtic/andoyer.hpp"

using namespace celtic;

namespace {

ADState random_nonsingular(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> ratio(-0.95, 0.95);
    ADState ad;
    ad.G = 0.5 + 20.0 * u01(rng);
    ad.L = ratio(rng) * ad.G;
    ad.H = ratio(rng) * ad.G;
    ad.l = 2.0 * M_PI * u01(rng);
    ad.g_angle = 2.0 * M_PI * u01(rng);
    return ad;
}

}  // namespace

TEST_CASE("angle helpers") {
    CHECK(wrap_angle(-0.1) == doctest::Approx(2.0 * M_PI - 0.1));
    CHECK(wrap_angle(2.0 * M_PI) == 0.0);
    CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - 2.0 * M_PI));
    CHECK(wrap_angle_diff(3.0 * M_PI / 2) == doctest::Approx(-M_PI / 2));
    CHECK(wrap_angle_diff(-3.0 * M_PI / 2) == doctest::Approx(M_PI / 2));
}

TEST_CASE("reference point of the chart") {
    ADState ad;
    ad.L = 0.0;
    ad.H = 0.0;
    ad.G = 1.0;
    ad.l = 0.0;
    ad.g_angle = 0.0;
    Vec3 M, gamma;
    ad_to_cartesian(ad, M, gamma);
    CHECK(M.isApprox(Vec3(0, 1, 0), 1e-15));
    CHECK(gamma.isApprox(Vec3(0, 0, -1), 1e-15));

    const ADState back = cartesian_to_ad(M, gamma);
    CHECK(back.L == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(back.H == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(back.G == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(back.l == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(back.g_angle == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("forward map lands on the unit sphere with the right invariants") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 1000; ++k) {
        const ADState ad = random_nonsingular(rng);
        Vec3 M, gamma;
        ad_to_cartesian(ad, M, gamma);
        CHECK(std::abs(gamma.squaredNorm() - 1.0) < 1e-12);
        CHECK(std::abs(M.dot(gamma) - ad.H) < 1e-12 * ad.G);
        CHECK(std::abs(M.norm() - ad.G) < 1e-12 * ad.G);
        CHECK(M.z() == doctest::Approx(ad.L).epsilon(1e-12));
    }
}

TEST_CASE("round trip is the identity on nonsingular charts") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 1000; ++k) {
        const ADState ad = random_nonsingular(rng);
        Vec3 M, gamma;
        ad_to_cartesian(ad, M, gamma);
        const ADState back = cartesian_to_ad(M, gamma);
        CHECK(std::abs(back.G - ad.G) < 1e-10 * ad.G);
        CHECK(std::abs(back.L - ad.L) < 1e-10 * ad.G);
        CHECK(std::abs(back.H - ad.H) < 1e-10 * ad.G);
        CHECK(std::abs(wrap_angle_diff(back.l - ad.l)) < 1e-10);
        CHECK(std::abs(wrap_angle_diff(back.g_angle - ad.g_angle)) < 1e-10);

        Vec3 M2, gamma2;
        ad_to_cartesian(back, M2, gamma2);
        CHECK((M2 - M).norm() < 1e-10 * ad.G);
        CHECK((gamma2 - gamma).norm() < 1e-10);
    }
}

TEST_CASE("chart singularities are reported") {
    ADState ad;
    ad.G = 1.0;
    ad.L = 1.0 - 1e-9;
    ad.H = 0.0;
    Vec3 M, gamma;
    CHECK_THROWS_AS(ad_to_cartesian(ad, M, gamma), CelticError);
    try {
        ad_to_cartesian(ad, M, gamma);
    } catch (const CelticError& e) {
        CHECK(e.code() == ErrorCode::SingularChart);
    }

    CHECK_THROWS_AS(cartesian_to_ad(Vec3(0, 0, 5), Vec3(0.3, 0.4, 0.866)), CelticError);
    CHECK_THROWS_AS(cartesian_to_ad(Vec3::Zero(), Vec3(0, 0, 1)), CelticError);
    try {
        cartesian_to_ad(Vec3::Zero(), Vec3(0, 0, 1));
    } catch (const CelticError& e) {
        CHECK(e.code() == ErrorCode::ZeroMomentum);
    }
}

TEST_CASE("the three recovery equations for g are mutually consistent") {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 1000; ++k) {
        ADState ad = random_nonsingular(rng);
        if (std::abs(ad.L / ad.G) < 0.05) continue;  // row-1/2 cosine route needs L != 0
        Vec3 M, gamma;
        ad_to_cartesian(ad, M, gamma);

        const double G = M.norm();
        const double eta = M.z() / G, xi = M.dot(gamma) / G;
        const double s_eta = std::sqrt(1 - eta * eta), s_xi = std::sqrt(1 - xi * xi);
        const double l = std::atan2(M.x(), M.y());
        const double sl = std::sin(l), cl = std::cos(l);

        // independent recoveries of (sin g, cos g)
        const double sg_rows12 = (gamma.x() * cl - gamma.y() * sl) / s_xi;
        const double cg_rows12 = (gamma.x() * sl + gamma.y() * cl - xi * s_eta) / (eta * s_xi);
        const double cg_row3 = (xi * eta - gamma.z()) / (s_eta * s_xi);

        CHECK(std::abs(cg_rows12 - cg_row3) < 1e-8);
        const ADState back = cartesian_to_ad(M, gamma);
        CHECK(std::abs(std::sin(back.g_angle) - sg_rows12) < 1e-8);
        CHECK(std::abs(std::cos(back.g_angle) - cg_row3) < 1e-8);
    }
}

TEST_CASE("angles are normalized to [0, 2pi)") {
    std::mt19937_64 rng(15);
    for (int k = 0; k < 200; ++k) {
        ADState ad = random_nonsingular(rng);
        Vec3 M, gamma;
        ad_to_cartesian(ad, M, gamma);
        const ADState back = cartesian_to_ad(M, gamma);
        CHECK(back.l >= 0.0);
        CHECK(back.l < 2.0 * M_PI);
        CHECK(back.g_angle >= 0.0);
        CHECK(back.g_angle < 2.0 * M_PI);
    }
}
