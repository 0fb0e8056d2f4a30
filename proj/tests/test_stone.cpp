#include <doctest.h>

#include <cmath>
#include <random>

#include "celtic/stone.hpp"

using namespace celtic;

namespace {

StoneParams params() { return StoneParams{}; }

Vec3 random_unit_gamma(std::mt19937_64& rng, double min_abs_g3 = 0.1) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Vec3 g(u(rng), u(rng), u(rng));
        const double n = g.norm();
        if (n < 1e-3 || n > 1.0) continue;
        g /= n;
        if (std::abs(g.z()) > min_abs_g3) return g;
    }
}

double paraboloid_residual(const Vec3& r, const StoneParams& p) {
    return 0.5 * (r.x() * r.x() / p.a1 + r.y() * r.y() / p.a2) - (r.z() + p.h);
}

}  // namespace

TEST_CASE("inertia tensor at degenerate rotation angles") {
    StoneParams p = params();
    p.delta = 0.0;
    CHECK(inertia_tensor(p).isApprox(Vec3(2, 6, 7).asDiagonal().toDenseMatrix(), 1e-15));

    p.delta = M_PI_2 * (1.0 - 1e-16);  // delta < pi/2 required; quarter turn in the limit
    p.delta = std::nextafter(M_PI_2, 0.0);
    const Mat3 I = inertia_tensor(p);
    CHECK(I(0, 0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(I(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(I(2, 2) == 7.0);
    CHECK(std::abs(I(0, 1)) < 1e-9);
}

TEST_CASE("inertia tensor entries against independent scalar evaluation") {
    StoneParams p = params();
    const double c = std::cos(p.delta), s = std::sin(p.delta);
    const Mat3 I = inertia_tensor(p);
    CHECK(I(0, 0) == doctest::Approx(p.I1 * c * c + p.I2 * s * s).epsilon(1e-15));
    CHECK(I(1, 1) == doctest::Approx(p.I1 * s * s + p.I2 * c * c).epsilon(1e-15));
    CHECK(I(0, 1) == doctest::Approx((p.I1 - p.I2) * c * s).epsilon(1e-15));
    CHECK(I(0, 1) == I(1, 0));
    CHECK(I(0, 2) == 0.0);
    CHECK(I(1, 2) == 0.0);
    CHECK(I(2, 2) == p.I3);
}

TEST_CASE("inertia tensor spectrum is {I1, I2, I3} for all delta") {
    StoneParams p = params();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, M_PI_2 * 0.999);
    for (int k = 0; k < 50; ++k) {
        p.delta = u(rng);
        Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia_tensor(p));
        const Vec3 ev = eig.eigenvalues();
        CHECK(ev[0] == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(ev[1] == doctest::Approx(6.0).epsilon(1e-10));
        CHECK(ev[2] == doctest::Approx(7.0).epsilon(1e-10));
    }
}

TEST_CASE("contact point directly below the center of mass at vertical") {
    const StoneParams p = params();
    const Vec3 r = contact_vector(Vec3(0, 0, 1), p);
    CHECK(r.isApprox(Vec3(0, 0, -p.h), 1e-15));
}

TEST_CASE("contact point for a tilt about the first axis") {
    const StoneParams p = params();
    const double theta = 0.37;
    const Vec3 r = contact_vector(Vec3(0, std::sin(theta), std::cos(theta)), p);
    const double t = std::tan(theta);
    CHECK(r.x() == 0.0);
    CHECK(r.y() == doctest::Approx(-p.a2 * t).epsilon(1e-14));
    CHECK(r.z() == doctest::Approx(-p.h + 0.5 * p.a2 * t * t).epsilon(1e-14));
}

TEST_CASE("contact point satisfies the surface equation and normal alignment") {
    const StoneParams p = params();
    std::mt19937_64 rng(11);
    for (int k = 0; k < 500; ++k) {
        const Vec3 g = random_unit_gamma(rng);
        const Vec3 r = contact_vector(g, p);
        CHECK(std::abs(paraboloid_residual(r, p)) < 1e-12);
        // grad F = (r1/a1, r2/a2, -1) must be -gamma/gamma3.
        const Vec3 grad(r.x() / p.a1, r.y() / p.a2, -1.0);
        CHECK((grad + g / g.z()).norm() < 1e-12 * grad.norm());
    }
}

TEST_CASE("degenerate contact is rejected") {
    const StoneParams p = params();
    CHECK_THROWS_AS(contact_vector(Vec3(1, 0, 0), p), CelticError);
    CHECK_THROWS_AS(contact_vector(Vec3(0.6, 0.8, 1e-9), p), CelticError);
    try {
        contact_vector(Vec3(1, 0, 0), p);
    } catch (const CelticError& e) {
        CHECK(e.code() == ErrorCode::DegenerateContact);
    }
}

TEST_CASE("analytic contact Jacobian matches central differences at order 2") {
    const StoneParams p = params();
    const Vec3 g = Vec3(0.31, -0.22, 0.85).normalized();
    const Mat3 J = contact_jacobian(g, p);

    auto fd_error = [&](double h) {
        Mat3 Jfd;
        for (int j = 0; j < 3; ++j) {
            Vec3 e = Vec3::Zero();
            e[j] = h;
            Jfd.col(j) = (contact_vector(g + e, p) - contact_vector(g - e, p)) / (2.0 * h);
        }
        return (Jfd - J).norm();
    };
    const double e3 = fd_error(1e-3);
    const double e4 = fd_error(1e-4);
    // second order: shrinking the step by 10 shrinks the error by ~100
    CHECK(e3 / e4 > 30.0);
    CHECK(e4 < 1e-6);
}

TEST_CASE("kinetic matrix is symmetric positive definite on admissible states") {
    const StoneParams p = params();
    std::mt19937_64 rng(23);
    for (int k = 0; k < 200; ++k) {
        const Mat3 A = mass_matrix(random_unit_gamma(rng), p);
        CHECK((A - A.transpose()).norm() < 1e-12 * A.norm());
        CHECK(Eigen::LLT<Mat3>(A).info() == Eigen::Success);
    }
}

TEST_CASE("zero momentum gives zero angular velocity") {
    const StoneParams p = params();
    CHECK(omega_from_momentum(Vec3::Zero(), Vec3(0.1, 0.2, 0.97).normalized(), p).norm() ==
          0.0);
}

TEST_CASE("angular velocity at vertical orientation, zero rotation angle") {
    StoneParams p = params();
    p.delta = 0.0;
    const Vec3 M(3.0, -2.0, 5.0);
    const Vec3 w = omega_from_momentum(M, Vec3(0, 0, 1), p);
    const double mh2 = p.m * p.h * p.h;
    CHECK(w.x() == doctest::Approx(M.x() / (p.I1 + mh2)).epsilon(1e-14));
    CHECK(w.y() == doctest::Approx(M.y() / (p.I2 + mh2)).epsilon(1e-14));
    CHECK(w.z() == doctest::Approx(M.z() / p.I3).epsilon(1e-14));
}

TEST_CASE("momentum and angular velocity recovery are mutually inverse") {
    const StoneParams p = params();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const Vec3 g = random_unit_gamma(rng);
        const Vec3 M(u(rng), u(rng), u(rng));
        const Vec3 back = momentum_from_omega(omega_from_momentum(M, g, p), g, p);
        CHECK((back - M).norm() <= 1e-10 * (1.0 + M.norm()));
    }
}

TEST_CASE("permanent vertical rotation is an equilibrium") {
    const StoneParams p = params();
    const double w3 = 4.2;
    BodyState s;
    s.gamma = Vec3(0, 0, 1);
    s.M = momentum_from_omega(Vec3(0, 0, w3), s.gamma, p);
    const BodyState d = flow_rhs(s, p);
    CHECK(d.M.norm() < 1e-12 * s.M.norm());
    CHECK(d.gamma.norm() < 1e-14);
}

TEST_CASE("gamma-dot is orthogonal to gamma") {
    const StoneParams p = params();
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 200; ++k) {
        BodyState s;
        s.gamma = random_unit_gamma(rng);
        s.M = Vec3(u(rng), u(rng), u(rng));
        const BodyState d = flow_rhs(s, p);
        CHECK(std::abs(d.gamma.dot(s.gamma)) < 1e-13 * (1.0 + d.gamma.norm()));
    }
}

TEST_CASE("both integrals are preserved to first order along the field") {
    const StoneParams p = params();
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    int checked = 0;
    for (int k = 0; k < 1000; ++k) {
        BodyState s;
        s.gamma = random_unit_gamma(rng, 0.2);
        s.M = Vec3(u(rng), u(rng), u(rng));
        const Vec6 y = s.to_vec6();
        Vec6 f;
        flow_rhs6(y, f, p);
        const double fn = f.norm();
        if (fn < 1e-6) continue;
        const Vec6 dir = f / fn;
        const double h = 1e-6;

        const BodyState sp = BodyState::from_vec6(y + h * dir);
        const BodyState sm = BodyState::from_vec6(y - h * dir);
        const Integrals ip = integrals(sp, p);
        const Integrals im = integrals(sm, p);
        const double dE = (ip.energy - im.energy) / (2.0 * h) * fn;
        const double dG = (ip.gamma_norm_sq - im.gamma_norm_sq) / (2.0 * h) * fn;
        const double scale = 1.0 + std::abs(integrals(s, p).energy);
        CHECK(std::abs(dE) / scale / (1.0 + fn) < 1e-6);
        CHECK(std::abs(dG) / (1.0 + fn) < 1e-6);
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("energy of vertical rotation and its inversion at E=752") {
    const StoneParams p = params();
    const double w3 = std::sqrt(2.0 * (752.0 - 100.0) / 7.0);
    CHECK(w3 == doctest::Approx(13.6486).epsilon(1e-4));
    BodyState s;
    s.gamma = Vec3(0, 0, 1);
    s.M = momentum_from_omega(Vec3(0, 0, w3), s.gamma, p);
    const Integrals ints = integrals(s, p);
    CHECK(ints.energy == doctest::Approx(752.0).epsilon(1e-13));
    CHECK(ints.energy == doctest::Approx(0.5 * 7.0 * w3 * w3 + 100.0).epsilon(1e-13));
    CHECK(ints.gamma_norm_sq == 1.0);
}

TEST_CASE("energy evaluation rejects degenerate contact") {
    const StoneParams p = params();
    BodyState s;
    s.gamma = Vec3(1, 0, 0);
    s.M = Vec3(1, 2, 3);
    CHECK_THROWS_AS(integrals(s, p), CelticError);
}

TEST_CASE("parameter validation") {
    StoneParams p = params();
    p.I2 = -1;
    CHECK_THROWS_AS(p.validate(), CelticError);
    p = params();
    p.delta = M_PI_2;
    CHECK_THROWS_AS(p.validate(), CelticError);
    p = params();
    CHECK_NOTHROW(p.validate());
}
