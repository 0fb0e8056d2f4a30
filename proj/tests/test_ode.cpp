#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "celtic/andoyer.hpp"
#include "celtic/flow.hpp"
#include "celtic/lorenz.hpp"

using namespace celtic;

namespace {

// 2D harmonic oscillator with analytic solution, for order checks.
struct Oscillator {
    void operator()(double, const Eigen::Vector2d& y, Eigen::Vector2d& dydt) const {
        dydt[0] = y[1];
        dydt[1] = -y[0];
    }
};

Eigen::Vector2d oscillator_exact(double t) { return {std::cos(t), -std::sin(t)}; }

BodyState chaotic_seed(const StoneParams& p) {
    // Admissible state in the strongly excited regime.
    BodyState s;
    s.gamma = Vec3(0.44, 0.79, 0.43).normalized();
    s.M = Vec3(-16.2, -29.1, 30.0);
    (void)p;
    return s;
}

}  // namespace

TEST_CASE("fixed-step integration converges at fifth order") {
    Oscillator f;
    const Eigen::Vector2d y0(1.0, 0.0);
    auto endpoint_error = [&](double h) {
        IntegratorConfig cfg;
        cfg.fixed_step = h;
        cfg.max_step = 10.0;
        Dopri5<2, Oscillator> stepper(f, cfg);
        stepper.start(0.0, y0, 4.0);
        while (!stepper.done()) stepper.advance();
        return (stepper.y() - oscillator_exact(4.0)).norm();
    };
    const double e1 = endpoint_error(0.1);
    const double e2 = endpoint_error(0.05);
    const double order = std::log2(e1 / e2);
    CHECK(order > 4.4);
    CHECK(order < 5.8);
}

TEST_CASE("dense output reproduces endpoints bit-for-bit and is accurate inside") {
    Oscillator f;
    IntegratorConfig cfg;
    cfg.rel_tol = cfg.abs_tol = 1e-9;
    cfg.max_step = 0.5;
    Dopri5<2, Oscillator> stepper(f, cfg);
    stepper.start(0.0, {1.0, 0.0}, 6.0);
    while (!stepper.done()) {
        const OdeStep<2> step = stepper.advance();
        CHECK(step.eval(step.t0) == step.y0);  // bitwise
        CHECK(step.eval(step.t1) == step.y1);  // bitwise
        const double tm = 0.5 * (step.t0 + step.t1);
        CHECK((step.eval(tm) - oscillator_exact(tm)).norm() < 1e-8);
    }
}

TEST_CASE("integration is deterministic") {
    const StoneParams p;
    const BodyState s0 = chaotic_seed(p);
    IntegratorConfig cfg;
    const Trajectory a = integrate(s0, 0.0, 3.0, p, cfg);
    const Trajectory b = integrate(s0, 0.0, 3.0, p, cfg);
    REQUIRE(a.times.size() == b.times.size());
    for (size_t i = 0; i < a.times.size(); ++i) {
        CHECK(a.times[i] == b.times[i]);
        CHECK(a.states[i].M == b.states[i].M);
        CHECK(a.states[i].gamma == b.states[i].gamma);
    }
}

TEST_CASE("trajectory times are strictly increasing and dense eval matches samples") {
    const StoneParams p;
    IntegratorConfig cfg;
    const Trajectory traj = integrate(chaotic_seed(p), 0.0, 2.0, p, cfg);
    for (size_t i = 1; i < traj.times.size(); ++i) {
        CHECK(traj.times[i] > traj.times[i - 1]);
        const BodyState s = traj.at(traj.times[i]);
        CHECK(s.M == traj.states[i].M);  // bitwise at step endpoints
        CHECK(s.gamma == traj.states[i].gamma);
    }
}

TEST_CASE("equilibrium stays put over a long span") {
    const StoneParams p;
    BodyState s;
    s.gamma = Vec3(0, 0, 1);
    s.M = momentum_from_omega(Vec3(0, 0, 5.0), s.gamma, p);
    IntegratorConfig cfg;
    const Trajectory traj = integrate(s, 0.0, 10.0, p, cfg);
    const BodyState f = traj.states.back();
    CHECK((f.M - s.M).norm() < 10.0 * cfg.abs_tol * (1.0 + s.M.norm()));
    CHECK((f.gamma - s.gamma).norm() < 10.0 * cfg.abs_tol);
}

TEST_CASE("integral drift stays within the contract over t=100") {
    const StoneParams p;
    const BodyState s0 = chaotic_seed(p);

    IntegratorConfig tight;
    tight.rel_tol = tight.abs_tol = 1e-12;
    const Trajectory tr = integrate(s0, 0.0, 100.0, p, tight);
    const double E0 = integrals(s0, p).energy;
    double max_de = 0.0, max_dg = 0.0;
    for (const BodyState& s : tr.states) {
        const Integrals ints = integrals(s, p);
        max_de = std::max(max_de, std::abs(ints.energy - E0) / std::abs(E0));
        max_dg = std::max(max_dg, std::abs(ints.gamma_norm_sq - 1.0));
    }
    CHECK(max_de < 1e-8);
    CHECK(max_dg < 1e-9);
}

TEST_CASE("tolerance tightening reduces the endpoint error on a chaotic segment") {
    const StoneParams p;
    const BodyState s0 = chaotic_seed(p);
    auto endpoint = [&](double tol) {
        IntegratorConfig cfg;
        cfg.rel_tol = cfg.abs_tol = tol;
        return integrate(s0, 0.0, 3.0, p, cfg).states.back().to_vec6();
    };
    const Vec6 ref = endpoint(1e-13);
    const double err8 = (endpoint(1e-8) - ref).norm();
    const double err10 = (endpoint(1e-10) - ref).norm();
    CHECK(err10 < err8 * 0.2);  // ~two orders of tolerance => much smaller error
}

TEST_CASE("event location on a synthetic linear field") {
    struct Linear {
        void operator()(double, const Eigen::Vector2d&, Eigen::Vector2d& d) const {
            d[0] = 1.0;
            d[1] = -1.0;
        }
    };
    IntegratorConfig cfg;
    cfg.event_tol = 1e-12;
    cfg.max_step = 0.3;
    const Eigen::Vector2d y0(0.0, 1.0);

    auto ev0 = [](const Eigen::Vector2d& y) { return y[0]; };
    const auto c = integrate_to_event<2>(Linear{}, cfg, 0.0, y0, 10.0, ev0, 0.7, false,
                                         CrossDirection::Positive);
    CHECK(std::abs(c.t - 0.7) < 1e-12);
    CHECK(std::abs(c.residual) < 1e-12);
    CHECK(c.slope > 0);

    // component 1 decreases: a Positive-direction request must not fire on it
    auto ev1 = [](const Eigen::Vector2d& y) { return y[1]; };
    CHECK_THROWS_AS(integrate_to_event<2>(Linear{}, cfg, 0.0, y0, 5.0, ev1, 0.5, false,
                                          CrossDirection::Positive),
                    CelticError);
    const auto cneg = integrate_to_event<2>(Linear{}, cfg, 0.0, y0, 5.0, ev1, 0.5, false,
                                            CrossDirection::Negative);
    CHECK(std::abs(cneg.t - 0.5) < 1e-12);
    CHECK(cneg.slope < 0);
}

TEST_CASE("angular events unwrap across the seam") {
    // the event value is an angle advancing at rate 1; crossings of level 0.3
    // happen at 0.3 + 2*pi*k
    struct Rotor {
        void operator()(double, const Eigen::Matrix<double, 1, 1>& y,
                        Eigen::Matrix<double, 1, 1>& d) const {
            (void)y;
            d[0] = 1.0;
        }
    };
    IntegratorConfig cfg;
    cfg.event_tol = 1e-12;
    cfg.max_step = 0.7;
    Eigen::Matrix<double, 1, 1> y0;
    y0[0] = 0.3;  // start exactly on the level: departure must not count
    auto ev = [](const Eigen::Matrix<double, 1, 1>& y) { return wrap_angle(y[0]); };
    const auto c = integrate_to_event<1>(Rotor{}, cfg, 0.0, y0, 50.0, ev, 0.3, true,
                                         CrossDirection::Positive);
    CHECK(std::abs(c.t - 2.0 * M_PI) < 1e-10);
}

TEST_CASE("backward integration locates events with forward-time direction semantics") {
    struct Linear1 {
        void operator()(double, const Eigen::Matrix<double, 1, 1>&,
                        Eigen::Matrix<double, 1, 1>& d) const {
            d[0] = 2.0;
        }
    };
    IntegratorConfig cfg;
    cfg.event_tol = 1e-12;
    Eigen::Matrix<double, 1, 1> y0;
    y0[0] = 1.0;
    auto ev = [](const Eigen::Matrix<double, 1, 1>& y) { return y[0]; };
    // going backward, the value 0.5 is reached at t=-0.25; its forward-time
    // slope is +2, so a Positive filter accepts it
    const auto c = integrate_to_event<1>(Linear1{}, cfg, 0.0, y0, -5.0, ev, 0.5, false,
                                         CrossDirection::Positive);
    CHECK(std::abs(c.t + 0.25) < 1e-12);
    CHECK(c.slope > 0);
}

TEST_CASE("step budget is enforced") {
    const StoneParams p;
    IntegratorConfig cfg;
    cfg.max_steps = 10;
    CHECK_THROWS_AS(integrate(chaotic_seed(p), 0.0, 100.0, p, cfg), CelticError);
}

TEST_CASE("trajectory CSV has the documented columns") {
    const StoneParams p;
    IntegratorConfig cfg;
    const Trajectory tr = integrate(chaotic_seed(p), 0.0, 0.5, p, cfg);
    std::ostringstream os;
    write_trajectory_csv(os, tr, p);
    const std::string text = os.str();
    CHECK(text.find("t,M1,M2,M3,gamma1,gamma2,gamma3,energy,gamma_norm_sq\n") !=
          std::string::npos);
    CHECK(text.rfind("# ", 0) == 0);
}

TEST_CASE("Lorenz field basics") {
    const LorenzParams lp;
    Vec3 d;
    lorenz_rhs(lp, Vec3::Zero(), d);
    CHECK(d.norm() == 0.0);

    // divergence is constant: -(sigma + 1 + b)
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int k = 0; k < 20; ++k) {
        const Vec3 y(u(rng), u(rng), u(rng));
        const Mat3 J = lorenz_jacobian(lp, y);
        CHECK(J.trace() == doctest::Approx(-(lp.sigma + 1.0 + lp.b)).epsilon(1e-14));
        // analytic Jacobian vs finite differences
        for (int j = 0; j < 3; ++j) {
            Vec3 e = Vec3::Zero();
            e[j] = 1e-6;
            Vec3 fp, fm;
            lorenz_rhs(lp, y + e, fp);
            lorenz_rhs(lp, y - e, fm);
            CHECK(((fp - fm) / 2e-6 - J.col(j)).norm() < 1e-6);
        }
    }
}

TEST_CASE("Lorenz maximal exponent lands in the known band") {
    const LorenzParams lp;
    IntegratorConfig cfg;
    cfg.rel_tol = cfg.abs_tol = 1e-9;
    cfg.max_step = 0.05;
    const double lam = lorenz_max_lyapunov(lp, Vec3(1.0, 1.0, 20.0), 50.0, 800.0, 0.5, cfg);
    CHECK(lam == doctest::Approx(0.906).epsilon(0.04));
}
