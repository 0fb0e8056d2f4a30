#include "celtic/lorenz.hpp"

#include <cmath>

namespace celtic {

void lorenz_rhs(const LorenzParams& lp, const Vec3& y, Vec3& dydt) {
    dydt.x() = lp.sigma * (y.y() - y.x());
    dydt.y() = y.x() * (lp.r - y.z()) - y.y();
    dydt.z() = y.x() * y.y() - lp.b * y.z();
}

Mat3 lorenz_jacobian(const LorenzParams& lp, const Vec3& y) {
    Mat3 J;
    J << -lp.sigma, lp.sigma, 0.0,
         lp.r - y.z(), -1.0, -y.x(),
         y.y(), y.x(), -lp.b;
    return J;
}

namespace {

// State + one tangent vector advected by the variational equations.
struct AugmentedRhs {
    const LorenzParams* lp;
    void operator()(double, const Vec6& y, Vec6& dydt) const {
        const Vec3 x = y.head<3>();
        const Vec3 v = y.tail<3>();
        Vec3 fx;
        lorenz_rhs(*lp, x, fx);
        dydt.head<3>() = fx;
        dydt.tail<3>() = lorenz_jacobian(*lp, x) * v;
    }
};

}  // namespace

double lorenz_max_lyapunov(const LorenzParams& lp, const Vec3& y0, double t_transient,
                           double t_accumulate, double renorm_dt,
                           const IntegratorConfig& cfg) {
    AugmentedRhs rhs{&lp};

    Vec6 y;
    y.head<3>() = y0;
    y.tail<3>() = Vec3(1.0, 0.0, 0.0);

    auto advance_by = [&](double span) {
        Dopri5<6, AugmentedRhs> stepper(rhs, cfg);
        stepper.start(0.0, y, span);
        while (!stepper.done()) stepper.advance();
        y = stepper.y();
    };

    double t = 0.0;
    while (t < t_transient) {
        advance_by(renorm_dt);
        y.tail<3>().normalize();
        t += renorm_dt;
    }

    double log_sum = 0.0;
    double accumulated = 0.0;
    while (accumulated < t_accumulate) {
        advance_by(renorm_dt);
        const double growth = y.tail<3>().norm();
        log_sum += std::log(growth);
        y.tail<3>() /= growth;
        accumulated += renorm_dt;
    }
    return log_sum / accumulated;
}

}  // namespace celtic
