#pragma once

#include "celtic/ode.hpp"
#include "celtic/stone.hpp"

namespace celtic {

/// Classical Lorenz vector field, used only to validate the integrator and
/// the Lyapunov machinery against a system with well-known exponents.
struct LorenzParams {
    double sigma = 10.0;
    double r = 28.0;
    double b = 8.0 / 3.0;
};

void lorenz_rhs(const LorenzParams& lp, const Vec3& y, Vec3& dydt);
Mat3 lorenz_jacobian(const LorenzParams& lp, const Vec3& y);

/// Maximal Lyapunov exponent of the flow by tangent-vector growth with
/// periodic renormalization. The transient is discarded before accumulation.
double lorenz_max_lyapunov(const LorenzParams& lp, const Vec3& y0, double t_transient,
                           double t_accumulate, double renorm_dt,
                           const IntegratorConfig& cfg);

}  // namespace celtic
