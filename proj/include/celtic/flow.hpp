#pragma once

#include <iosfwd>
#include <vector>

#include "celtic/ode.hpp"
#include "celtic/stone.hpp"

namespace celtic {

/// Integrated solution of the stone flow: accepted-step endpoint samples plus
/// the dense-output record of every step.
struct Trajectory {
    std::vector<double> times;            // t0 followed by accepted-step endpoints
    std::vector<BodyState> states;        // states at `times`
    std::vector<OdeStep<6>> steps;

    /// Dense evaluation anywhere inside the integrated span.
    BodyState at(double t) const;
};

/// Functor adapting the stone field to the stepper.
struct StoneRhs {
    const StoneParams* params;
    void operator()(double, const Vec6& y, Vec6& dydt) const { flow_rhs6(y, dydt, *params); }
};

Trajectory integrate(const BodyState& s0, double t0, double t1, const StoneParams& p,
                     const IntegratorConfig& cfg);

/// CSV with '#'-prefixed metadata lines and columns
/// t,M1,M2,M3,gamma1,gamma2,gamma3,energy,gamma_norm_sq.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const StoneParams& p);

}  // namespace celtic
