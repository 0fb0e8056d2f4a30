#include "celtic/flow.hpp"

#include <cstdio>
#include <ostream>

namespace celtic {

BodyState Trajectory::at(double t) const {
    if (steps.empty()) fail(ErrorCode::Internal, "empty trajectory");
    const bool fwd = steps.back().t1 >= steps.front().t0;
    // Binary search over step intervals.
    size_t lo = 0, hi = steps.size() - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        const bool left = fwd ? (t <= steps[mid].t1) : (t >= steps[mid].t1);
        if (left)
            hi = mid;
        else
            lo = mid + 1;
    }
    return BodyState::from_vec6(steps[lo].eval(t));
}

Trajectory integrate(const BodyState& s0, double t0, double t1, const StoneParams& p,
                     const IntegratorConfig& cfg) {
    Trajectory traj;
    traj.times.push_back(t0);
    traj.states.push_back(s0);
    if (t1 == t0) return traj;

    Dopri5<6, StoneRhs> stepper(StoneRhs{&p}, cfg);
    stepper.start(t0, s0.to_vec6(), t1);
    while (!stepper.done()) {
        OdeStep<6> step = stepper.advance();
        traj.times.push_back(step.t1);
        traj.states.push_back(BodyState::from_vec6(step.y1));
        traj.steps.push_back(std::move(step));
    }
    return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const StoneParams& p) {
    os << "# celtic stone trajectory\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "# I1=%.17g I2=%.17g I3=%.17g m=%.17g grav_accel=%.17g a1=%.17g a2=%.17g "
                  "h=%.17g delta=%.17g\n",
                  p.I1, p.I2, p.I3, p.m, p.grav_accel, p.a1, p.a2, p.h, p.delta);
    os << buf;
    os << "t,M1,M2,M3,gamma1,gamma2,gamma3,energy,gamma_norm_sq\n";
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const BodyState& s = traj.states[i];
        const Integrals ints = integrals(s, p);
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.times[i],
                      s.M.x(), s.M.y(), s.M.z(), s.gamma.x(), s.gamma.y(), s.gamma.z(),
                      ints.energy, ints.gamma_norm_sq);
        os << buf;
    }
}

}  // namespace celtic
