#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "celtic/errors.hpp"

namespace celtic {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0.05;
    long max_steps = 2000000;
    double event_tol = 1e-10;
    // When positive, disables step-size control and marches with this exact
    // step (order and convergence tests).
    double fixed_step = 0.0;

    void validate() const {
        const bool tol_ok = rel_tol > 0 && rel_tol <= 1e-2 && abs_tol > 0 && abs_tol <= 1e-2;
        if (!tol_ok) fail(ErrorCode::ConfigInvalid, "integrator tolerances must lie in (0, 1e-2]");
        if (!(max_steps > 0)) fail(ErrorCode::ConfigInvalid, "max_steps must be positive");
        if (!(max_step > 0)) fail(ErrorCode::ConfigInvalid, "max_step must be positive");
        if (!(event_tol > 0)) fail(ErrorCode::ConfigInvalid, "event_tol must be positive");
    }
};

/// One accepted Dormand-Prince 5(4) step together with its order-4 continuous
/// extension. Evaluation at the endpoints returns the stored states
/// bit-for-bit.
template <int N>
struct OdeStep {
    using VecN = Eigen::Matrix<double, N, 1>;

    double t0 = 0.0;
    double t1 = 0.0;
    VecN y0, y1;
    VecN rcont3, rcont4, rcont5;  // rcont1 = y0, rcont2 = y1 - y0

    double h() const { return t1 - t0; }

    VecN eval(double t) const {
        if (t == t0) return y0;
        if (t == t1) return y1;
        const double theta = (t - t0) / (t1 - t0);
        const double theta1 = 1.0 - theta;
        const VecN rcont2 = y1 - y0;
        return y0 + theta * (rcont2 + theta1 * (rcont3 + theta * (rcont4 + theta1 * rcont5)));
    }
};

/// Explicit embedded Runge-Kutta 5(4) pair (Dormand-Prince) with PI step-size
/// control and FSAL. RHS signature: void(double t, const VecN&, VecN&).
template <int N, class RHS>
class Dopri5 {
  public:
    using VecN = Eigen::Matrix<double, N, 1>;

    Dopri5(RHS rhs, const IntegratorConfig& cfg) : rhs_(rhs), cfg_(cfg) { cfg_.validate(); }

    void start(double t0, const VecN& y0, double t_end) {
        t_ = t0;
        y_ = y0;
        t_end_ = t_end;
        dir_ = (t_end >= t0) ? 1.0 : -1.0;
        rhs_(t_, y_, k_[0]);
        n_rhs_ = 1;
        steps_taken_ = 0;
        h_ = (cfg_.fixed_step > 0) ? cfg_.fixed_step * dir_ : initial_step();
    }

    bool done() const { return (t_ - t_end_) * dir_ >= 0.0; }
    double t() const { return t_; }
    const VecN& y() const { return y_; }
    long steps_taken() const { return steps_taken_; }

    /// Advance by one accepted step (possibly clipped to t_end).
    OdeStep<N> advance() {
        const double facmin = 0.2, facmax_normal = 10.0, safety = 0.9;
        double facmax = facmax_normal;
        while (true) {
            if (steps_taken_ >= cfg_.max_steps)
                fail(ErrorCode::StepCountExceeded, "integrator exceeded max_steps");
            ++steps_taken_;

            double h = h_;
            if (std::abs(h) > cfg_.max_step) h = cfg_.max_step * dir_;
            if ((t_ + 1.01 * h - t_end_) * dir_ > 0.0) h = t_end_ - t_;
            if (std::abs(h) <= std::abs(t_) * 1e-16)
                fail(ErrorCode::StepCountExceeded, "step size underflow");

            evaluate_stages(h);

            if (cfg_.fixed_step > 0) {
                OdeStep<N> step = make_step(h);
                accept(step);
                return step;
            }

            const double err = error_norm(h);
            if (err <= 1.0) {
                OdeStep<N> step = make_step(h);
                const double fac =
                    (err == 0.0)
                        ? facmax
                        : std::min(facmax, std::max(facmin, safety * std::pow(err, -0.2)));
                h_ = h * fac;
                accept(step);
                return step;
            }
            h_ = h * std::max(facmin, safety * std::pow(err, -0.2));
            facmax = 1.0;  // no growth right after a rejection
        }
    }

  private:
    void evaluate_stages(double h) {
        // Dormand-Prince RK5(4)7M tableau.
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                                a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                                a75 = -2187.0 / 6784, a76 = 11.0 / 84;
        static constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9;

        ytmp_ = y_ + h * (a21 * k_[0]);
        rhs_(t_ + c2 * h, ytmp_, k_[1]);
        ytmp_ = y_ + h * (a31 * k_[0] + a32 * k_[1]);
        rhs_(t_ + c3 * h, ytmp_, k_[2]);
        ytmp_ = y_ + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
        rhs_(t_ + c4 * h, ytmp_, k_[3]);
        ytmp_ = y_ + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
        rhs_(t_ + c5 * h, ytmp_, k_[4]);
        ytmp_ = y_ + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
        rhs_(t_ + h, ytmp_, k_[5]);
        ynew_ = y_ + h * (a71 * k_[0] + a73 * k_[2] + a74 * k_[3] + a75 * k_[4] + a76 * k_[5]);
        rhs_(t_ + h, ynew_, k_[6]);  // FSAL
        n_rhs_ += 6;
    }

    double error_norm(double h) const {
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        double sum = 0.0;
        for (int i = 0; i < N; ++i) {
            const double ei = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] +
                                   e5 * k_[4][i] + e6 * k_[5][i] + e7 * k_[6][i]);
            const double sc =
                cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
            sum += (ei / sc) * (ei / sc);
        }
        return std::sqrt(sum / N);
    }

    OdeStep<N> make_step(double h) const {
        static constexpr double d1 = -12715105075.0 / 11282082432.0;
        static constexpr double d3 = 87487479700.0 / 32700410799.0;
        static constexpr double d4 = -10690763975.0 / 1880347072.0;
        static constexpr double d5 = 701980252875.0 / 199316789632.0;
        static constexpr double d6 = -1453857185.0 / 822651844.0;
        static constexpr double d7 = 69997945.0 / 29380423.0;

        OdeStep<N> s;
        s.t0 = t_;
        s.t1 = t_ + h;
        s.y0 = y_;
        s.y1 = ynew_;
        const VecN ydiff = ynew_ - y_;
        s.rcont3 = h * k_[0] - ydiff;
        s.rcont4 = ydiff - h * k_[6] - s.rcont3;
        s.rcont5 = h * (d1 * k_[0] + d3 * k_[2] + d4 * k_[3] + d5 * k_[4] + d6 * k_[5] +
                        d7 * k_[6]);
        return s;
    }

    void accept(const OdeStep<N>& step) {
        t_ = step.t1;
        y_ = step.y1;
        k_[0] = k_[6];
    }

    double initial_step() {
        double sc_norm0 = 0.0, sc_norm1 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y_[i]);
            sc_norm0 += (y_[i] / sc) * (y_[i] / sc);
            sc_norm1 += (k_[0][i] / sc) * (k_[0][i] / sc);
        }
        const double d0 = std::sqrt(sc_norm0 / N), d1 = std::sqrt(sc_norm1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * (d0 / d1);
        h0 = std::min(h0, cfg_.max_step);
        h0 *= dir_;

        VecN y1 = y_ + h0 * k_[0];
        VecN f1;
        rhs_(t_ + h0, y1, f1);
        ++n_rhs_;
        double d2 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y_[i]);
            const double di = (f1[i] - k_[0][i]) / sc;
            d2 += di * di;
        }
        d2 = std::sqrt(d2 / N) / std::abs(h0);
        const double dmax = std::max(d1, d2);
        double h1 = (dmax <= 1e-15) ? std::max(1e-6, std::abs(h0) * 1e-3)
                                    : std::pow(0.01 / dmax, 0.2);
        const double h = std::min({100.0 * std::abs(h0), h1, cfg_.max_step,
                                   std::abs(t_end_ - t_)});
        return h * dir_;
    }

    RHS rhs_;
    IntegratorConfig cfg_;
    double t_ = 0.0, t_end_ = 0.0, dir_ = 1.0, h_ = 0.0;
    long steps_taken_ = 0, n_rhs_ = 0;
    VecN y_, ytmp_, ynew_;
    VecN k_[7];
};

enum class CrossDirection { Positive, Negative, Any };

template <int N>
struct EventCrossing {
    double t = 0.0;
    Eigen::Matrix<double, N, 1> y;
    double residual = 0.0;  // event value at the located time, relative to the level
    double slope = 0.0;     // d(event)/dt in forward time
};

namespace detail {

inline double lift_near(double raw, double ref) {
    return raw + 2.0 * M_PI * std::round((ref - raw) / (2.0 * M_PI));
}

}  // namespace detail

/// Locate crossings of `event(y) == level` along the solution, in time order.
///
/// In angular mode the event value is treated as an angle: it is unwrapped
/// into a continuous lift along the trajectory and a crossing is any passage
/// through level + 2*pi*k. The initial point may sit exactly on the level;
/// departure from it is not a crossing. The crossing slope is measured in
/// forward time, so direction filtering is meaningful for backward
/// integration as well.
///
/// Returns the first crossing whose slope matches `direction`. Throws
/// NoCrossingFound when the time span or step budget is exhausted.
template <int N, class RHS, class EventFn>
EventCrossing<N> integrate_to_event(RHS rhs, const IntegratorConfig& cfg, double t0,
                                    const Eigen::Matrix<double, N, 1>& y0, double t_max,
                                    EventFn event, double level, bool angular,
                                    CrossDirection direction, int subsamples = 8) {
    using VecN = Eigen::Matrix<double, N, 1>;
    Dopri5<N, RHS> stepper(rhs, cfg);
    stepper.start(t0, y0, t_max);

    double phi_prev = event(y0);
    if (angular) {
        // Start the lift at the raw value; all levels level + 2*pi*k count.
        phi_prev = detail::lift_near(phi_prev, level);
    }
    double t_prev = t0;

    while (!stepper.done()) {
        const OdeStep<N> step = stepper.advance();
        for (int j = 1; j <= subsamples; ++j) {
            const double tj = (j == subsamples)
                                  ? step.t1
                                  : step.t0 + (step.t1 - step.t0) * (double(j) / subsamples);
            VecN yj = step.eval(tj);
            double phi_j = event(yj);
            if (angular) phi_j = detail::lift_near(phi_j, phi_prev);

            // Collect every level crossed between phi_prev and phi_j.
            double lo = std::min(phi_prev, phi_j), hi = std::max(phi_prev, phi_j);
            std::vector<double> levels;
            if (angular) {
                const double two_pi = 2.0 * M_PI;
                long k_lo = (long)std::ceil((lo - level) / two_pi - 1e-14);
                long k_hi = (long)std::floor((hi - level) / two_pi + 1e-14);
                for (long k = k_lo; k <= k_hi; ++k) levels.push_back(level + two_pi * k);
            } else if (lo <= level && level <= hi) {
                levels.push_back(level);
            }

            for (double lv : levels) {
                const double fa = phi_prev - lv, fb = phi_j - lv;
                if (fa == 0.0) continue;  // departure from the level, not a crossing
                if (fa * fb > 0.0) continue;

                // Illinois root refinement on the dense output.
                double ta = t_prev, tb = tj, va = fa, vb = fb;
                double troot = tb, vroot = vb;
                if (vb != 0.0) {
                    double side = 0;
                    for (int it = 0; it < 200; ++it) {
                        troot = (va * tb - vb * ta) / (va - vb);
                        if (!std::isfinite(troot)) troot = 0.5 * (ta + tb);
                        VecN yr = step.eval(std::clamp(troot, std::min(step.t0, step.t1),
                                                       std::max(step.t0, step.t1)));
                        double pr = event(yr);
                        if (angular) pr = detail::lift_near(pr, 0.5 * (phi_prev + phi_j));
                        vroot = pr - lv;
                        if (std::abs(vroot) < cfg.event_tol) break;
                        if (va * vroot < 0.0) {
                            tb = troot;
                            vb = vroot;
                            if (side == -1) va *= 0.5;
                            side = -1;
                        } else {
                            ta = troot;
                            va = vroot;
                            if (side == 1) vb *= 0.5;
                            side = 1;
                        }
                    }
                }
                if (std::abs(vroot) >= cfg.event_tol)
                    fail(ErrorCode::NoCrossingFound,
                         "event refinement failed to reach event_tol");

                // Forward-time slope from a centered difference on the dense output.
                const double span = std::abs(step.t1 - step.t0);
                const double dtc = std::max(1e-12, span / 4096.0);
                const double tl = std::clamp(troot - dtc, std::min(step.t0, step.t1),
                                             std::max(step.t0, step.t1));
                const double tr = std::clamp(troot + dtc, std::min(step.t0, step.t1),
                                             std::max(step.t0, step.t1));
                double pl = event(step.eval(tl)), prr = event(step.eval(tr));
                if (angular) {
                    pl = detail::lift_near(pl, lv);
                    prr = detail::lift_near(prr, lv);
                }
                const double slope = (prr - pl) / (tr - tl);

                const bool dir_ok = (direction == CrossDirection::Any) ||
                                    (direction == CrossDirection::Positive && slope > 0.0) ||
                                    (direction == CrossDirection::Negative && slope < 0.0);
                if (dir_ok) {
                    EventCrossing<N> out;
                    out.t = troot;
                    out.y = step.eval(troot);
                    out.residual = vroot;
                    out.slope = slope;
                    return out;
                }
            }
            t_prev = tj;
            phi_prev = phi_j;
        }
    }
    fail(ErrorCode::NoCrossingFound, "no section crossing within the integration span");
}

}  // namespace celtic
