#include "celtic/analysis.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <thread>

namespace celtic {

namespace {

bool is_escape(ErrorCode c) {
    switch (c) {
        case ErrorCode::NoCrossingFound:
        case ErrorCode::SingularChart:
        case ErrorCode::StepCountExceeded:
        case ErrorCode::DegenerateContact:
        case ErrorCode::EnergyBelowPotential:
            return true;
        default:
            return false;
    }
}

[[noreturn]] void rethrow_as_escape(const CelticError& e) {
    if (is_escape(e.code()))
        fail(ErrorCode::OrbitEscaped, std::string("orbit escaped: ") + e.what());
    throw e;
}

}  // namespace

const char* regime_name(const RegimeTag& tag) {
    switch (tag.regime) {
        case Regime::PeriodicSink: return "PeriodicSink";
        case Regime::InvariantCurve: return "InvariantCurve";
        case Regime::Chaotic:
            return tag.pseudo_hyperbolic_candidate ? "Chaotic+PseudoHyperbolicCandidate"
                                                   : "Chaotic";
    }
    return "Unknown";
}

std::vector<SectionPoint> iterate_attractor(const SectionPoint& x0, const MapConfig& cfg,
                                            const StoneParams& p, long n_transient,
                                            long n_keep) {
    std::vector<SectionPoint> out;
    out.reserve(n_keep);
    SectionPoint y = x0;
    try {
        for (long k = 0; k < n_transient; ++k) y = poincare_step(y, cfg, p);
        for (long k = 0; k < n_keep; ++k) {
            y = poincare_step(y, cfg, p);
            out.push_back(y);
        }
    } catch (const CelticError& e) {
        rethrow_as_escape(e);
    }
    return out;
}

LyapunovSpectrum lyapunov_spectrum(const SectionPoint& x0, const MapConfig& cfg,
                                   const StoneParams& p, long n_iter, long n_transient) {
    LyapunovSpectrum out;
    out.n_iter = n_iter;
    out.transient = n_transient;

    SectionPoint y = x0;
    try {
        for (long k = 0; k < n_transient; ++k) y = poincare_step(y, cfg, p);

        Mat3 Q = Mat3::Identity();
        Vec3 sums = Vec3::Zero();
        double log_det_sum = 0.0;
        double time_sum = 0.0;
        const long burn = std::max<long>(100, n_iter / 10);
        double l2_lo = std::numeric_limits<double>::infinity();
        double l2_hi = -std::numeric_limits<double>::infinity();

        for (long k = 0; k < n_iter; ++k) {
            const Mat3 J = poincare_jacobian(y, cfg, p);
            log_det_sum += std::log(std::abs(J.determinant()));

            const Mat3 B = J * Q;
            Eigen::HouseholderQR<Mat3> qr(B);
            Mat3 R = qr.matrixQR().triangularView<Eigen::Upper>();
            Q = qr.householderQ();
            for (int i = 0; i < 3; ++i) {
                if (R(i, i) < 0.0) {
                    R.row(i) = -R.row(i);
                    Q.col(i) = -Q.col(i);
                }
                sums[i] += std::log(R(i, i));
            }
            if (k >= burn) {
                const double running = sums[1] / double(k + 1);
                l2_lo = std::min(l2_lo, running);
                l2_hi = std::max(l2_hi, running);
            }
            double tau = 0.0;
            y = poincare_step(y, cfg, p, false, &tau);
            time_sum += tau;
        }

        Vec3 lambdas = sums / double(n_iter);
        std::sort(lambdas.data(), lambdas.data() + 3, std::greater<double>());
        out.lambda1 = lambdas[0];
        out.lambda2 = lambdas[1];
        out.lambda3 = lambdas[2];
        out.lambda2_min = l2_lo;
        out.lambda2_max = l2_hi;
        out.mean_log_det = log_det_sum / double(n_iter);
        out.mean_return_time = time_sum / double(n_iter);
    } catch (const CelticError& e) {
        rethrow_as_escape(e);
    }
    return out;
}

RegimeTag classify_regime(const LyapunovSpectrum& s, double zero_tol) {
    // Classification runs on per-unit-time rates (identical signs either way;
    // the zero band is calibrated for the time-normalized values).
    const double l1 = s.per_time(s.lambda1);
    const double l2 = s.per_time(s.lambda2);
    const double l3 = s.per_time(s.lambda3);
    RegimeTag tag;
    if (l1 > zero_tol)
        tag.regime = Regime::Chaotic;
    else if (l1 < -zero_tol)
        tag.regime = Regime::PeriodicSink;
    else
        tag.regime = Regime::InvariantCurve;
    tag.pseudo_hyperbolic_candidate = l1 > 0.0 && (l1 + l2 + l3) < 0.0 && (l1 + l2) > 0.0;
    return tag;
}

namespace {

SectionPoint advance_map(SectionPoint q, int count, const MapConfig& cfg,
                         const StoneParams& p) {
    for (int i = 0; i < count; ++i) q = poincare_step(q, cfg, p);
    return q;
}

SectionPoint shift_point(const SectionPoint& x, const Vec3& d) {
    SectionPoint out;
    out.l = wrap_angle(x.l + d[0]);
    out.eta = x.eta + d[1];
    out.xi = x.xi + d[2];
    return out;
}

Mat3 period_jacobian_product(const SectionPoint& x, int period, const MapConfig& cfg,
                             const StoneParams& p) {
    Mat3 P = Mat3::Identity();
    SectionPoint q = x;
    for (int i = 0; i < period; ++i) {
        P = poincare_jacobian(q, cfg, p) * P;
        if (i + 1 < period) q = poincare_step(q, cfg, p);
    }
    return P;
}

}  // namespace

PeriodicPointResult find_periodic_point(const SectionPoint& x_guess, int period,
                                        const MapConfig& cfg, const StoneParams& p,
                                        const AnalysisConfig& acfg) {
    if (period < 1) fail(ErrorCode::ConfigInvalid, "period must be >= 1");

    auto residual = [&](const SectionPoint& q) -> Vec3 {
        return section_diff(advance_map(q, period, cfg, p), q);
    };

    SectionPoint x = x_guess;
    Vec3 r;
    try {
        r = residual(x);
    } catch (const CelticError& e) {
        fail(ErrorCode::NoConvergence,
             std::string("periodic-point residual failed at the initial guess: ") + e.what());
    }

    bool converged = r.norm() < acfg.newton_tol;
    for (int it = 0; it < acfg.newton_max_iter && !converged; ++it) {
        // Jacobian of F^p by central differences.
        Mat3 Jp;
        const double coords[3] = {x.l, x.eta, x.xi};
        for (int j = 0; j < 3; ++j) {
            const double h = cfg.fd_step * std::max(1.0, std::abs(coords[j]));
            Vec3 e = Vec3::Zero();
            e[j] = h;
            const SectionPoint fpl = advance_map(shift_point(x, e), period, cfg, p);
            const SectionPoint fmi = advance_map(shift_point(x, -e), period, cfg, p);
            Jp.col(j) = section_diff(fpl, fmi) / (2.0 * h);
        }
        const Mat3 A = Jp - Mat3::Identity();

        Eigen::JacobiSVD<Mat3> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(2);
        const double cond = (smin > 0) ? smax / smin : std::numeric_limits<double>::infinity();

        Vec3 s;
        if (cond < 1e8) {
            s = A.fullPivLu().solve(-r);
        } else {
            // Gauss-Newton step on |F^p(x) - x|^2 with Tikhonov damping.
            const double mu = std::max(1e-10 * smax, 1e-14);
            Vec3 inv_sv;
            for (int i = 0; i < 3; ++i) {
                const double sv = svd.singularValues()(i);
                inv_sv[i] = sv / (sv * sv + mu * mu);
            }
            s = -(svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose() * r);
        }
        if (!s.allFinite())
            fail(ErrorCode::SingularNewtonMatrix, "Newton matrix produced a non-finite step");

        // Backtracking damping; map-evaluation failures count as rejections.
        const double rn = r.norm();
        double t = 1.0;
        bool accepted = false;
        for (; t >= 1.0 / 1024; t *= 0.5) {
            const SectionPoint trial = shift_point(x, t * s);
            if (std::abs(trial.eta) >= 1.0 - cfg.eps_sing ||
                std::abs(trial.xi) >= 1.0 - cfg.eps_sing)
                continue;
            Vec3 rt;
            try {
                rt = residual(trial);
            } catch (const CelticError&) {
                continue;
            }
            if (rt.norm() < rn || (t == 1.0 / 1024 && rt.norm() < 2.0 * rn)) {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            fail(ErrorCode::NoConvergence, "damped Newton stalled without residual decrease");
        converged = r.norm() < acfg.newton_tol;
    }
    if (!converged)
        fail(ErrorCode::NoConvergence, "periodic point iteration hit the iteration limit");

    PeriodicPointResult out;
    out.point = x;
    out.period = period;
    out.residual = r.norm();

    const Mat3 P = period_jacobian_product(x, period, cfg, p);
    Eigen::EigenSolver<Mat3> eig(P);
    std::array<std::complex<double>, 3> mu = {eig.eigenvalues()(0), eig.eigenvalues()(1),
                                              eig.eigenvalues()(2)};
    std::sort(mu.begin(), mu.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  return std::abs(a) > std::abs(b);
              });
    for (int i = 0; i < 3; ++i) out.multipliers[i] = mu[i];
    return out;
}

namespace {

struct UnstableDirection {
    Vec3 v;          // canonical orientation
    double mult;     // the real multiplier outside the unit circle
};

UnstableDirection unstable_direction(const PeriodicPointResult& fp, const MapConfig& cfg,
                                     const StoneParams& p) {
    int n_outside = 0;
    int idx = -1;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(fp.multipliers[i]) > 1.0) {
            ++n_outside;
            idx = i;
        }
    }
    const bool real_mult =
        idx >= 0 && std::abs(fp.multipliers[idx].imag()) <
                        1e-6 * (1.0 + std::abs(fp.multipliers[idx].real()));
    if (n_outside != 1 || !real_mult)
        fail(ErrorCode::NotASaddle,
             "point is not a saddle with a single real multiplier outside the unit circle");

    const Mat3 P = period_jacobian_product(fp.point, fp.period, cfg, p);
    Eigen::EigenSolver<Mat3> eig(P);
    int best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const double err = std::abs(eig.eigenvalues()(i) - fp.multipliers[idx]);
        if (err < best_err) {
            best_err = err;
            best = i;
        }
    }
    Vec3 v = eig.eigenvectors().col(best).real();
    v.normalize();
    // Canonical orientation: largest-magnitude component positive.
    int imax = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0) v = -v;
    return {v, fp.multipliers[idx].real()};
}

}  // namespace

std::vector<ManifoldPoint> trace_unstable_manifold(const PeriodicPointResult& fp,
                                                   Branch branch, const MapConfig& cfg,
                                                   const StoneParams& p, double eps0,
                                                   double spacing_max, long n_points,
                                                   const AnalysisConfig& acfg) {
    const UnstableDirection u = unstable_direction(fp, cfg, p);
    const double expand = u.mult * u.mult;  // expansion of F^2 along the manifold
    const Vec3 dir = (branch == Branch::Plus) ? u.v : Vec3(-u.v);

    long evals_left = acfg.manifold_budget;
    auto apply_f2 = [&](SectionPoint q, int times) {
        for (int i = 0; i < times; ++i) {
            if (evals_left < 2) fail(ErrorCode::OrbitEscaped, "manifold budget exhausted");
            evals_left -= 2;
            q = poincare_step(q, cfg, p);
            q = poincare_step(q, cfg, p);
        }
        return q;
    };

    struct Node {
        double s;  // seed offset in [eps0, expand*eps0]
        SectionPoint q;
    };
    const int n0 = 16;
    std::vector<Node> seg;
    seg.reserve(n0 + 1);
    for (int i = 0; i <= n0; ++i) {
        const double s = eps0 * std::pow(expand, double(i) / n0);
        seg.push_back({s, shift_point(fp.point, s * dir)});
    }

    std::vector<ManifoldPoint> polyline;
    for (const Node& n : seg) polyline.push_back({n.q, n.s, 0});

    int gen = 0;
    try {
        while ((long)polyline.size() < n_points) {
            ++gen;
            double max_move = 0.0;
            for (Node& n : seg) {
                const SectionPoint prev = n.q;
                n.q = apply_f2(n.q, 1);
                max_move = std::max(max_move, section_dist(n.q, prev));
            }
            // The far tail accumulates on an attracting set; once a whole
            // generation stops moving the trace carries no new geometry.
            if (max_move < 1e-7) break;

            // Refine in seed space until consecutive image points are close.
            for (int pass = 0; pass < 14; ++pass) {
                bool refined = false;
                std::vector<Node> next;
                next.reserve(seg.size() * 2);
                for (size_t i = 0; i + 1 < seg.size(); ++i) {
                    next.push_back(seg[i]);
                    if (section_dist(seg[i].q, seg[i + 1].q) > spacing_max &&
                        (long)(polyline.size() + next.size()) < n_points) {
                        const double smid = 0.5 * (seg[i].s + seg[i + 1].s);
                        Node mid{smid, apply_f2(shift_point(fp.point, smid * dir), gen)};
                        next.push_back(mid);
                        refined = true;
                    }
                }
                next.push_back(seg.back());
                seg = std::move(next);
                if (!refined) break;
            }
            for (const Node& n : seg) {
                if ((long)polyline.size() >= n_points) break;
                polyline.push_back({n.q, n.s, gen});
            }
        }
    } catch (const CelticError& e) {
        // Truncated trace: the branch left the chart or the budget ran out.
        if (!is_escape(e.code()) && e.code() != ErrorCode::OrbitEscaped) throw;
        if (polyline.size() < 2) rethrow_as_escape(e);
    }
    return polyline;
}

double separatrix_return_sign(const PeriodicPointResult& fp, Branch branch,
                              const MapConfig& cfg, const StoneParams& p, double rho,
                              const AnalysisConfig& acfg) {
    const UnstableDirection u = unstable_direction(fp, cfg, p);
    const Vec3 dir = (branch == Branch::Plus) ? u.v : Vec3(-u.v);

    const std::vector<ManifoldPoint> poly = trace_unstable_manifold(
        fp, branch, cfg, p, acfg.eps0, acfg.spacing_max, acfg.manifold_budget / 4, acfg);

    bool left_ball = false;
    for (const ManifoldPoint& mp : poly) {
        const double d = section_dist(mp.x, fp.point);
        if (!left_ball) {
            if (d > rho) left_ball = true;
            continue;
        }
        if (d < rho) {
            return section_diff(mp.x, fp.point).dot(dir);
        }
    }
    fail(ErrorCode::NoReturn, "separatrix did not re-enter the ball around the saddle");
}

namespace {

bool nearly_real(const std::complex<double>& z) {
    return std::abs(z.imag()) < 1e-6 * (1.0 + std::abs(z.real()));
}

// Detector for a real multiplier crossing -1.
double doubling_indicator(const PeriodicPointResult& fp) {
    double most_negative = std::numeric_limits<double>::infinity();
    for (const auto& mu : fp.multipliers)
        if (nearly_real(mu)) most_negative = std::min(most_negative, mu.real());
    if (!std::isfinite(most_negative)) return std::numeric_limits<double>::quiet_NaN();
    return most_negative + 1.0;
}

// Detector for a complex pair crossing the unit circle.
double torus_indicator(const PeriodicPointResult& fp) {
    double max_complex_mod = -1.0;
    for (const auto& mu : fp.multipliers)
        if (!nearly_real(mu)) max_complex_mod = std::max(max_complex_mod, std::abs(mu));
    if (max_complex_mod < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return max_complex_mod - 1.0;
}

}  // namespace

ScanResult energy_scan(double E_min, double E_max, double E_step, const MapConfig& cfg_template,
                       const StoneParams& p, const AnalysisConfig& acfg, const ScanTasks& tasks,
                       const SectionPoint& fp_seed, int workers, double bisect_tol) {
    if (!(E_step > 0) || !(E_max >= E_min))
        fail(ErrorCode::ConfigInvalid, "invalid energy scan window");

    ScanResult result;
    const long n_grid = std::lround(std::floor((E_max - E_min) / E_step + 1e-9)) + 1;
    result.records.resize(n_grid);

    // Sequential continuation pass for the periodic point.
    SectionPoint seed = fp_seed;
    for (long i = 0; i < n_grid; ++i) {
        ScanRecord& rec = result.records[i];
        rec.E = E_min + double(i) * E_step;
        if (!tasks.fixed_point) continue;
        MapConfig cfg = cfg_template;
        cfg.E = rec.E;
        try {
            PeriodicPointResult fp =
                find_periodic_point(seed, tasks.continue_period, cfg, p, acfg);
            rec.fixed_point = fp;
            seed = fp.point;
        } catch (const CelticError& e) {
            rec.error = std::string(error_code_name(e.code())) + ": " + e.what();
        }
    }

    // Parallel per-energy spectra.
    if (tasks.lyapunov) {
        const int n_workers =
            workers > 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
        std::atomic<long> next{0};
        auto work = [&]() {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= n_grid) return;
                ScanRecord& rec = result.records[i];
                MapConfig cfg = cfg_template;
                cfg.E = rec.E;
                SectionPoint x0 = rec.fixed_point ? rec.fixed_point->point : fp_seed;
                // Nudge off the periodic point so the transient lands on the attractor.
                x0.eta += 1e-3;
                try {
                    LyapunovSpectrum s =
                        lyapunov_spectrum(x0, cfg, p, acfg.n_iter, acfg.n_transient);
                    rec.spectrum = s;
                    rec.regime = classify_regime(s, acfg.zero_tol);
                } catch (const CelticError& e) {
                    if (!rec.error.empty()) rec.error += "; ";
                    rec.error += std::string(error_code_name(e.code())) + ": " + e.what();
                }
            }
        };
        std::vector<std::future<void>> futs;
        for (int w = 1; w < n_workers; ++w)
            futs.push_back(std::async(std::launch::async, work));
        work();
        for (auto& f : futs) f.get();
    }

    // Bifurcation localization on the continued point.
    if (tasks.fixed_point) {
        auto bisect = [&](double Ea, double Eb, SectionPoint xa,
                          auto indicator, const char* kind) {
            double fa;
            {
                MapConfig cfg = cfg_template;
                cfg.E = Ea;
                fa = indicator(find_periodic_point(xa, tasks.continue_period, cfg, p, acfg));
            }
            SectionPoint x_near = xa;
            while (Eb - Ea > bisect_tol) {
                const double Em = 0.5 * (Ea + Eb);
                MapConfig cfg = cfg_template;
                cfg.E = Em;
                PeriodicPointResult fp =
                    find_periodic_point(x_near, tasks.continue_period, cfg, p, acfg);
                const double fm = indicator(fp);
                x_near = fp.point;
                if (std::isnan(fm)) break;
                if (fa * fm <= 0.0)
                    Eb = Em;
                else {
                    Ea = Em;
                    fa = fm;
                }
            }
            result.events.push_back({kind, 0.5 * (Ea + Eb)});
        };

        for (long i = 0; i + 1 < n_grid; ++i) {
            const ScanRecord& a = result.records[i];
            const ScanRecord& b = result.records[i + 1];
            if (!a.fixed_point || !b.fixed_point) continue;
            const double da = doubling_indicator(*a.fixed_point);
            const double db = doubling_indicator(*b.fixed_point);
            if (std::isfinite(da) && std::isfinite(db) && da * db < 0.0)
                bisect(a.E, b.E, a.fixed_point->point, doubling_indicator, "period_doubling");
            const double ta = torus_indicator(*a.fixed_point);
            const double tb = torus_indicator(*b.fixed_point);
            if (std::isfinite(ta) && std::isfinite(tb) && ta * tb < 0.0)
                bisect(a.E, b.E, a.fixed_point->point, torus_indicator, "torus_birth");
        }
    }
    return result;
}

void write_scan_csv(std::ostream& os, const ScanResult& scan) {
    os << "E,Lambda1,Lambda2,Lambda3,fp_l,fp_eta,fp_xi,mu1_re,mu1_im,mu2_re,mu2_im,mu3_re,"
          "mu3_im,regime,error\n";
    char buf[128];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf;
    };
    for (const ScanRecord& rec : scan.records) {
        put(rec.E);
        for (int i = 0; i < 3; ++i) {
            os << ",";
            if (rec.spectrum) {
                const double v = i == 0   ? rec.spectrum->lambda1
                                 : i == 1 ? rec.spectrum->lambda2
                                          : rec.spectrum->lambda3;
                put(v);
            }
        }
        if (rec.fixed_point) {
            os << ",";
            put(rec.fixed_point->point.l);
            os << ",";
            put(rec.fixed_point->point.eta);
            os << ",";
            put(rec.fixed_point->point.xi);
            for (int i = 0; i < 3; ++i) {
                os << ",";
                put(rec.fixed_point->multipliers[i].real());
                os << ",";
                put(rec.fixed_point->multipliers[i].imag());
            }
        } else {
            os << ",,,,,,,,,";
        }
        os << "," << (rec.regime ? regime_name(*rec.regime) : "");
        os << ",\"" << rec.error << "\"\n";
    }
}

void write_manifold_csv(std::ostream& os, const std::vector<ManifoldPoint>& plus_branch,
                        const std::vector<ManifoldPoint>& minus_branch) {
    os << "branch,index,l,eta,xi\n";
    char buf[160];
    auto dump = [&](const std::vector<ManifoldPoint>& poly, const char* name) {
        for (size_t i = 0; i < poly.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%s,%zu,%.17g,%.17g,%.17g\n", name, i, poly[i].x.l,
                          poly[i].x.eta, poly[i].x.xi);
            os << buf;
        }
    };
    dump(plus_branch, "+");
    dump(minus_branch, "-");
}

}  // namespace celtic
