#include "celtic/section.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace celtic {

void MapConfig::validate() const {
    integrator.validate();
    if (!(fd_step > 0)) fail(ErrorCode::ConfigInvalid, "fd_step must be positive");
    if (!(eps_sing > 0 && eps_sing < 0.5))
        fail(ErrorCode::ConfigInvalid, "eps_sing must lie in (0, 0.5)");
    if (!(t_return_max > 0)) fail(ErrorCode::ConfigInvalid, "t_return_max must be positive");
}

Vec3 section_diff(const SectionPoint& a, const SectionPoint& b) {
    return Vec3(wrap_angle_diff(a.l - b.l), a.eta - b.eta, a.xi - b.xi);
}

double section_dist(const SectionPoint& a, const SectionPoint& b) {
    return section_diff(a, b).norm();
}

namespace {

// Section chart <-> raw Andoyer-Deprit labels. The chart flips the azimuth
// orientation, offsets it by the inertia rotation angle, flips the sign of
// M3/G, and shifts the section angle by pi.
struct RawChart {
    double l;
    double eta;
    double xi;
    double g;
};

RawChart to_raw(const SectionPoint& x, const MapConfig& cfg, const StoneParams& p) {
    return {wrap_angle(-x.l - p.delta), -x.eta, x.xi, wrap_angle(cfg.g0 + M_PI)};
}

SectionPoint from_raw(double l_raw, double eta_raw, double xi_raw, const StoneParams& p) {
    return {wrap_angle(-l_raw - p.delta), -eta_raw, xi_raw};
}

}  // namespace

BodyState lift_section_point(const SectionPoint& x, const MapConfig& cfg,
                             const StoneParams& p) {
    require_nonsingular(x.eta, x.xi, cfg.eps_sing);
    const RawChart raw = to_raw(x, cfg, p);

    // Unit-momentum state: gamma depends only on (l, eta, xi, g0), and the
    // momentum direction is fixed, so energy(G) = c G^2 + U.
    ADState unit;
    unit.G = 1.0;
    unit.L = raw.eta;
    unit.H = raw.xi;
    unit.l = raw.l;
    unit.g_angle = raw.g;
    Vec3 M_hat, gamma;
    ad_to_cartesian(unit, M_hat, gamma, cfg.eps_sing);

    const double U = potential_energy(gamma, p);
    const Vec3 omega_hat = omega_from_momentum(M_hat, gamma, p);
    const double c = 0.5 * M_hat.dot(omega_hat);
    if (!(c > 0)) fail(ErrorCode::Internal, "kinetic form not positive");
    if (cfg.E <= U)
        fail(ErrorCode::EnergyBelowPotential,
             "requested energy does not exceed the potential at this section point");
    const double G = std::sqrt((cfg.E - U) / c);

    return BodyState{G * M_hat, gamma};
}

SectionPoint project_to_section(const BodyState& s, const MapConfig& cfg,
                                const StoneParams& p) {
    const ADState ad = cartesian_to_ad(s.M, s.gamma, cfg.eps_sing);
    return from_raw(ad.l, ad.L / ad.G, ad.H / ad.G, p);
}

namespace {

// Raw section angle g of a phase state, for the event stream. Throws
// SingularChart when the chart degenerates along the way.
double g_angle_of(const Vec6& y) {
    const Vec3 M = y.head<3>();
    const Vec3 gamma = y.tail<3>();
    const double G = M.norm();
    if (!(G > 0)) fail(ErrorCode::SingularChart, "zero momentum while tracking g_angle");
    const double eta = M.z() / G;
    const double xi = M.dot(gamma) / G;
    const double s_eta_sq = 1.0 - eta * eta;
    const double s_xi_sq = 1.0 - xi * xi;
    if (s_eta_sq < 1e-26 || s_xi_sq < 1e-26)
        fail(ErrorCode::SingularChart, "chart singularity while tracking g_angle");
    const double s_eta = std::sqrt(s_eta_sq);
    const double s_xi = std::sqrt(s_xi_sq);
    const double l = std::atan2(M.x(), M.y());
    const double sg = (gamma.x() * std::cos(l) - gamma.y() * std::sin(l)) / s_xi;
    const double cg = (xi * eta - gamma.z()) / (s_eta * s_xi);
    return std::atan2(sg, cg);
}

}  // namespace

SectionPoint poincare_step(const SectionPoint& x, const MapConfig& cfg, const StoneParams& p,
                           bool inverse, double* return_time) {
    const BodyState s0 = lift_section_point(x, cfg, p);
    const double t_max = inverse ? -cfg.t_return_max : cfg.t_return_max;
    const double g_raw = wrap_angle(cfg.g0 + M_PI);

    EventCrossing<6> crossing;
    try {
        crossing = integrate_to_event<6>(
            StoneRhs{&p}, cfg.integrator, 0.0, s0.to_vec6(), t_max,
            [](const Vec6& y) { return g_angle_of(y); }, g_raw, /*angular=*/true,
            cfg.crossing_direction);
    } catch (const CelticError& e) {
        if (e.code() == ErrorCode::SingularChart)
            fail(ErrorCode::NoCrossingFound, "orbit left the chart before returning");
        throw;
    }

    SectionPoint out = project_to_section(BodyState::from_vec6(crossing.y), cfg, p);
    require_nonsingular(out.eta, out.xi, cfg.eps_sing);
    if (return_time) *return_time = crossing.t;
    return out;
}

Mat3 poincare_jacobian(const SectionPoint& x, const MapConfig& cfg, const StoneParams& p) {
    Mat3 J;
    const double coords[3] = {x.l, x.eta, x.xi};
    for (int j = 0; j < 3; ++j) {
        const double h = cfg.fd_step * std::max(1.0, std::abs(coords[j]));
        SectionPoint xp = x, xm = x;
        switch (j) {
            case 0:
                xp.l = wrap_angle(x.l + h);
                xm.l = wrap_angle(x.l - h);
                break;
            case 1:
                xp.eta += h;
                xm.eta -= h;
                break;
            case 2:
                xp.xi += h;
                xm.xi -= h;
                break;
        }
        const SectionPoint fp = poincare_step(xp, cfg, p);
        const SectionPoint fm = poincare_step(xm, cfg, p);
        J.col(j) = section_diff(fp, fm) / (2.0 * h);
    }
    return J;
}

SectionPoint apply_symmetry(const SectionPoint& x, Symmetry which) {
    SectionPoint out = x;
    switch (which) {
        case Symmetry::S1:
            out.l = wrap_angle(x.l + M_PI);
            break;
        case Symmetry::I1:
            out.l = wrap_angle(x.l + M_PI);
            out.eta = -x.eta;
            out.xi = -x.xi;
            break;
        case Symmetry::I2:
            out.eta = -x.eta;
            out.xi = -x.xi;
            break;
    }
    return out;
}

void write_section_csv(std::ostream& os, const std::vector<SectionPoint>& pts,
                       const MapConfig& cfg) {
    char buf[256];
    const char* dir = cfg.crossing_direction == CrossDirection::Positive   ? "+"
                      : cfg.crossing_direction == CrossDirection::Negative ? "-"
                                                                           : "any";
    std::snprintf(buf, sizeof(buf), "# E=%.17g g0=%.17g direction=%s\n", cfg.E, cfg.g0, dir);
    os << buf;
    std::snprintf(buf, sizeof(buf), "# rel_tol=%g abs_tol=%g event_tol=%g fd_step=%g\n",
                  cfg.integrator.rel_tol, cfg.integrator.abs_tol, cfg.integrator.event_tol,
                  cfg.fd_step);
    os << buf;
    os << "l,L_over_G,H_over_G\n";
    for (const SectionPoint& x : pts) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", x.l, x.eta, x.xi);
        os << buf;
    }
}

}  // namespace celtic
