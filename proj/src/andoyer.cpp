#include "celtic/andoyer.hpp"

#include <cmath>

namespace celtic {

double wrap_angle(double a) {
    const double two_pi = 2.0 * M_PI;
    double w = std::fmod(a, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;  // fmod can round up to 2*pi
    return w;
}

double wrap_angle_diff(double a) {
    const double two_pi = 2.0 * M_PI;
    double w = std::fmod(a, two_pi);
    if (w > M_PI) w -= two_pi;
    if (w <= -M_PI) w += two_pi;
    return w;
}

void require_nonsingular(double eta, double xi, double eps_sing) {
    if (std::abs(eta) >= 1.0 - eps_sing)
        fail(ErrorCode::SingularChart, "|L/G| too close to 1: l undefined");
    if (std::abs(xi) >= 1.0 - eps_sing)
        fail(ErrorCode::SingularChart, "|H/G| too close to 1: g_angle undefined");
}

void ad_to_cartesian(const ADState& ad, Vec3& M, Vec3& gamma, double eps_sing) {
    if (!(ad.G > 0))
        fail(ErrorCode::ZeroMomentum, "G must be positive");
    const double eta = ad.L / ad.G;
    const double xi = ad.H / ad.G;
    require_nonsingular(eta, xi, eps_sing);

    const double s_eta = std::sqrt(1.0 - eta * eta);
    const double s_xi = std::sqrt(1.0 - xi * xi);
    const double sl = std::sin(ad.l), cl = std::cos(ad.l);
    const double sg = std::sin(ad.g_angle), cg = std::cos(ad.g_angle);

    M = Vec3(ad.G * s_eta * sl, ad.G * s_eta * cl, ad.L);

    const double b = xi * s_eta + eta * s_xi * cg;
    gamma = Vec3(b * sl + s_xi * sg * cl,
                 b * cl - s_xi * sg * sl,
                 xi * eta - s_eta * s_xi * cg);
}

ADState cartesian_to_ad(const Vec3& M, const Vec3& gamma, double eps_sing,
                        double momentum_floor) {
    const double G = M.norm();
    if (G <= momentum_floor)
        fail(ErrorCode::ZeroMomentum, "|M| below configured floor");

    const double eta = M.z() / G;
    const double xi = M.dot(gamma) / G;
    require_nonsingular(eta, xi, eps_sing);

    const double s_eta = std::sqrt(1.0 - eta * eta);
    const double s_xi = std::sqrt(1.0 - xi * xi);

    ADState ad;
    ad.G = G;
    ad.L = M.z();
    ad.H = M.dot(gamma);
    ad.l = wrap_angle(std::atan2(M.x(), M.y()));

    // sin g from the combination (gamma1 cos l - gamma2 sin l) of the first
    // two rows; cos g from the gamma3 row. Both denominators are bounded away
    // from zero on the nonsingular chart (the pure 2x2 solve of the first two
    // rows degenerates at L = 0, so the gamma3 row supplies cos g).
    const double sl = std::sin(ad.l), cl = std::cos(ad.l);
    const double sg = (gamma.x() * cl - gamma.y() * sl) / s_xi;
    const double cg = (xi * eta - gamma.z()) / (s_eta * s_xi);
    ad.g_angle = wrap_angle(std::atan2(sg, cg));
    return ad;
}

}  // namespace celtic
