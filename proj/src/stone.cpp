#include "celtic/stone.hpp"

#include <cmath>

namespace celtic {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::DegenerateContact: return "DegenerateContact";
        case ErrorCode::SingularChart: return "SingularChart";
        case ErrorCode::ZeroMomentum: return "ZeroMomentum";
        case ErrorCode::EnergyBelowPotential: return "EnergyBelowPotential";
        case ErrorCode::NoCrossingFound: return "NoCrossingFound";
        case ErrorCode::StepCountExceeded: return "StepCountExceeded";
        case ErrorCode::OrbitEscaped: return "OrbitEscaped";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SingularNewtonMatrix: return "SingularNewtonMatrix";
        case ErrorCode::NotASaddle: return "NotASaddle";
        case ErrorCode::NoReturn: return "NoReturn";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

void StoneParams::validate() const {
    const bool positive = I1 > 0 && I2 > 0 && I3 > 0 && m > 0 && grav_accel > 0 &&
                          a1 > 0 && a2 > 0 && h > 0;
    if (!positive)
        fail(ErrorCode::ConfigInvalid, "stone parameters must be strictly positive");
    if (!(delta >= 0.0 && delta < M_PI_2))
        fail(ErrorCode::ConfigInvalid, "delta must lie in [0, pi/2)");
    if (!(eps_gamma > 0))
        fail(ErrorCode::ConfigInvalid, "eps_gamma must be positive");
}

Mat3 inertia_tensor(const StoneParams& p) {
    const double c = std::cos(p.delta), s = std::sin(p.delta);
    Mat3 I;
    I << p.I1 * c * c + p.I2 * s * s, (p.I1 - p.I2) * c * s, 0.0,
         (p.I1 - p.I2) * c * s, p.I1 * s * s + p.I2 * c * c, 0.0,
         0.0, 0.0, p.I3;
    return I;
}

static void require_contact(const Vec3& gamma, const StoneParams& p) {
    if (std::abs(gamma.z()) <= p.eps_gamma)
        fail(ErrorCode::DegenerateContact,
             "contact point at infinity: |gamma3| <= eps_gamma");
}

Vec3 contact_vector(const Vec3& gamma, const StoneParams& p) {
    require_contact(gamma, p);
    const double g1 = gamma.x(), g2 = gamma.y(), g3 = gamma.z();
    return Vec3(-p.a1 * g1 / g3,
                -p.a2 * g2 / g3,
                -p.h + (p.a1 * g1 * g1 + p.a2 * g2 * g2) / (2.0 * g3 * g3));
}

Mat3 contact_jacobian(const Vec3& gamma, const StoneParams& p) {
    require_contact(gamma, p);
    const double g1 = gamma.x(), g2 = gamma.y(), g3 = gamma.z();
    const double inv3 = 1.0 / g3, inv3sq = inv3 * inv3;
    Mat3 J;
    J << -p.a1 * inv3, 0.0, p.a1 * g1 * inv3sq,
         0.0, -p.a2 * inv3, p.a2 * g2 * inv3sq,
         p.a1 * g1 * inv3sq, p.a2 * g2 * inv3sq,
         -(p.a1 * g1 * g1 + p.a2 * g2 * g2) * inv3sq * inv3;
    return J;
}

Mat3 mass_matrix(const Vec3& gamma, const StoneParams& p) {
    const Vec3 r = contact_vector(gamma, p);
    return inertia_tensor(p) + p.m * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
}

Vec3 omega_from_momentum(const Vec3& M, const Vec3& gamma, const StoneParams& p) {
    return mass_matrix(gamma, p).llt().solve(M);
}

Vec3 momentum_from_omega(const Vec3& omega, const Vec3& gamma, const StoneParams& p) {
    const Vec3 r = contact_vector(gamma, p);
    return inertia_tensor(p) * omega + p.m * r.cross(omega.cross(r));
}

BodyState flow_rhs(const BodyState& s, const StoneParams& p) {
    Vec6 dydt;
    flow_rhs6(s.to_vec6(), dydt, p);
    return BodyState::from_vec6(dydt);
}

void flow_rhs6(const Vec6& y, Vec6& dydt, const StoneParams& p) {
    const Vec3 M = y.head<3>();
    const Vec3 gamma = y.tail<3>();
    require_contact(gamma, p);

    const double g1 = gamma.x(), g2 = gamma.y(), g3 = gamma.z();
    const double inv3 = 1.0 / g3, inv3sq = inv3 * inv3;
    const Vec3 r(-p.a1 * g1 * inv3, -p.a2 * g2 * inv3,
                 -p.h + (p.a1 * g1 * g1 + p.a2 * g2 * g2) * 0.5 * inv3sq);

    const Mat3 A =
        inertia_tensor(p) + p.m * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
    const Vec3 omega = A.llt().solve(M);

    const Vec3 gamma_dot = gamma.cross(omega);

    // dr/dt via the analytic contact Jacobian (chain rule).
    const double q1 = p.a1 * g1 * inv3sq, q2 = p.a2 * g2 * inv3sq;
    const Vec3 r_dot(-p.a1 * inv3 * gamma_dot.x() + q1 * gamma_dot.z(),
                     -p.a2 * inv3 * gamma_dot.y() + q2 * gamma_dot.z(),
                     q1 * gamma_dot.x() + q2 * gamma_dot.y() -
                         (p.a1 * g1 * g1 + p.a2 * g2 * g2) * inv3sq * inv3 * gamma_dot.z());

    const Vec3 M_dot = M.cross(omega) + p.m * r_dot.cross(omega.cross(r)) +
                       p.m * p.grav_accel * r.cross(gamma);
    dydt << M_dot, gamma_dot;
}

Integrals integrals(const BodyState& s, const StoneParams& p) {
    const Vec3 r = contact_vector(s.gamma, p);
    const Vec3 omega = omega_from_momentum(s.M, s.gamma, p);
    Integrals out;
    out.energy = 0.5 * s.M.dot(omega) - p.m * p.grav_accel * r.dot(s.gamma);
    out.gamma_norm_sq = s.gamma.squaredNorm();
    return out;
}

double potential_energy(const Vec3& gamma, const StoneParams& p) {
    return -p.m * p.grav_accel * contact_vector(gamma, p).dot(gamma);
}

}  // namespace celtic
