#pragma once

#include <Eigen/Dense>

#include "celtic/errors.hpp"

namespace celtic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Physical and geometric constants of the stone. The body surface is an
/// elliptic paraboloid with principal curvature radii a1, a2 at the vertex,
/// which sits a distance h below the center of mass. The horizontal inertia
/// axes are rotated by delta against the geometric axes.
struct StoneParams {
    double I1 = 2.0;
    double I2 = 6.0;
    double I3 = 7.0;
    double m = 1.0;
    double grav_accel = 100.0;
    double a1 = 9.0;
    double a2 = 4.0;
    double h = 1.0;
    double delta = 0.485;

    // Contact formulas divide by gamma3; states with |gamma3| at or below
    // this threshold are rejected as degenerate (contact point at infinity).
    double eps_gamma = 1e-8;

    void validate() const;
};

/// Phase point of the six-dimensional system: angular momentum about the
/// contact point and the unit vertical vector, both in the body frame.
struct BodyState {
    Vec3 M = Vec3::Zero();
    Vec3 gamma = Vec3::UnitZ();

    Vec6 to_vec6() const {
        Vec6 y;
        y << M, gamma;
        return y;
    }
    static BodyState from_vec6(const Vec6& y) {
        return BodyState{y.head<3>(), y.tail<3>()};
    }
};

/// Inertia tensor with the horizontal principal axes rotated by delta.
/// Symmetric, spectrum {I1, I2, I3}.
Mat3 inertia_tensor(const StoneParams& p);

/// Body-frame vector from the center of mass to the contact point with the
/// plane. Throws DegenerateContact when |gamma3| <= eps_gamma.
Vec3 contact_vector(const Vec3& gamma, const StoneParams& p);

/// Analytic Jacobian d r / d gamma of contact_vector.
Mat3 contact_jacobian(const Vec3& gamma, const StoneParams& p);

/// Kinetic matrix A(gamma) = I + m (|r|^2 Id - r r^T) relating M = A omega.
/// Symmetric positive definite on admissible states.
Mat3 mass_matrix(const Vec3& gamma, const StoneParams& p);

/// Solve M = A(gamma) omega for omega.
Vec3 omega_from_momentum(const Vec3& M, const Vec3& gamma, const StoneParams& p);

/// Evaluate M = I omega + m r x (omega x r) directly. Inverse of
/// omega_from_momentum.
Vec3 momentum_from_omega(const Vec3& omega, const Vec3& gamma, const StoneParams& p);

/// Right-hand side of the equations of motion:
///   dM/dt     = M x omega + m dr/dt x (omega x r) + m g (r x gamma)
///   dgamma/dt = gamma x omega
BodyState flow_rhs(const BodyState& s, const StoneParams& p);

/// Same field on flat 6-vectors, for the integrator.
void flow_rhs6(const Vec6& y, Vec6& dydt, const StoneParams& p);

struct Integrals {
    double energy = 0.0;
    double gamma_norm_sq = 0.0;
};

/// The two first integrals: energy = (M,omega)/2 - m g (r,gamma) and the
/// geometric integral (gamma,gamma).
Integrals integrals(const BodyState& s, const StoneParams& p);

/// Potential part of the energy, -m g (r(gamma), gamma).
double potential_energy(const Vec3& gamma, const StoneParams& p);

}  // namespace celtic
