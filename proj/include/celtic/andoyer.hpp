#pragma once

#include "celtic/stone.hpp"

namespace celtic {

/// Andoyer-Deprit coordinates for the (M, gamma) pair:
///   G = |M|, L = M3, H = (M, gamma), plus the angles l and g_angle.
/// The chart degenerates on the planes L/G = +-1 (l undefined) and
/// H/G = +-1 (g_angle undefined). Note H is the Andoyer variable, not the
/// energy.
struct ADState {
    double L = 0.0;
    double H = 0.0;
    double G = 1.0;
    double l = 0.0;
    double g_angle = 0.0;
};

inline constexpr double kDefaultEpsSing = 1e-6;

/// Reduce an angle to [0, 2*pi).
double wrap_angle(double a);

/// Map a difference of angles to (-pi, pi].
double wrap_angle_diff(double a);

/// Throws SingularChart unless |L/G| and |H/G| stay below 1 - eps_sing.
void require_nonsingular(double eta, double xi, double eps_sing = kDefaultEpsSing);

/// Forward change of coordinates. |gamma| = 1 holds identically, |M| = G,
/// (M, gamma) = H, M3 = L.
void ad_to_cartesian(const ADState& ad, Vec3& M, Vec3& gamma,
                     double eps_sing = kDefaultEpsSing);

/// Inverse change of coordinates. Throws ZeroMomentum when |M| is below the
/// floor and SingularChart near the degenerate planes.
ADState cartesian_to_ad(const Vec3& M, const Vec3& gamma,
                        double eps_sing = kDefaultEpsSing,
                        double momentum_floor = 1e-12);

}  // namespace celtic
