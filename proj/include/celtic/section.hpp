#pragma once

#include <iosfwd>
#include <vector>

#include "celtic/andoyer.hpp"
#include "celtic/flow.hpp"

namespace celtic {

/// Coordinates of the three-dimensional Poincare map at fixed energy.
///
/// The section chart measures the momentum azimuth clockwise in the inertia
/// eigenframe (l = -l_raw - delta), takes eta = -M3/G and xi = (M,gamma)/G,
/// and places the section plane at raw chart angle g0 + pi. This is the
/// orientation in which the stable spin regimes sit at eta > 0 and the
/// chaotic regimes of interest keep gamma3 > 0.
struct SectionPoint {
    double l = 0.0;    // angle in [0, 2*pi)
    double eta = 0.0;  // in (-1, 1)
    double xi = 0.0;   // in (-1, 1)
};

struct MapConfig {
    double E = 752.0;
    double g0 = 0.0;
    CrossDirection crossing_direction = CrossDirection::Positive;
    IntegratorConfig integrator;
    double fd_step = 1e-6;
    double eps_sing = kDefaultEpsSing;
    double t_return_max = 200.0;  // flow-time budget for a single return

    void validate() const;
};

/// Difference a - b with the l component wrapped to (-pi, pi].
Vec3 section_diff(const SectionPoint& a, const SectionPoint& b);
double section_dist(const SectionPoint& a, const SectionPoint& b);

/// Unique phase point on the section with the prescribed coordinates and
/// energy E. The kinetic energy is a positive definite quadratic c(x) G^2 at
/// fixed ratios, so G = sqrt((E - U)/c) is the unique positive branch.
BodyState lift_section_point(const SectionPoint& x, const MapConfig& cfg,
                             const StoneParams& p);

/// Project a phase state to section coordinates (chart must be nonsingular).
SectionPoint project_to_section(const BodyState& s, const MapConfig& cfg,
                                const StoneParams& p);

/// One application of the Poincare return map (or its inverse): lift,
/// integrate to the next section crossing with the configured direction,
/// project back. When return_time is non-null it receives the signed flow
/// time of the return.
SectionPoint poincare_step(const SectionPoint& x, const MapConfig& cfg, const StoneParams& p,
                           bool inverse = false, double* return_time = nullptr);

/// Central finite-difference Jacobian of poincare_step, step
/// fd_step * max(1, |coordinate|) per coordinate.
Mat3 poincare_jacobian(const SectionPoint& x, const MapConfig& cfg, const StoneParams& p);

enum class Symmetry { S1, I1, I2 };

/// The section-level symmetry S1 and the two reversibility involutions I1, I2.
SectionPoint apply_symmetry(const SectionPoint& x, Symmetry which);

/// CSV with '#' metadata (E, g0, direction, tolerances) and columns
/// l,L_over_G,H_over_G.
void write_section_csv(std::ostream& os, const std::vector<SectionPoint>& pts,
                       const MapConfig& cfg);

}  // namespace celtic
