#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "celtic/section.hpp"

namespace celtic {

struct LyapunovSpectrum {
    double lambda1 = 0.0;  // sorted descending, natural log per map iteration
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    long n_iter = 0;
    long transient = 0;
    // Running oscillation band of the middle exponent over the accumulation
    // window (the middle exponent hovers near zero and is reported with its
    // band rather than as a bare number).
    double lambda2_min = 0.0;
    double lambda2_max = 0.0;
    // Orbit-averaged log |det DF|; equals the exponent sum up to roundoff.
    double mean_log_det = 0.0;
    // Mean flow time of one return; dividing by it converts the exponents to
    // per-unit-time rates.
    double mean_return_time = 0.0;

    double per_time(double lambda) const {
        return mean_return_time > 0 ? lambda / mean_return_time : lambda;
    }
};

enum class Regime { PeriodicSink, InvariantCurve, Chaotic };

struct RegimeTag {
    Regime regime = Regime::PeriodicSink;
    bool pseudo_hyperbolic_candidate = false;
};

const char* regime_name(const RegimeTag& tag);

struct PeriodicPointResult {
    SectionPoint point;
    int period = 1;
    std::complex<double> multipliers[3];
    double residual = 0.0;
    SectionPoint orbit_start() const { return point; }
};

struct AnalysisConfig {
    long n_transient = 1000;
    long n_iter = 10000;
    long n_keep = 10000;
    double eps0 = 1e-5;          // manifold seed offset
    double spacing_max = 0.01;   // manifold polyline spacing bound
    double zero_tol = 0.002;     // Lyapunov zero band for classification
    double rho = 0.05;           // separatrix re-entry ball radius
    double newton_tol = 1e-10;
    int newton_max_iter = 100;
    long manifold_budget = 20000;  // map evaluations per manifold trace
};

/// Iterate the map, discard n_transient points, return the next n_keep.
std::vector<SectionPoint> iterate_attractor(const SectionPoint& x0, const MapConfig& cfg,
                                            const StoneParams& p, long n_transient,
                                            long n_keep);

/// Benettin QR spectrum of the Poincare map along the orbit of x0, using
/// finite-difference Jacobians at every iterate.
LyapunovSpectrum lyapunov_spectrum(const SectionPoint& x0, const MapConfig& cfg,
                                   const StoneParams& p, long n_iter, long n_transient);

/// Lambda-condition classification with the PseudoHyperbolicCandidate flag
/// (Lambda1 > 0, sum < 0, Lambda1 + Lambda2 > 0).
RegimeTag classify_regime(const LyapunovSpectrum& s, double zero_tol);

/// Damped Newton for F^p(x) = x with finite-difference Jacobians, falling
/// back to a Levenberg-style least-squares step when the Newton matrix is
/// ill-conditioned. Multipliers are the eigenvalues of the period-p Jacobian
/// product along the converged orbit.
PeriodicPointResult find_periodic_point(const SectionPoint& x_guess, int period,
                                        const MapConfig& cfg, const StoneParams& p,
                                        const AnalysisConfig& acfg = {});

enum class Branch { Plus, Minus };

struct ManifoldPoint {
    SectionPoint x;
    double seed_offset = 0.0;  // distance of the generating seed from the saddle
    int generation = 0;
};

/// Trace one branch of the unstable manifold of a saddle fixed point with a
/// single real multiplier outside the unit circle. Seeds a fundamental
/// segment [eps0, mult^2 eps0] along the unstable eigenvector and iterates it
/// under F^2 (the square keeps orientation for mult < -1), refining seeds so
/// consecutive points stay within spacing_max.
std::vector<ManifoldPoint> trace_unstable_manifold(const PeriodicPointResult& fp,
                                                   Branch branch, const MapConfig& cfg,
                                                   const StoneParams& p, double eps0,
                                                   double spacing_max, long n_points,
                                                   const AnalysisConfig& acfg = {});

/// Signed projection onto the unstable eigendirection of the first manifold
/// point re-entering the ball of radius rho around the saddle. A sign change
/// under variation of E brackets the homoclinic butterfly.
double separatrix_return_sign(const PeriodicPointResult& fp, Branch branch,
                              const MapConfig& cfg, const StoneParams& p, double rho,
                              const AnalysisConfig& acfg = {});

struct ScanRecord {
    double E = 0.0;
    std::optional<LyapunovSpectrum> spectrum;
    std::optional<PeriodicPointResult> fixed_point;
    std::optional<RegimeTag> regime;
    std::string error;  // empty on success
};

struct ScanTasks {
    bool fixed_point = true;
    bool lyapunov = true;
    int continue_period = 1;  // period of the continued point
};

struct BifurcationEvent {
    std::string kind;  // "period_doubling" or "torus_birth"
    double E = 0.0;
};

struct ScanResult {
    std::vector<ScanRecord> records;
    std::vector<BifurcationEvent> events;
};

/// Energy scan: sequential natural-parameter continuation of the periodic
/// point, then per-energy Lyapunov spectra (parallel across energies).
/// Detects a real multiplier crossing -1 (period doubling) and a complex
/// pair of the continued cycle crossing the unit circle (torus birth), each
/// localized by bisection to bisect_tol in E.
ScanResult energy_scan(double E_min, double E_max, double E_step, const MapConfig& cfg_template,
                       const StoneParams& p, const AnalysisConfig& acfg, const ScanTasks& tasks,
                       const SectionPoint& fp_seed, int workers = 0,
                       double bisect_tol = 1e-3);

void write_scan_csv(std::ostream& os, const ScanResult& scan);
void write_manifold_csv(std::ostream& os, const std::vector<ManifoldPoint>& plus_branch,
                        const std::vector<ManifoldPoint>& minus_branch);

}  // namespace celtic
