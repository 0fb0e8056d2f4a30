#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "celtic/analysis.hpp"

namespace celtic {

/// Full effective configuration of one CLI run. Parsed from JSON; every
/// field has a default so an empty document is a valid configuration.
struct RunConfig {
    StoneParams stone;
    MapConfig map;
    AnalysisConfig analysis;

    struct ScanWindow {
        double E_min = 747.0;
        double E_max = 753.0;
        double E_step = 0.01;
        int workers = 0;  // 0 = hardware concurrency
        int period = 1;
    } scan;

    std::optional<SectionPoint> seed_point;
    double sim_time = 100.0;
    int period = 1;
    Branch branch = Branch::Plus;
    double bracket_lo = 748.3;
    double bracket_hi = 748.5;
    long n_symmetry_points = 100;
    std::string output_dir;  // empty: $CELTIC_OUT_DIR or "."
    std::uint64_t rng_seed = 12345;

    void validate() const;

    /// Seed point for orbit-based commands: the explicit seed when given,
    /// otherwise a reference point in the chaotic window jittered by the
    /// configured RNG seed.
    SectionPoint effective_seed() const;
};

/// Parse a JSON document (empty string means all defaults). Unknown keys are
/// rejected. Throws ConfigInvalid.
RunConfig parse_run_config(const std::string& json_text);

/// Serialize the full effective configuration (for summary embedding).
std::string run_config_to_json(const RunConfig& cfg);

/// Execute one command ("simulate", "attractor", "lyapunov", "fixed-point",
/// "manifold", "butterfly", "scan", "symmetry-check", "lorenz-validate"),
/// write CSV artifacts plus <command>_summary.json into output_dir, and
/// return the summary JSON text.
std::string run_scenario(const RunConfig& cfg, const std::string& command);

}  // namespace celtic
