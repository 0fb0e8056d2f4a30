// Command-line laboratory for the Celtic stone model. All computation goes
// through the C API in celtic/celtic.h; this binary only assembles the JSON
// configuration from flags and maps statuses to exit codes.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "celtic/celtic.h"

namespace {

using nlohmann::json;

int exit_code_of(celtic_status status) {
    switch (status) {
        case CELTIC_OK:
            return 0;
        case CELTIC_ERR_CONFIG:
        case CELTIC_ERR_IO:
            return 2;
        case CELTIC_ERR_ORBIT_ESCAPED:
            return 4;
        default:
            return 3;  // numerical failure
    }
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<double> E;
    std::optional<std::vector<double>> seed;
    std::optional<std::uint64_t> rng_seed;
    std::optional<std::string> direction;
    std::optional<double> rel_tol;
    std::optional<double> event_tol;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON configuration file (flags override it)");
    cmd->add_option("--out", f.out_dir, "output directory (default: $CELTIC_OUT_DIR or '.')");
    cmd->add_option("--E", f.E, "energy level");
    cmd->add_option("--seed", f.seed, "section seed point l,eta,xi")->delimiter(',')->expected(3);
    cmd->add_option("--rng-seed", f.rng_seed, "seed for jittered initial conditions");
    cmd->add_option("--direction", f.direction, "crossing direction: +, - or any");
    cmd->add_option("--rel-tol", f.rel_tol, "integrator relative tolerance (abs_tol follows)");
    cmd->add_option("--event-tol", f.event_tol, "section-crossing residual tolerance");
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream is(path);
    if (!is) {
        std::cerr << "error: cannot read config file " << path << "\n";
        std::exit(2);
    }
    std::stringstream ss;
    ss << is.rdbuf();
    json doc = json::parse(ss.str(), nullptr, false);
    if (doc.is_discarded()) {
        std::cerr << "error: config file " << path << " is not valid JSON\n";
        std::exit(2);
    }
    return doc;
}

void apply_common(json& doc, const CommonFlags& f) {
    if (!f.out_dir.empty()) doc["output_dir"] = f.out_dir;
    if (f.E) doc["map"]["E"] = *f.E;
    if (f.seed) doc["seed_point"] = *f.seed;
    if (f.rng_seed) doc["rng_seed"] = *f.rng_seed;
    if (f.direction) doc["map"]["crossing_direction"] = *f.direction;
    if (f.rel_tol) {
        doc["map"]["integrator"]["rel_tol"] = *f.rel_tol;
        doc["map"]["integrator"]["abs_tol"] = *f.rel_tol;
    }
    if (f.event_tol) doc["map"]["integrator"]["event_tol"] = *f.event_tol;
}

int run(const json& doc, const std::string& command, bool quiet) {
    const std::string text = doc.dump();
    char* summary = nullptr;
    const celtic_status status = celtic_run_scenario(text.c_str(), command.c_str(), &summary);
    if (status != CELTIC_OK) {
        std::cerr << "error [" << celtic_status_name(status) << "]: " << celtic_last_error()
                  << "\n";
        return exit_code_of(status);
    }
    if (!quiet && summary) std::cout << summary;
    celtic_string_free(summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Celtic stone laboratory: nonholonomic flow, Poincare map, attractor analysis"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress the summary on stdout");

    struct Cmd {
        CLI::App* app = nullptr;
        CommonFlags common;
    };

    Cmd simulate;
    simulate.app = app.add_subcommand("simulate", "integrate a raw trajectory, write CSV");
    add_common(simulate.app, simulate.common);
    std::optional<double> sim_time;
    simulate.app->add_option("--t", sim_time, "integration time span");

    Cmd attractor;
    attractor.app = app.add_subcommand("attractor", "iterate the map, write the point cloud");
    add_common(attractor.app, attractor.common);
    std::optional<long> att_iters, att_transient;
    attractor.app->add_option("--iters", att_iters, "points to keep");
    attractor.app->add_option("--transient", att_transient, "transient iterations to discard");

    Cmd lyapunov;
    lyapunov.app = app.add_subcommand("lyapunov", "Benettin spectrum of the map");
    add_common(lyapunov.app, lyapunov.common);
    std::optional<long> lya_iters, lya_transient;
    lyapunov.app->add_option("--iters", lya_iters, "accumulation iterations");
    lyapunov.app->add_option("--transient", lya_transient, "transient iterations");

    Cmd fixed_point;
    fixed_point.app = app.add_subcommand("fixed-point", "Newton solve for a periodic point");
    add_common(fixed_point.app, fixed_point.common);
    std::optional<int> fp_period;
    fixed_point.app->add_option("--period", fp_period, "period of the sought point");

    Cmd manifold;
    manifold.app = app.add_subcommand("manifold", "trace the unstable manifold of a saddle");
    add_common(manifold.app, manifold.common);
    std::optional<int> mf_period;
    std::optional<long> mf_points;
    std::optional<double> mf_eps0, mf_spacing;
    manifold.app->add_option("--period", mf_period, "period of the saddle");
    manifold.app->add_option("--points", mf_points, "polyline points per branch");
    manifold.app->add_option("--eps0", mf_eps0, "fundamental-segment seed offset");
    manifold.app->add_option("--spacing", mf_spacing, "maximum polyline spacing");

    Cmd butterfly;
    butterfly.app =
        app.add_subcommand("butterfly", "bisect the separatrix re-entry sign over an E bracket");
    add_common(butterfly.app, butterfly.common);
    std::optional<double> bf_from, bf_to, bf_rho;
    std::optional<std::string> bf_branch;
    butterfly.app->add_option("--from", bf_from, "lower bracket energy");
    butterfly.app->add_option("--to", bf_to, "upper bracket energy");
    butterfly.app->add_option("--rho", bf_rho, "re-entry ball radius");
    butterfly.app->add_option("--branch", bf_branch, "separatrix branch: + or -");

    Cmd scan;
    scan.app = app.add_subcommand("scan", "energy scan with continuation and spectra");
    add_common(scan.app, scan.common);
    std::optional<double> sc_from, sc_to, sc_step;
    std::optional<int> sc_workers, sc_period;
    std::optional<long> sc_iters;
    scan.app->add_option("--from", sc_from, "scan start energy");
    scan.app->add_option("--to", sc_to, "scan end energy");
    scan.app->add_option("--step", sc_step, "energy step");
    scan.app->add_option("--workers", sc_workers, "parallel workers (0 = hardware)");
    scan.app->add_option("--period", sc_period, "period of the continued point");
    scan.app->add_option("--iters", sc_iters, "Lyapunov iterations per energy");

    Cmd symmetry;
    symmetry.app = app.add_subcommand("symmetry-check", "verify the map symmetry identities");
    add_common(symmetry.app, symmetry.common);
    std::optional<long> sym_points;
    symmetry.app->add_option("--points", sym_points, "random section points to test");

    Cmd lorenz;
    lorenz.app = app.add_subcommand("lorenz-validate",
                                    "maximal Lyapunov exponent of the Lorenz reference system");
    add_common(lorenz.app, lorenz.common);

    CLI11_PARSE(app, argc, argv);

    auto finish = [&](Cmd& c, const char* name, auto&& patch) {
        json doc = load_config(c.common.config_path);
        apply_common(doc, c.common);
        patch(doc);
        return run(doc, name, quiet);
    };

    if (simulate.app->parsed())
        return finish(simulate, "simulate", [&](json& d) {
            if (sim_time) d["sim_time"] = *sim_time;
        });
    if (attractor.app->parsed())
        return finish(attractor, "attractor", [&](json& d) {
            if (att_iters) d["analysis"]["n_keep"] = *att_iters;
            if (att_transient) d["analysis"]["n_transient"] = *att_transient;
        });
    if (lyapunov.app->parsed())
        return finish(lyapunov, "lyapunov", [&](json& d) {
            if (lya_iters) d["analysis"]["n_iter"] = *lya_iters;
            if (lya_transient) d["analysis"]["n_transient"] = *lya_transient;
        });
    if (fixed_point.app->parsed())
        return finish(fixed_point, "fixed-point", [&](json& d) {
            if (fp_period) d["period"] = *fp_period;
        });
    if (manifold.app->parsed())
        return finish(manifold, "manifold", [&](json& d) {
            if (mf_period) d["period"] = *mf_period;
            if (mf_points) d["analysis"]["n_keep"] = *mf_points;
            if (mf_eps0) d["analysis"]["eps0"] = *mf_eps0;
            if (mf_spacing) d["analysis"]["spacing_max"] = *mf_spacing;
        });
    if (butterfly.app->parsed())
        return finish(butterfly, "butterfly", [&](json& d) {
            if (bf_from && bf_to) d["bracket"] = {*bf_from, *bf_to};
            if (bf_rho) d["analysis"]["rho"] = *bf_rho;
            if (bf_branch) d["branch"] = *bf_branch;
        });
    if (scan.app->parsed())
        return finish(scan, "scan", [&](json& d) {
            if (sc_from) d["scan"]["E_min"] = *sc_from;
            if (sc_to) d["scan"]["E_max"] = *sc_to;
            if (sc_step) d["scan"]["E_step"] = *sc_step;
            if (sc_workers) d["scan"]["workers"] = *sc_workers;
            if (sc_period) d["scan"]["period"] = *sc_period;
            if (sc_iters) d["analysis"]["n_iter"] = *sc_iters;
        });
    if (symmetry.app->parsed())
        return finish(symmetry, "symmetry-check", [&](json& d) {
            if (sym_points) d["n_symmetry_points"] = *sym_points;
        });
    if (lorenz.app->parsed())
        return finish(lorenz, "lorenz-validate", [](json&) {});
    return 2;
}
