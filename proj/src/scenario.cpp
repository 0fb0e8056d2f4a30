#include "celtic/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "celtic/lorenz.hpp"

namespace celtic {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            fail(ErrorCode::ConfigInvalid, "unknown key '" + it.key() + "' in " + where);
    }
}

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        fail(ErrorCode::ConfigInvalid, std::string("'") + key + "' must be a number");
    return obj[key].get<double>();
}

long get_int(const json& obj, const char* key, long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        fail(ErrorCode::ConfigInvalid, std::string("'") + key + "' must be an integer");
    return obj[key].get<long>();
}

CrossDirection parse_direction(const std::string& s) {
    if (s == "+") return CrossDirection::Positive;
    if (s == "-") return CrossDirection::Negative;
    if (s == "any") return CrossDirection::Any;
    fail(ErrorCode::ConfigInvalid, "crossing_direction must be '+', '-' or 'any'");
}

const char* direction_name(CrossDirection d) {
    switch (d) {
        case CrossDirection::Positive: return "+";
        case CrossDirection::Negative: return "-";
        case CrossDirection::Any: return "any";
    }
    return "?";
}

}  // namespace

void RunConfig::validate() const {
    stone.validate();
    map.validate();
    if (analysis.n_transient < 0 || analysis.n_iter <= 0 || analysis.n_keep <= 0)
        fail(ErrorCode::ConfigInvalid, "iteration counts must be positive");
    if (!(analysis.eps0 > 0) || !(analysis.spacing_max > 0) || !(analysis.rho > 0))
        fail(ErrorCode::ConfigInvalid, "manifold knobs must be positive");
    if (!(analysis.zero_tol > 0) || !(analysis.newton_tol > 0))
        fail(ErrorCode::ConfigInvalid, "tolerances must be positive");
    if (period < 1 || scan.period < 1)
        fail(ErrorCode::ConfigInvalid, "period must be >= 1");
    if (!(scan.E_step > 0) || scan.E_max < scan.E_min)
        fail(ErrorCode::ConfigInvalid, "invalid scan window");
    if (!(bracket_hi > bracket_lo))
        fail(ErrorCode::ConfigInvalid, "bracket_hi must exceed bracket_lo");
    if (n_symmetry_points < 1)
        fail(ErrorCode::ConfigInvalid, "n_symmetry_points must be >= 1");
}

SectionPoint RunConfig::effective_seed() const {
    if (seed_point) return *seed_point;
    // Reference point inside the chaotic window, jittered so repeated runs
    // with different rng_seed sample different transients.
    SectionPoint x{3.650723, 0.669144, -0.384701};
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
    x.l = wrap_angle(x.l + jitter(rng));
    x.eta += jitter(rng);
    x.xi += jitter(rng);
    return x;
}

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    if (json_text.empty()) {
        doc = json::object();
    } else {
        try {
            doc = json::parse(json_text);
        } catch (const json::exception& e) {
            fail(ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
        }
    }
    if (!doc.is_object()) fail(ErrorCode::ConfigInvalid, "config root must be an object");

    RunConfig cfg;
    reject_unknown_keys(doc,
                        {"stone", "map", "analysis", "scan", "seed_point", "sim_time", "period",
                         "branch", "bracket", "n_symmetry_points", "output_dir", "rng_seed"},
                        "config root");

    if (doc.contains("stone")) {
        const json& s = doc["stone"];
        reject_unknown_keys(
            s, {"I1", "I2", "I3", "m", "grav_accel", "a1", "a2", "h", "delta", "eps_gamma"},
            "stone");
        cfg.stone.I1 = get_num(s, "I1", cfg.stone.I1);
        cfg.stone.I2 = get_num(s, "I2", cfg.stone.I2);
        cfg.stone.I3 = get_num(s, "I3", cfg.stone.I3);
        cfg.stone.m = get_num(s, "m", cfg.stone.m);
        cfg.stone.grav_accel = get_num(s, "grav_accel", cfg.stone.grav_accel);
        cfg.stone.a1 = get_num(s, "a1", cfg.stone.a1);
        cfg.stone.a2 = get_num(s, "a2", cfg.stone.a2);
        cfg.stone.h = get_num(s, "h", cfg.stone.h);
        cfg.stone.delta = get_num(s, "delta", cfg.stone.delta);
        cfg.stone.eps_gamma = get_num(s, "eps_gamma", cfg.stone.eps_gamma);
    }
    if (doc.contains("map")) {
        const json& m = doc["map"];
        reject_unknown_keys(m,
                            {"E", "g0", "crossing_direction", "fd_step", "eps_sing",
                             "t_return_max", "integrator"},
                            "map");
        cfg.map.E = get_num(m, "E", cfg.map.E);
        cfg.map.g0 = get_num(m, "g0", cfg.map.g0);
        if (m.contains("crossing_direction"))
            cfg.map.crossing_direction = parse_direction(m["crossing_direction"]);
        cfg.map.fd_step = get_num(m, "fd_step", cfg.map.fd_step);
        cfg.map.eps_sing = get_num(m, "eps_sing", cfg.map.eps_sing);
        cfg.map.t_return_max = get_num(m, "t_return_max", cfg.map.t_return_max);
        if (m.contains("integrator")) {
            const json& i = m["integrator"];
            reject_unknown_keys(
                i, {"rel_tol", "abs_tol", "max_step", "max_steps", "event_tol", "fixed_step"},
                "integrator");
            cfg.map.integrator.rel_tol = get_num(i, "rel_tol", cfg.map.integrator.rel_tol);
            cfg.map.integrator.abs_tol = get_num(i, "abs_tol", cfg.map.integrator.abs_tol);
            cfg.map.integrator.max_step = get_num(i, "max_step", cfg.map.integrator.max_step);
            cfg.map.integrator.max_steps = get_int(i, "max_steps", cfg.map.integrator.max_steps);
            cfg.map.integrator.event_tol = get_num(i, "event_tol", cfg.map.integrator.event_tol);
            cfg.map.integrator.fixed_step =
                get_num(i, "fixed_step", cfg.map.integrator.fixed_step);
        }
    }
    if (doc.contains("analysis")) {
        const json& a = doc["analysis"];
        reject_unknown_keys(a,
                            {"n_transient", "n_iter", "n_keep", "eps0", "spacing_max",
                             "zero_tol", "rho", "newton_tol", "newton_max_iter",
                             "manifold_budget"},
                            "analysis");
        cfg.analysis.n_transient = get_int(a, "n_transient", cfg.analysis.n_transient);
        cfg.analysis.n_iter = get_int(a, "n_iter", cfg.analysis.n_iter);
        cfg.analysis.n_keep = get_int(a, "n_keep", cfg.analysis.n_keep);
        cfg.analysis.eps0 = get_num(a, "eps0", cfg.analysis.eps0);
        cfg.analysis.spacing_max = get_num(a, "spacing_max", cfg.analysis.spacing_max);
        cfg.analysis.zero_tol = get_num(a, "zero_tol", cfg.analysis.zero_tol);
        cfg.analysis.rho = get_num(a, "rho", cfg.analysis.rho);
        cfg.analysis.newton_tol = get_num(a, "newton_tol", cfg.analysis.newton_tol);
        cfg.analysis.newton_max_iter =
            (int)get_int(a, "newton_max_iter", cfg.analysis.newton_max_iter);
        cfg.analysis.manifold_budget = get_int(a, "manifold_budget", cfg.analysis.manifold_budget);
    }
    if (doc.contains("scan")) {
        const json& s = doc["scan"];
        reject_unknown_keys(s, {"E_min", "E_max", "E_step", "workers", "period"}, "scan");
        cfg.scan.E_min = get_num(s, "E_min", cfg.scan.E_min);
        cfg.scan.E_max = get_num(s, "E_max", cfg.scan.E_max);
        cfg.scan.E_step = get_num(s, "E_step", cfg.scan.E_step);
        cfg.scan.workers = (int)get_int(s, "workers", cfg.scan.workers);
        cfg.scan.period = (int)get_int(s, "period", cfg.scan.period);
    }
    if (doc.contains("seed_point")) {
        const json& sp = doc["seed_point"];
        if (!sp.is_array() || sp.size() != 3)
            fail(ErrorCode::ConfigInvalid, "seed_point must be [l, eta, xi]");
        cfg.seed_point = SectionPoint{wrap_angle(sp[0].get<double>()), sp[1].get<double>(),
                                      sp[2].get<double>()};
    }
    cfg.sim_time = get_num(doc, "sim_time", cfg.sim_time);
    cfg.period = (int)get_int(doc, "period", cfg.period);
    if (doc.contains("branch")) {
        const std::string b = doc["branch"].get<std::string>();
        if (b == "+")
            cfg.branch = Branch::Plus;
        else if (b == "-")
            cfg.branch = Branch::Minus;
        else
            fail(ErrorCode::ConfigInvalid, "branch must be '+' or '-'");
    }
    if (doc.contains("bracket")) {
        const json& br = doc["bracket"];
        if (!br.is_array() || br.size() != 2)
            fail(ErrorCode::ConfigInvalid, "bracket must be [E_lo, E_hi]");
        cfg.bracket_lo = br[0].get<double>();
        cfg.bracket_hi = br[1].get<double>();
    }
    cfg.n_symmetry_points = get_int(doc, "n_symmetry_points", cfg.n_symmetry_points);
    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("rng_seed")) cfg.rng_seed = doc["rng_seed"].get<std::uint64_t>();

    if (cfg.output_dir.empty()) {
        const char* env = std::getenv("CELTIC_OUT_DIR");
        cfg.output_dir = env ? env : ".";
    }
    cfg.validate();
    return cfg;
}

namespace {

json config_json(const RunConfig& c) {
    json j;
    j["stone"] = {{"I1", c.stone.I1},
                  {"I2", c.stone.I2},
                  {"I3", c.stone.I3},
                  {"m", c.stone.m},
                  {"grav_accel", c.stone.grav_accel},
                  {"a1", c.stone.a1},
                  {"a2", c.stone.a2},
                  {"h", c.stone.h},
                  {"delta", c.stone.delta},
                  {"eps_gamma", c.stone.eps_gamma}};
    j["map"] = {{"E", c.map.E},
                {"g0", c.map.g0},
                {"crossing_direction", direction_name(c.map.crossing_direction)},
                {"fd_step", c.map.fd_step},
                {"eps_sing", c.map.eps_sing},
                {"t_return_max", c.map.t_return_max},
                {"integrator",
                 {{"rel_tol", c.map.integrator.rel_tol},
                  {"abs_tol", c.map.integrator.abs_tol},
                  {"max_step", c.map.integrator.max_step},
                  {"max_steps", c.map.integrator.max_steps},
                  {"event_tol", c.map.integrator.event_tol},
                  {"fixed_step", c.map.integrator.fixed_step}}}};
    j["analysis"] = {{"n_transient", c.analysis.n_transient},
                     {"n_iter", c.analysis.n_iter},
                     {"n_keep", c.analysis.n_keep},
                     {"eps0", c.analysis.eps0},
                     {"spacing_max", c.analysis.spacing_max},
                     {"zero_tol", c.analysis.zero_tol},
                     {"rho", c.analysis.rho},
                     {"newton_tol", c.analysis.newton_tol},
                     {"newton_max_iter", c.analysis.newton_max_iter},
                     {"manifold_budget", c.analysis.manifold_budget}};
    j["scan"] = {{"E_min", c.scan.E_min},
                 {"E_max", c.scan.E_max},
                 {"E_step", c.scan.E_step},
                 {"workers", c.scan.workers},
                 {"period", c.scan.period}};
    const SectionPoint seed = c.effective_seed();
    j["seed_point"] = {seed.l, seed.eta, seed.xi};
    j["sim_time"] = c.sim_time;
    j["period"] = c.period;
    j["branch"] = c.branch == Branch::Plus ? "+" : "-";
    j["bracket"] = {c.bracket_lo, c.bracket_hi};
    j["n_symmetry_points"] = c.n_symmetry_points;
    j["output_dir"] = c.output_dir;
    j["rng_seed"] = c.rng_seed;
    return j;
}

json spectrum_json(const LyapunovSpectrum& s) {
    return {{"per_iteration", {s.lambda1, s.lambda2, s.lambda3}},
            {"per_time",
             {s.per_time(s.lambda1), s.per_time(s.lambda2), s.per_time(s.lambda3)}},
            {"lambda2_band", {s.lambda2_min, s.lambda2_max}},
            {"mean_return_time", s.mean_return_time},
            {"mean_log_det", s.mean_log_det},
            {"n_iter", s.n_iter},
            {"transient", s.transient}};
}

json fixed_point_json(const PeriodicPointResult& fp) {
    json mus = json::array();
    for (int i = 0; i < 3; ++i)
        mus.push_back({{"re", fp.multipliers[i].real()},
                       {"im", fp.multipliers[i].imag()},
                       {"abs", std::abs(fp.multipliers[i])}});
    return {{"point", {fp.point.l, fp.point.eta, fp.point.xi}},
            {"period", fp.period},
            {"multipliers", mus},
            {"residual", fp.residual}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    os << text;
    if (!os) fail(ErrorCode::IoError, "short write to " + path.string());
}

std::vector<SectionPoint> sample_section_points(const RunConfig& cfg, long count) {
    // Deterministic liftable samples around the chaotic window.
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<SectionPoint> pts;
    long attempts = 0;
    while ((long)pts.size() < count && attempts < count * 100) {
        ++attempts;
        SectionPoint x{u01(rng) * 2.0 * M_PI, 0.55 + 0.2 * u01(rng), -0.48 + 0.16 * u01(rng)};
        try {
            lift_section_point(x, cfg.map, cfg.stone);
            pts.push_back(x);
        } catch (const CelticError&) {
        }
    }
    if ((long)pts.size() < count)
        fail(ErrorCode::Internal, "could not generate enough liftable section points");
    return pts;
}

}  // namespace

std::string run_config_to_json(const RunConfig& cfg) { return config_json(cfg).dump(2); }

std::string run_scenario(const RunConfig& cfg, const std::string& command) {
    namespace fs = std::filesystem;
    const fs::path out_dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec && !fs::is_directory(out_dir))
        fail(ErrorCode::IoError, "cannot create output directory " + out_dir.string());

    json summary;
    summary["command"] = command;
    summary["config"] = config_json(cfg);
    json& res = summary["results"];

    if (command == "simulate") {
        const BodyState s0 = lift_section_point(cfg.effective_seed(), cfg.map, cfg.stone);
        const Trajectory traj = integrate(s0, 0.0, cfg.sim_time, cfg.stone, cfg.map.integrator);
        std::ostringstream csv;
        write_trajectory_csv(csv, traj, cfg.stone);
        write_file(out_dir / "trajectory.csv", csv.str());

        const double E0 = integrals(traj.states.front(), cfg.stone).energy;
        double max_de = 0.0, max_dg = 0.0;
        for (const BodyState& s : traj.states) {
            const Integrals ints = integrals(s, cfg.stone);
            max_de = std::max(max_de, std::abs(ints.energy - E0) / std::abs(E0));
            max_dg = std::max(max_dg, std::abs(ints.gamma_norm_sq - 1.0));
        }
        res["samples"] = traj.times.size();
        res["t_final"] = traj.times.back();
        res["energy_initial"] = E0;
        res["max_rel_energy_drift"] = max_de;
        res["max_gamma_norm_drift"] = max_dg;
        res["artifact"] = "trajectory.csv";
    } else if (command == "attractor") {
        const std::vector<SectionPoint> cloud = iterate_attractor(
            cfg.effective_seed(), cfg.map, cfg.stone, cfg.analysis.n_transient, cfg.analysis.n_keep);
        std::ostringstream csv;
        write_section_csv(csv, cloud, cfg.map);
        write_file(out_dir / "attractor.csv", csv.str());

        const LyapunovSpectrum s = lyapunov_spectrum(cfg.effective_seed(), cfg.map, cfg.stone,
                                                     cfg.analysis.n_iter, cfg.analysis.n_transient);
        const RegimeTag tag = classify_regime(s, cfg.analysis.zero_tol);
        res["points"] = cloud.size();
        res["spectrum"] = spectrum_json(s);
        res["regime"] = regime_name(tag);
        res["artifact"] = "attractor.csv";
    } else if (command == "lyapunov") {
        const LyapunovSpectrum s = lyapunov_spectrum(cfg.effective_seed(), cfg.map, cfg.stone,
                                                     cfg.analysis.n_iter, cfg.analysis.n_transient);
        const RegimeTag tag = classify_regime(s, cfg.analysis.zero_tol);
        res["spectrum"] = spectrum_json(s);
        res["regime"] = regime_name(tag);
        res["pseudo_hyperbolic_conditions"] = {
            {"lambda1_positive", s.per_time(s.lambda1) > 0.0},
            {"sum_negative",
             s.per_time(s.lambda1) + s.per_time(s.lambda2) + s.per_time(s.lambda3) < 0.0},
            {"lambda1_plus_lambda2_positive",
             s.per_time(s.lambda1) + s.per_time(s.lambda2) > 0.0}};
    } else if (command == "fixed-point") {
        const PeriodicPointResult fp = find_periodic_point(cfg.effective_seed(), cfg.period,
                                                           cfg.map, cfg.stone, cfg.analysis);
        res["fixed_point"] = fixed_point_json(fp);
        const double a1 = std::abs(fp.multipliers[0]);  // modulus-descending order
        const double a2 = std::abs(fp.multipliers[1]);
        const double a3 = std::abs(fp.multipliers[2]);
        res["saddle_conditions"] = {{"one_multiplier_outside", a1 > 1.0 && a2 < 1.0},
                                    {"product_leading_two", a1 * a2},
                                    {"moduli", {a1, a2, a3}}};
    } else if (command == "manifold") {
        const PeriodicPointResult fp = find_periodic_point(cfg.effective_seed(), cfg.period,
                                                           cfg.map, cfg.stone, cfg.analysis);
        const auto plus = trace_unstable_manifold(fp, Branch::Plus, cfg.map, cfg.stone,
                                                  cfg.analysis.eps0, cfg.analysis.spacing_max,
                                                  cfg.analysis.n_keep, cfg.analysis);
        const auto minus = trace_unstable_manifold(fp, Branch::Minus, cfg.map, cfg.stone,
                                                   cfg.analysis.eps0, cfg.analysis.spacing_max,
                                                   cfg.analysis.n_keep, cfg.analysis);
        std::ostringstream csv;
        write_manifold_csv(csv, plus, minus);
        write_file(out_dir / "manifold.csv", csv.str());
        res["fixed_point"] = fixed_point_json(fp);
        res["points_plus"] = plus.size();
        res["points_minus"] = minus.size();
        res["artifact"] = "manifold.csv";
    } else if (command == "butterfly") {
        // Bisection on the separatrix re-entry sign over [bracket_lo, bracket_hi].
        SectionPoint seed = cfg.effective_seed();
        auto sign_at = [&](double E, SectionPoint& fp_seed) {
            MapConfig m = cfg.map;
            m.E = E;
            const PeriodicPointResult fp =
                find_periodic_point(fp_seed, cfg.period, m, cfg.stone, cfg.analysis);
            fp_seed = fp.point;
            return separatrix_return_sign(fp, cfg.branch, m, cfg.stone, cfg.analysis.rho,
                                          cfg.analysis);
        };
        double lo = cfg.bracket_lo, hi = cfg.bracket_hi;
        SectionPoint seed_lo = seed, seed_hi = seed;
        const double s_lo = sign_at(lo, seed_lo);
        const double s_hi = sign_at(hi, seed_hi);
        res["sign_lo"] = s_lo;
        res["sign_hi"] = s_hi;
        if (s_lo * s_hi >= 0.0)
            fail(ErrorCode::NoReturn,
                 "separatrix re-entry sign does not change over the bracket");
        SectionPoint seed_mid = seed_lo;
        int evals = 2;
        while (hi - lo > 2e-3) {
            const double mid = 0.5 * (lo + hi);
            const double s_mid = sign_at(mid, seed_mid);
            ++evals;
            if (s_mid * s_lo > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        res["E2_bracket"] = {lo, hi};
        res["E2_estimate"] = 0.5 * (lo + hi);
        res["sign_evaluations"] = evals;
    } else if (command == "scan") {
        ScanTasks tasks;
        tasks.continue_period = cfg.scan.period;
        const ScanResult scan =
            energy_scan(cfg.scan.E_min, cfg.scan.E_max, cfg.scan.E_step, cfg.map, cfg.stone,
                        cfg.analysis, tasks, cfg.effective_seed(), cfg.scan.workers);
        std::ostringstream csv;
        write_scan_csv(csv, scan);
        write_file(out_dir / "scan.csv", csv.str());

        long n_pos = 0, n_records = 0, n_errors = 0;
        for (const ScanRecord& r : scan.records) {
            ++n_records;
            if (!r.error.empty()) ++n_errors;
            if (r.spectrum && r.spectrum->lambda1 > 0) ++n_pos;
        }
        json events = json::array();
        for (const BifurcationEvent& ev : scan.events)
            events.push_back({{"kind", ev.kind}, {"E", ev.E}});
        res["records"] = n_records;
        res["records_with_errors"] = n_errors;
        res["records_lambda1_positive"] = n_pos;
        res["events"] = events;
        res["artifact"] = "scan.csv";
    } else if (command == "symmetry-check") {
        const std::vector<SectionPoint> pts = sample_section_points(cfg, cfg.n_symmetry_points);
        double worst_s1 = 0, worst_i1 = 0, worst_i2 = 0, worst_inv = 0;
        for (const SectionPoint& x : pts) {
            const SectionPoint fx = poincare_step(x, cfg.map, cfg.stone);
            const SectionPoint bx = poincare_step(x, cfg.map, cfg.stone, true);
            worst_s1 = std::max(
                worst_s1,
                section_dist(poincare_step(apply_symmetry(x, Symmetry::S1), cfg.map, cfg.stone),
                             apply_symmetry(fx, Symmetry::S1)));
            worst_i1 = std::max(
                worst_i1,
                section_dist(
                    apply_symmetry(
                        poincare_step(apply_symmetry(x, Symmetry::I1), cfg.map, cfg.stone),
                        Symmetry::I1),
                    bx));
            worst_i2 = std::max(
                worst_i2,
                section_dist(
                    apply_symmetry(
                        poincare_step(apply_symmetry(x, Symmetry::I2), cfg.map, cfg.stone),
                        Symmetry::I2),
                    bx));
            worst_inv = std::max(worst_inv,
                                 section_dist(poincare_step(fx, cfg.map, cfg.stone, true), x));
        }
        res["points"] = pts.size();
        res["max_deviation"] = {{"S1_equivariance", worst_s1},
                                {"I1_reversibility", worst_i1},
                                {"I2_reversibility", worst_i2},
                                {"inverse_pair", worst_inv}};
    } else if (command == "lorenz-validate") {
        const LorenzParams lp;
        const Vec3 y0(1.0, 1.0, 20.0);
        json runs = json::array();
        double values[2] = {0, 0};
        const double tols[2] = {1e-8, 1e-10};
        for (int i = 0; i < 2; ++i) {
            IntegratorConfig icfg;
            icfg.rel_tol = icfg.abs_tol = tols[i];
            icfg.max_step = 0.05;
            values[i] = lorenz_max_lyapunov(lp, y0, 50.0, 2000.0, 0.5, icfg);
            runs.push_back({{"rel_tol", tols[i]}, {"lambda_max", values[i]}});
        }
        res["runs"] = runs;
        res["agreement"] = std::abs(values[0] - values[1]);
        res["lambda_max"] = values[1];
        res["sigma"] = lp.sigma;
        res["r"] = lp.r;
        res["b"] = lp.b;
    } else {
        fail(ErrorCode::ConfigInvalid, "unknown command '" + command + "'");
    }

    const std::string text = summary.dump(2) + "\n";
    write_file(out_dir / (command + "_summary.json"), text);
    return text;
}

}  // namespace celtic
