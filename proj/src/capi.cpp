#include "celtic/celtic.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "celtic/scenario.hpp"

using namespace celtic;

struct celtic_lab {
    RunConfig cfg;
};

namespace {

thread_local std::string t_last_error;

celtic_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigInvalid: return CELTIC_ERR_CONFIG;
        case ErrorCode::DegenerateContact: return CELTIC_ERR_DEGENERATE_CONTACT;
        case ErrorCode::SingularChart: return CELTIC_ERR_SINGULAR_CHART;
        case ErrorCode::ZeroMomentum: return CELTIC_ERR_ZERO_MOMENTUM;
        case ErrorCode::EnergyBelowPotential: return CELTIC_ERR_ENERGY_BELOW_POTENTIAL;
        case ErrorCode::NoCrossingFound: return CELTIC_ERR_NO_CROSSING;
        case ErrorCode::StepCountExceeded: return CELTIC_ERR_STEP_COUNT_EXCEEDED;
        case ErrorCode::OrbitEscaped: return CELTIC_ERR_ORBIT_ESCAPED;
        case ErrorCode::NoConvergence: return CELTIC_ERR_NO_CONVERGENCE;
        case ErrorCode::SingularNewtonMatrix: return CELTIC_ERR_SINGULAR_NEWTON;
        case ErrorCode::NotASaddle: return CELTIC_ERR_NOT_A_SADDLE;
        case ErrorCode::NoReturn: return CELTIC_ERR_NO_RETURN;
        case ErrorCode::IoError: return CELTIC_ERR_IO;
        case ErrorCode::Internal: return CELTIC_ERR_INTERNAL;
    }
    return CELTIC_ERR_INTERNAL;
}

template <class Fn>
celtic_status guarded(Fn&& fn) {
    try {
        fn();
        return CELTIC_OK;
    } catch (const CelticError& e) {
        t_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return CELTIC_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown failure";
        return CELTIC_ERR_INTERNAL;
    }
}

celtic_status require(bool cond, const char* message) {
    if (cond) return CELTIC_OK;
    t_last_error = message;
    return CELTIC_ERR_CONFIG;
}

SectionPoint to_point(const double x[3]) { return SectionPoint{x[0], x[1], x[2]}; }

void from_point(const SectionPoint& pt, double x[3]) {
    x[0] = pt.l;
    x[1] = pt.eta;
    x[2] = pt.xi;
}

}  // namespace

extern "C" {

const char* celtic_status_name(celtic_status status) {
    switch (status) {
        case CELTIC_OK: return "ok";
        case CELTIC_ERR_CONFIG: return "config_invalid";
        case CELTIC_ERR_DEGENERATE_CONTACT: return "degenerate_contact";
        case CELTIC_ERR_SINGULAR_CHART: return "singular_chart";
        case CELTIC_ERR_ZERO_MOMENTUM: return "zero_momentum";
        case CELTIC_ERR_ENERGY_BELOW_POTENTIAL: return "energy_below_potential";
        case CELTIC_ERR_NO_CROSSING: return "no_crossing_found";
        case CELTIC_ERR_STEP_COUNT_EXCEEDED: return "step_count_exceeded";
        case CELTIC_ERR_ORBIT_ESCAPED: return "orbit_escaped";
        case CELTIC_ERR_NO_CONVERGENCE: return "no_convergence";
        case CELTIC_ERR_SINGULAR_NEWTON: return "singular_newton_matrix";
        case CELTIC_ERR_NOT_A_SADDLE: return "not_a_saddle";
        case CELTIC_ERR_NO_RETURN: return "no_return";
        case CELTIC_ERR_IO: return "io_error";
        case CELTIC_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* celtic_last_error(void) { return t_last_error.c_str(); }

celtic_status celtic_lab_create(const char* config_json, celtic_lab** out_lab) {
    if (celtic_status s = require(out_lab != nullptr, "out_lab is NULL")) return s;
    *out_lab = nullptr;
    return guarded([&] {
        auto lab = std::make_unique<celtic_lab>();
        lab->cfg = parse_run_config(config_json ? config_json : "");
        *out_lab = lab.release();
    });
}

void celtic_lab_destroy(celtic_lab* lab) { delete lab; }

celtic_status celtic_lab_set_energy(celtic_lab* lab, double energy) {
    if (celtic_status s = require(lab != nullptr, "lab is NULL")) return s;
    return guarded([&] {
        lab->cfg.map.E = energy;
        lab->cfg.map.validate();
    });
}

celtic_status celtic_lab_flow_rhs(const celtic_lab* lab, const double state[6],
                                  double deriv[6]) {
    if (celtic_status s = require(lab && state && deriv, "NULL argument")) return s;
    return guarded([&] {
        Vec6 y, dydt;
        for (int i = 0; i < 6; ++i) y[i] = state[i];
        flow_rhs6(y, dydt, lab->cfg.stone);
        for (int i = 0; i < 6; ++i) deriv[i] = dydt[i];
    });
}

celtic_status celtic_lab_integrals(const celtic_lab* lab, const double state[6],
                                   double* energy, double* gamma_norm_sq) {
    if (celtic_status s = require(lab && state, "NULL argument")) return s;
    return guarded([&] {
        Vec6 y;
        for (int i = 0; i < 6; ++i) y[i] = state[i];
        const Integrals ints = integrals(BodyState::from_vec6(y), lab->cfg.stone);
        if (energy) *energy = ints.energy;
        if (gamma_norm_sq) *gamma_norm_sq = ints.gamma_norm_sq;
    });
}

celtic_status celtic_lab_lift(const celtic_lab* lab, const double x[3], double state[6]) {
    if (celtic_status s = require(lab && x && state, "NULL argument")) return s;
    return guarded([&] {
        const Vec6 y = lift_section_point(to_point(x), lab->cfg.map, lab->cfg.stone).to_vec6();
        for (int i = 0; i < 6; ++i) state[i] = y[i];
    });
}

celtic_status celtic_lab_project(const celtic_lab* lab, const double state[6], double x[3]) {
    if (celtic_status s = require(lab && state && x, "NULL argument")) return s;
    return guarded([&] {
        Vec6 y;
        for (int i = 0; i < 6; ++i) y[i] = state[i];
        from_point(project_to_section(BodyState::from_vec6(y), lab->cfg.map, lab->cfg.stone), x);
    });
}

celtic_status celtic_lab_map_step(const celtic_lab* lab, const double x[3], int inverse,
                                  double out[3], double* return_time) {
    if (celtic_status s = require(lab && x && out, "NULL argument")) return s;
    return guarded([&] {
        from_point(poincare_step(to_point(x), lab->cfg.map, lab->cfg.stone, inverse != 0,
                                 return_time),
                   out);
    });
}

celtic_status celtic_lab_map_jacobian(const celtic_lab* lab, const double x[3],
                                      double jacobian[9]) {
    if (celtic_status s = require(lab && x && jacobian, "NULL argument")) return s;
    return guarded([&] {
        const Mat3 J = poincare_jacobian(to_point(x), lab->cfg.map, lab->cfg.stone);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) jacobian[3 * i + j] = J(i, j);
    });
}

celtic_status celtic_symmetry(const double x[3], const char* which, double out[3]) {
    if (celtic_status s = require(x && which && out, "NULL argument")) return s;
    return guarded([&] {
        Symmetry sym;
        if (!std::strcmp(which, "S1"))
            sym = Symmetry::S1;
        else if (!std::strcmp(which, "I1"))
            sym = Symmetry::I1;
        else if (!std::strcmp(which, "I2"))
            sym = Symmetry::I2;
        else
            fail(ErrorCode::ConfigInvalid, "symmetry must be one of S1, I1, I2");
        from_point(apply_symmetry(to_point(x), sym), out);
    });
}

celtic_status celtic_lab_lyapunov(const celtic_lab* lab, const double x0[3], long n_transient,
                                  long n_iter, double lambda_map[3], double* mean_return_time) {
    if (celtic_status s = require(lab && x0 && lambda_map, "NULL argument")) return s;
    if (celtic_status s = require(n_iter > 0 && n_transient >= 0, "bad iteration counts"))
        return s;
    return guarded([&] {
        const LyapunovSpectrum spec =
            lyapunov_spectrum(to_point(x0), lab->cfg.map, lab->cfg.stone, n_iter, n_transient);
        lambda_map[0] = spec.lambda1;
        lambda_map[1] = spec.lambda2;
        lambda_map[2] = spec.lambda3;
        if (mean_return_time) *mean_return_time = spec.mean_return_time;
    });
}

celtic_status celtic_lab_periodic_point(const celtic_lab* lab, const double guess[3],
                                        int period, double point[3], double mult_re[3],
                                        double mult_im[3], double* residual) {
    if (celtic_status s = require(lab && guess && point, "NULL argument")) return s;
    return guarded([&] {
        const PeriodicPointResult fp = find_periodic_point(to_point(guess), period,
                                                           lab->cfg.map, lab->cfg.stone,
                                                           lab->cfg.analysis);
        from_point(fp.point, point);
        for (int i = 0; i < 3; ++i) {
            if (mult_re) mult_re[i] = fp.multipliers[i].real();
            if (mult_im) mult_im[i] = fp.multipliers[i].imag();
        }
        if (residual) *residual = fp.residual;
    });
}

celtic_status celtic_run_scenario(const char* config_json, const char* command,
                                  char** summary_json) {
    if (celtic_status s = require(command != nullptr, "command is NULL")) return s;
    return guarded([&] {
        const RunConfig cfg = parse_run_config(config_json ? config_json : "");
        const std::string text = run_scenario(cfg, command);
        if (summary_json) {
            *summary_json = static_cast<char*>(std::malloc(text.size() + 1));
            if (!*summary_json) fail(ErrorCode::Internal, "out of memory");
            std::memcpy(*summary_json, text.c_str(), text.size() + 1);
        }
    });
}

void celtic_string_free(char* text) { std::free(text); }

}  // extern "C"
