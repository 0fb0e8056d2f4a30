// Scratch bring-up probe (not part of the deliverable).
#include <cmath>
#include <cstdio>
#include <cstring>

#include "celtic/analysis.hpp"

using namespace celtic;

int main(int argc, char** argv) {
    StoneParams P;
    const char* mode = argc > 1 ? argv[1] : "loops";

    if (!std::strcmp(mode, "loops")) {
        for (double E : {748.2, 748.3, 748.42, 748.5, 748.6}) {
            MapConfig cfg;
            cfg.E = E;
            PeriodicPointResult fp = find_periodic_point({3.65, 0.67, -0.38}, 1, cfg, P);

            // distance to the period-2 sink points
            auto cloud = iterate_attractor(fp.point, cfg, P, 1200, 2);
            const double d_p2a = section_dist(cloud[0], fp.point);
            const double d_p2b = section_dist(cloud[1], fp.point);

            AnalysisConfig acfg;
            acfg.manifold_budget = 120000;
            for (Branch br : {Branch::Plus, Branch::Minus}) {
                auto poly = trace_unstable_manifold(fp, br, cfg, P, 1e-4, 0.01, 20000, acfg);
                double d_max = 0;
                for (const auto& mp : poly)
                    d_max = std::max(d_max, section_dist(mp.x, fp.point));
                std::printf(
                    "E=%.2f br=%s: mult3=%.4f d(p2)=%.4f/%.4f pts=%zu gens=%d max_ext=%.4f\n",
                    E, br == Branch::Plus ? "+" : "-", fp.multipliers[0].real(), d_p2a, d_p2b,
                    poly.size(), poly.empty() ? 0 : poly.back().generation, d_max);
            }
        }
    } else if (!std::strcmp(mode, "extent")) {
        for (double E : {752.0, 754.0, 755.0, 765.0, 770.0, 775.0, 780.0, 800.0}) {
            MapConfig cfg;
            cfg.E = E;
            SectionPoint y{3.65, 0.67, -0.38};
            double max_eta = 0, max_xi = 0;
            int k = 0;
            try {
                for (; k < 3000; ++k) {
                    y = poincare_step(y, cfg, P);
                    max_eta = std::max(max_eta, std::abs(y.eta));
                    max_xi = std::max(max_xi, std::abs(y.xi));
                }
                std::printf("E=%.0f: 3000 iters, max|eta|=%.4f max|xi|=%.4f\n", E, max_eta,
                            max_xi);
            } catch (const CelticError& e) {
                std::printf("E=%.0f: escape at k=%d (%s), max|eta|=%.4f\n", E, k,
                            error_code_name(e.code()), max_eta);
            }
        }
    }
    return 0;
}
