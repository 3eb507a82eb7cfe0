#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "parisian/gridio.hpp"
#include "parisian/pde.hpp"
#include "parisian/windows.hpp"

using namespace parisian;

namespace {

struct Setup {
    MarketParams mp{0.05, 0.04, 0.2};
    ParisianContract c;
    DimlessParams dp;
    std::shared_ptr<VanillaSurface> surf;

    explicit Setup(EmbeddedStyle style = EmbeddedStyle::American) {
        c.K = 100;
        c.S_bar = 95;
        c.J_bar = 0.05;
        c.T = 1.0;
        c.embedded_style = style;
        dp = to_dimensionless(mp, c);
        surf = std::make_shared<VanillaSurface>(VanillaSurface::build(dp, style));
    }
};

}  // namespace

TEST_CASE("terminal and imposed conditions") {
    Setup s;
    PdeConfig cfg;
    cfg.res.n_x = 201;
    cfg.res.n_tau = 200;
    cfg.res.n_j = 40;
    cfg.snapshot_taus = {s.dp.horizon()};
    PdeSolution sol = PdeSolution::solve_coupled(s.mp, s.c, cfg, s.surf.get());

    SUBCASE("region I vanishes on the terminal slice") {
        for (double x = s.dp.x_bar; x <= s.dp.x_bar + 1.0; x += 0.11)
            CHECK(std::fabs(sol.value_region1(x, 0.0)) <= 1e-14);
    }
    SUBCASE("the knocked-in edge equals the embedded option") {
        const double tau = s.dp.horizon();
        for (double x = s.dp.x_bar - 0.8; x <= s.dp.x_bar; x += 0.07) {
            const double got = sol.value_region2(x, tau, s.dp.J_bar_d);
            const double want = s.surf->value_at(x, tau + s.dp.J_bar_d);
            CHECK(std::fabs(got - want) <= 1e-6);
        }
    }
    SUBCASE("discrete maximum principle holds") {
        CHECK(sol.max_principle_violation() <= 1e-12);
    }
    SUBCASE("trace on the pre-history segment is the imposed embedded value") {
        for (std::size_t i = 0; i < sol.trace_taus().size(); ++i) {
            const double tau = sol.trace_taus()[i];
            if (tau >= 0.0) break;
            const double want = s.surf->value_at(s.dp.x_bar, tau + s.dp.J_bar_d);
            CHECK(sol.trace()[i] == doctest::Approx(want).epsilon(1e-9));
        }
    }
    SUBCASE("trace is nonnegative and below the knocked-in value") {
        for (double tau = 0.0; tau <= s.dp.horizon(); tau += s.dp.horizon() / 17.0) {
            const double tr = sol.trace_at(tau);
            CHECK(tr >= -1e-10);
            CHECK(tr <= s.surf->value_at(s.dp.x_bar, tau + s.dp.J_bar_d) + 1e-6);
        }
    }
}

TEST_CASE("barrier trace agrees with the window solver") {
    Setup s;
    WindowSet ws(s.surf, s.dp, {});
    ws.solve_to(s.dp.horizon());
    PdeConfig cfg;  // default resolution
    PdeSolution sol = PdeSolution::solve_coupled(s.mp, s.c, cfg, s.surf.get());

    // Two independent routes to W. Tolerance: 2% of the trace plus an absolute floor for the
    // first windows, where the trace is tiny and the first-order march dominates; near the
    // corner the published pre-history is value-incompatible with the region-I start and
    // both solvers resolve the resulting boundary layer differently.
    for (double tau :
         {0.002, 0.004, 0.006, 0.008, 0.010, 0.012, 0.014, 0.016, 0.018, 0.019}) {
        const double a = ws.value(tau);
        const double b = sol.trace_at(tau);
        CHECK(std::fabs(a - b) <= 0.02 * std::fabs(b) + 5e-5);
    }
}

TEST_CASE("zero pre-history mode agrees with the zero-memory window solve") {
    Setup s;
    WindowConfig wc;
    wc.first_window_memory = FirstWindowMemory::Zero;
    WindowSet ws(s.surf, s.dp, wc);
    ws.solve_to(6.0 * s.dp.J_bar_d);
    PdeConfig cfg;
    cfg.pre_history = PdePreHistory::Zero;
    PdeSolution sol = PdeSolution::solve_coupled(s.mp, s.c, cfg, s.surf.get());
    for (double tau : {0.002, 0.003, 0.004, 0.005, 0.006}) {
        const double a = ws.value(tau);
        const double b = sol.trace_at(tau);
        CHECK(std::fabs(a - b) <= 0.03 * std::fabs(b) + 2e-5);
    }
}

TEST_CASE("grid refinement moves the probe price by less than half a percent") {
    Setup s;
    PdeConfig coarse;  // defaults: 401 x, 400 tau, 80 j
    PdeConfig fine;
    fine.res.n_x = 801;
    fine.res.n_tau = 800;
    fine.res.n_j = 160;
    PdeSolution a = PdeSolution::solve_coupled(s.mp, s.c, coarse, s.surf.get());
    PdeSolution b = PdeSolution::solve_coupled(s.mp, s.c, fine, s.surf.get());
    const double x = std::log(100.0 / s.c.K);
    const double pa = a.value_region1(x, s.dp.horizon());
    const double pb = b.value_region1(x, s.dp.horizon());
    CHECK(std::fabs(pa - pb) / pb <= 0.005);
}

TEST_CASE("field dump round-trips through the container format") {
    Setup s;
    PdeConfig cfg;
    cfg.res.n_x = 101;
    cfg.res.n_tau = 60;
    cfg.res.n_j = 20;
    PdeSolution sol = PdeSolution::solve_coupled(s.mp, s.c, cfg, s.surf.get());
    std::stringstream ss;
    sol.dump(ss);
    auto g = gridio::GridFile::load(ss);
    CHECK(g.name == "pde-fields");
    CHECK(g.axes.at("x1").size() == 101);
    CHECK(g.data.at("trace").size() == g.axes.at("trace_tau").size());
    CHECK(g.data.at("v1").size() == g.axes.at("tau").size() * g.axes.at("x1").size());
}

TEST_CASE("connectivity residual diagnostic is reported and small at scale") {
    Setup s;
    PdeConfig cfg;
    PdeSolution sol = PdeSolution::solve_coupled(s.mp, s.c, cfg, s.surf.get());
    // It emerges from the merged discretization rather than being imposed; it stays at the
    // truncation level of the delta itself.
    CHECK(sol.connectivity_residual_max() < 0.2);
    CHECK(sol.connectivity_residual_max() > 0.0);
}
