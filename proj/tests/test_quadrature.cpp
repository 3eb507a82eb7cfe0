#include <doctest.h>

#include <cmath>
#include <vector>

#include "parisian/quadrature.hpp"

using namespace parisian;

namespace {
struct Case {
    const char* name;
    double computed;
    double exact;
    double reported_error;
};
}  // namespace

TEST_CASE("sqrt-singular battery") {
    QuadratureConfig cfg;

    auto r1 = integrate_sqrt_singular([](double s) { return 1.0 / std::sqrt(1.0 - s); }, 0.0,
                                      1.0, SingularEnd::Upper, cfg);
    CHECK(r1.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::fabs(r1.value - 2.0) <= std::max(r1.error, 1e-13));

    auto r2 = integrate_sqrt_singular([](double s) { return s / std::sqrt(1.0 - s); }, 0.0,
                                      1.0, SingularEnd::Upper, cfg);
    CHECK(r2.value == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    // exp-decay Abel kernel against its error-function closed form
    const double c = 2.25, tau = 0.045;
    auto r3 = integrate_sqrt_singular(
        [&](double s) { return std::exp(-c * (tau - s)) / std::sqrt(tau - s); }, 0.0, tau,
        SingularEnd::Upper, cfg);
    const double exact3 = std::sqrt(M_PI / c) * std::erf(std::sqrt(c * tau));
    CHECK(r3.value == doctest::Approx(exact3).epsilon(1e-11));

    // mirrored singularity
    auto r4 = integrate_sqrt_singular([](double s) { return 1.0 / std::sqrt(s); }, 0.0, 1.0,
                                      SingularEnd::Lower, cfg);
    CHECK(r4.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gaussian tail battery") {
    QuadratureConfig cfg;
    GaussianTail tail{0.0, std::sqrt(0.5), 10.0, -1e306, 1e306};  // envelope of exp(-z^2)

    auto r1 = integrate_gaussian_tail([](double z) { return std::exp(-z * z); }, 0.0,
                                      TailDirection::TowardMinusInfinity, tail, cfg);
    CHECK(r1.value == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-12));

    auto r2 = integrate_gaussian_tail([](double z) { return z * std::exp(-z * z); }, 0.0,
                                      TailDirection::TowardPlusInfinity, tail, cfg);
    CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("F-kernel inner integral with flat data matches a brute-force trapezoid") {
    // k = 0, gamma = 1 (c = 1), l = 0.01, x = x_bar = 0, C == 1: the direct/image pair over
    // z <= x_bar cancels at the barrier, so probe just below instead.
    const double l = 0.01, cdecay = 1.0, x = -0.05, xb = 0.0;
    auto integrand = [&](double z) {
        const double d1 = x - z, d2 = x + z - 2.0 * xb;
        return std::exp(-cdecay * l) / (2.0 * std::sqrt(M_PI * l)) *
               (std::exp(-d1 * d1 / (4.0 * l)) - std::exp(-d2 * d2 / (4.0 * l)));
    };
    QuadratureConfig cfg;
    GaussianTail tail{x, std::sqrt(2.0 * l), 10.0, -1e306, 1e306};
    auto r = integrate_gaussian_tail(integrand, xb, TailDirection::TowardMinusInfinity, tail,
                                     cfg);

    // brute-force trapezoid, 1e6 nodes over the truncated interval
    const double lo = x - 10.0 * std::sqrt(2.0 * l), hi = xb;
    const long n = 1000000;
    double acc = 0.5 * (integrand(lo) + integrand(hi));
    const double h = (hi - lo) / n;
    for (long i = 1; i < n; ++i) acc += integrand(lo + h * i);
    acc *= h;
    CHECK(r.value == doctest::Approx(acc).epsilon(1e-8));
}

TEST_CASE("2-D nested battery") {
    QuadratureConfig cfg;

    SUBCASE("triangle area") {
        OuterSpec outer{0.0, 1.0, false, SingularEnd::Upper};
        auto inner = [&](double s) -> IntegralResult {
            return integrate_adaptive([](double) { return 1.0; }, 0.0, s, cfg);
        };
        auto r = integrate_2d_nested(outer, inner, cfg);
        CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("separable Gaussian square") {
        OuterSpec outer{0.0, 1.0, false, SingularEnd::Upper};
        auto inner = [&](double u) -> IntegralResult {
            auto one_d = integrate_adaptive([](double v) { return std::exp(-v * v); }, 0.0,
                                            1.0, cfg);
            return {std::exp(-u * u) * one_d.value, one_d.error, one_d.panels};
        };
        auto r = integrate_2d_nested(outer, inner, cfg);
        const double e1 = std::sqrt(M_PI) / 2.0 * std::erf(1.0);
        CHECK(r.value == doctest::Approx(e1 * e1).epsilon(1e-11));
    }

    SUBCASE("window-recursion shape against a 2-D midpoint oracle") {
        // last term of the first-window formula with W0 == 1, k = 0, gamma = 1 (c = 1):
        //   -(1/pi) int_0^tau e^{-c(tau-s)}/sqrt(tau-s) int_{sqrt(s)}^{sqrt(J)} c e^{-c t^2} dt ds
        const double c = 1.0, jb = 0.01, tau = 0.005;
        OuterSpec outer{0.0, tau, true, SingularEnd::Upper};
        auto inner = [&](double s) -> IntegralResult {
            auto ri = integrate_adaptive([&](double t) { return c * std::exp(-c * t * t); },
                                         std::sqrt(s), std::sqrt(jb), cfg);
            const double w = std::exp(-c * (tau - s)) / std::sqrt(tau - s);
            return {w * ri.value, w * ri.error, ri.panels};
        };
        auto r = integrate_2d_nested(outer, inner, cfg);

        // midpoint oracle, 2000 x 2000, written in the substituted outer variable
        // u = sqrt(tau - s) so the rule sees a smooth integrand
        const int n = 2000;
        double acc = 0.0;
        const double hu = std::sqrt(tau) / n;
        for (int i = 0; i < n; ++i) {
            const double u = (i + 0.5) * hu;
            const double s = tau - u * u;
            const double tlo = std::sqrt(s), thi = std::sqrt(jb);
            const double ht = (thi - tlo) / n;
            double in = 0.0;
            for (int j = 0; j < n; ++j) {
                const double t = tlo + (j + 0.5) * ht;
                in += c * std::exp(-c * t * t);
            }
            acc += 2.0 * std::exp(-c * u * u) * in * ht * hu;
        }
        CHECK(r.value == doctest::Approx(acc).epsilon(1e-6));
    }
}

TEST_CASE("linearity within ten times the error estimate") {
    QuadratureConfig cfg;
    auto f = [](double s) { return std::sin(3.0 * s) / std::sqrt(1.0 - s); };
    auto g = [](double s) { return std::cos(2.0 * s) / std::sqrt(1.0 - s); };
    const double alpha = 2.5, beta = -1.25;
    auto rf = integrate_sqrt_singular(f, 0.0, 1.0, SingularEnd::Upper, cfg);
    auto rg = integrate_sqrt_singular(g, 0.0, 1.0, SingularEnd::Upper, cfg);
    auto rc = integrate_sqrt_singular(
        [&](double s) { return alpha * f(s) + beta * g(s); }, 0.0, 1.0, SingularEnd::Upper,
        cfg);
    const double lim = 10.0 * (std::fabs(alpha) * rf.error + std::fabs(beta) * rg.error +
                               rc.error + 1e-14);
    CHECK(std::fabs(rc.value - (alpha * rf.value + beta * rg.value)) <= lim);
}

TEST_CASE("error estimates bound the truth; tightening never hurts") {
    std::vector<Case> battery;
    auto run = [&](const QuadratureConfig& cfg) {
        battery.clear();
        auto r1 = integrate_sqrt_singular([](double s) { return 1.0 / std::sqrt(1.0 - s); },
                                          0.0, 1.0, SingularEnd::Upper, cfg);
        battery.push_back({"inv-sqrt", r1.value, 2.0, r1.error});
        auto r2 = integrate_adaptive([](double s) { return std::exp(s); }, 0.0, 1.0, cfg);
        battery.push_back({"exp", r2.value, std::exp(1.0) - 1.0, r2.error});
        auto r3 = integrate_adaptive([](double s) { return std::sin(10.0 * s); }, 0.0, M_PI,
                                     cfg);
        battery.push_back({"sin10", r3.value, (1.0 - std::cos(10.0 * M_PI)) / 10.0, r3.error});
    };

    QuadratureConfig loose;
    loose.abs_tol = 1e-6;
    loose.rel_tol = 1e-5;
    run(loose);
    std::vector<double> loose_err;
    for (const Case& c : battery) {
        CHECK(std::fabs(c.computed - c.exact) <= std::max(c.reported_error, 1e-14));
        loose_err.push_back(std::fabs(c.computed - c.exact));
    }

    QuadratureConfig tight = loose;
    tight.abs_tol = 5e-7;
    tight.rel_tol = 5e-6;
    run(tight);
    for (std::size_t i = 0; i < battery.size(); ++i) {
        CHECK(std::fabs(battery[i].computed - battery[i].exact) <= loose_err[i] + 1e-14);
    }
}

TEST_CASE("budget exhaustion is reported, not silent") {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-300;
    cfg.rel_tol = 1e-16;
    cfg.max_subdivisions = 8;
    CHECK_THROWS_AS(integrate_adaptive([](double s) { return std::sin(50.0 / (s + 0.01)); },
                                       0.0, 1.0, cfg),
                    QuadratureError);
}
