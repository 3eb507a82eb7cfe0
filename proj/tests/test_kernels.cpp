#include <doctest.h>

#include <cmath>
#include <vector>

#include "parisian/kernels.hpp"
#include "parisian/normal.hpp"

using namespace parisian;

namespace {

KernelParams bare_kernel(double x_bar = 0.0, double j_bar = 0.01) {
    KernelParams kp;
    kp.k = 0.0;
    kp.gamma = 0.0;
    kp.c = 0.0;
    kp.x_bar = x_bar;
    kp.j_bar = j_bar;
    return kp;
}

KernelParams default_kernel() {
    MarketParams mp{0.05, 0.04, 0.2};
    ParisianContract c;
    c.K = 100;
    c.S_bar = 95;
    c.J_bar = 0.05;
    c.T = 1.0;
    return KernelParams::from(to_dimensionless(mp, c));
}

VanillaSurface constant_surface(double value, double x_lo = -3.0, double x_hi = 3.0) {
    DimlessParams dp;
    dp.T_d = 1.0;
    const int nx = 64, nt = 16;
    std::vector<double> xs(nx), ts(nt), vs(static_cast<std::size_t>(nx) * nt, value);
    for (int i = 0; i < nx; ++i) xs[i] = x_lo + (x_hi - x_lo) * i / (nx - 1);
    for (int j = 0; j < nt; ++j) ts[j] = 1.0 * j / (nt - 1);
    return VanillaSurface::from_grid(dp, EmbeddedStyle::European, xs, ts, vs);
}

}  // namespace

TEST_CASE("KernelParams precomputes the decay constant") {
    const KernelParams kp = default_kernel();
    CHECK(kp.c == doctest::Approx(0.25 * kp.k * kp.k + kp.gamma).epsilon(1e-15));
    CHECK(kp.c == doctest::Approx(2.5625).epsilon(1e-12));
}

TEST_CASE("g1 basics") {
    const KernelParams kp = default_kernel();
    CHECK(g1(kp, kp.x_bar, 0.37) == 0.0);
    CHECK(g1(kp, kp.x_bar + 0.1, 0.002) > 0.0);
    CHECK(g2(kp, kp.x_bar + 0.1, 0.002) == -g1(kp, kp.x_bar + 0.1, 0.002));
    CHECK_THROWS_AS(g1(kp, 0.0, 0.0), ValidationError);
}

TEST_CASE("driftless g1 integrates to the sure first-passage probability") {
    const KernelParams kp = bare_kernel();
    const double x = 0.2;
    QuadratureConfig cfg;
    IntegralResult r = integrate_adaptive_split([&](double tau) { return g1(kp, x, tau); },
                                                1e-5, 1e6,
                                                {1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e4},
                                                cfg);
    // remaining head/tail mass is ~ erf(x / (2 sqrt(1e6))) ~ 1.1e-4
    CHECK(r.value == doctest::Approx(1.0).epsilon(2e-4));
}

TEST_CASE("layer potential: closed forms and the barrier limit") {
    const KernelParams kp = bare_kernel();
    QuadratureConfig cfg;

    SUBCASE("constant data gives the first-passage probability") {
        for (double a : {0.02, 0.1, 0.4}) {
            for (double L : {0.005, 0.02, 0.1}) {
                IntegralResult r = layer_potential(kp, kp.x_bar + a, L,
                                                   [](double) { return 1.0; }, {}, cfg);
                const double exact = std::erfc(a / (2.0 * std::sqrt(L)));
                CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
            }
        }
    }
    SUBCASE("x at the barrier returns the end value of the data") {
        IntegralResult r = layer_potential(kp, kp.x_bar, 0.02,
                                           [](double s) { return 3.0 + 10.0 * s; }, {}, cfg);
        CHECK(r.value == doctest::Approx(3.0 + 10.0 * 0.02).epsilon(1e-10));
    }
    SUBCASE("below the barrier mirrors above when drift-free") {
        auto w = [](double s) { return 1.0 + 5.0 * s; };
        IntegralResult up = layer_potential(kp, 0.07, 0.01, w, {}, cfg);
        IntegralResult dn = layer_potential(kp, -0.07, 0.01, w, {}, cfg);
        CHECK(up.value == doctest::Approx(dn.value).epsilon(1e-11));
    }
    SUBCASE("matches a brute-force midpoint rule on smooth data") {
        const KernelParams kpd = default_kernel();
        auto w = [](double s) { return 0.01 + 0.3 * s + 2.0 * s * s; };
        const double x = kpd.x_bar + 0.03, L = 0.004;
        IntegralResult r = layer_potential(kpd, x, L, w, {}, cfg);
        const long n = 2000000;
        double acc = 0.0;
        for (long i = 0; i < n; ++i) {
            const double s = (i + 0.5) * L / n;
            acc += w(s) * g1(kpd, x, L - s);
        }
        acc *= L / n;
        CHECK(r.value == doctest::Approx(acc).epsilon(1e-7));
    }
}

TEST_CASE("F kernel") {
    QuadratureConfig cfg;
    const VanillaSurface ones = constant_surface(1.0);
    const VanillaSurface zeros = constant_surface(0.0);

    SUBCASE("vanishes at the barrier and for zero data") {
        const KernelParams kp = default_kernel();
        CHECK(kernel_F(kp, kp.x_bar, 0.0008, 0.01, ones, cfg).value ==
              doctest::Approx(0.0).epsilon(1e-12));
        CHECK(kernel_F(kp, kp.x_bar - 0.3, 0.0008, 0.01, zeros, cfg).value == 0.0);
    }
    SUBCASE("flat data reduces to the Brownian survival probability") {
        const KernelParams kp = bare_kernel();
        for (double x : {-0.01, -0.05, -0.2}) {
            for (double l : {0.002, 0.01}) {
                const double got = kernel_F(kp, x, l, 0.5, ones, cfg).value;
                const double exact = 2.0 * norm_cdf((-x) / std::sqrt(2.0 * l)) - 1.0;
                CHECK(got == doctest::Approx(exact).epsilon(1e-9));
                CHECK(got >= 0.0);
                CHECK(got <= 1.0);
            }
        }
    }
}

TEST_CASE("G kernel") {
    QuadratureConfig cfg;
    const KernelParams kp = default_kernel();
    auto bump = [&](double z) {
        const double d = z - (kp.x_bar + 0.2);
        return std::exp(-d * d / 2e-4);
    };

    SUBCASE("vanishes at the barrier and for zero data") {
        CHECK(kernel_G(kp, kp.x_bar, 0.001, bump, 0.05, cfg).value ==
              doctest::Approx(0.0).epsilon(1e-12));
        CHECK(kernel_G(kp, kp.x_bar + 0.1, 0.001, [](double) { return 0.0; }, 0.05, cfg)
                  .value == 0.0);
    }
    SUBCASE("narrow bump against a brute-force trapezoid") {
        const double x = kp.x_bar + 0.15, tt = 0.004;
        const double got = kernel_G(kp, x, tt, bump, 0.05, cfg).value;

        const double zlo = kp.x_bar, zhi = kp.x_bar + 1.0;
        const long n = 1000000;
        double acc = 0.0;
        for (long i = 0; i <= n; ++i) {
            const double z = zlo + (zhi - zlo) * i / n;
            const double d1 = x - z, d2 = x + z - 2.0 * kp.x_bar;
            const double kern = std::exp(-0.5 * kp.k * d1 - kp.c * tt) /
                                (2.0 * std::sqrt(M_PI * tt)) *
                                (std::exp(-d1 * d1 / (4.0 * tt)) -
                                 std::exp(-d2 * d2 / (4.0 * tt)));
            acc += ((i == 0 || i == n) ? 0.5 : 1.0) * kern * bump(z);
        }
        acc *= (zhi - zlo) / n;
        CHECK(got == doctest::Approx(acc).epsilon(1e-8));
    }
}

TEST_CASE("f_n layer") {
    QuadratureConfig cfg;

    SUBCASE("zero windows give zero") {
        const KernelParams kp = default_kernel();
        CHECK(f_n_value(kp, kp.x_bar + 0.05, kp.j_bar, [](double) { return 0.0; }, {}, cfg)
                  .value == 0.0);
    }
    SUBCASE("constant window equals the first-passage probability") {
        const KernelParams kp = bare_kernel();
        const double w = 0.37, jb = 0.01;
        for (double dx : {0.02, 0.1, 0.3}) {
            const double got =
                f_n_value(kp, kp.x_bar + dx, jb, [&](double) { return w; }, {}, cfg).value;
            const double exact = w * 2.0 * norm_cdf(-dx / std::sqrt(2.0 * jb));
            CHECK(got == doctest::Approx(exact).epsilon(1e-9));
        }
    }
    SUBCASE("decays to zero far above the barrier") {
        const KernelParams kp = default_kernel();
        const double far =
            f_n_value(kp, kp.x_bar + 3.0, kp.j_bar, [](double) { return 1.0; }, {}, cfg)
                .value;
        CHECK(std::fabs(far) <= 1e-12);
    }
    SUBCASE("rejects x below the barrier") {
        const KernelParams kp = default_kernel();
        CHECK_THROWS_AS(
            f_n_value(kp, kp.x_bar - 0.01, kp.j_bar, [](double) { return 1.0; }, {}, cfg),
            ValidationError);
    }
}

TEST_CASE("kernel evaluations are deterministic") {
    QuadratureConfig cfg;
    const KernelParams kp = default_kernel();
    const VanillaSurface ones = constant_surface(1.0);
    const double f1 = kernel_F(kp, kp.x_bar - 0.1, 0.0008, 0.01, ones, cfg).value;
    const double f2 = kernel_F(kp, kp.x_bar - 0.1, 0.0008, 0.01, ones, cfg).value;
    CHECK(f1 == f2);
    auto w = [](double s) { return 1.0 + s; };
    const double l1 = layer_potential(kp, kp.x_bar + 0.02, 0.001, w, {}, cfg).value;
    const double l2 = layer_potential(kp, kp.x_bar + 0.02, 0.001, w, {}, cfg).value;
    CHECK(l1 == l2);
}

TEST_CASE("layer potential x-derivative matches finite differences") {
    QuadratureConfig cfg;
    const KernelParams kp = default_kernel();
    auto w = [](double s) { return 0.02 + 0.5 * s; };
    const double L = 0.003;
    for (double a : {0.05, 0.15, -0.08}) {
        const double x = kp.x_bar + a;
        const double d = layer_potential_dx(kp, x, L, w, {}, cfg).value;
        const double h = 1e-5;
        const double fd = (layer_potential(kp, x + h, L, w, {}, cfg).value -
                           layer_potential(kp, x - h, L, w, {}, cfg).value) /
                          (2.0 * h);
        CHECK(d == doctest::Approx(fd).epsilon(1e-6));
    }
}
