#include "parisian/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace parisian {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kUCut = 8.6;  // exp(-u^2) < 1e-32 beyond this
}  // namespace

KernelParams KernelParams::from(const DimlessParams& dp) {
    KernelParams kp;
    kp.k = dp.k;
    kp.gamma = dp.gamma;
    kp.x_bar = dp.x_bar;
    kp.j_bar = dp.J_bar_d;
    kp.c = 0.25 * dp.k * dp.k + dp.gamma;
    return kp;
}

double g1(const KernelParams& kp, double x, double tau) {
    if (!(tau > 0.0)) throw ValidationError("g1: tau must be > 0");
    const double a = x - kp.x_bar;
    const double expo = -kp.c * tau - a * a / (4.0 * tau) - 0.5 * kp.k * a;
    return a / (2.0 * kSqrtPi * tau * std::sqrt(tau)) * std::exp(expo);
}

double g2(const KernelParams& kp, double x, double tau) { return -g1(kp, x, tau); }

IntegralResult layer_potential(const KernelParams& kp, double x, double L, const TimeFn& w,
                               const std::vector<double>& breaks, const QuadratureConfig& cfg) {
    if (!(L > 0.0)) return {};
    const double a = x - kp.x_bar;
    const double aa = std::fabs(a);
    const double u0 = aa / (2.0 * std::sqrt(L));
    if (u0 >= kUCut) return {0.0, std::exp(-u0 * u0), 0};
    const double pref = (2.0 / kSqrtPi) * std::exp(-0.5 * kp.k * a);
    const double a2 = a * a;

    auto f = [&](double u) {
        const double shrink = a2 / (4.0 * u * u);  // = L - s
        return w(L - shrink) * std::exp(-u * u - kp.c * shrink);
    };
    std::vector<double> ubreaks;
    for (double s : breaks) {
        if (s > 0.0 && s < L && aa > 0.0) ubreaks.push_back(aa / (2.0 * std::sqrt(L - s)));
    }
    IntegralResult r = integrate_adaptive_split(f, u0, kUCut, ubreaks, cfg);
    r.value *= pref;
    r.error *= pref;
    return r;
}

IntegralResult layer_potential_dx(const KernelParams& kp, double x, double L, const TimeFn& w,
                                  const std::vector<double>& breaks,
                                  const QuadratureConfig& cfg) {
    if (!(L > 0.0)) return {};
    const double a = x - kp.x_bar;
    if (a == 0.0)
        throw ValidationError("layer_potential_dx: undefined at the barrier, use one-sided FD");
    const double aa = std::fabs(a);
    const double u0 = aa / (2.0 * std::sqrt(L));
    if (u0 >= kUCut) return {0.0, std::exp(-u0 * u0), 0};
    const double pref = (2.0 / kSqrtPi) * std::exp(-0.5 * kp.k * a);
    const double a2 = a * a;

    auto f = [&](double u) {
        const double shrink = a2 / (4.0 * u * u);
        const double bracket = (1.0 - 2.0 * u * u) / a - 0.5 * kp.k;
        return w(L - shrink) * std::exp(-u * u - kp.c * shrink) * bracket;
    };
    std::vector<double> ubreaks;
    for (double s : breaks) {
        if (s > 0.0 && s < L) ubreaks.push_back(aa / (2.0 * std::sqrt(L - s)));
    }
    IntegralResult r = integrate_adaptive_split(f, u0, kUCut, ubreaks, cfg);
    r.value *= pref;
    r.error *= pref;
    return r;
}

IntegralResult kernel_F(const KernelParams& kp, double x, double l, double tau,
                        const VanillaSurface& surface, const QuadratureConfig& cfg) {
    if (!(l >= 0.0)) throw ValidationError("kernel_F: l must be >= 0");
    if (x > kp.x_bar + 1e-14) throw ValidationError("kernel_F: x must be <= x_bar");
    if (l < 1e-12) {
        // Delta limit of the heat kernel; the image lands outside the z-range for x < x_bar.
        if (x >= kp.x_bar) return {};
        return {surface.value_at(x, tau), 1e-14, 0};
    }
    const double inv = 1.0 / (2.0 * kSqrtPi * std::sqrt(l));
    const double decay = std::exp(-kp.c * l);
    auto f = [&](double z) {
        const double d1 = x - z;
        const double d2 = x + z - 2.0 * kp.x_bar;
        const double gd = std::exp(-d1 * d1 / (4.0 * l));
        const double gi = std::exp(-d2 * d2 / (4.0 * l));
        return inv * decay * std::exp(-0.5 * kp.k * d1) * (gd - gi) * surface.value_at(z, tau);
    };
    GaussianTail tail;
    tail.center = x + kp.k * l;
    tail.sd = std::sqrt(2.0 * l);
    tail.hard_limit_lo = surface.x_min();
    return integrate_gaussian_tail(f, kp.x_bar, TailDirection::TowardMinusInfinity, tail, cfg);
}

IntegralResult kernel_F_dx(const KernelParams& kp, double x, double l, double tau,
                           const VanillaSurface& surface, const QuadratureConfig& cfg) {
    if (!(l > 0.0)) throw ValidationError("kernel_F_dx: l must be > 0");
    const double inv = 1.0 / (2.0 * kSqrtPi * std::sqrt(l));
    const double decay = std::exp(-kp.c * l);
    auto f = [&](double z) {
        const double d1 = x - z;
        const double d2 = x + z - 2.0 * kp.x_bar;
        const double gd = std::exp(-d1 * d1 / (4.0 * l));
        const double gi = std::exp(-d2 * d2 / (4.0 * l));
        const double common = inv * decay * std::exp(-0.5 * kp.k * d1);
        const double dgd = -d1 / (2.0 * l) * gd;
        const double dgi = -d2 / (2.0 * l) * gi;
        return common * ((dgd - dgi) - 0.5 * kp.k * (gd - gi)) * surface.value_at(z, tau);
    };
    GaussianTail tail;
    tail.center = x + kp.k * l;
    tail.sd = std::sqrt(2.0 * l);
    tail.hard_limit_lo = surface.x_min();
    return integrate_gaussian_tail(f, kp.x_bar, TailDirection::TowardMinusInfinity, tail, cfg);
}

IntegralResult kernel_G(const KernelParams& kp, double x, double tau_t, const SpaceFn& f,
                        double f_width, const QuadratureConfig& cfg) {
    if (!(tau_t > 0.0)) throw ValidationError("kernel_G: tau must be > 0");
    if (x < kp.x_bar - 1e-14) throw ValidationError("kernel_G: x must be >= x_bar");
    const double inv = 1.0 / (2.0 * kSqrtPi * std::sqrt(tau_t));
    const double decay = std::exp(-kp.c * tau_t);
    auto g = [&](double z) {
        const double d1 = x - z;
        const double d2 = x + z - 2.0 * kp.x_bar;
        const double gd = std::exp(-d1 * d1 / (4.0 * tau_t));
        const double gi = std::exp(-d2 * d2 / (4.0 * tau_t));
        return inv * decay * std::exp(-0.5 * kp.k * d1) * (gd - gi) * f(z);
    };
    GaussianTail tail;
    tail.center = std::max(x, 2.0 * kp.x_bar - x) + kp.k * tau_t;
    tail.sd = std::sqrt(2.0 * tau_t) + f_width;
    return integrate_gaussian_tail(g, kp.x_bar, TailDirection::TowardPlusInfinity, tail, cfg);
}

IntegralResult kernel_G_dx(const KernelParams& kp, double x, double tau_t, const SpaceFn& f,
                           double f_width, const QuadratureConfig& cfg) {
    if (!(tau_t > 0.0)) throw ValidationError("kernel_G_dx: tau must be > 0");
    const double inv = 1.0 / (2.0 * kSqrtPi * std::sqrt(tau_t));
    const double decay = std::exp(-kp.c * tau_t);
    auto g = [&](double z) {
        const double d1 = x - z;
        const double d2 = x + z - 2.0 * kp.x_bar;
        const double gd = std::exp(-d1 * d1 / (4.0 * tau_t));
        const double gi = std::exp(-d2 * d2 / (4.0 * tau_t));
        const double common = inv * decay * std::exp(-0.5 * kp.k * d1);
        const double dgd = -d1 / (2.0 * tau_t) * gd;
        const double dgi = -d2 / (2.0 * tau_t) * gi;
        return common * ((dgd - dgi) - 0.5 * kp.k * (gd - gi)) * f(z);
    };
    GaussianTail tail;
    tail.center = std::max(x, 2.0 * kp.x_bar - x) + kp.k * tau_t;
    tail.sd = std::sqrt(2.0 * tau_t) + f_width;
    return integrate_gaussian_tail(g, kp.x_bar, TailDirection::TowardPlusInfinity, tail, cfg);
}

IntegralResult half_space_average(const KernelParams& kp, double tau_t, const SpaceFn& f,
                                  double f_width, const QuadratureConfig& cfg) {
    if (!(tau_t > 0.0)) throw ValidationError("half_space_average: tau must be > 0");
    const double inv = 1.0 / (2.0 * kSqrtPi * std::sqrt(tau_t));
    const double decay = std::exp(-kp.c * tau_t);
    auto g = [&](double z) {
        const double d = kp.x_bar - z;
        return inv * decay * std::exp(-0.5 * kp.k * d - d * d / (4.0 * tau_t)) * f(z);
    };
    GaussianTail tail;
    tail.center = kp.x_bar + kp.k * tau_t;
    tail.sd = std::sqrt(2.0 * tau_t) + f_width;
    return integrate_gaussian_tail(g, kp.x_bar, TailDirection::TowardPlusInfinity, tail, cfg);
}

IntegralResult f_n_value(const KernelParams& kp, double x, double n_jbar, const TimeFn& w,
                         const std::vector<double>& joins, const QuadratureConfig& cfg) {
    if (x < kp.x_bar) throw ValidationError("f_n_value: x must be >= x_bar");
    return layer_potential(kp, x, n_jbar, w, joins, cfg);
}

}  // namespace parisian
