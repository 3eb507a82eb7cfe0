#include "parisian/pricer.hpp"

#include <algorithm>
#include <cmath>

namespace parisian {

const char* to_string(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::KnockedIn: return "knocked-in";
        case Region::Degenerate: return "degenerate";
    }
    return "?";
}

PricingEngine::PricingEngine(const MarketParams& mp, const ParisianContract& c,
                             const EngineConfig& cfg)
    : market_(mp), contract_(c), cfg_(cfg) {
    dp_ = to_dimensionless(mp, c);
    kp_ = KernelParams::from(dp_);
    half_var_ = 0.5 * mp.sigma * mp.sigma;
    tag_ = classify(c, cfg_.thresholds);
    if (tag_.variant != Degeneracy::NonDegenerate) return;  // engines stay unbuilt
    surface_ = std::make_shared<VanillaSurface>(
        VanillaSurface::build(dp_, c.embedded_style, cfg_.surface));
    windows_ = std::make_unique<WindowSet>(surface_, dp_, cfg_.window);
}

int PricingEngine::active_window(double tau) const {
    const double jb = dp_.J_bar_d;
    int m = static_cast<int>(std::ceil(tau / jb - 1e-12));
    return std::max(m, 1);
}

double PricingEngine::value_region1(double x, double tau) const {
    if (tau <= 0.0) return 0.0;
    windows_->solve_to(tau);
    const double jb = dp_.J_bar_d;
    const int m = active_window(tau);
    const double base = (m - 1) * jb;
    const double tt = tau - base;
    double v = 0.0;
    if (m > 1) {
        auto fn = [&](double z) { return windows_->f_n(m - 1, z); };
        v += kernel_G(kp_, x, tt, fn, std::sqrt(2.0 * base), cfg_.quad).value;
    }
    auto w = [&](double s) { return windows_->value(base + s); };
    v += layer_potential(kp_, x, tt, w, {}, cfg_.quad).value;
    return v;
}

double PricingEngine::value_region2(double x, double l_kernel, double tau_base) const {
    if (tau_base <= 0.0) return 0.0;
    windows_->solve_to(tau_base);
    const double jb = dp_.J_bar_d;
    double v = kernel_F(kp_, x, l_kernel, tau_base, *surface_, cfg_.quad).value;
    if (l_kernel > 0.0) {
        auto w = [&](double s) { return windows_->value(tau_base - jb + s); };
        std::vector<double> breaks;
        for (double j : windows_->joins(tau_base)) {
            const double s = j - (tau_base - jb);
            if (s > 0.0 && s < l_kernel) breaks.push_back(s);
        }
        const double s0 = jb - tau_base;  // crossing into the pre-history
        if (s0 > 0.0 && s0 < l_kernel) breaks.push_back(s0);
        v += layer_potential(kp_, x, l_kernel, w, breaks, cfg_.quad).value;
    }
    return v;
}

double PricingEngine::region1_dx(double x, double tau) const {
    if (tau <= 0.0) return 0.0;
    windows_->solve_to(tau);
    const double jb = dp_.J_bar_d;
    const int m = active_window(tau);
    const double base = (m - 1) * jb;
    const double tt = tau - base;
    double v = 0.0;
    if (m > 1) {
        auto fn = [&](double z) { return windows_->f_n(m - 1, z); };
        v += kernel_G_dx(kp_, x, tt, fn, std::sqrt(2.0 * base), cfg_.quad).value;
    }
    const double a = x - kp_.x_bar;
    const double near = cfg_.fd_step_rel * std::sqrt(2.0 * jb);
    auto w = [&](double s) { return windows_->value(base + s); };
    if (std::fabs(a) > near) {
        v += layer_potential_dx(kp_, x, tt, w, {}, cfg_.quad).value;
    } else {
        // Too close to the barrier for the analytic bracket; one-sided FD on values.
        const double h = near;
        const double f0 = layer_potential(kp_, x, tt, w, {}, cfg_.quad).value;
        const double f1 = layer_potential(kp_, x + h, tt, w, {}, cfg_.quad).value;
        const double f2 = layer_potential(kp_, x + 2.0 * h, tt, w, {}, cfg_.quad).value;
        v += (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
    }
    return v;
}

double PricingEngine::region2_dx(double x, double l_kernel, double tau_base) const {
    if (tau_base <= 0.0) return 0.0;
    windows_->solve_to(tau_base);
    const double jb = dp_.J_bar_d;
    double v = kernel_F_dx(kp_, x, l_kernel, tau_base, *surface_, cfg_.quad).value;
    if (l_kernel <= 0.0) return v;
    auto w = [&](double s) { return windows_->value(tau_base - jb + s); };
    const double a = x - kp_.x_bar;
    const double near = cfg_.fd_step_rel * std::sqrt(2.0 * jb);
    if (std::fabs(a) > near) {
        v += layer_potential_dx(kp_, x, l_kernel, w, {}, cfg_.quad).value;
    } else {
        const double h = near;
        const double f0 = layer_potential(kp_, x, l_kernel, w, {}, cfg_.quad).value;
        const double f1 = layer_potential(kp_, x - h, l_kernel, w, {}, cfg_.quad).value;
        const double f2 = layer_potential(kp_, x - 2.0 * h, l_kernel, w, {}, cfg_.quad).value;
        v += (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * h);
    }
    return v;
}

PriceResult PricingEngine::price(const StatePoint& sp) const {
    PriceResult res;
    res.degeneracy = tag_.variant;
    if (tag_.variant != Degeneracy::NonDegenerate) {
        res.region = Region::Degenerate;
        res.price = 0.0;  // worthless limit; one-touch / vanilla limits are flagged, not priced
        return res;
    }
    sp.validate(contract_);
    const double K = contract_.K;
    const double x = std::log(sp.S / K);
    const double jb = dp_.J_bar_d;

    if (sp.J >= contract_.J_bar - 1e-15 * std::max(contract_.J_bar, 1.0)) {
        res.region = Region::KnockedIn;
        const double theta = half_var_ * (contract_.T - sp.t);
        res.dimensionless_value = surface_->value_or_asymptotic(x, theta);
        res.price = K * res.dimensionless_value;
        return res;
    }

    const DimlessState ds = state_to_slide(sp, contract_, dp_);
    if (!ds.region2()) {
        res.region = Region::I;
        if (ds.tau <= 0.0) return res;  // excursion can no longer complete
        res.dimensionless_value = value_region1(ds.x, ds.tau);
        res.windows_used = active_window(ds.tau);
    } else {
        res.region = Region::II;
        if (ds.tau <= 0.0) return res;
        const double l_kernel = jb - *ds.l;  // remaining excursion in kernel units
        res.dimensionless_value = value_region2(ds.x, l_kernel, ds.tau);
        res.windows_used = active_window(ds.tau);
    }
    res.quadrature_error_estimate =
        windows_->solved_windows() > 0
            ? windows_->window(windows_->solved_windows()).quad_error
            : 0.0;
    res.price = K * res.dimensionless_value;
    // Tiny negative values are quadrature noise on a worthless state.
    if (res.price < 0.0 && res.price > -1e-9 * K) res.price = 0.0;
    return res;
}

double PricingEngine::delta(const StatePoint& sp) const {
    if (tag_.variant != Degeneracy::NonDegenerate)
        throw EngineError("delta: degenerate contract");
    sp.validate(contract_);
    const double K = contract_.K;
    const double x = std::log(sp.S / K);
    if (sp.J >= contract_.J_bar - 1e-15 * std::max(contract_.J_bar, 1.0)) {
        const double theta = half_var_ * (contract_.T - sp.t);
        const double h = 1e-4;
        const double vp = surface_->value_or_asymptotic(x + h, theta);
        const double vm = surface_->value_or_asymptotic(x - h, theta);
        return (vp - vm) / (2.0 * h) * K / sp.S;
    }
    const DimlessState ds = state_to_slide(sp, contract_, dp_);
    const double vx = ds.region2()
                          ? region2_dx(ds.x, dp_.J_bar_d - *ds.l, ds.tau)
                          : region1_dx(ds.x, ds.tau);
    return vx * K / sp.S;
}

PriceResult PricingEngine::price_with_delta(const StatePoint& sp) const {
    PriceResult res = price(sp);
    if (res.region != Region::Degenerate) res.delta = delta(sp);
    return res;
}

std::vector<PriceResult> PricingEngine::price_surface(const std::vector<double>& spots,
                                                      double t, double J,
                                                      bool with_delta) const {
    std::vector<PriceResult> out;
    out.reserve(spots.size());
    for (double S : spots) {
        StatePoint sp{S, t, (S > contract_.S_bar) ? 0.0 : J};
        out.push_back(with_delta ? price_with_delta(sp) : price(sp));
    }
    return out;
}

PricingEngine::BarrierDeltas PricingEngine::barrier_deltas(double tau) const {
    if (tag_.variant != Degeneracy::NonDegenerate)
        throw EngineError("barrier_deltas: degenerate contract");
    windows_->solve_to(tau);
    const double jb = dp_.J_bar_d;
    const double w_tau = windows_->value(tau);
    const double h = cfg_.fd_step_rel * std::sqrt(2.0 * jb);

    auto one_sided = [&](auto&& f, double sign) {
        const double d_h =
            (-3.0 * w_tau + 4.0 * f(sign * h) - f(sign * 2.0 * h)) / (2.0 * sign * h);
        const double d_h2 =
            (-3.0 * w_tau + 4.0 * f(sign * 0.5 * h) - f(sign * h)) / (sign * h);
        return (4.0 * d_h2 - d_h) / 3.0;  // Richardson on the O(h^2) one-sided stencil
    };

    BarrierDeltas bd;
    bd.region1 = one_sided(
        [&](double dx) { return value_region1(kp_.x_bar + dx, tau); }, +1.0);
    bd.region2 = one_sided(
        [&](double dx) { return value_region2(kp_.x_bar + dx, jb, tau); }, -1.0);
    return bd;
}

}  // namespace parisian
