#include "parisian/windows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace parisian {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kPi = 3.1415926535897932385;
}  // namespace

WindowFunction solve_W0(const VanillaSurface& surface, const DimlessParams& dp,
                        int samples_per_window) {
    const int m = std::max(samples_per_window, 2);
    WindowFunction w;
    w.index = 0;
    w.tau_lo = -dp.J_bar_d;
    w.tau_hi = 0.0;
    w.taus.resize(m + 1);
    w.values.resize(m + 1);
    w.terms.assign(m + 1, {});
    for (int i = 0; i <= m; ++i) {
        const double tau = -dp.J_bar_d + dp.J_bar_d * i / m;
        w.taus[i] = tau;
        w.values[i] = surface.value_at(dp.x_bar, tau + dp.J_bar_d);
    }
    w.spline = CubicSpline(w.taus, w.values);
    return w;
}

WindowSet::WindowSet(std::shared_ptr<const VanillaSurface> surface, const DimlessParams& dp,
                     const WindowConfig& cfg)
    : surface_(std::move(surface)), dp_(dp), kp_(KernelParams::from(dp)), cfg_(cfg) {
    if (!(dp_.J_bar_d > 0.0)) throw ValidationError("WindowSet: J_bar_d must be > 0");
    horizon_ = dp_.horizon();
    if (!(horizon_ > 0.0)) throw ValidationError("WindowSet: contract has no region-I horizon");
    windows_.push_back(solve_W0(*surface_, dp_, cfg_.samples_per_window));
}

double WindowSet::solved_up_to() const {
    return windows_.size() > 1 ? windows_.back().tau_hi : 0.0;
}

void WindowSet::solve_to(double tau) {
    // Windows are always solved in full; only the final window, clipped by the contract
    // horizon, can be shorter.
    const double target = std::min(tau, horizon_);
    while (solved_up_to() < target - 1e-15) {
        windows_.push_back(solve_window(static_cast<int>(windows_.size()) - 1));
    }
}

double WindowSet::value(double tau) const {
    const double jb = dp_.J_bar_d;
    if (tau < 0.0) {
        if (cfg_.first_window_memory == FirstWindowMemory::Zero) return 0.0;
        return surface_->value_at(dp_.x_bar, std::max(tau, -jb) + jb);
    }
    const int n = std::min(static_cast<int>(tau / jb) + 1, solved_windows());
    if (n < 1 || windows_[n].tau_hi < tau - 1e-12 * jb)
        throw std::runtime_error("WindowSet::value: tau beyond solved coverage");
    return windows_[n].value(tau);
}

double WindowSet::deriv(double tau) const {
    const double jb = dp_.J_bar_d;
    if (tau < 0.0) {
        if (cfg_.first_window_memory == FirstWindowMemory::Zero) return 0.0;
        return surface_->theta_at(dp_.x_bar, std::max(tau, -jb) + jb);
    }
    const int n = std::min(static_cast<int>(tau / jb) + 1, solved_windows());
    if (n < 1 || windows_[n].tau_hi < tau - 1e-12 * jb)
        throw std::runtime_error("WindowSet::deriv: tau beyond solved coverage");
    return windows_[n].deriv(tau);
}

std::vector<double> WindowSet::joins(double up_to) const {
    std::vector<double> js;
    for (double j = dp_.J_bar_d; j < up_to; j += dp_.J_bar_d) js.push_back(j);
    return js;
}

double WindowSet::u0_value(int n, double arg) const {
    if (n == 0) {
        if (cfg_.first_window_memory == FirstWindowMemory::Zero) return 0.0;
        return surface_->value_at(dp_.x_bar, arg + dp_.J_bar_d);
    }
    return windows_[n].value(arg + n * dp_.J_bar_d);
}

double WindowSet::u0_deriv(int n, double arg) const {
    if (n == 0) {
        if (cfg_.first_window_memory == FirstWindowMemory::Zero) return 0.0;
        return surface_->theta_at(dp_.x_bar, arg + dp_.J_bar_d);
    }
    return windows_[n].deriv(arg + n * dp_.J_bar_d);
}

double WindowSet::f_n(int n, double x) const {
    if (n < 1) return 0.0;
    if (n > solved_windows()) throw std::runtime_error("WindowSet::f_n: window not solved");
    const double up = n * dp_.J_bar_d;
    auto w = [&](double s) { return value(s); };
    return f_n_value(kp_, x, up, w, joins(up), cfg_.quad).value;
}

WindowFunction WindowSet::solve_window(int n_prev) {
    const double jb = dp_.J_bar_d;
    const double base = n_prev * jb;
    const double len = std::min(jb, horizon_ - base);
    const int m = std::max(cfg_.samples_per_window, 2);
    const double c = kp_.c;

    WindowFunction w;
    w.index = n_prev + 1;
    w.tau_lo = base;
    w.tau_hi = base + len;
    w.taus.resize(m + 1);
    w.values.resize(m + 1);
    w.terms.assign(m + 1, {});

    auto u0 = [&](double arg) { return u0_value(n_prev, arg); };
    auto u0d = [&](double arg) { return u0_deriv(n_prev, arg); };

    // f_{n_prev} as a spatial function; zero for the first window.
    auto fn = [&](double z) { return f_n(n_prev, z); };
    const double f_width = n_prev > 0 ? std::sqrt(2.0 * n_prev * jb) : 0.0;

    // Node 0 carries the tau -> 0+ limits: the half-space average collapses onto half the
    // boundary value of f_n, and the decayed-memory term onto U0(0)/2.
    {
        const double f_half = n_prev > 0 ? 0.5 * f_n(n_prev, kp_.x_bar) : 0.0;
        w.taus[0] = base;
        w.terms[0] = {f_half, 0.5 * u0(0.0), 0.0, 0.0, 0.0};
        w.values[0] = f_half + 0.5 * u0(0.0);
    }

    const double mem_coef = -std::exp(-c * jb) / (2.0 * kPi * std::sqrt(jb));

    for (int i = 1; i <= m; ++i) {
        const double tt = len * i / m;  // tau-tilde, shifted frame
        w.taus[i] = base + tt;
        double err = 0.0;

        // (1) half-space average of f_n against the direct Gaussian.
        double t1 = 0.0;
        if (n_prev > 0) {
            IntegralResult r = half_space_average(kp_, tt, fn, f_width, cfg_.quad);
            t1 = r.value;
            err += r.error;
        }

        // (2) decayed carry-over of the previous window's terminal value.
        const double t2 = 0.5 * u0(0.0) * std::exp(-c * tt);

        // (3) memory integral of U0(s - J_bar) against the Abel kernel.
        IntegralResult r3 = integrate_sqrt_singular(
            [&](double s) { return std::exp(-c * (tt - s)) / std::sqrt(tt - s) * u0(s - jb); },
            0.0, tt, SingularEnd::Upper, cfg_.quad);
        const double t3 = mem_coef * r3.value;
        err += std::fabs(mem_coef) * r3.error;

        // (4) embedded-option double integral: outer z against the barrier-flux kernel,
        //     inner s against the Abel kernel. C is queried at absolute time base + s.
        double inner_err4 = 0.0;
        auto inner4 = [&](double z) {
            IntegralResult ri = integrate_sqrt_singular(
                [&](double s) {
                    return surface_->value_at(z, base + s) * std::exp(-c * (tt - s)) /
                           std::sqrt(tt - s);
                },
                0.0, tt, SingularEnd::Upper, cfg_.quad);
            inner_err4 = std::max(inner_err4, ri.error);
            return ri.value;
        };
        auto outer4 = [&](double z) {
            const double d = kp_.x_bar - z;
            const double kern = d / (4.0 * kPi * jb * std::sqrt(jb)) *
                                std::exp(-d * d / (4.0 * jb) - c * jb - 0.5 * kp_.k * d);
            return kern * inner4(z);
        };
        GaussianTail tail4;
        tail4.center = kp_.x_bar + kp_.k * jb;
        tail4.sd = std::sqrt(2.0 * jb);
        tail4.hard_limit_lo = surface_->x_min();
        IntegralResult r4 = integrate_gaussian_tail(outer4, kp_.x_bar,
                                                    TailDirection::TowardMinusInfinity, tail4,
                                                    cfg_.quad);
        const double t4 = r4.value;
        err += r4.error + inner_err4;

        // (5) nested double integral of the previous window's decay-adjusted derivative.
        OuterSpec outer5{0.0, tt, true, SingularEnd::Upper};
        auto inner5 = [&](double s) -> IntegralResult {
            IntegralResult ri = integrate_adaptive(
                [&](double t) {
                    const double arg = s - t * t;
                    return std::exp(-c * t * t) * (c * u0(arg) + u0d(arg));
                },
                std::sqrt(s), std::sqrt(jb), cfg_.quad);
            const double weight = std::exp(-c * (tt - s)) / std::sqrt(tt - s);
            return {weight * ri.value, weight * ri.error, ri.panels};
        };
        IntegralResult r5 = integrate_2d_nested(outer5, inner5, cfg_.quad);
        const double t5 = -r5.value / kPi;
        err += r5.error / kPi;

        w.terms[i] = {t1, t2, t3, t4, t5};
        w.values[i] = t1 + t2 + t3 + t4 + t5;
        w.quad_error = std::max(w.quad_error, err);
    }

    w.spline = CubicSpline(w.taus, w.values);
    return w;
}

double WindowSet::FluxPair::scale() const {
    return std::max({std::fabs(lhs), std::fabs(rhs), 1.0});
}

WindowSet::FluxPair WindowSet::connectivity_residual(double tau) const {
    if (tau <= 0.0 || tau > solved_up_to() + 1e-15)
        throw ValidationError("connectivity_residual: tau outside solved range");
    const double jb = dp_.J_bar_d;
    const double c = kp_.c;
    FluxPair fp;

    // Region-I side: flux of the boundary layer with data W on [0, tau],
    //   -e^{-c tau} [ W(0+)/sqrt(pi tau) + int_0^tau e^{cs}(cW + W')(s)/sqrt(pi(tau-s)) ds ],
    // plus, from the second window on, the flux of the evolved initial data f_n enters through
    // the same expression written in the active window's shifted frame. Evaluating in the
    // unshifted frame keeps one formula: the layer memory runs over the whole of [0, tau].
    const double w0p = windows_.size() > 1 ? windows_[1].values.front() : 0.0;
    auto li_f = [&](double s) {
        return std::exp(c * s) * (c * value(s) + deriv(s)) / std::sqrt(kPi * (tau - s));
    };
    // Window joins are spline kinks; integrate piecewise with the singular tail last.
    IntegralResult li;
    double llo = 0.0;
    for (double j : joins(tau)) {
        li += integrate_adaptive(li_f, llo, j, cfg_.quad);
        llo = j;
    }
    li += integrate_sqrt_singular(li_f, llo, tau, SingularEnd::Upper, cfg_.quad);
    fp.lhs = -std::exp(-c * tau) * (w0p / std::sqrt(kPi * tau) + li.value);
    fp.error += std::exp(-c * tau) * li.error;

    // Region-II side: image flux of the embedded-option slice plus the slide boundary flux,
    //   e^{-c J}[ -q_c(tau) + W(tau-J)/sqrt(pi J) + int_0^J e^{cs}(cW+W')(tau-J+s)/sqrt(pi(J-s)) ds ].
    auto qc_f = [&](double z) {
        const double d = kp_.x_bar - z;
        return d / (2.0 * kSqrtPi * jb * std::sqrt(jb)) *
               std::exp(-d * d / (4.0 * jb) - 0.5 * kp_.k * d) * surface_->value_at(z, tau);
    };
    GaussianTail tail;
    tail.center = kp_.x_bar + kp_.k * jb;
    tail.sd = std::sqrt(2.0 * jb);
    tail.hard_limit_lo = surface_->x_min();
    IntegralResult qc =
        integrate_gaussian_tail(qc_f, kp_.x_bar, TailDirection::TowardMinusInfinity, tail,
                                cfg_.quad);

    std::vector<double> sbreaks;
    for (double j : joins(tau)) {
        const double s = j - (tau - jb);
        if (s > 0.0 && s < jb) sbreaks.push_back(s);
    }
    if (tau < jb) sbreaks.push_back(jb - tau);  // crossing of the pre-history boundary
    std::sort(sbreaks.begin(), sbreaks.end());
    IntegralResult bd;
    double lo = 0.0;
    auto bd_f = [&](double s) {
        const double arg = tau - jb + s;
        return std::exp(c * s) * (c * value(arg) + deriv(arg)) / std::sqrt(kPi * (jb - s));
    };
    for (double s : sbreaks) {
        bd += integrate_adaptive(bd_f, lo, s, cfg_.quad);
        lo = s;
    }
    bd += integrate_sqrt_singular(bd_f, lo, jb, SingularEnd::Upper, cfg_.quad);

    fp.rhs = std::exp(-c * jb) *
             (-qc.value + value(tau - jb) / std::sqrt(kPi * jb) + bd.value);
    fp.error += std::exp(-c * jb) * (qc.error + bd.error);
    return fp;
}

void WindowSet::dump_csv(std::ostream& os) const {
    os << "window,tau,W,term1,term2,term3,term4,term5\n";
    char buf[256];
    for (const auto& w : windows_) {
        for (std::size_t i = 0; i < w.taus.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                          w.index, w.taus[i], w.values[i], w.terms[i][0], w.terms[i][1],
                          w.terms[i][2], w.terms[i][3], w.terms[i][4]);
            os << buf;
        }
    }
}

}  // namespace parisian
