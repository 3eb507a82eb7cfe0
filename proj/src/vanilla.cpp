#include "parisian/vanilla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>

#include "parisian/gridio.hpp"
#include "parisian/normal.hpp"

namespace parisian {

double european_call_value(const DimlessParams& dp, double x, double theta) {
    if (theta <= 0.0) return std::max(std::exp(x) - 1.0, 0.0);
    const double root = std::sqrt(2.0 * theta);
    const double d1 = (x + (dp.k + 2.0) * theta) / root;
    const double d2 = (x + dp.k * theta) / root;
    return std::exp(x - dp.q * theta) * norm_cdf(d1) - std::exp(-dp.gamma * theta) * norm_cdf(d2);
}

double european_call_theta(const DimlessParams& dp, double x, double theta) {
    if (theta <= 0.0) theta = 1e-12;
    const double root = std::sqrt(2.0 * theta);
    const double d1 = (x + (dp.k + 2.0) * theta) / root;
    const double d2 = (x + dp.k * theta) / root;
    return -dp.q * std::exp(x - dp.q * theta) * norm_cdf(d1) +
           dp.gamma * std::exp(-dp.gamma * theta) * norm_cdf(d2) +
           std::exp(-dp.gamma * theta) * norm_pdf(d2) / root;
}

namespace {

double payoff(double x) { return std::max(std::exp(x) - 1.0, 0.0); }

/// One projected-SOR solve of (I - w*A) v = rhs with obstacle, A the tridiagonal operator.
/// sub/diag/sup are the rows of (I - w*A); obstacle may be empty (European: plain SOR).
void psor_solve(const std::vector<double>& sub, const std::vector<double>& diag,
                const std::vector<double>& sup, const std::vector<double>& rhs,
                const std::vector<double>& obstacle, std::vector<double>& v,
                const SurfaceResolution& res) {
    const std::size_t n = diag.size();
    const bool projected = !obstacle.empty();
    for (int it = 0; it < res.psor_max_iter; ++it) {
        double max_change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = rhs[i];
            if (i > 0) acc -= sub[i] * v[i - 1];
            if (i + 1 < n) acc -= sup[i] * v[i + 1];
            const double gs = acc / diag[i];
            double next = v[i] + res.psor_omega * (gs - v[i]);
            if (projected) next = std::max(next, obstacle[i]);
            max_change = std::max(max_change, std::fabs(next - v[i]));
            v[i] = next;
        }
        if (max_change < res.psor_tol) return;
    }
    throw std::runtime_error("VanillaSurface: PSOR failed to converge");
}

}  // namespace

VanillaSurface VanillaSurface::build(const DimlessParams& dp, EmbeddedStyle style,
                                     const SurfaceResolution& res) {
    if (res.n_x < 2 || res.n_tau < 2)
        throw ValidationError("VanillaSurface: need >= 2 nodes per axis");
    VanillaSurface s;
    s.style_ = style;
    s.dp_ = dp;

    // Coverage: at least 10*sqrt(T_d) beyond both the barrier and the payoff kink, so the
    // kernel integrals and path-wise queries stay inside the grid and the deep-ITM boundary
    // condition is honest.
    const double pad = 10.0 * std::sqrt(std::max(dp.T_d, 1e-12));
    const double lo = std::min(dp.x_bar, 0.0) - pad;
    const double hi = std::max(dp.x_bar, 0.0) + pad;
    const int nt = res.n_tau;
    double hx = (hi - lo) / (res.n_x - 1);
    // Put the payoff kink and the barrier on nodes: pick the spacing as an integer fraction
    // of |x_bar| when possible, then anchor the grid at the barrier and extend past the
    // requested coverage on both sides.
    if (std::fabs(dp.x_bar) > 4.0 * hx) {
        const double m = std::round(std::fabs(dp.x_bar) / hx);
        hx = std::fabs(dp.x_bar) / m;
    }
    const int n_left = static_cast<int>(std::ceil((dp.x_bar - lo) / hx - 1e-12));
    const int n_right = static_cast<int>(std::ceil((hi - dp.x_bar) / hx - 1e-12));
    const int nx = n_left + n_right + 1;
    s.x_.resize(nx);
    for (int i = 0; i < nx; ++i) s.x_[i] = dp.x_bar + (i - n_left) * hx;
    // Quadratically graded time axis: clusters nodes where the payoff kink makes the surface
    // steep, at the cost of ~2x coarser spacing near T_d.
    s.tau_.resize(nt);
    for (int j = 0; j < nt; ++j) {
        const double u = static_cast<double>(j) / (nt - 1);
        s.tau_[j] = dp.T_d * u * u;
    }
    s.v_.assign(static_cast<std::size_t>(nx) * nt, 0.0);

    if (style == EmbeddedStyle::European) {
        for (int j = 0; j < nt; ++j)
            for (int i = 0; i < nx; ++i)
                s.v_[static_cast<std::size_t>(j) * nx + i] =
                    european_call_value(dp, s.x_[i], s.tau_[j]);
        return s;
    }

    // American: Crank-Nicolson in tau on d2/dx2 + k d/dx - gamma, PSOR with the payoff
    // obstacle, two implicit half-steps at startup to damp the kink. The march starts from
    // the cell-averaged payoff (exact integral over each node's cell, which only differs at
    // the kink node); the stored terminal row keeps the exact payoff.
    std::vector<double> pay(nx), v(nx);
    for (int i = 0; i < nx; ++i) pay[i] = payoff(s.x_[i]);
    v = pay;
    // Smooth only the cell that straddles the kink: replace that node by the exact cell
    // average of the payoff.
    for (int i = 1; i + 1 < nx; ++i) {
        const double a = s.x_[i] - 0.5 * hx, b = s.x_[i] + 0.5 * hx;
        if (a < 0.0 && b > 0.0) v[i] = (std::exp(b) - 1.0 - b) / hx;
    }
    for (int i = 0; i < nx; ++i) s.v_[i] = pay[i];

    const double ax = 1.0 / (hx * hx);
    const double bx = dp.k / (2.0 * hx);
    const double su = ax - bx;   // coefficient of v[i-1] in A
    const double di = -2.0 * ax - dp.gamma;
    const double sp = ax + bx;   // coefficient of v[i+1]

    const std::size_t ni = static_cast<std::size_t>(nx) - 2;  // interior nodes
    std::vector<double> msub(ni), mdiag(ni), msup(ni), rhs(ni), obst(ni), vi(ni);

    auto boundary_hi = [&](double theta) {
        return std::max(pay[nx - 1], european_call_value(dp, s.x_[nx - 1], theta));
    };

    auto step = [&](double theta_new, double dt, double w_impl) {
        // (I - w_impl*dt*A) v_new = (I + (1-w_impl)*dt*A) v_old, with Dirichlet ends.
        const double we = (1.0 - w_impl) * dt;
        const double wi = w_impl * dt;
        const double v_lo = 0.0;
        const double v_hi = boundary_hi(theta_new);
        for (std::size_t i = 0; i < ni; ++i) {
            const std::size_t g = i + 1;  // global index
            double acc = v[g] + we * (su * v[g - 1] + di * v[g] + sp * v[g + 1]);
            msub[i] = -wi * su;
            mdiag[i] = 1.0 - wi * di;
            msup[i] = -wi * sp;
            if (i == 0) acc += wi * su * v_lo;
            if (i == ni - 1) acc += wi * sp * v_hi;
            rhs[i] = acc;
            obst[i] = pay[g];
            vi[i] = std::max(v[g], obst[i]);
        }
        psor_solve(msub, mdiag, msup, rhs, obst, vi, res);
        v[0] = v_lo;
        v[nx - 1] = v_hi;
        for (std::size_t i = 0; i < ni; ++i) v[i + 1] = vi[i];
    };

    s.boundary_.tau.resize(nt);
    s.boundary_.x_star.assign(nt, std::numeric_limits<double>::quiet_NaN());
    s.boundary_.tau = s.tau_;

    for (int j = 1; j < nt; ++j) {
        const double t0 = s.tau_[j - 1];
        const double t1 = s.tau_[j];
        const double ht = t1 - t0;
        if (j <= 2) {
            step(0.5 * (t0 + t1), 0.5 * ht, 1.0);  // Rannacher: implicit half-steps
            step(t1, 0.5 * ht, 1.0);
        } else {
            step(t1, ht, 0.5);
        }
        for (int i = 0; i < nx; ++i) s.v_[static_cast<std::size_t>(j) * nx + i] = v[i];

        // Exercise boundary: highest node still strictly above the obstacle. Solver noise
        // sits well below 1e-6; a material premium at the top node means the boundary
        // escaped the grid.
        const double tol = 1e-6;
        int ix_star = -1;
        for (int i = nx - 2; i >= 1; --i) {
            if (v[i] > pay[i] + tol) {
                ix_star = i;
                break;
            }
        }
        if (ix_star >= 0 && ix_star < nx - 2) s.boundary_.x_star[j] = s.x_[ix_star];
        if (dp.q > 0.0 && ix_star == nx - 2 && v[nx - 2] > pay[nx - 2] + 1e-5) {
            char dbg[200];
            std::snprintf(dbg, sizeof dbg,
                "VanillaSurface: exercise boundary not bracketed by grid (j=%d theta=%g dev=%g)",
                j, s.tau_[j], v[nx - 2] - pay[nx - 2]);
            throw std::runtime_error(dbg);
        }
    }
    return s;
}

VanillaSurface VanillaSurface::from_grid(const DimlessParams& dp, EmbeddedStyle style,
                                         std::vector<double> x, std::vector<double> tau,
                                         std::vector<double> values) {
    if (x.size() < 4 || tau.size() < 4)
        throw ValidationError("VanillaSurface::from_grid: need >= 4 nodes per axis");
    if (values.size() != x.size() * tau.size())
        throw ValidationError("VanillaSurface::from_grid: value count mismatch");
    VanillaSurface s;
    s.style_ = style;
    s.dp_ = dp;
    s.x_ = std::move(x);
    s.tau_ = std::move(tau);
    s.v_ = std::move(values);
    return s;
}

namespace {

/// Lagrange cubic through 4 consecutive nodes; returns interpolation weights for the query.
void cubic_weights(const double* xs, double x, double w[4]) {
    for (int i = 0; i < 4; ++i) {
        double num = 1.0, den = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            num *= (x - xs[j]);
            den *= (xs[i] - xs[j]);
        }
        w[i] = num / den;
    }
}

void cubic_weights_deriv(const double* xs, double x, double w[4]) {
    for (int i = 0; i < 4; ++i) {
        double den = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != i) den *= (xs[i] - xs[j]);
        double acc = 0.0;
        for (int m = 0; m < 4; ++m) {
            if (m == i) continue;
            double prod = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != i && j != m) prod *= (x - xs[j]);
            acc += prod;
        }
        w[i] = acc / den;
    }
}

int stencil_start(const std::vector<double>& nodes, double x) {
    const int n = static_cast<int>(nodes.size());
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    int cell = static_cast<int>(it - nodes.begin()) - 1;
    cell = std::clamp(cell, 0, n - 2);
    return std::clamp(cell - 1, 0, n - 4);
}

}  // namespace

double VanillaSurface::value_at(double x, double tau) const {
    const double ex = 1e-12 * std::max(1.0, std::fabs(x_.back()));
    const double et = 1e-12 * std::max(1.0, tau_.back());
    if (x < x_.front() - ex || x > x_.back() + ex || tau < tau_.front() - et ||
        tau > tau_.back() + et)
        throw CoverageError("VanillaSurface::value_at: query outside grid coverage");
    const int i0 = stencil_start(x_, x);
    const int j0 = stencil_start(tau_, tau);
    double wx[4], wt[4];
    cubic_weights(&x_[i0], x, wx);
    cubic_weights(&tau_[j0], tau, wt);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        double row = 0.0;
        for (int i = 0; i < 4; ++i) row += wx[i] * node(i0 + i, j0 + j);
        acc += wt[j] * row;
    }
    return acc;
}

double VanillaSurface::theta_at(double x, double tau) const {
    const double ex = 1e-12 * std::max(1.0, std::fabs(x_.back()));
    const double et = 1e-12 * std::max(1.0, tau_.back());
    if (x < x_.front() - ex || x > x_.back() + ex || tau < tau_.front() - et ||
        tau > tau_.back() + et)
        throw CoverageError("VanillaSurface::theta_at: query outside grid coverage");
    const int i0 = stencil_start(x_, x);
    const int j0 = stencil_start(tau_, tau);
    double wx[4], wt[4];
    cubic_weights(&x_[i0], x, wx);
    cubic_weights_deriv(&tau_[j0], tau, wt);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        double row = 0.0;
        for (int i = 0; i < 4; ++i) row += wx[i] * node(i0 + i, j0 + j);
        acc += wt[j] * row;
    }
    return acc;
}

double VanillaSurface::value_or_asymptotic(double x, double tau) const {
    if (x >= x_.front() && x <= x_.back() && tau >= tau_.front() && tau <= tau_.back())
        return value_at(x, tau);
    const double eu = european_call_value(dp_, x, tau);
    if (x > x_.back() && style_ == EmbeddedStyle::American)
        return std::max(payoff(x), eu);
    return eu;
}

void VanillaSurface::save(std::ostream& os) const {
    gridio::GridFile g;
    g.name = "vanilla-surface";
    g.meta["style"] = to_string(style_);
    g.meta_num["gamma"] = dp_.gamma;
    g.meta_num["q"] = dp_.q;
    g.meta_num["k"] = dp_.k;
    g.meta_num["x_bar"] = dp_.x_bar;
    g.meta_num["J_bar_d"] = dp_.J_bar_d;
    g.meta_num["T_d"] = dp_.T_d;
    g.axes["x"] = x_;
    g.axes["tau"] = tau_;
    g.data["values"] = v_;
    g.save(os);
}

VanillaSurface VanillaSurface::load(std::istream& is) {
    gridio::GridFile g = gridio::GridFile::load(is);
    if (g.name != "vanilla-surface")
        throw std::runtime_error("VanillaSurface::load: unexpected container name " + g.name);
    DimlessParams dp;
    dp.gamma = g.meta_num.at("gamma");
    dp.q = g.meta_num.at("q");
    dp.k = g.meta_num.at("k");
    dp.x_bar = g.meta_num.at("x_bar");
    dp.J_bar_d = g.meta_num.at("J_bar_d");
    dp.T_d = g.meta_num.at("T_d");
    const EmbeddedStyle style =
        g.meta.at("style") == std::string("american") ? EmbeddedStyle::American
                                                      : EmbeddedStyle::European;
    return from_grid(dp, style, g.axes.at("x"), g.axes.at("tau"), g.data.at("values"));
}

}  // namespace parisian
