#include "parisian/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "parisian/gridio.hpp"

namespace parisian {

namespace {

/// Thomas solve of sub/diag/sup * v = rhs (vectors overwritten).
void tridiag_solve(std::vector<double>& sub, std::vector<double>& diag,
                   std::vector<double>& sup, std::vector<double>& rhs,
                   std::vector<double>& out) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    out.resize(n);
    out[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) out[i] = (rhs[i] - sup[i] * out[i + 1]) / diag[i];
}

}  // namespace

PdeSolution PdeSolution::solve_coupled(const MarketParams& mp, const ParisianContract& c,
                                       const PdeConfig& cfg, const VanillaSurface* surface) {
    mp.validate();
    c.validate();
    const DimlessParams dp = to_dimensionless(mp, c);
    if (!(dp.horizon() > 0.0)) throw ValidationError("pde: contract has no region-I horizon");
    if (c.embedded_style == EmbeddedStyle::American && surface == nullptr)
        throw ValidationError("pde: American mode needs a vanilla surface");
    const double jb = dp.J_bar_d;
    const double horizon = dp.horizon();
    const int nx = cfg.res.n_x;
    const int nj = cfg.res.n_j;
    if (nx < 5 || nj < 2 || cfg.res.n_tau < 2) throw ValidationError("pde: resolution too coarse");

    PdeSolution sol;
    sol.horizon_ = horizon;
    sol.j_bar_d_ = jb;

    // Equal-width regions sharing the barrier node and the spacing h.
    const double width = 10.0 * std::sqrt(dp.T_d);
    const double h = width / (nx - 1);
    sol.x2_.resize(nx);
    sol.x1_.resize(nx);
    for (int i = 0; i < nx; ++i) {
        sol.x2_[i] = dp.x_bar - width + h * i;
        sol.x1_[i] = dp.x_bar + h * i;
    }
    sol.jgrid_.resize(nj + 1);
    const double dj = jb / nj;
    for (int j = 0; j <= nj; ++j) sol.jgrid_[j] = dj * j;

    auto embedded = [&](double x, double theta) {
        if (c.embedded_style == EmbeddedStyle::European)
            return european_call_value(dp, x, theta);
        double xq = std::clamp(x, surface->x_min(), surface->x_max());
        return surface->value_at(xq, std::min(theta, surface->tau_max()));
    };
    auto pre_history = [&](double tau) {
        if (cfg.pre_history == PdePreHistory::Zero) return 0.0;
        return embedded(dp.x_bar, tau + jb);
    };

    // Operator rows for d2/dx2 + k d/dx - gamma on spacing h.
    const double su = 1.0 / (h * h) - dp.k / (2.0 * h);
    const double di = -2.0 / (h * h) - dp.gamma;
    const double sp = 1.0 / (h * h) + dp.k / (2.0 * h);

    // Region-II state: v2[j][i] on x2; region-I state: v1[i] on x1.
    std::vector<std::vector<double>> v2(nj + 1, std::vector<double>(nx, 0.0));
    std::vector<std::vector<double>> v2n(nj + 1, std::vector<double>(nx, 0.0));
    std::vector<double> v1(nx, 0.0), v1n(nx, 0.0);

    const double dtB = horizon / cfg.res.n_tau;
    const int nA = std::max(1, static_cast<int>(std::lround(jb / dtB)));
    const double dtA = jb / nA;

    // Terminal state at tau = -jb: worthless except on the knocked-in edge.
    for (int i = 0; i < nx; ++i) v2[nj][i] = embedded(sol.x2_[i], 0.0);

    std::vector<double> msub, mdiag, msup, mrhs, mout;

    // One implicit step of all region-II levels below the top, barrier Dirichlet = w.
    auto sweep_levels = [&](double dt, double tau_new, double w) {
        for (int i = 0; i < nx; ++i) v2n[nj][i] = embedded(sol.x2_[i], tau_new + jb);
        const double adv = dt / dj;
        for (int j = nj - 1; j >= 1; --j) {
            const int m = nx - 2;
            msub.assign(m, -dt * su);
            mdiag.assign(m, 1.0 + adv - dt * di);
            msup.assign(m, -dt * sp);
            mrhs.resize(m);
            for (int i = 1; i <= nx - 2; ++i)
                mrhs[i - 1] = v2[j][i] + adv * v2n[j + 1][i];
            // Dirichlet ends: x2_min -> 0, barrier -> w.
            mrhs[m - 1] += dt * sp * w;
            tridiag_solve(msub, mdiag, msup, mrhs, mout);
            v2n[j][0] = 0.0;
            v2n[j][nx - 1] = w;
            for (int i = 1; i <= nx - 2; ++i) v2n[j][i] = mout[i - 1];
        }
    };

    // Pre-history phase: region II alone from tau = -jb to 0.
    sol.trace_taus_.push_back(-jb);
    sol.trace_.push_back(pre_history(-jb));
    for (int it = 0; it < nA; ++it) {
        const double tau_new = -jb + dtA * (it + 1);
        const double w = pre_history(tau_new);
        sweep_levels(dtA, tau_new, w);
        // j = 0 row with Dirichlet barrier value (no region I yet).
        {
            const double adv = dtA / dj;
            const int m = nx - 2;
            msub.assign(m, -dtA * su);
            mdiag.assign(m, 1.0 + adv - dtA * di);
            msup.assign(m, -dtA * sp);
            mrhs.resize(m);
            for (int i = 1; i <= nx - 2; ++i) mrhs[i - 1] = v2[0][i] + adv * v2n[1][i];
            mrhs[m - 1] += dtA * sp * w;
            tridiag_solve(msub, mdiag, msup, mrhs, mout);
            v2n[0][0] = 0.0;
            v2n[0][nx - 1] = w;
            for (int i = 1; i <= nx - 2; ++i) v2n[0][i] = mout[i - 1];
        }
        v2.swap(v2n);
        sol.trace_taus_.push_back(tau_new);
        sol.trace_.push_back(w);
    }

    // Coupled phase: region I from zero initial data, trace found by fixed-point sweeps.
    const int ntB = cfg.res.n_tau;
    sol.taus_.resize(ntB + 1);
    sol.v1_.assign(static_cast<std::size_t>(ntB + 1) * nx, 0.0);
    sol.taus_[0] = 0.0;
    double trace_prev = sol.trace_.back();

    const int merged_n = 2 * nx - 3;  // x2 interior + barrier + x1 interior (ends Dirichlet 0)
    std::vector<double> gsub(merged_n), gdiag(merged_n), gsup(merged_n), grhs(merged_n), gout;

    for (int it = 0; it < ntB; ++it) {
        const double tau_new = dtB * (it + 1);
        const double adv = dtB / dj;

        // One full evaluation of the trace map: sweep the clock levels at candidate w, then
        // solve the merged cross-barrier system and read the new barrier value.
        auto trace_map = [&](double w) {
            sweep_levels(dtB, tau_new, w);
            for (int i = 1; i <= nx - 2; ++i) {
                const int g = i - 1;
                gsub[g] = -dtB * su;
                gdiag[g] = 1.0 + adv - dtB * di;
                gsup[g] = -dtB * sp;
                grhs[g] = v2[0][i] + adv * v2n[1][i];
            }
            {
                const int g = nx - 2;  // barrier node
                gsub[g] = -dtB * su;
                gdiag[g] = 1.0 - dtB * di;
                gsup[g] = -dtB * sp;
                grhs[g] = trace_prev;
            }
            for (int i = 1; i <= nx - 2; ++i) {
                const int g = nx - 2 + i;
                gsub[g] = -dtB * su;
                gdiag[g] = 1.0 - dtB * di;
                gsup[g] = -dtB * sp;
                grhs[g] = v1[i];
            }
            std::vector<double> s1(gsub), s2(gdiag), s3(gsup), s4(grhs);
            tridiag_solve(s1, s2, s3, s4, gout);
            return gout[nx - 2];
        };

        // The map is affine in w (everything is one linear solve), so the secant step lands
        // on the fixed point; the loop verifies successive sweeps agree to tolerance.
        double w = trace_prev;
        double fw = trace_map(w);
        bool converged = false;
        for (int sweep = 0; sweep < cfg.res.max_sweeps; ++sweep) {
            if (std::fabs(fw - w) < cfg.res.trace_tol * std::max(1.0, std::fabs(fw))) {
                w = fw;
                converged = true;
                break;
            }
            const double w2 = fw;
            const double fw2 = trace_map(w2);
            const double denom = (fw2 - fw) - (w2 - w);
            double w_next;
            if (std::fabs(denom) > 1e-300)
                w_next = (w * fw2 - w2 * fw) / ((w - w2) - (fw - fw2));
            else
                w_next = fw2;
            w = w_next;
            fw = trace_map(w);
        }
        if (!converged) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "pde: trace iteration did not converge (step %d, w=%g, F(w)=%g)", it,
                          w, fw);
            throw std::runtime_error(msg);
        }

        // Commit: unpack the merged row (state matches the last trace_map(w) call).
        v2n[0][0] = 0.0;
        v2n[0][nx - 1] = w;
        for (int i = 1; i <= nx - 2; ++i) v2n[0][i] = gout[i - 1];
        v1n[0] = w;
        v1n[nx - 1] = 0.0;
        for (int i = 1; i <= nx - 2; ++i) v1n[i] = gout[nx - 2 + i];

        // Diagnostics before swapping.
        {
            const double d1 = (-3.0 * w + 4.0 * v1n[1] - v1n[2]) / (2.0 * h);
            const double d2 =
                (3.0 * w - 4.0 * v2n[0][nx - 2] + v2n[0][nx - 3]) / (2.0 * h);
            sol.conn_resid_max_ = std::max(sol.conn_resid_max_, std::fabs(d1 - d2));

            double lo = 0.0, hi = 0.0;
            for (int j = 0; j <= nj; ++j)
                for (int i = 0; i < nx; ++i) {
                    lo = std::min(lo, v2[j][i]);
                    hi = std::max(hi, v2[j][i]);
                }
            for (int i = 0; i < nx; ++i) {
                hi = std::max({hi, v1[i], v2n[nj][i], w});
            }
            for (int j = 0; j < nj; ++j)
                for (int i = 1; i < nx - 1; ++i) {
                    const double v = v2n[j][i];
                    const double excess = std::max(v - hi, lo - v);
                    sol.max_principle_violation_ =
                        std::max(sol.max_principle_violation_, excess);
                }
        }

        v2.swap(v2n);
        v1.swap(v1n);
        sol.taus_[it + 1] = tau_new;
        for (int i = 0; i < nx; ++i) sol.v1_[static_cast<std::size_t>(it + 1) * nx + i] = v1[i];
        sol.trace_taus_.push_back(tau_new);
        sol.trace_.push_back(w);
        trace_prev = w;

        // Retain requested snapshots (and always the final slice).
        const bool want =
            it + 1 == ntB ||
            std::any_of(cfg.snapshot_taus.begin(), cfg.snapshot_taus.end(),
                        [&](double t) { return std::fabs(t - tau_new) <= 0.5 * dtB; });
        if (want) {
            const bool already =
                !sol.snapshot_taus_.empty() &&
                std::fabs(sol.snapshot_taus_.back() - tau_new) < 1e-15;
            if (!already) {
                std::vector<double> snap(static_cast<std::size_t>(nj + 1) * nx);
                for (int j = 0; j <= nj; ++j)
                    for (int i = 0; i < nx; ++i)
                        snap[static_cast<std::size_t>(j) * nx + i] = v2[j][i];
                sol.snapshot_taus_.push_back(tau_new);
                sol.v2_snapshots_.push_back(std::move(snap));
            }
        }
    }
    return sol;
}

double PdeSolution::trace_at(double tau) const {
    const auto& ts = trace_taus_;
    if (tau <= ts.front()) return trace_.front();
    if (tau >= ts.back()) return trace_.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), tau);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin());
    const double f = (tau - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return (1.0 - f) * trace_[i - 1] + f * trace_[i];
}

double PdeSolution::value_region1(double x, double tau) const {
    const int nx = static_cast<int>(x1_.size());
    if (x < x1_.front() - 1e-12 || x > x1_.back() + 1e-12)
        throw CoverageError("pde value_region1: x outside grid");
    if (tau < -1e-12 || tau > horizon_ + 1e-12)
        throw CoverageError("pde value_region1: tau outside range");
    const double dt = taus_[1] - taus_[0];
    int it = std::clamp(static_cast<int>(tau / dt), 0, static_cast<int>(taus_.size()) - 2);
    const double f = std::clamp((tau - taus_[it]) / dt, 0.0, 1.0);

    auto row_value = [&](int step) {
        const double* row = &v1_[static_cast<std::size_t>(step) * nx];
        const double h = x1_[1] - x1_[0];
        int cell = std::clamp(static_cast<int>((x - x1_[0]) / h), 0, nx - 2);
        int i0 = std::clamp(cell - 1, 0, nx - 4);
        double wgt[4];
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) {
            double num = 1.0, den = 1.0;
            for (int j = 0; j < 4; ++j) {
                if (j == i) continue;
                num *= (x - x1_[i0 + j]);
                den *= (x1_[i0 + i] - x1_[i0 + j]);
            }
            wgt[i] = num / den;
            acc += wgt[i] * row[i0 + i];
        }
        return acc;
    };
    return (1.0 - f) * row_value(it) + f * row_value(it + 1);
}

double PdeSolution::value_region2(double x, double tau, double j) const {
    // Snapshots live on time steps; accept the nearest one within half a step.
    const double step = taus_.size() > 1 ? taus_[1] - taus_[0] : horizon_;
    int snap = -1;
    double best = 0.75 * step;
    for (std::size_t s = 0; s < snapshot_taus_.size(); ++s) {
        const double d = std::fabs(snapshot_taus_[s] - tau);
        if (d < best) {
            best = d;
            snap = static_cast<int>(s);
        }
    }
    if (snap < 0) throw CoverageError("pde value_region2: tau not among retained snapshots");
    const int nx = static_cast<int>(x2_.size());
    const int nj = static_cast<int>(jgrid_.size()) - 1;
    if (x < x2_.front() - 1e-12 || x > x2_.back() + 1e-12)
        throw CoverageError("pde value_region2: x outside grid");
    if (j < -1e-15 || j > j_bar_d_ + 1e-15)
        throw CoverageError("pde value_region2: j outside range");
    const std::vector<double>& snapv = v2_snapshots_[snap];
    const double dj = jgrid_[1] - jgrid_[0];
    int jc = std::clamp(static_cast<int>(j / dj), 0, nj - 1);
    const double fj = std::clamp((j - jgrid_[jc]) / dj, 0.0, 1.0);

    auto row_value = [&](int jl) {
        const double* row = &snapv[static_cast<std::size_t>(jl) * nx];
        const double h = x2_[1] - x2_[0];
        int cell = std::clamp(static_cast<int>((x - x2_[0]) / h), 0, nx - 2);
        int i0 = std::clamp(cell - 1, 0, nx - 4);
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) {
            double num = 1.0, den = 1.0;
            for (int jj = 0; jj < 4; ++jj) {
                if (jj == i) continue;
                num *= (x - x2_[i0 + jj]);
                den *= (x2_[i0 + i] - x2_[i0 + jj]);
            }
            acc += num / den * row[i0 + i];
        }
        return acc;
    };
    return (1.0 - fj) * row_value(jc) + fj * row_value(jc + 1);
}

void PdeSolution::dump(std::ostream& os) const {
    gridio::GridFile g;
    g.name = "pde-fields";
    g.meta_num["horizon"] = horizon_;
    g.meta_num["J_bar_d"] = j_bar_d_;
    g.axes["x1"] = x1_;
    g.axes["x2"] = x2_;
    g.axes["j"] = jgrid_;
    g.axes["tau"] = taus_;
    g.axes["trace_tau"] = trace_taus_;
    g.data["trace"] = trace_;
    g.data["v1"] = v1_;
    if (!v2_snapshots_.empty()) {
        g.axes["snapshot_tau"] = snapshot_taus_;
        g.data["v2_final"] = v2_snapshots_.back();
    }
    g.save(os);
}

}  // namespace parisian
