#include "parisian/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace parisian {

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw QuadratureError("QuadratureConfig: tolerances must be > 0");
    if (gauss_order < 2) throw QuadratureError("QuadratureConfig: gauss_order must be >= 2");
    if (max_subdivisions < 1) throw QuadratureError("QuadratureConfig: max_subdivisions < 1");
}

namespace {

struct GaussRule {
    std::vector<double> nodes, weights;
};

GaussRule compute_gauss(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

const GaussRule& gauss_rule(int order) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
    return it->second;
}

double panel(const Integrand& f, double a, double b, const GaussRule& g) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + half * g.nodes[i]);
    return s * half;
}

struct Segment {
    double a, b, whole;
};

}  // namespace

const std::vector<double>& gauss_nodes(int order) { return gauss_rule(order).nodes; }
const std::vector<double>& gauss_weights(int order) { return gauss_rule(order).weights; }

IntegralResult integrate_adaptive(const Integrand& f, double a, double b,
                                  const QuadratureConfig& cfg) {
    cfg.validate();
    IntegralResult out;
    if (!(b > a)) return out;
    const GaussRule& g = gauss_rule(cfg.gauss_order);
    const double span = b - a;

    std::vector<Segment> stack;
    stack.push_back({a, b, panel(f, a, b, g)});
    int used = 1;

    // First pass to size the relative-tolerance target.
    double scale = std::fabs(stack.back().whole);

    while (!stack.empty()) {
        const Segment s = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        const double left = panel(f, s.a, mid, g);
        const double right = panel(f, mid, s.b, g);
        used += 2;
        const double refined = left + right;
        const double disc = std::fabs(s.whole - refined);
        const double local_tol =
            std::max(cfg.abs_tol, cfg.rel_tol * std::max(scale, std::fabs(refined))) *
            ((s.b - s.a) / span);
        if (disc <= local_tol || (s.b - s.a) < 1e-14 * span) {
            out.value += refined;
            out.error += disc;
            out.panels += 2;
        } else {
            if (used > cfg.max_subdivisions)
                throw QuadratureError("integrate_adaptive: panel budget exhausted");
            stack.push_back({s.a, mid, left});
            stack.push_back({mid, s.b, right});
        }
        scale = std::max(scale, std::fabs(out.value));
    }
    return out;
}

IntegralResult integrate_adaptive_split(const Integrand& f, double a, double b,
                                        const std::vector<double>& breakpoints,
                                        const QuadratureConfig& cfg) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    IntegralResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-300) continue;
        out += integrate_adaptive(f, cuts[i], cuts[i + 1], cfg);
    }
    return out;
}

IntegralResult integrate_sqrt_singular(const Integrand& f, double a, double b,
                                       SingularEnd singular_end, const QuadratureConfig& cfg) {
    IntegralResult out;
    if (!(b > a)) return out;
    const double len = b - a;
    const double u_max = std::sqrt(len);
    if (singular_end == SingularEnd::Upper) {
        // s = b - u^2, ds = -2u du
        auto g = [&](double u) { return 2.0 * u * f(b - u * u); };
        return integrate_adaptive(g, 0.0, u_max, cfg);
    }
    auto g = [&](double u) { return 2.0 * u * f(a + u * u); };
    return integrate_adaptive(g, 0.0, u_max, cfg);
}

IntegralResult integrate_gaussian_tail(const Integrand& f, double a, TailDirection direction,
                                       const GaussianTail& tail, const QuadratureConfig& cfg) {
    if (!(tail.sd > 0.0)) throw QuadratureError("integrate_gaussian_tail: sd must be > 0");
    double cut;
    if (direction == TailDirection::TowardPlusInfinity) {
        cut = std::max(a, tail.center + tail.n_sd * tail.sd);
        cut = std::min(cut, tail.hard_limit_hi);
        if (!(cut > a)) return {};
    } else {
        cut = std::min(a, tail.center - tail.n_sd * tail.sd);
        cut = std::max(cut, tail.hard_limit_lo);
        if (!(cut < a)) return {};
    }
    const double lo = std::min(a, cut), hi = std::max(a, cut);
    IntegralResult out = integrate_adaptive(f, lo, hi, cfg);

    // Analytic tail bound: |f| at the cut times the Mills-ratio remainder of the envelope.
    const double d = std::fabs(cut - tail.center);
    if (d > 0.0) {
        const double fcut = std::fabs(f(cut));
        out.error += fcut * tail.sd * tail.sd / d;
    }
    return out;
}

IntegralResult integrate_2d_nested(const OuterSpec& outer,
                                   const std::function<IntegralResult(double)>& inner,
                                   const QuadratureConfig& cfg) {
    double inner_err = 0.0;
    auto f = [&](double s) {
        const IntegralResult r = inner(s);
        inner_err = std::max(inner_err, r.error);
        return r.value;
    };
    IntegralResult out;
    if (outer.sqrt_singular)
        out = integrate_sqrt_singular(f, outer.a, outer.b, outer.singular_end, cfg);
    else
        out = integrate_adaptive(f, outer.a, outer.b, cfg);
    // Worst inner error spread across the outer measure (the sqrt substitution's Jacobian
    // integrates back to the interval length).
    out.error += inner_err * std::fabs(outer.b - outer.a);
    return out;
}

}  // namespace parisian
