#include "parisian/model.hpp"

#include <cmath>

namespace parisian {

void MarketParams::validate() const {
    if (!(sigma > 0.0)) throw ValidationError("MarketParams: sigma must be > 0");
    if (!(r >= 0.0)) throw ValidationError("MarketParams: r must be >= 0");
    if (!(D >= 0.0)) throw ValidationError("MarketParams: D must be >= 0");
    if (!std::isfinite(r) || !std::isfinite(D) || !std::isfinite(sigma))
        throw ValidationError("MarketParams: non-finite input");
}

void ParisianContract::validate() const {
    if (!(K > 0.0)) throw ValidationError("ParisianContract: K must be > 0");
    if (!(S_bar > 0.0)) throw ValidationError("ParisianContract: S_bar must be > 0");
    if (!(T > 0.0)) throw ValidationError("ParisianContract: T must be > 0");
    if (!(J_bar >= 0.0)) throw ValidationError("ParisianContract: J_bar must be >= 0");
    if (!std::isfinite(K) || !std::isfinite(S_bar) || !std::isfinite(T) || !std::isfinite(J_bar))
        throw ValidationError("ParisianContract: non-finite input");
}

void StatePoint::validate(const ParisianContract& c) const {
    if (!(S >= 0.0)) throw ValidationError("StatePoint: S must be >= 0");
    if (t < 0.0 || t > c.T) throw ValidationError("StatePoint: t must lie in [0, T]");
    if (J < 0.0) throw ValidationError("StatePoint: J must be >= 0");
    if (J > c.J_bar) throw ValidationError("StatePoint: J exceeds J_bar (already knocked in)");
    if (J > 0.0 && S > c.S_bar)
        throw ValidationError("StatePoint: positive clock requires S <= S_bar");
    if (J > t) throw ValidationError("StatePoint: clock cannot exceed elapsed time");
}

DimlessParams to_dimensionless(const MarketParams& mp, const ParisianContract& c) {
    mp.validate();
    c.validate();
    const double half_var = 0.5 * mp.sigma * mp.sigma;
    DimlessParams dp;
    dp.gamma = mp.r / half_var;
    dp.q = mp.D / half_var;
    dp.k = dp.gamma - dp.q - 1.0;
    dp.x_bar = std::log(c.S_bar / c.K);
    dp.J_bar_d = half_var * c.J_bar;
    dp.T_d = half_var * c.T;
    return dp;
}

void from_dimensionless(const DimlessParams& dp, double sigma, double K,
                        MarketParams& mp_out, ParisianContract& c_out) {
    if (!(sigma > 0.0)) throw ValidationError("from_dimensionless: sigma must be > 0");
    if (!(K > 0.0)) throw ValidationError("from_dimensionless: K must be > 0");
    const double half_var = 0.5 * sigma * sigma;
    mp_out.sigma = sigma;
    mp_out.r = dp.gamma * half_var;
    mp_out.D = dp.q * half_var;
    c_out.K = K;
    c_out.S_bar = K * std::exp(dp.x_bar);
    c_out.J_bar = dp.J_bar_d / half_var;
    c_out.T = dp.T_d / half_var;
}

DimlessState state_to_slide(const StatePoint& sp, const ParisianContract& c,
                            const DimlessParams& dp) {
    sp.validate(c);
    const double half_var = dp.T_d / c.T;  // sigma^2/2 recovered from the scaling
    DimlessState ds;
    ds.x = std::log(sp.S / c.K);
    if (sp.S > c.S_bar) {
        ds.tau = half_var * (c.T - c.J_bar - sp.t);
        return ds;
    }
    const double t_base = sp.t - sp.J;
    ds.tau = half_var * (c.T - c.J_bar - t_base);
    ds.l = half_var * sp.J;
    return ds;
}

DegeneracyTag classify(const ParisianContract& c, const ClassifierThresholds& th) {
    c.validate();
    if (c.J_bar >= c.T || c.S_bar <= th.s_eps_factor * c.K)
        return {Degeneracy::Worthless};
    if (c.J_bar <= th.j_eps) return {Degeneracy::OneTouchLimit};
    if (c.S_bar >= th.s_max_factor * c.K) return {Degeneracy::VanillaAmericanLimit};
    return {Degeneracy::NonDegenerate};
}

const char* to_string(Degeneracy d) {
    switch (d) {
        case Degeneracy::NonDegenerate: return "non-degenerate";
        case Degeneracy::Worthless: return "worthless";
        case Degeneracy::OneTouchLimit: return "one-touch-limit";
        case Degeneracy::VanillaAmericanLimit: return "vanilla-american-limit";
    }
    return "?";
}

const char* to_string(EmbeddedStyle s) {
    return s == EmbeddedStyle::American ? "american" : "european";
}

}  // namespace parisian
