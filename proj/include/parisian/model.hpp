#ifndef PARISIAN_MODEL_HPP
#define PARISIAN_MODEL_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace parisian {

/// Thrown when inputs violate a documented precondition.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Market environment: flat risk-free rate, continuous dividend yield, lognormal volatility.
struct MarketParams {
    double r = 0.0;      ///< risk-free rate (per year)
    double D = 0.0;      ///< continuous dividend yield (per year)
    double sigma = 0.0;  ///< volatility (per sqrt-year)

    void validate() const;
};

enum class EmbeddedStyle { American, European };

/// Parisian down-and-in call contract. The option knocks in once the underlying has spent
/// J_bar consecutive years strictly below S_bar, and then becomes the embedded vanilla call.
struct ParisianContract {
    double K = 0.0;      ///< strike (currency)
    double S_bar = 0.0;  ///< barrier level (currency)
    double J_bar = 0.0;  ///< required excursion length (years)
    double T = 0.0;      ///< expiry (years)
    EmbeddedStyle embedded_style = EmbeddedStyle::American;

    void validate() const;
};

/// Point in the contract's state space: spot, calendar time, and elapsed excursion clock.
struct StatePoint {
    double S = 0.0;  ///< spot (currency)
    double t = 0.0;  ///< calendar time in [0, T]
    double J = 0.0;  ///< elapsed consecutive time below the barrier (years)

    void validate(const ParisianContract& c) const;
};

/// Dimensionless constants. Log-moneyness x = ln(S/K), prices scaled by K,
/// time scaled by sigma^2/2, gamma = 2r/sigma^2, q = 2D/sigma^2, k = gamma - q - 1.
struct DimlessParams {
    double gamma = 0.0;
    double q = 0.0;
    double k = 0.0;
    double x_bar = 0.0;    ///< ln(S_bar/K)
    double J_bar_d = 0.0;  ///< sigma^2 J_bar / 2
    double T_d = 0.0;      ///< sigma^2 T / 2

    /// tau-extent of the region-I problem (time-to-(T - J_bar), scaled).
    double horizon() const { return T_d - J_bar_d; }
};

/// Dimensionless coordinates of a state. Region-I points carry (x, tau) only; region-II
/// points additionally carry the slide coordinate l = sigma^2 J / 2 in [0, J_bar_d], with
/// tau evaluated at the slide base t - J.
struct DimlessState {
    double x = 0.0;
    double tau = 0.0;
    std::optional<double> l;  ///< absent for region I

    bool region2() const { return l.has_value(); }
};

enum class Degeneracy { NonDegenerate, Worthless, OneTouchLimit, VanillaAmericanLimit };

struct DegeneracyTag {
    Degeneracy variant = Degeneracy::NonDegenerate;
};

/// Cut-offs routing pathological contracts away from the numerical engine. All overridable.
struct ClassifierThresholds {
    double j_eps = 1e-10;         ///< years; J_bar below this is the one-touch limit
    double s_eps_factor = 1e-10;  ///< S_bar below this multiple of K is worthless
    double s_max_factor = 1e6;    ///< S_bar above this multiple of K is the vanilla limit
};

DimlessParams to_dimensionless(const MarketParams& mp, const ParisianContract& c);

/// Inverse of to_dimensionless given the scale anchors sigma and K.
void from_dimensionless(const DimlessParams& dp, double sigma, double K,
                        MarketParams& mp_out, ParisianContract& c_out);

/// Maps a state to dimensionless slide coordinates. Rejects J > J_bar (already knocked in;
/// the caller should price the embedded option directly).
DimlessState state_to_slide(const StatePoint& sp, const ParisianContract& c,
                            const DimlessParams& dp);

DegeneracyTag classify(const ParisianContract& c, const ClassifierThresholds& th = {});

const char* to_string(Degeneracy d);
const char* to_string(EmbeddedStyle s);

}  // namespace parisian

#endif
