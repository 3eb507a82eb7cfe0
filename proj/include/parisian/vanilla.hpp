#ifndef PARISIAN_VANILLA_HPP
#define PARISIAN_VANILLA_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "parisian/model.hpp"

namespace parisian {

struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dimensionless European call: value K*C(x, theta) with x = ln(S/K) and theta the
/// sigma^2/2-scaled time to expiry.
double european_call_value(const DimlessParams& dp, double x, double theta);
/// d/dtheta of the above.
double european_call_theta(const DimlessParams& dp, double x, double theta);

struct SurfaceResolution {
    int n_x = 801;
    int n_tau = 401;
    double psor_omega = 1.5;
    double psor_tol = 1e-9;
    int psor_max_iter = 40000;
};

/// Critical log-moneyness of the American early-exercise boundary per tau node; entries are
/// NaN where no node is in the exercise region (e.g. q = 0).
struct ExerciseBoundary {
    std::vector<double> tau;
    std::vector<double> x_star;
};

/// Queryable embedded-option value surface C(x, theta) in payoff units (price / K), theta in
/// [0, T_d]. American surfaces come from a Crank-Nicolson + projected SOR solve with Rannacher
/// startup; European surfaces are filled from the closed form. Queries interpolate on the
/// 4x4-node stencil around the point and are exact at nodes; out-of-coverage queries throw.
class VanillaSurface {
public:
    static VanillaSurface build(const DimlessParams& dp, EmbeddedStyle style,
                                const SurfaceResolution& res = {});

    /// Wraps existing grid data (cache load, test fixtures).
    static VanillaSurface from_grid(const DimlessParams& dp, EmbeddedStyle style,
                                    std::vector<double> x, std::vector<double> tau,
                                    std::vector<double> values);

    double value_at(double x, double tau) const;
    double theta_at(double x, double tau) const;

    EmbeddedStyle style() const { return style_; }
    const DimlessParams& params() const { return dp_; }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    double tau_max() const { return tau_.back(); }
    const std::vector<double>& x_nodes() const { return x_; }
    const std::vector<double>& tau_nodes() const { return tau_; }
    const std::vector<double>& values() const { return v_; }
    const ExerciseBoundary& exercise_boundary() const { return boundary_; }

    /// Value in payoff units at a point possibly outside coverage: surface query inside,
    /// asymptotic continuation outside (payoff/European above, European below).
    double value_or_asymptotic(double x, double tau) const;

    void save(std::ostream& os) const;
    static VanillaSurface load(std::istream& is);

private:
    VanillaSurface() = default;

    double node(int ix, int it) const { return v_[static_cast<std::size_t>(it) * x_.size() + ix]; }

    EmbeddedStyle style_ = EmbeddedStyle::European;
    DimlessParams dp_;
    std::vector<double> x_, tau_, v_;  // v_[it * n_x + ix]
    ExerciseBoundary boundary_;
};

}  // namespace parisian

#endif
