#ifndef PARISIAN_PDE_HPP
#define PARISIAN_PDE_HPP

#include <iosfwd>
#include <vector>

#include "parisian/model.hpp"
#include "parisian/vanilla.hpp"

namespace parisian {

struct PdeResolution {
    int n_x = 401;    ///< nodes per region (shared spacing, barrier node shared exactly)
    int n_tau = 400;  ///< time steps across the region-I horizon
    int n_j = 80;     ///< clock cells in region II
    double trace_tol = 1e-8;
    int max_sweeps = 200;
};

/// Barrier value used for slides whose touches fall beyond the region-I horizon. `Vanilla`
/// matches the published window convention; `Zero` is the worthless continuation.
enum class PdePreHistory { Vanilla, Zero };

struct PdeConfig {
    PdeResolution res;
    PdePreHistory pre_history = PdePreHistory::Vanilla;
    std::vector<double> snapshot_taus;  ///< region-II fields to retain (horizon always kept)
};

/// Direct time-marched solution of the coupled region-I/region-II systems on dimensionless
/// grids: first-order implicit upwinding in the clock, implicit centered differences in x,
/// regions joined each step by fixed-point sweeps on the shared barrier trace. The interface
/// delta condition is not imposed; the merged barrier-row discretization lets it emerge, and
/// the residual is reported as a diagnostic.
class PdeSolution {
public:
    static PdeSolution solve_coupled(const MarketParams& mp, const ParisianContract& c,
                                     const PdeConfig& cfg, const VanillaSurface* surface);

    /// Barrier trace W(tau) at J = 0; covers [0, horizon]. Linear interpolation between steps.
    double trace_at(double tau) const;
    /// Extended trace including the pre-history segment tau in [-J_bar_d, 0).
    const std::vector<double>& trace_taus() const { return trace_taus_; }
    const std::vector<double>& trace() const { return trace_; }

    /// Region-I field value (cubic in x, linear in tau).
    double value_region1(double x, double tau) const;
    /// Region-II field value at a retained snapshot tau (exact step match required).
    double value_region2(double x, double tau, double j) const;

    double horizon() const { return horizon_; }
    double connectivity_residual_max() const { return conn_resid_max_; }
    double max_principle_violation() const { return max_principle_violation_; }
    const std::vector<double>& x1() const { return x1_; }
    const std::vector<double>& x2() const { return x2_; }

    /// Axes + fields in the shared container format.
    void dump(std::ostream& os) const;

private:
    PdeSolution() = default;

    double horizon_ = 0.0;
    double j_bar_d_ = 0.0;
    std::vector<double> x1_, x2_, jgrid_, taus_;   // taus_: phase-B steps, 0..horizon
    std::vector<double> trace_taus_, trace_;       // includes pre-history
    std::vector<double> v1_;                       // [it * n_x1 + ix]
    std::vector<double> snapshot_taus_;
    std::vector<std::vector<double>> v2_snapshots_;  // each [jlevel * n_x2 + ix]
    double conn_resid_max_ = 0.0;
    double max_principle_violation_ = 0.0;
};

}  // namespace parisian

#endif
