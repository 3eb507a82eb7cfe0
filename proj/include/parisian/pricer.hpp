#ifndef PARISIAN_PRICER_HPP
#define PARISIAN_PRICER_HPP

#include <memory>
#include <optional>
#include <vector>

#include "parisian/model.hpp"
#include "parisian/vanilla.hpp"
#include "parisian/windows.hpp"

namespace parisian {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Region { I, II, KnockedIn, Degenerate };

struct PriceResult {
    double price = 0.0;              ///< currency
    double dimensionless_value = 0.0;
    Region region = Region::I;
    Degeneracy degeneracy = Degeneracy::NonDegenerate;
    int windows_used = 0;
    double quadrature_error_estimate = 0.0;
    std::optional<double> delta;     ///< dPrice/dS when requested
};

struct EngineConfig {
    SurfaceResolution surface;
    WindowConfig window;
    QuadratureConfig quad{1e-12, 1e-8, 4000, 16};  ///< assembly integrals (V1/V2 layers, F, G)
    ClassifierThresholds thresholds;
    double fd_step_rel = 0.02;  ///< one-sided FD step near the barrier, in units of sqrt(2 J')
};

const char* to_string(Region r);

/// Prices Parisian down-and-in calls at arbitrary state points from one shared window solve.
class PricingEngine {
public:
    PricingEngine(const MarketParams& mp, const ParisianContract& c,
                  const EngineConfig& cfg = {});

    PriceResult price(const StatePoint& sp) const;
    PriceResult price_with_delta(const StatePoint& sp) const;
    double delta(const StatePoint& sp) const;

    /// Vectorized pricing over spot values at fixed (t, J), reusing the window solve.
    std::vector<PriceResult> price_surface(const std::vector<double>& spots, double t,
                                           double J, bool with_delta = false) const;

    /// Dimensionless field values, exposed for oracle comparisons and the acceptance suite.
    double value_region1(double x, double tau) const;
    double value_region2(double x, double l_kernel, double tau_base) const;

    /// One-sided x-derivatives of the two fields at the barrier (Richardson one-sided FD
    /// anchored on the shared boundary value W(tau)); their agreement is the connectivity
    /// condition on the assembled solution.
    struct BarrierDeltas {
        double region1 = 0.0;
        double region2 = 0.0;
    };
    BarrierDeltas barrier_deltas(double tau) const;

    const DimlessParams& dimless() const { return dp_; }
    const VanillaSurface& surface() const { return *surface_; }
    WindowSet& windows() const { return *windows_; }
    const ParisianContract& contract() const { return contract_; }
    const MarketParams& market() const { return market_; }
    DegeneracyTag degeneracy() const { return tag_; }

private:
    double region1_dx(double x, double tau) const;
    double region2_dx(double x, double l_kernel, double tau_base) const;
    int active_window(double tau) const;

    MarketParams market_;
    ParisianContract contract_;
    EngineConfig cfg_;
    DimlessParams dp_;
    KernelParams kp_;
    DegeneracyTag tag_;
    std::shared_ptr<const VanillaSurface> surface_;
    std::unique_ptr<WindowSet> windows_;
    double half_var_ = 0.0;
};

}  // namespace parisian

#endif
