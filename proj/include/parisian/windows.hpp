#ifndef PARISIAN_WINDOWS_HPP
#define PARISIAN_WINDOWS_HPP

#include <array>
#include <iosfwd>
#include <memory>
#include <vector>

#include "parisian/kernels.hpp"
#include "parisian/model.hpp"
#include "parisian/quadrature.hpp"
#include "parisian/spline.hpp"
#include "parisian/vanilla.hpp"

namespace parisian {

/// Memory used by the first-window solve for barrier values before the region-I start.
/// `Vanilla` samples the embedded option on the barrier (the published convention);
/// `Zero` uses the worthless continuation (diagnostic mode, see README).
enum class FirstWindowMemory { Vanilla, Zero };

struct WindowConfig {
    int samples_per_window = 64;  ///< M; each window stores M+1 equispaced samples
    QuadratureConfig quad{1e-12, 1e-6, 4000, 16};
    FirstWindowMemory first_window_memory = FirstWindowMemory::Vanilla;
};

/// One solved window of the barrier function W: M+1 equispaced tau samples with a natural
/// cubic spline, plus the per-node term decomposition for diagnosis. Window 0 covers
/// [-J_bar_d, 0] (the pre-history); window n >= 1 covers [(n-1) J_bar_d, n J_bar_d].
struct WindowFunction {
    int index = 0;
    double tau_lo = 0.0;
    double tau_hi = 0.0;
    std::vector<double> taus;
    std::vector<double> values;
    std::vector<std::array<double, 5>> terms;  ///< per-node contributions, zero-filled for W0
    double quad_error = 0.0;                   ///< max accumulated estimate over nodes
    CubicSpline spline;

    double value(double tau) const { return spline.value(tau); }
    double deriv(double tau) const { return spline.derivative(tau); }
};

/// Solves and stores the barrier function window by window, exposing the composite W and its
/// derivative for the kernel integrals and the pricer.
class WindowSet {
public:
    WindowSet(std::shared_ptr<const VanillaSurface> surface, const DimlessParams& dp,
              const WindowConfig& cfg = {});

    /// Ensures W is solved on [0, min(tau, horizon)].
    void solve_to(double tau);

    double horizon() const { return horizon_; }
    double solved_up_to() const;
    int solved_windows() const { return static_cast<int>(windows_.size()) - 1; }

    /// Composite barrier value; tau in [-J_bar_d, solved_up_to()]. Queries below 0 return the
    /// configured pre-history.
    double value(double tau) const;
    double deriv(double tau) const;

    const WindowFunction& window(int n) const { return windows_.at(n); }
    const KernelParams& kernel_params() const { return kp_; }
    const VanillaSurface& surface() const { return *surface_; }
    const WindowConfig& config() const { return cfg_; }

    /// Window joins in (0, up_to), for use as integration breakpoints.
    std::vector<double> joins(double up_to) const;

    /// f_n(x) = V1(x, n J_bar_d) for the multi-window systems.
    double f_n(int n, double x) const;

    /// Both sides of the connectivity condition at the barrier, evaluated analytically from
    /// the solved W (the one-sided flux limits of the layer representations). Their gap is the
    /// integral-equation residual of the solve.
    struct FluxPair {
        double lhs = 0.0;  ///< region-I side
        double rhs = 0.0;  ///< region-II side
        double error = 0.0;
        double residual() const { return lhs - rhs; }
        double scale() const;
    };
    FluxPair connectivity_residual(double tau) const;

    /// Writes one CSV row per node of each solved window: tau, W, term1..term5.
    void dump_csv(std::ostream& os) const;

private:
    double u0_value(int n, double arg) const;  ///< U_0 for window n+1 solve (arg in [-J̄, 0])
    double u0_deriv(int n, double arg) const;
    WindowFunction solve_window(int n_prev);  ///< builds window n_prev + 1

    std::shared_ptr<const VanillaSurface> surface_;
    DimlessParams dp_;
    KernelParams kp_;
    WindowConfig cfg_;
    double horizon_ = 0.0;
    std::vector<WindowFunction> windows_;  // windows_[0] = W0
};

/// Builds the pre-history window W0(tau) = C(x_bar, tau + J_bar_d) on [-J_bar_d, 0].
WindowFunction solve_W0(const VanillaSurface& surface, const DimlessParams& dp,
                        int samples_per_window);

}  // namespace parisian

#endif
