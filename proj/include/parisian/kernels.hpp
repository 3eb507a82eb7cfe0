#ifndef PARISIAN_KERNELS_HPP
#define PARISIAN_KERNELS_HPP

#include <functional>
#include <vector>

#include "parisian/model.hpp"
#include "parisian/quadrature.hpp"
#include "parisian/vanilla.hpp"

namespace parisian {

/// Constants shared by every kernel evaluation for one contract.
struct KernelParams {
    double k = 0.0;
    double gamma = 0.0;
    double x_bar = 0.0;
    double j_bar = 0.0;  ///< dimensionless window length J_bar_d
    double c = 0.0;      ///< k^2/4 + gamma, the decay constant

    static KernelParams from(const DimlessParams& dp);
};

/// Barrier-flux kernel g1(x, tau) = (x-x_bar)/(2 sqrt(pi) tau^{3/2}) *
/// exp(-c*tau - (x-x_bar)^2/(4 tau) - (k/2)(x-x_bar)).
double g1(const KernelParams& kp, double x, double tau);
/// g2 = -g1 exactly.
double g2(const KernelParams& kp, double x, double tau);

/// Boundary data for a layer potential, as a function of the kernel's own time argument.
using TimeFn = std::function<double(double)>;
using SpaceFn = std::function<double(double)>;

/// Convolution of boundary data w against g1 in time:
///   integral_0^L w(s) * |g1|(x, L - s) ds
/// evaluated in the variable u = |x-x_bar| / (2 sqrt(L-s)), which removes the endpoint
/// singularity and makes the integral exact down to x = x_bar (where it returns w(L-)).
/// Used for V1 (x > x_bar, data U), V2 (x < x_bar, data W(tau-J+.), kernel g2) and f_n.
/// `breaks` lists s-values where w has kinks (window joins).
IntegralResult layer_potential(const KernelParams& kp, double x, double L, const TimeFn& w,
                               const std::vector<double>& breaks, const QuadratureConfig& cfg);

/// x-derivative of the layer potential (analytic differentiation under the integral).
/// Accurate away from the barrier; near-barrier callers should finite-difference values.
IntegralResult layer_potential_dx(const KernelParams& kp, double x, double L, const TimeFn& w,
                                  const std::vector<double>& breaks,
                                  const QuadratureConfig& cfg);

/// F(x, l; tau): method-of-images convolution of the embedded-option slice C(., tau) over
/// z in (-infty, x_bar], with drift and decay factors. Vanishes at x = x_bar.
IntegralResult kernel_F(const KernelParams& kp, double x, double l, double tau,
                        const VanillaSurface& surface, const QuadratureConfig& cfg);

/// d/dx of F at (x, l; tau).
IntegralResult kernel_F_dx(const KernelParams& kp, double x, double l, double tau,
                           const VanillaSurface& surface, const QuadratureConfig& cfg);

/// G(x, tau_t): image convolution of f over [x_bar, +infty) (mirror of F).
/// `f_width` bounds the spatial decay scale of f for tail truncation.
IntegralResult kernel_G(const KernelParams& kp, double x, double tau_t, const SpaceFn& f,
                        double f_width, const QuadratureConfig& cfg);

/// d/dx of G.
IntegralResult kernel_G_dx(const KernelParams& kp, double x, double tau_t, const SpaceFn& f,
                           double f_width, const QuadratureConfig& cfg);

/// First term of the multi-window barrier solution: direct-Gaussian half-space average of f
/// at the barrier (no image term),
///   integral_{x_bar}^{inf} e^{-(k/2)(x_bar-z) - c*tau_t - (x_bar-z)^2/(4 tau_t)}
///                          / (2 sqrt(pi tau_t)) * f(z) dz.
IntegralResult half_space_average(const KernelParams& kp, double tau_t, const SpaceFn& f,
                                  double f_width, const QuadratureConfig& cfg);

/// f_n(x) = V1(x, n*j_bar): layer potential of the solved barrier function over [0, n*j_bar].
/// `w` is the composite barrier function, `joins` its window joins in (0, n*j_bar).
IntegralResult f_n_value(const KernelParams& kp, double x, double n_jbar, const TimeFn& w,
                         const std::vector<double>& joins, const QuadratureConfig& cfg);

}  // namespace parisian

#endif
