#ifndef PARISIAN_QUADRATURE_HPP
#define PARISIAN_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parisian {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 4000;  ///< panel budget per integral
    int gauss_order = 16;         ///< points per panel, >= 2

    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;  ///< conservative estimate bounding the true error
    int panels = 0;

    IntegralResult& operator+=(const IntegralResult& o) {
        value += o.value;
        error += o.error;
        panels += o.panels;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

/// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by Newton iteration on
/// the Legendre recurrence.
const std::vector<double>& gauss_nodes(int order);
const std::vector<double>& gauss_weights(int order);

/// Adaptive Gauss-Legendre over [a, b] (a <= b), bisecting until each panel's whole-vs-halves
/// discrepancy fits its share of the tolerance. f must be finite on the open interval.
IntegralResult integrate_adaptive(const Integrand& f, double a, double b,
                                  const QuadratureConfig& cfg = {});

/// Same, but with interior breakpoints (kinks of f) made panel boundaries up front.
IntegralResult integrate_adaptive_split(const Integrand& f, double a, double b,
                                        const std::vector<double>& breakpoints,
                                        const QuadratureConfig& cfg = {});

enum class SingularEnd { Lower, Upper };

/// Integrates f over [a, b] where f carries an integrable 1/sqrt singularity at one end.
/// The substitution u = sqrt(distance to the singular end) removes it; f itself is evaluated
/// only strictly inside (a, b).
IntegralResult integrate_sqrt_singular(const Integrand& f, double a, double b,
                                       SingularEnd singular_end,
                                       const QuadratureConfig& cfg = {});

enum class TailDirection { TowardPlusInfinity, TowardMinusInfinity };

/// Describes Gaussian decay |f(z)| <~ M exp(-(z-center)^2 / (2 sd^2)) for tail truncation.
struct GaussianTail {
    double center = 0.0;
    double sd = 1.0;           ///< one standard deviation of the decay envelope
    double n_sd = 10.0;        ///< truncation distance in standard deviations
    double hard_limit_lo = -1e306;  ///< never integrate below this (e.g. data coverage)
    double hard_limit_hi = 1e306;
};

/// Integrates f from the finite endpoint a toward +/- infinity, truncating where the Gaussian
/// envelope makes the remaining mass negligible. The analytic tail bound (Mills ratio at the
/// cut, envelope scale estimated from |f| at the cut) is folded into the error estimate.
IntegralResult integrate_gaussian_tail(const Integrand& f, double a, TailDirection direction,
                                       const GaussianTail& tail,
                                       const QuadratureConfig& cfg = {});

/// Specification of the outer rule of a nested double integral.
struct OuterSpec {
    double a = 0.0;
    double b = 0.0;
    bool sqrt_singular = false;
    SingularEnd singular_end = SingularEnd::Upper;
};

/// Nested 2-D integration: each outer node evaluates one inner integral (returned with its own
/// error estimate); inner errors propagate through the outer weights into the combined estimate.
IntegralResult integrate_2d_nested(const OuterSpec& outer,
                                   const std::function<IntegralResult(double)>& inner,
                                   const QuadratureConfig& cfg = {});

}  // namespace parisian

#endif
