#ifndef PARISIAN_SPLINE_HPP
#define PARISIAN_SPLINE_HPP

#include <cstddef>
#include <vector>

namespace parisian {

/// Natural cubic spline through (x_i, y_i), x strictly increasing. Provides value and first
/// derivative at arbitrary points inside [x_front, x_back]; queries outside are clamped to the
/// end intervals (linear continuation of the end cubic).
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double value(double x) const;
    double derivative(double x) const;

    bool empty() const { return x_.empty(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

private:
    std::size_t locate(double x) const;

    std::vector<double> x_, y_, m_;  // m_ = second derivatives at nodes
    bool uniform_ = false;
    double h0_ = 0.0;
};

}  // namespace parisian

#endif
