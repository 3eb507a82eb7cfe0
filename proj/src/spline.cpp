#include "parisian/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parisian {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n != y_.size() || n < 2) throw std::invalid_argument("CubicSpline: need >= 2 nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("CubicSpline: x not increasing");

    h0_ = x_[1] - x_[0];
    uniform_ = true;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (std::fabs((x_[i + 1] - x_[i]) - h0_) > 1e-12 * std::max(1.0, std::fabs(h0_))) {
            uniform_ = false;
            break;
        }
    }

    m_.assign(n, 0.0);
    if (n == 2) return;  // natural spline of 2 points is the straight line

    // Tridiagonal solve for interior second derivatives, natural ends m_0 = m_{n-1} = 0.
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sup(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (hl + hr);
        sup[i] = hr;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double w = hl / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::locate(double x) const {
    const std::size_t n = x_.size();
    if (uniform_) {
        double f = (x - x_[0]) / h0_;
        long i = static_cast<long>(std::floor(f));
        if (i < 0) i = 0;
        if (i > static_cast<long>(n) - 2) i = static_cast<long>(n) - 2;
        return static_cast<std::size_t>(i);
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    long i = static_cast<long>(it - x_.begin()) - 1;
    if (i < 0) i = 0;
    if (i > static_cast<long>(n) - 2) i = static_cast<long>(n) - 2;
    return static_cast<std::size_t>(i);
}

double CubicSpline::value(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

}  // namespace parisian
