#ifndef PARISIAN_NORMAL_HPP
#define PARISIAN_NORMAL_HPP

#include <cmath>

namespace parisian {

inline double norm_pdf(double x) {
    return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

}  // namespace parisian

#endif
