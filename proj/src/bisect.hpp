#pragma once

#include <cmath>

namespace paddle::detail {

/// Bisection on a bracket [lo, hi] where f(lo) and f(hi) have opposite
/// signs. Runs to adjacent doubles (or a 1e-30 wide bracket near zero) and returns the
/// endpoint with the smaller |f|.
template <class F>
double bisect(F&& f, double lo, double hi)
{
    double f_lo = f(lo);
    double f_hi = f(hi);
    const bool rising = f_lo < f_hi;
    for (int iter = 0; iter < 400 && hi - lo > 1e-30; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == rising) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

}  // namespace paddle::detail
