#include "paddle/kernels.hpp"

namespace paddle::kernels::serial {

GapIntegrals trapezoid_gap_integrals(double g0, double slope, double length, std::size_t panels)
{
    const double h = length / static_cast<double>(panels);
    const double first = 1.0 / g0;
    const double last = 1.0 / (g0 + slope * length);

    double sum_inv = 0.5 * (first + last);
    double sum_inv_sq = 0.5 * (first * first + last * last);
    for (std::size_t i = 1; i < panels; ++i) {
        const double inv = 1.0 / (g0 + slope * (static_cast<double>(i) * h));
        sum_inv += inv;
        sum_inv_sq += inv * inv;
    }
    return {sum_inv * h, sum_inv_sq * h};
}

}  // namespace paddle::kernels::serial
