#include "paddle/kernels.hpp"

#include <algorithm>
#include <array>

namespace paddle::kernels::omp {

namespace {
constexpr std::size_t kBlocks = 256;
}

GapIntegrals trapezoid_gap_integrals(double g0, double slope, double length, std::size_t panels)
{
    const double h = length / static_cast<double>(panels);
    const double first = 1.0 / g0;
    const double last = 1.0 / (g0 + slope * length);

    // Interior nodes 1 .. panels-1, split into contiguous blocks.
    const std::size_t interior = panels - 1;
    const std::size_t per_block = (interior + kBlocks - 1) / kBlocks;
    std::array<double, kBlocks> part_inv{};
    std::array<double, kBlocks> part_inv_sq{};

#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(kBlocks); ++b) {
        const std::size_t begin = 1 + static_cast<std::size_t>(b) * per_block;
        const std::size_t end = std::min(begin + per_block, panels);
        double s1 = 0.0;
        double s2 = 0.0;
#pragma omp simd reduction(+ : s1, s2)
        for (std::size_t i = begin; i < end; ++i) {
            const double inv = 1.0 / (g0 + slope * (static_cast<double>(i) * h));
            s1 += inv;
            s2 += inv * inv;
        }
        part_inv[static_cast<std::size_t>(b)] = s1;
        part_inv_sq[static_cast<std::size_t>(b)] = s2;
    }

    double sum_inv = 0.5 * (first + last);
    double sum_inv_sq = 0.5 * (first * first + last * last);
    for (std::size_t b = 0; b < kBlocks; ++b) {
        sum_inv += part_inv[b];
        sum_inv_sq += part_inv_sq[b];
    }
    return {sum_inv * h, sum_inv_sq * h};
}

}  // namespace paddle::kernels::omp
