#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp; tests hold the two to
// each other and bench/ compares their throughput.

#include <cstddef>
#include <exception>
#include <mutex>

namespace paddle::kernels {

/// Integrals of 1/gap and 1/gap^2 over [0, length] for the linear gap
/// profile gap(x) = g0 + slope*x.
struct GapIntegrals {
    double inv_gap;
    double inv_gap_sq;
};

namespace serial {

/// Composite trapezoid rule with `panels` equal panels. Requires the gap to
/// stay positive on the closed interval.
GapIntegrals trapezoid_gap_integrals(double g0, double slope, double length, std::size_t panels);

template <class Fn>
void for_each_index(std::size_t n, Fn&& fn)
{
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace serial

namespace omp {

/// Same rule as serial::trapezoid_gap_integrals. The panel range is cut into
/// a fixed number of blocks summed in index order, so the result does not
/// depend on the thread count.
GapIntegrals trapezoid_gap_integrals(double g0, double slope, double length, std::size_t panels);

/// Runs fn(i) for i in [0, n) across threads. The first exception thrown by
/// any iteration is rethrown after the loop.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn)
{
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace omp

}  // namespace paddle::kernels
