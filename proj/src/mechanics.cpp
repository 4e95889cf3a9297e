#include "paddle/mechanics.hpp"

#include "paddle/electrostatics.hpp"
#include "paddle/errors.hpp"
#include "paddle/kernels.hpp"

#include "bisect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace paddle {

double bending_stress(double P, double x, double width, double thickness)
{
    if (!(width > 0.0)) throw InvalidParameter("width", "must be positive");
    if (!(thickness > 0.0)) throw InvalidParameter("thickness", "must be positive");
    return 6.0 * P * x / (width * thickness * thickness);
}

StressProfile stress_profile(double P, const PaddleGeometry& g, BeamPlan plan, std::size_t n,
                             double start_fraction)
{
    if (n < 2) throw InvalidParameter("n", "need at least 2 samples");
    if (!(start_fraction > 0.0 && start_fraction < 1.0))
        throw InvalidParameter("start_fraction", "must lie in (0, 1)");

    StressProfile profile;
    profile.samples.reserve(n);
    const double x0 = start_fraction * g.l_b;
    const double x1 = g.l_b;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        const double x = x0 * (1.0 - t) + x1 * t;
        const double width = plan == BeamPlan::Triangular ? g.b_root * x / g.l_b : g.b_root;
        const double sigma = bending_stress(P, x, width, g.t_b);
        profile.samples.push_back({x, sigma});
        lo = std::min(lo, std::abs(sigma));
        hi = std::max(hi, std::abs(sigma));
    }
    profile.uniformity = hi == 0.0 ? 1.0 : hi / lo;
    return profile;
}

double compliance(const ValidatedModel& m)
{
    const auto& g = m.geom();
    const auto& s = m.substrate();
    return 6.0 * g.l_b * (g.l_b + g.l_p) / (s.E_biaxial * s.K * g.t_b * g.t_b * g.t_b);
}

double film_strain_gradient(const PaddleGeometry& g) noexcept
{
    return g.t_b / (g.l_b * (g.l_b + g.l_p));
}

double film_force(double y_p, const ValidatedModel& m)
{
    const double a = film_strain_gradient(m.geom());
    const double stiffness_volume = m.film().E_F * m.film_volume();
    return stiffness_volume * a * (m.eps_F0() - a * y_p);
}

ForceBreakdown total_force(double y_p, double V_top, double V_bottom, const ValidatedModel& m)
{
    m.require_inside(y_p);
    ForceBreakdown b;
    b.F_film = film_force(y_p, m);
    b.F_beam = -y_p / compliance(m);
    if (V_top != 0.0) b.F_elec_top = electrostatic_force_per_v2(y_p, m, Electrode::Top).f * V_top * V_top;
    if (V_bottom != 0.0)
        b.F_elec_bottom = electrostatic_force_per_v2(y_p, m, Electrode::Bottom).f * V_bottom * V_bottom;
    b.F_total = b.F_film + b.F_beam + b.F_elec_top + b.F_elec_bottom;
    return b;
}

double zero_voltage_equilibrium(const ValidatedModel& m)
{
    const double a = film_strain_gradient(m.geom());
    const double stiffness_volume = m.film().E_F * m.film_volume();
    return stiffness_volume * a * m.eps_F0() / (stiffness_volume * a * a + 1.0 / compliance(m));
}

EquilibriumSolution solve_equilibrium(const ValidatedModel& m, double V_top, double V_bottom)
{
    const auto force = [&](double y) { return total_force(y, V_top, V_bottom, m).F_total; };

    const auto& t = m.touch();
    const double lo = t.y_p_min * (1.0 - kEquilibriumScanMargin);
    const double hi = t.y_p_max * (1.0 - kEquilibriumScanMargin);
    const std::size_t n = kEquilibriumScanPoints;
    const auto node = [&](std::size_t i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        return lo * (1.0 - s) + hi * s;
    };

    const double target = zero_voltage_equilibrium(m);
    std::optional<double> best;
    double y_prev = node(0);
    double f_prev = force(y_prev);
    for (std::size_t i = 1; i < n; ++i) {
        const double y = node(i);
        const double f = force(y);
        // A stable zero is a +/- crossing with increasing y.
        if (f_prev >= 0.0 && f < 0.0) {
            const double root = detail::bisect(force, y_prev, y);
            if (!best || std::abs(root - target) < std::abs(*best - target)) best = root;
        }
        y_prev = y;
        f_prev = f;
    }

    if (!best) {
        std::ostringstream os;
        os << "no stable equilibrium at V_top = " << V_top << " V, V_bottom = " << V_bottom << " V";
        throw NoStableEquilibrium(os.str());
    }

    EquilibriumSolution sol;
    sol.y_p = *best;
    sol.breakdown = total_force(sol.y_p, V_top, V_bottom, m);
    sol.residual = sol.breakdown.F_total;
    sol.C_top = paddle_capacitance(sol.y_p, m, Electrode::Top).C;

    constexpr double step = 1e-9;
    const double y_minus = std::max(sol.y_p - step, lo);
    const double y_plus = std::min(sol.y_p + step, hi);
    sol.stable = (force(y_plus) - force(y_minus)) / (y_plus - y_minus) < 0.0;
    return sol;
}

EquilibriumSolution solve_equilibrium(const ValidatedModel& m, Electrode e, double V)
{
    return e == Electrode::Top ? solve_equilibrium(m, V, 0.0) : solve_equilibrium(m, 0.0, V);
}

namespace {

bool has_stable_equilibrium(const ValidatedModel& m, Electrode e, double V)
{
    try {
        solve_equilibrium(m, e, V);
        return true;
    } catch (const NoStableEquilibrium&) {
        return false;
    }
}

}  // namespace

PullIn pull_in_voltage(const ValidatedModel& m, Electrode e)
{
    solve_equilibrium(m, e, 0.0);

    // Lumped parallel-plate estimate as the first upper bracket.
    const auto& g = m.geom();
    const double a = film_strain_gradient(g);
    const double stiffness = 1.0 / compliance(m) + m.film().E_F * m.film_volume() * a * a;
    const double gap = e == Electrode::Top ? g.d_c : g.d_e;
    double hi = std::sqrt(8.0 * stiffness * gap * gap * gap / (27.0 * m.constants().eps0 * g.w_p * g.l_p));
    double lo = 0.0;
    while (has_stable_equilibrium(m, e, hi)) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw NoStableEquilibrium("pull-in voltage bracket diverged");
    }

    while (hi - lo > kPullInRelativeTolerance * hi) {
        const double mid = 0.5 * (lo + hi);
        if (has_stable_equilibrium(m, e, mid))
            lo = mid;
        else
            hi = mid;
    }
    return {hi, lo, solve_equilibrium(m, e, lo).y_p};
}

namespace {

template <class ForEach>
SweepResult run_sweep(const ValidatedModel& m, Electrode e, std::span<const double> voltages, ForEach&& for_each)
{
    if (voltages.empty()) throw InvalidParameter("V_list", "must not be empty");
    for (double v : voltages)
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter("V_list", "voltages must be nonnegative");

    std::vector<double> sorted(voltages.begin(), voltages.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::optional<EquilibriumSolution>> solutions(sorted.size());
    for_each(sorted.size(), [&](std::size_t i) {
        try {
            solutions[i] = solve_equilibrium(m, e, sorted[i]);
        } catch (const NoStableEquilibrium&) {
        }
    });

    SweepResult result;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!solutions[i]) {
            result.truncated = true;
            result.first_unstable_V = sorted[i];
            break;
        }
        const auto& s = *solutions[i];
        result.records.push_back({sorted[i], s.y_p, s.C_top, s.breakdown});
    }
    return result;
}

}  // namespace

SweepResult sweep_voltage(const ValidatedModel& m, Electrode e, std::span<const double> voltages)
{
    return run_sweep(m, e, voltages, [](std::size_t n, auto&& fn) { kernels::omp::for_each_index(n, fn); });
}

SweepResult sweep_voltage_serial(const ValidatedModel& m, Electrode e, std::span<const double> voltages)
{
    return run_sweep(m, e, voltages, [](std::size_t n, auto&& fn) { kernels::serial::for_each_index(n, fn); });
}

}  // namespace paddle
