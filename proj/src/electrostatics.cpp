#include "paddle/electrostatics.hpp"

#include "paddle/errors.hpp"
#include "paddle/kernels.hpp"

#include "bisect.hpp"

#include <cmath>
#include <sstream>

namespace paddle {

namespace {

// Linear gap under the paddle, gap(x) = g0 + slope*x for x in [0, l_p],
// measured from the paddle root.
struct GapProfile {
    double g0;
    double slope;
};

GapProfile gap_profile(double y_p, const ValidatedModel& m, Electrode e)
{
    const auto& g = m.geom();
    const double y_b = yb_from_yp(y_p, g);
    const double s = paddle_slope(y_b, g);
    if (e == Electrode::Top) return {g.d_c - y_b, -s};
    return {g.d_e + y_b, s};
}

// ln(1+u)/u, continuous through u = 0.
double log1p_ratio(double u)
{
    if (std::abs(u) < kNearFlatThreshold) return 1.0 + u * (-0.5 + u * (1.0 / 3.0 - 0.25 * u));
    return std::log1p(u) / u;
}

double direction(Electrode e)
{
    return e == Electrode::Top ? 1.0 : -1.0;
}

}  // namespace

double parallel_plate_capacitance(double area, double gap, const PhysicalConstants& k)
{
    if (!(gap > 0.0)) throw InvalidParameter("gap", "must be positive");
    if (!(area > 0.0)) throw InvalidParameter("area", "must be positive");
    return k.eps0 * area / gap;
}

CapacitanceReading paddle_capacitance(double y_p, const ValidatedModel& m, Electrode e)
{
    m.require_inside(y_p);
    const auto& g = m.geom();
    const auto p = gap_profile(y_p, m, e);
    const double u = p.slope * g.l_p / p.g0;
    const double C = m.constants().eps0 * g.w_p * g.l_p / p.g0 * log1p_ratio(u);
    return {C, e};
}

double paddle_capacitance_quadrature(double y_p, const ValidatedModel& m, Electrode e, std::size_t panels)
{
    if (panels < 2) throw InvalidParameter("panels", "need at least 2 panels");
    m.require_inside(y_p);
    const auto p = gap_profile(y_p, m, e);
    const auto integrals = kernels::omp::trapezoid_gap_integrals(p.g0, p.slope, m.geom().l_p, panels);
    return m.constants().eps0 * m.geom().w_p * integrals.inv_gap;
}

ForcePerV2 electrostatic_force_per_v2(double y_p, const ValidatedModel& m, Electrode e)
{
    m.require_inside(y_p);
    const auto& g = m.geom();
    const auto p = gap_profile(y_p, m, e);
    // integral_0^l dx/(g0 + s x)^2 = l / (g0 * (g0 + s l)); equal to the
    // difference-of-reciprocals form divided by s, without the 0/0 at s = 0.
    const double g1 = p.g0 + p.slope * g.l_p;
    const double magnitude = 0.5 * m.constants().eps0 * g.w_p * g.l_p / (p.g0 * g1);
    return {direction(e) * magnitude, e};
}

double electrostatic_force_quadrature(double y_p, const ValidatedModel& m, Electrode e, std::size_t panels)
{
    if (panels < 2) throw InvalidParameter("panels", "need at least 2 panels");
    m.require_inside(y_p);
    const auto p = gap_profile(y_p, m, e);
    const auto integrals = kernels::omp::trapezoid_gap_integrals(p.g0, p.slope, m.geom().l_p, panels);
    return direction(e) * 0.5 * m.constants().eps0 * m.geom().w_p * integrals.inv_gap_sq;
}

CapacitanceRange invertible_range(const ValidatedModel& m, Electrode e)
{
    const auto& t = m.touch();
    const double lo = t.y_p_min * (1.0 - kInversionMargin);
    const double hi = t.y_p_max * (1.0 - kInversionMargin);
    const double c_lo = paddle_capacitance(lo, m, e).C;
    const double c_hi = paddle_capacitance(hi, m, e).C;
    if (e == Electrode::Top) return {c_lo, c_hi, lo, hi};
    return {c_hi, c_lo, lo, hi};
}

double yp_from_capacitance(double C, const ValidatedModel& m, Electrode e)
{
    const auto range = invertible_range(m, e);
    if (!(C >= range.C_min && C <= range.C_max)) {
        std::ostringstream os;
        os << "capacitance " << C << " F is outside the invertible range [" << range.C_min << ", "
           << range.C_max << "] F for the " << to_string(e) << " electrode";
        throw OutOfRange(os.str());
    }

    return detail::bisect([&](double y) { return paddle_capacitance(y, m, e).C - C; }, range.y_p_lo,
                          range.y_p_hi);
}

}  // namespace paddle
