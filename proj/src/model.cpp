#include "paddle/model.hpp"

#include "paddle/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace paddle {

std::string_view to_string(Electrode e) noexcept
{
    return e == Electrode::Top ? "top" : "bottom";
}

Electrode electrode_from_string(std::string_view s)
{
    if (s == "top") return Electrode::Top;
    if (s == "bottom") return Electrode::Bottom;
    throw InvalidParameter("electrode", "expected 'top' or 'bottom', got '" + std::string(s) + "'");
}

double yb_from_yp(double y_p, const PaddleGeometry& g) noexcept
{
    return y_p / (1.0 + g.l_p / g.l_b);
}

double yp_from_yb(double y_b, const PaddleGeometry& g) noexcept
{
    return y_b * (1.0 + g.l_p / g.l_b);
}

double paddle_slope(double y_b, const PaddleGeometry& g) noexcept
{
    return 2.0 * y_b / g.l_b;
}

TouchLimits touch_limits(const PaddleGeometry& g) noexcept
{
    // Far edge at y_b*(1 + 2 l_p/l_b) reaches the electrode gap.
    const double center = 1.0 + g.l_p / g.l_b;
    const double edge = 1.0 + 2.0 * g.l_p / g.l_b;
    return {-g.d_e * center / edge, g.d_c * center / edge};
}

DeflectionState DeflectionState::from_yp(double y_p, const PaddleGeometry& g) noexcept
{
    const double y_b = yb_from_yp(y_p, g);
    return {y_p, y_b, paddle_slope(y_b, g), y_b * (1.0 + 2.0 * g.l_p / g.l_b)};
}

namespace {

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "must be positive and finite (got " << v << ")";
        throw InvalidParameter(name, os.str());
    }
}

}  // namespace

ValidatedModel validate_model(const PaddleModel& m)
{
    require_positive(m.constants.eps0, "eps0");

    const auto& g = m.geom;
    require_positive(g.l_b, "l_b");
    require_positive(g.l_p, "l_p");
    require_positive(g.w_p, "w_p");
    require_positive(g.t_b, "t_b");
    require_positive(g.b_root, "b_root");
    require_positive(g.d_c, "d_c");
    require_positive(g.d_e, "d_e");
    if (g.t_b >= g.d_c) throw InvalidParameter("t_b", "beam must be thinner than the capacitor gap d_c");

    require_positive(m.substrate.E_biaxial, "E_biaxial");
    require_positive(m.substrate.K, "K");

    require_positive(m.film.E_F, "E_F");
    require_positive(m.film.A_F, "A_F");
    if (!(m.film.t_F >= 0.0) || !std::isfinite(m.film.t_F))
        throw InvalidParameter("t_F", "must be nonnegative and finite");
    if (!std::isfinite(m.film.sigma0)) throw InvalidParameter("sigma0", "must be finite");

    return ValidatedModel(m);
}

ValidatedModel::ValidatedModel(const PaddleModel& m)
    : model_(m),
      eps_F0_(m.film.initial_strain()),
      film_volume_(m.film.volume()),
      touch_(touch_limits(m.geom))
{
}

void ValidatedModel::require_inside(double y_p) const
{
    if (!touch_.contains(y_p)) {
        std::ostringstream os;
        os << "paddle deflection y_p = " << y_p << " m is outside the open touch window ("
           << touch_.y_p_min << ", " << touch_.y_p_max << ")";
        throw TouchViolation(os.str());
    }
}

}  // namespace paddle
