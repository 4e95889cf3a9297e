#pragma once

// Physical parameters of the paddle cantilever test structure and the
// kinematics linking beam-tip and paddle deflection.
//
// Conventions shared by every module:
//   * SI base units everywhere.
//   * Deflection is positive toward the top (capacitor) electrode.
//   * The paddle is rigid; the beam tip (paddle root) deflects by y_b and the
//     paddle tilts with small-angle slope 2*y_b/l_b, so the paddle center sits
//     at y_p = y_b*(1 + l_p/l_b) and the far edge at y_b*(1 + 2*l_p/l_b).

#include <string_view>

namespace paddle {

enum class Electrode { Top, Bottom };

std::string_view to_string(Electrode e) noexcept;
Electrode electrode_from_string(std::string_view s);

struct PhysicalConstants {
    double eps0 = 8.85e-12;  // F/m
};

struct PaddleGeometry {
    double l_b = 3e-3;     // beam length
    double l_p = 5e-3;     // paddle length along the beam axis
    double w_p = 5e-3;     // paddle width
    double t_b = 40e-6;    // beam thickness
    double b_root = 5e-3;  // beam width at the root
    double d_c = 100e-6;   // flat gap to the top (capacitor) electrode
    double d_e = 100e-6;   // flat gap to the bottom (deflection) electrode
};

struct SubstrateMaterial {
    double E_biaxial = 180e9;  // Pa
    double K = 0.3;            // beam geometric factor
};

struct FilmSpec {
    double E_F = 70e9;     // Pa
    double t_F = 200e-9;   // m
    double A_F = 7.5e-6;   // strained area, m^2 (half of b_root * l_b)
    double sigma0 = 0.0;   // residual stress, Pa (tensile > 0)

    double initial_strain() const noexcept { return sigma0 / E_F; }
    double volume() const noexcept { return t_F * A_F; }
};

struct PaddleModel {
    PhysicalConstants constants;
    PaddleGeometry geom;
    SubstrateMaterial substrate;
    FilmSpec film;
};

/// Open interval of paddle-center deflections for which neither paddle edge
/// touches an electrode.
struct TouchLimits {
    double y_p_min;
    double y_p_max;

    bool contains(double y_p) const noexcept { return y_p > y_p_min && y_p < y_p_max; }
};

double yb_from_yp(double y_p, const PaddleGeometry& g) noexcept;
double yp_from_yb(double y_b, const PaddleGeometry& g) noexcept;
/// Small-angle paddle tilt for a given beam-tip deflection.
double paddle_slope(double y_b, const PaddleGeometry& g) noexcept;

TouchLimits touch_limits(const PaddleGeometry& g) noexcept;

struct DeflectionState {
    double y_p;
    double y_b;
    double slope;
    double y_edge;

    static DeflectionState from_yp(double y_p, const PaddleGeometry& g) noexcept;
};

class ValidatedModel;
ValidatedModel validate_model(const PaddleModel& model);

/// A PaddleModel whose invariants have been checked, with derived
/// quantities cached. Immutable; only validate_model creates one.
class ValidatedModel {
public:
    const PaddleModel& params() const noexcept { return model_; }
    const PhysicalConstants& constants() const noexcept { return model_.constants; }
    const PaddleGeometry& geom() const noexcept { return model_.geom; }
    const SubstrateMaterial& substrate() const noexcept { return model_.substrate; }
    const FilmSpec& film() const noexcept { return model_.film; }

    double eps_F0() const noexcept { return eps_F0_; }
    double film_volume() const noexcept { return film_volume_; }
    const TouchLimits& touch() const noexcept { return touch_; }

    /// Throws TouchViolation unless y_p is strictly inside the touch window.
    void require_inside(double y_p) const;

private:
    friend ValidatedModel validate_model(const PaddleModel& model);
    explicit ValidatedModel(const PaddleModel& m);

    PaddleModel model_;
    double eps_F0_;
    double film_volume_;
    TouchLimits touch_;
};

}  // namespace paddle
