#pragma once

// Ideal-plate electrostatics of the tilted paddle. Fringe fields are
// neglected; each electrode is congruent with the paddle footprint.

#include "paddle/model.hpp"

#include <cstddef>

namespace paddle {

struct CapacitanceReading {
    double C;  // F
    Electrode electrode;
};

/// Electrostatic force on the paddle per squared volt on one electrode.
/// Positive (upward) for the top electrode, negative for the bottom one.
struct ForcePerV2 {
    double f;  // N/V^2
    Electrode electrode;
};

/// Below this |u| the capacitance uses a series for ln(1+u)/u.
inline constexpr double kNearFlatThreshold = 1e-6;

/// Fraction of the touch window excluded at each end when inverting a
/// capacitance. The capacitance diverges logarithmically at touch, so the
/// inversion is restricted to a far-edge gap of at least this fraction of
/// the flat gap.
inline constexpr double kInversionMargin = 0.05;

double parallel_plate_capacitance(double area, double gap, const PhysicalConstants& k = {});

CapacitanceReading paddle_capacitance(double y_p, const ValidatedModel& m, Electrode e);

/// Composite-trapezoid evaluation of eps0*w_p * integral dx/gap(x).
double paddle_capacitance_quadrature(double y_p, const ValidatedModel& m, Electrode e, std::size_t panels);

ForcePerV2 electrostatic_force_per_v2(double y_p, const ValidatedModel& m, Electrode e);

/// Composite-trapezoid evaluation of the pressure integral
/// (eps0*w_p/2) * integral dx/gap(x)^2, signed like electrostatic_force_per_v2.
double electrostatic_force_quadrature(double y_p, const ValidatedModel& m, Electrode e, std::size_t panels);

/// Capacitance interval over which yp_from_capacitance is defined.
struct CapacitanceRange {
    double C_min;
    double C_max;
    double y_p_lo;  // end of the inversion window
    double y_p_hi;
};

CapacitanceRange invertible_range(const ValidatedModel& m, Electrode e);

/// Deflection whose capacitance equals C. Throws OutOfRange when C is not
/// inside invertible_range.
double yp_from_capacitance(double C, const ValidatedModel& m, Electrode e);

}  // namespace paddle
