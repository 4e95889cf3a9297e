#pragma once

// Beam mechanics and the force balance on the paddle center.

#include "paddle/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace paddle {

enum class BeamPlan { Triangular, Rectangular };

struct StressSample {
    double x;      // distance from the load point, m
    double sigma;  // surface bending stress, Pa
};

struct StressProfile {
    std::vector<StressSample> samples;
    double uniformity;  // max|sigma| / min|sigma|; 1 for an all-zero profile
};

/// Surface bending stress 6*P*x / (width * thickness^2).
double bending_stress(double P, double x, double width, double thickness);

/// Samples the surface stress at n points over [start_fraction*l_b, l_b].
/// Triangular plan: width b_root*x/l_b. Rectangular plan: constant b_root.
StressProfile stress_profile(double P, const PaddleGeometry& g, BeamPlan plan, std::size_t n,
                             double start_fraction = 0.1);

/// Paddle-center deflection per unit load, m/N.
double compliance(const ValidatedModel& m);

/// Film strain per unit paddle deflection, t_b / (l_b*(l_b + l_p)), 1/m.
double film_strain_gradient(const PaddleGeometry& g) noexcept;

/// Force on the paddle center from the strained film.
double film_force(double y_p, const ValidatedModel& m);

struct ForceBreakdown {
    double F_film = 0.0;
    double F_beam = 0.0;
    double F_elec_top = 0.0;
    double F_elec_bottom = 0.0;
    double F_total = 0.0;
};

ForceBreakdown total_force(double y_p, double V_top, double V_bottom, const ValidatedModel& m);

struct EquilibriumSolution {
    double y_p;
    double C_top;
    ForceBreakdown breakdown;
    bool stable;
    double residual;  // F_total at y_p, N
};

/// Number of scan points used to bracket force zeros.
inline constexpr std::size_t kEquilibriumScanPoints = 2048;
/// Relative margin kept from each touch limit when scanning.
inline constexpr double kEquilibriumScanMargin = 1e-6;

/// Zero-voltage equilibrium from the linear force balance.
double zero_voltage_equilibrium(const ValidatedModel& m);

/// Stable zero of total_force. When several stable zeros exist the one
/// closest to the zero-voltage equilibrium is returned. Throws
/// NoStableEquilibrium when none exists.
EquilibriumSolution solve_equilibrium(const ValidatedModel& m, double V_top, double V_bottom);

/// Convenience overload driving a single electrode.
EquilibriumSolution solve_equilibrium(const ValidatedModel& m, Electrode e, double V);

struct PullIn {
    double voltage;           // smallest voltage found without a stable equilibrium
    double last_stable_voltage;
    double y_p_before;        // equilibrium at last_stable_voltage
};

inline constexpr double kPullInRelativeTolerance = 1e-8;

PullIn pull_in_voltage(const ValidatedModel& m, Electrode e);

struct SweepRecord {
    double V;
    double y_p;
    double C_top;
    ForceBreakdown breakdown;
};

struct SweepResult {
    std::vector<SweepRecord> records;  // ascending V, all below pull-in
    bool truncated = false;
    std::optional<double> first_unstable_V;
};

/// Equilibria for each voltage in ascending order, truncated at the first
/// voltage with no stable equilibrium. Voltages are solved in parallel.
SweepResult sweep_voltage(const ValidatedModel& m, Electrode e, std::span<const double> voltages);

/// Serial reference for sweep_voltage.
SweepResult sweep_voltage_serial(const ValidatedModel& m, Electrode e, std::span<const double> voltages);

}  // namespace paddle
