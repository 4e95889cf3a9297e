#pragma once

// Virtual capacitance-measurement electronics: a two-generator bridge read
// by a lock-in amplifier, a white-noise sampling model, and spacer
// calibration.
//
// The lock-in chain is collapsed into the normalized imbalance of the two
// drive currents, (V1*C_paddle - V2*C_ref) / (V1*C_ref).

#include "paddle/model.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace paddle {

struct BridgeConfig {
    double C_ref = 3e-12;  // F
    double V1 = 1.0;       // V
    double f_drive = 1e5;  // Hz, metadata only
};

double bridge_output(double C_paddle, const BridgeConfig& cfg, double V2);

/// Slave amplitude that nulls the bridge. The closed-form ratio is refined
/// over neighbouring doubles to the value with the smallest |imbalance|.
double balance_bridge(double C_paddle, const BridgeConfig& cfg);

struct NoiseModel {
    double sigma_C = 1e-16;  // F, one standard deviation per sample
    double dt = 1e-2;        // s
    std::uint64_t seed = 0;
};

struct MeasurementSample {
    double t;       // s
    double C_meas;  // F
};

/// Sampled capacitance meter. Owns its random stream; not thread-safe.
class CapacitanceMeter {
public:
    explicit CapacitanceMeter(const NoiseModel& noise);

    /// n further samples; timestamps continue from the previous call.
    std::vector<MeasurementSample> measure(double C_true, std::size_t n);

    /// One reading with no timestamp bookkeeping.
    double read(double C_true);

private:
    NoiseModel noise_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_;
    std::size_t taken_ = 0;
};

/// n samples from a fresh meter seeded with noise.seed.
std::vector<MeasurementSample> measure_capacitance(double C_true, const NoiseModel& noise, std::size_t n);

/// Smallest paddle-center displacement whose capacitance change equals one
/// noise standard deviation at y_p.
double resolvable_displacement(const ValidatedModel& m, double at_y_p, const NoiseModel& noise);

struct CalibrationPoint {
    double spacer;      // m
    double inv_spacer;  // 1/m
    double C;           // F
};

struct CalibrationFit {
    double slope;         // F*m
    double intercept;     // F
    double r2;
    double implied_area;  // m^2
    std::vector<CalibrationPoint> points;
};

/// Flat-paddle capacitance at each spacer gap, optionally with measurement
/// noise (sigma_C = 0 disables it), and a least-squares line of C vs 1/d.
CalibrationFit calibrate(const ValidatedModel& m, std::span<const double> spacers, const NoiseModel& noise);

}  // namespace paddle
