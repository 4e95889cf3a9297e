#include "paddle/instrument.hpp"

#include "paddle/electrostatics.hpp"
#include "paddle/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace paddle {

double bridge_output(double C_paddle, const BridgeConfig& cfg, double V2)
{
    return (cfg.V1 * C_paddle - V2 * cfg.C_ref) / (cfg.V1 * cfg.C_ref);
}

double balance_bridge(double C_paddle, const BridgeConfig& cfg)
{
    if (!(C_paddle > 0.0)) throw InvalidParameter("C_paddle", "must be positive");
    if (!(cfg.C_ref > 0.0)) throw InvalidParameter("C_ref", "must be positive");
    if (!(cfg.V1 > 0.0)) throw InvalidParameter("V1", "must be positive");

    // V2 is generally not representable exactly; step a few ulps either way
    // and keep the best null, as the lock-in loop would.
    const double guess = cfg.V1 * C_paddle / cfg.C_ref;
    double best = guess;
    double best_out = std::abs(bridge_output(C_paddle, cfg, guess));
    double down = guess;
    double up = guess;
    for (int k = 0; k < 4 && best_out != 0.0; ++k) {
        down = std::nextafter(down, 0.0);
        up = std::nextafter(up, HUGE_VAL);
        for (double v : {down, up}) {
            const double out = std::abs(bridge_output(C_paddle, cfg, v));
            if (out < best_out) {
                best = v;
                best_out = out;
            }
        }
    }
    return best;
}

CapacitanceMeter::CapacitanceMeter(const NoiseModel& noise)
    : noise_(noise), rng_(noise.seed), gauss_(0.0, 1.0)
{
    if (!(noise.sigma_C >= 0.0)) throw InvalidParameter("sigma_C", "must be nonnegative");
    if (!(noise.dt > 0.0)) throw InvalidParameter("dt", "must be positive");
}

double CapacitanceMeter::read(double C_true)
{
    // The stream advances even when sigma_C = 0 so that sample k always
    // sees the same deviate for a given seed.
    const double z = gauss_(rng_);
    return C_true + noise_.sigma_C * z;
}

std::vector<MeasurementSample> CapacitanceMeter::measure(double C_true, std::size_t n)
{
    std::vector<MeasurementSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ++taken_;
        out.push_back({static_cast<double>(taken_) * noise_.dt, read(C_true)});
    }
    return out;
}

std::vector<MeasurementSample> measure_capacitance(double C_true, const NoiseModel& noise, std::size_t n)
{
    if (n < 1) throw InvalidParameter("n", "need at least one sample");
    return CapacitanceMeter(noise).measure(C_true, n);
}

double resolvable_displacement(const ValidatedModel& m, double at_y_p, const NoiseModel& noise)
{
    constexpr double step = 1e-9;
    m.require_inside(at_y_p);
    const double c_plus = paddle_capacitance(at_y_p + step, m, Electrode::Top).C;
    const double c_minus = paddle_capacitance(at_y_p - step, m, Electrode::Top).C;
    const double slope = std::abs(c_plus - c_minus) / (2.0 * step);
    return noise.sigma_C / slope;
}

CalibrationFit calibrate(const ValidatedModel& m, std::span<const double> spacers, const NoiseModel& noise)
{
    const std::set<double> distinct(spacers.begin(), spacers.end());
    if (distinct.size() < 3) throw InsufficientData("calibration needs at least 3 distinct spacers");

    CapacitanceMeter meter(noise);
    const double area = m.geom().w_p * m.geom().l_p;
    CalibrationFit fit{};
    fit.points.reserve(spacers.size());
    for (double d : spacers) {
        if (!(d > 0.0)) throw InvalidParameter("spacer", "must be positive");
        const double C = meter.read(parallel_plate_capacitance(area, d, m.constants()));
        fit.points.push_back({d, 1.0 / d, C});
    }

    const auto n = static_cast<double>(fit.points.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& p : fit.points) {
        mean_x += p.inv_spacer;
        mean_y += p.C;
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : fit.points) {
        const double dx = p.inv_spacer - mean_x;
        const double dy = p.C - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    double ss_res = 0.0;
    for (const auto& p : fit.points) {
        const double r = p.C - (fit.intercept + fit.slope * p.inv_spacer);
        ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.implied_area = fit.slope / m.constants().eps0;
    return fit;
}

}  // namespace paddle
