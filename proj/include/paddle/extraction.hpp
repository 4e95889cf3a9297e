#pragma once

// Recovery of residual film stress from voltage-capacitance data by fitting
// the equilibrium model. E_F and V_F enter only as their product, so the fit
// reports (sigma0, E_F*V_F) and converts strain to stress with the template's
// E_F.

#include "paddle/instrument.hpp"
#include "paddle/model.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace paddle {

struct CVRow {
    double V;            // actuation voltage
    double C;            // measured top-electrode capacitance
    Electrode electrode; // actuated electrode
};

struct SimulatedSource {
    std::uint64_t seed;
};

struct ExternalSource {
    std::string path;
};

struct CVDataset {
    std::vector<CVRow> rows;
    std::variant<SimulatedSource, ExternalSource> provenance = ExternalSource{};
};

struct DeflectionPoint {
    double t;
    double y_p;
};

/// Converts each sample to a deflection by inverting the capacitance.
/// Throws OutOfRange carrying the offending row index.
std::vector<DeflectionPoint> deflection_series(std::span<const MeasurementSample> samples, const ValidatedModel& m,
                                               Electrode e);

/// Template model with its film replaced by (sigma0, E_F*V_F). The film
/// thickness absorbs the product; E_F and A_F are kept.
ValidatedModel with_film(const ValidatedModel& tmpl, double sigma0, double EFVF);

/// Top-electrode capacitance at the stable equilibrium under voltage V.
double model_capacitance(const ValidatedModel& m, Electrode e, double V);

/// Forward-simulated dataset. sigma_C = 0 gives noise-free data.
CVDataset simulate_cv(const ValidatedModel& m, Electrode e, std::span<const double> voltages,
                      const NoiseModel& noise);

struct FitOptions {
    std::size_t max_iterations = 100;
    double relative_step_tolerance = 1e-10;
    double jacobian_relative_step = 1e-3;
    int max_halvings = 20;
    /// Used when step halving cannot lower the objective any further.
    double gradient_tolerance = 1e-8;
};

struct FilmFitResult {
    double sigma0_hat;
    double EFVF_hat;  // Pa*m^3
    double rms_residual;  // F
    std::size_t iterations;
    bool converged;
    /// |J^T r| / (|J| |C|) in scaled parameters, C the measured values;
    /// 0 at an exact optimum.
    double gradient_norm;
    /// Objective after the initial guess and after every accepted step.
    std::vector<double> objective_history;
};

/// Damped Gauss-Newton fit of (sigma0, E_F*V_F). Returns converged = false
/// with the best iterate when the iteration budget runs out.
FilmFitResult fit_film_parameters(const CVDataset& data, const ValidatedModel& tmpl, const FitOptions& opts = {});

}  // namespace paddle
