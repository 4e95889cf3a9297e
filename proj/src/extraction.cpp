#include "paddle/extraction.hpp"

#include "paddle/electrostatics.hpp"
#include "paddle/errors.hpp"
#include "paddle/kernels.hpp"
#include "paddle/mechanics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

namespace paddle {

std::vector<DeflectionPoint> deflection_series(std::span<const MeasurementSample> samples, const ValidatedModel& m,
                                               Electrode e)
{
    std::vector<DeflectionPoint> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        try {
            out.push_back({samples[i].t, yp_from_capacitance(samples[i].C_meas, m, e)});
        } catch (const OutOfRange& err) {
            throw OutOfRange(err.what(), i);
        }
    }
    return out;
}

ValidatedModel with_film(const ValidatedModel& tmpl, double sigma0, double EFVF)
{
    PaddleModel p = tmpl.params();
    p.film.sigma0 = sigma0;
    p.film.t_F = EFVF / (p.film.E_F * p.film.A_F);
    return validate_model(p);
}

double model_capacitance(const ValidatedModel& m, Electrode e, double V)
{
    return solve_equilibrium(m, e, V).C_top;
}

CVDataset simulate_cv(const ValidatedModel& m, Electrode e, std::span<const double> voltages,
                      const NoiseModel& noise)
{
    CapacitanceMeter meter(noise);
    CVDataset data;
    data.provenance = SimulatedSource{noise.seed};
    data.rows.reserve(voltages.size());
    for (double v : voltages) data.rows.push_back({v, meter.read(model_capacitance(m, e, v)), e});
    return data;
}

namespace {

// Iterated coordinates: (sigma0 * E_F*V_F, E_F*V_F). The film force is
// linear in these, while (sigma0, E_F*V_F) trace a curved valley in the
// objective that Gauss-Newton crosses very slowly.
using Params = std::array<double, 2>;

double stress_of(const Params& p)
{
    return p[0] / p[1];
}

constexpr double kSigmaFloor = 1e6;  // Pa

class Problem {
public:
    Problem(const CVDataset& data, const ValidatedModel& tmpl) : data_(data), tmpl_(tmpl) {}

    /// Residuals C_model - C, or nullopt when the trial parameters leave some
    /// row without a stable equilibrium.
    std::optional<std::vector<double>> residuals(const Params& p) const
    {
        if (!(p[1] > 0.0)) return std::nullopt;
        try {
            const auto m = with_film(tmpl_, stress_of(p), p[1]);
            std::vector<double> r(data_.rows.size());
            kernels::omp::for_each_index(r.size(), [&](std::size_t i) {
                const auto& row = data_.rows[i];
                r[i] = model_capacitance(m, row.electrode, row.V) - row.C;
            });
            return r;
        } catch (const NoStableEquilibrium&) {
            return std::nullopt;
        } catch (const InvalidParameter&) {
            return std::nullopt;
        }
    }

private:
    const CVDataset& data_;
    const ValidatedModel& tmpl_;
};

double sum_sq(const std::vector<double>& r)
{
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

void check_dataset(const CVDataset& data)
{
    if (data.rows.size() < 3) throw InsufficientData("C-V fit needs at least 3 rows");
    std::set<double> distinct;
    for (const auto& row : data.rows) {
        if (!(row.V >= 0.0) || !std::isfinite(row.V)) throw InvalidParameter("V", "must be nonnegative");
        if (!(row.C > 0.0) || !std::isfinite(row.C)) throw InvalidParameter("C", "must be positive");
        distinct.insert(row.V);
    }
    if (distinct.size() < 2) throw DegenerateData("all rows share one voltage; film parameters are not identifiable");
}

// Invert the lowest-voltage reading as if it were the zero-voltage
// equilibrium, holding E_F*V_F at the template value.
Params initial_guess(const CVDataset& data, const ValidatedModel& tmpl)
{
    const auto lowest = std::min_element(data.rows.begin(), data.rows.end(),
                                         [](const CVRow& a, const CVRow& b) { return a.V < b.V; });
    const double EFVF = tmpl.film().E_F * tmpl.film_volume();
    if (!(EFVF > 0.0)) throw InvalidParameter("t_F", "template film must have nonzero volume");

    const auto range = invertible_range(tmpl, Electrode::Top);
    const double C0 = std::clamp(lowest->C, range.C_min, range.C_max);
    const double y0 = yp_from_capacitance(C0, tmpl, Electrode::Top);
    const double a = film_strain_gradient(tmpl.geom());
    const double stiffness = EFVF * a * a + 1.0 / compliance(tmpl);
    const double sigma0 = y0 * stiffness * tmpl.film().E_F / (EFVF * a);
    return {sigma0 * EFVF, EFVF};
}

}  // namespace

FilmFitResult fit_film_parameters(const CVDataset& data, const ValidatedModel& tmpl, const FitOptions& opts)
{
    check_dataset(data);
    const Problem problem(data, tmpl);

    Params theta = initial_guess(data, tmpl);
    const Params floor = {kSigmaFloor * theta[1], theta[1] * 1e-3};
    const auto scale_of = [&](const Params& p, std::size_t j) { return std::max(std::abs(p[j]), floor[j]); };

    auto r = problem.residuals(theta);
    if (!r) throw NoStableEquilibrium("initial film parameters give no stable equilibrium for some row");
    double objective = sum_sq(*r);

    FilmFitResult result{};
    result.objective_history.push_back(objective);
    const std::size_t n = r->size();
    double data_norm = 0.0;
    for (const auto& row : data.rows) data_norm += row.C * row.C;
    data_norm = std::sqrt(data_norm);

    bool converged = false;
    double gradient_norm = std::numeric_limits<double>::infinity();
    std::size_t iter = 0;
    while (iter < opts.max_iterations) {
        ++iter;

        // Central-difference Jacobian in scaled coordinates q_j = theta_j / s_j.
        std::array<std::vector<double>, 2> J;
        Params s{};
        bool jacobian_ok = true;
        for (std::size_t j = 0; j < 2 && jacobian_ok; ++j) {
            s[j] = scale_of(theta, j);
            const double h = opts.jacobian_relative_step * s[j];
            Params plus = theta;
            Params minus = theta;
            plus[j] += h;
            minus[j] -= h;
            const auto r_plus = problem.residuals(plus);
            const auto r_minus = problem.residuals(minus);
            if (!r_plus || !r_minus) {
                jacobian_ok = false;
                break;
            }
            J[j].resize(n);
            for (std::size_t i = 0; i < n; ++i) J[j][i] = ((*r_plus)[i] - (*r_minus)[i]) / (2.0 * h) * s[j];
        }
        if (!jacobian_ok) break;

        double a00 = 0.0, a01 = 0.0, a11 = 0.0, g0 = 0.0, g1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a00 += J[0][i] * J[0][i];
            a01 += J[0][i] * J[1][i];
            a11 += J[1][i] * J[1][i];
            g0 += J[0][i] * (*r)[i];
            g1 += J[1][i] * (*r)[i];
        }
        const double j_norm = std::sqrt(a00 + a11);
        gradient_norm = j_norm > 0.0 ? std::hypot(g0, g1) / (j_norm * data_norm) : 0.0;

        const double det = a00 * a11 - a01 * a01;
        if (!(det > 0.0)) throw DegenerateData("Jacobian columns are linearly dependent");
        const Params dq = {-(a11 * g0 - a01 * g1) / det, -(a00 * g1 - a01 * g0) / det};
        const Params step = {dq[0] * s[0], dq[1] * s[1]};
        const double rel_step = std::max(std::abs(step[0]) / scale_of(theta, 0), std::abs(step[1]) / scale_of(theta, 1));

        // Step halving until the objective decreases.
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k <= opts.max_halvings; ++k, lambda *= 0.5) {
            const Params trial = {theta[0] + lambda * step[0], theta[1] + lambda * step[1]};
            auto r_trial = problem.residuals(trial);
            if (!r_trial) continue;
            const double obj_trial = sum_sq(*r_trial);
            if (obj_trial < objective) {
                theta = trial;
                r = std::move(r_trial);
                objective = obj_trial;
                result.objective_history.push_back(objective);
                accepted = true;
                break;
            }
        }

        if (rel_step * (accepted ? lambda : 1.0) < opts.relative_step_tolerance) {
            converged = true;
            break;
        }
        if (!accepted) {
            // The objective is flat at floating-point resolution; accept the
            // iterate only if it is first-order optimal.
            converged = gradient_norm < opts.gradient_tolerance;
            break;
        }
    }

    result.sigma0_hat = stress_of(theta);
    result.EFVF_hat = theta[1];
    result.rms_residual = std::sqrt(objective / static_cast<double>(n));
    result.iterations = iter;
    result.converged = converged && std::isfinite(result.rms_residual);
    result.gradient_norm = gradient_norm;
    return result;
}

}  // namespace paddle
