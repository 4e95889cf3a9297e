#include "commands.hpp"

#include "paddle/electrostatics.hpp"
#include "paddle/errors.hpp"
#include "paddle/extraction.hpp"
#include "paddle/instrument.hpp"
#include "paddle/io.hpp"
#include "paddle/kernels.hpp"
#include "paddle/mechanics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace paddle::cli {

namespace fs = std::filesystem;

namespace {

std::string timestamp()
{
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

std::vector<double> grid(double lo, double hi, std::size_t n)
{
    if (n < 2) throw InvalidParameter("points", "need at least 2 grid points");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        v[i] = lo * (1.0 - s) + hi * s;
    }
    return v;
}

std::string micro(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f um", v * 1e6);
    return buf;
}

ValidatedModel with_stress_override(const PaddleModel& p, std::optional<double> sigma0)
{
    PaddleModel m = p;
    if (sigma0) m.film.sigma0 = *sigma0;
    return validate_model(m);
}

}  // namespace

Context::Context(std::string command, const GlobalOptions& opts) : command_(std::move(command)), opts_(opts)
{
    const char* env = std::getenv("PADDLE_LAB_OUT");
    out_dir_ = env && *env ? fs::path(env) : fs::path(opts_.out_dir);
}

PaddleModel Context::model() const
{
    if (opts_.config_path.empty()) return PaddleModel{};
    std::ifstream in(opts_.config_path);
    if (!in) throw InvalidParameter("config", "cannot open '" + opts_.config_path + "'");
    return io::load_model(in);
}

std::optional<Electrode> Context::electrode() const
{
    if (!opts_.electrode) return std::nullopt;
    return electrode_from_string(*opts_.electrode);
}

Electrode Context::require_electrode(const char* why) const
{
    const auto e = electrode();
    if (!e) throw InvalidParameter("electrode", std::string("--electrode top|bottom is required ") + why);
    return *e;
}

fs::path Context::output(const std::string& name)
{
    fs::create_directories(out_dir_);
    outputs_.push_back(name);
    return out_dir_ / name;
}

void Context::write_text(const std::string& name, const std::string& text)
{
    const auto path = output(name);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidParameter("out", "cannot write '" + path.string() + "'");
    out << text;
}

void Context::write_json(const std::string& name, const nlohmann::json& j)
{
    write_text(name, j.dump(2) + "\n");
}

void Context::write_manifest() const
{
    const nlohmann::json manifest = {
        {"command", command_},
        {"config_path", opts_.config_path},
        {"output_paths", outputs_},
        {"seed", opts_.seed},
        {"timestamp", timestamp()},
        {"tool_version", kToolVersion},
    };
    fs::create_directories(out_dir_);
    std::ofstream out(out_dir_ / (command_ + "_manifest.json"), std::ios::binary);
    out << manifest.dump(2) << "\n";
}

int cmd_design(Context& ctx, const DesignOptions& o)
{
    const auto m = validate_model(ctx.model());
    const auto tri = stress_profile(o.load, m.geom(), BeamPlan::Triangular, o.samples);
    const auto rect = stress_profile(o.load, m.geom(), BeamPlan::Rectangular, o.samples);

    std::ostringstream csv;
    csv << "x_m,sigma_triangular_Pa,sigma_rectangular_Pa\n";
    for (std::size_t i = 0; i < tri.samples.size(); ++i)
        csv << io::format_number(tri.samples[i].x) << ',' << io::format_number(tri.samples[i].sigma) << ','
            << io::format_number(rect.samples[i].sigma) << '\n';
    ctx.write_text("design_stress_profile.csv", csv.str());

    const auto& t = m.touch();
    const double c = compliance(m);
    ctx.write_json("design_report.json",
                   {{"model", io::model_to_json(m.params())},
                    {"load_N", o.load},
                    {"touch_limits", {{"y_p_min_m", t.y_p_min}, {"y_p_max_m", t.y_p_max}}},
                    {"uniformity", {{"triangular", tri.uniformity}, {"rectangular", rect.uniformity}}},
                    {"compliance_m_per_N", c},
                    {"stiffness_N_per_m", 1.0 / c},
                    {"flat_capacitance_F", paddle_capacitance(0.0, m, Electrode::Top).C}});
    ctx.write_manifest();

    std::cout << "y_p limits: " << micro(t.y_p_min) << " .. " << micro(t.y_p_max) << "\n";
    std::printf("stress uniformity: triangular %.1f, rectangular %.3f\n", tri.uniformity, rect.uniformity);
    return kSuccess;
}

int cmd_curves(Context& ctx, const CurvesOptions& o)
{
    const auto m = validate_model(ctx.model());
    if (!(o.y_min < o.y_max)) throw InvalidParameter("grid", "y_min must be below y_max");
    if (!m.touch().contains(o.y_min) || !m.touch().contains(o.y_max))
        throw TouchViolation("grid [" + micro(o.y_min) + ", " + micro(o.y_max) + "] leaves the touch window");
    const auto ys = grid(o.y_min, o.y_max, o.points);

    std::ostringstream csv;
    if (o.which == "capacitance" || o.which == "force") {
        const bool capacitance = o.which == "capacitance";
        const Electrode e = ctx.electrode().value_or(capacitance ? Electrode::Top : Electrode::Bottom);
        std::vector<double> values(ys.size());
        kernels::omp::for_each_index(ys.size(), [&](std::size_t i) {
            values[i] = capacitance ? paddle_capacitance(ys[i], m, e).C : electrostatic_force_per_v2(ys[i], m, e).f;
        });
        csv << (capacitance ? "y_p_m,C_F\n" : "y_p_m,F_per_V2_N_per_V2\n");
        for (std::size_t i = 0; i < ys.size(); ++i)
            csv << io::format_number(ys[i]) << ',' << io::format_number(values[i]) << '\n';
        std::cout << o.which << " curve (" << to_string(e) << " electrode), " << ys.size() << " points\n";
    } else if (o.which == "film-beam") {
        if (o.sigma0.empty()) throw InvalidParameter("sigma0", "film-beam curves need at least one stress");
        std::vector<ValidatedModel> models;
        csv << "y_p_m";
        for (double s : o.sigma0) {
            models.push_back(with_stress_override(m.params(), s));
            char name[64];
            std::snprintf(name, sizeof name, ",F_sigma0_%gMPa_N", s / 1e6);
            csv << name;
        }
        csv << '\n';
        std::vector<double> values(ys.size() * models.size());
        kernels::omp::for_each_index(ys.size(), [&](std::size_t i) {
            for (std::size_t k = 0; k < models.size(); ++k) {
                const auto b = total_force(ys[i], 0.0, 0.0, models[k]);
                values[i * models.size() + k] = b.F_film + b.F_beam;
            }
        });
        for (std::size_t i = 0; i < ys.size(); ++i) {
            csv << io::format_number(ys[i]);
            for (std::size_t k = 0; k < models.size(); ++k) csv << ',' << io::format_number(values[i * models.size() + k]);
            csv << '\n';
        }
        for (std::size_t k = 0; k < models.size(); ++k)
            std::printf("sigma0 = %g MPa: zero crossing at %s\n", o.sigma0[k] / 1e6,
                        micro(zero_voltage_equilibrium(models[k])).c_str());
    } else {
        throw InvalidParameter("which", "expected capacitance, force or film-beam");
    }
    ctx.write_text("curves_" + o.which + ".csv", csv.str());
    ctx.write_manifest();
    return kSuccess;
}

int cmd_equilibrium(Context& ctx, const EquilibriumOptions& o)
{
    const auto m = with_stress_override(ctx.model(), o.sigma0);
    const auto e = o.voltage != 0.0 ? ctx.require_electrode("when --v is nonzero") : ctx.electrode().value_or(Electrode::Bottom);
    if (!(o.voltage >= 0.0)) throw InvalidParameter("v", "must be nonnegative");

    EquilibriumSolution sol;
    try {
        sol = solve_equilibrium(m, e, o.voltage);
    } catch (const NoStableEquilibrium& err) {
        std::cerr << "error: " << err.what();
        try {
            std::cerr << "; pull-in voltage (" << to_string(e) << ") is " << pull_in_voltage(m, e).voltage << " V";
        } catch (const NoStableEquilibrium&) {
        }
        std::cerr << "\n";
        return kNoStableEquilibrium;
    }

    ctx.write_json("equilibrium.json", {{"V_volt", o.voltage},
                                        {"electrode", std::string(to_string(e))},
                                        {"sigma0_Pa", m.film().sigma0},
                                        {"y_p_m", sol.y_p},
                                        {"y_b_m", yb_from_yp(sol.y_p, m.geom())},
                                        {"C_top_F", sol.C_top},
                                        {"stable", sol.stable},
                                        {"residual_N", sol.residual},
                                        {"breakdown", io::to_json(sol.breakdown)}});
    ctx.write_manifest();
    std::cout << "equilibrium y_p = " << micro(sol.y_p) << (sol.stable ? " (stable)" : " (unstable)") << "\n";
    return kSuccess;
}

int cmd_pullin(Context& ctx, const PullInOptions& o)
{
    const auto m = with_stress_override(ctx.model(), o.sigma0);
    const auto e = ctx.require_electrode("for pull-in");
    const auto pi = pull_in_voltage(m, e);
    ctx.write_json("pullin.json", {{"electrode", std::string(to_string(e))},
                                   {"sigma0_Pa", m.film().sigma0},
                                   {"pull_in_voltage_V", pi.voltage},
                                   {"last_stable_voltage_V", pi.last_stable_voltage},
                                   {"y_p_before_pull_in_m", pi.y_p_before}});
    ctx.write_manifest();
    std::printf("pull-in voltage (%s): %.4f V\n", std::string(to_string(e)).c_str(), pi.voltage);
    return kSuccess;
}

int cmd_sweep(Context& ctx, const SweepOptions& o)
{
    const auto m = with_stress_override(ctx.model(), o.sigma0);
    const auto e = ctx.require_electrode("for a voltage sweep");

    std::vector<double> volts = o.voltages;
    if (volts.empty()) {
        const double v_max = o.v_max ? *o.v_max : 1.2 * pull_in_voltage(m, e).voltage;
        volts = grid(o.v_min, v_max, o.steps);
    }
    const auto result = sweep_voltage(m, e, volts);

    std::ostringstream csv;
    io::write_sweep_csv(csv, result.records);
    ctx.write_text("sweep.csv", csv.str());

    nlohmann::json summary = {{"electrode", std::string(to_string(e))},
                              {"requested", volts.size()},
                              {"records", result.records.size()},
                              {"truncated", result.truncated}};
    if (result.first_unstable_V) summary["first_unstable_V"] = *result.first_unstable_V;
    ctx.write_json("sweep_summary.json", summary);

    if (o.write_cv) {
        CapacitanceMeter meter(NoiseModel{o.sigma_c, 1e-2, ctx.seed()});
        CVDataset data;
        for (const auto& r : result.records) data.rows.push_back({r.V, meter.read(r.C_top), e});
        std::ostringstream cv;
        io::write_cv_csv(cv, data);
        ctx.write_text("sweep_cv.csv", cv.str());
    }
    ctx.write_manifest();

    std::cout << result.records.size() << " of " << volts.size() << " voltages below pull-in";
    if (result.truncated) std::cout << "; truncated at " << *result.first_unstable_V << " V";
    std::cout << "\n";
    return kSuccess;
}

int cmd_calibrate(Context& ctx, const CalibrateOptions& o)
{
    const auto m = validate_model(ctx.model());
    const auto fit = calibrate(m, o.spacers, NoiseModel{o.sigma_c, 1e-2, ctx.seed()});

    std::ostringstream csv;
    io::write_calibration_csv(csv, fit.points);
    ctx.write_text("calibration.csv", csv.str());
    ctx.write_json("calibration.json", {{"slope_F_m", fit.slope},
                                        {"intercept_F", fit.intercept},
                                        {"r2", fit.r2},
                                        {"implied_area_m2", fit.implied_area},
                                        {"sigma_C_F", o.sigma_c}});
    ctx.write_manifest();
    std::printf("C = %.6e F*m / d %+.3e F, r2 = %.9f\n", fit.slope, fit.intercept, fit.r2);
    return kSuccess;
}

int cmd_measure(Context& ctx, const MeasureOptions& o)
{
    const auto m = validate_model(ctx.model());
    const double C = o.c_true ? *o.c_true : paddle_capacitance(o.y_p, m, Electrode::Top).C;
    const auto samples = measure_capacitance(C, NoiseModel{o.sigma_c, o.dt, ctx.seed()}, o.samples);

    std::ostringstream csv;
    io::write_measurement_csv(csv, samples);
    ctx.write_text("measurement.csv", csv.str());
    ctx.write_manifest();
    std::cout << samples.size() << " samples around C = " << C << " F\n";
    return kSuccess;
}

int cmd_extract(Context& ctx, const ExtractOptions& o)
{
    const auto tmpl = validate_model(ctx.model());
    const auto e = ctx.require_electrode("to name the actuated electrode");
    std::ifstream in(o.input);
    if (!in) throw InvalidParameter("input", "cannot open '" + o.input + "'");
    const auto data = io::read_cv_csv(in, e, o.input);

    FitOptions opts;
    opts.max_iterations = o.max_iterations;
    const auto fit = fit_film_parameters(data, tmpl, opts);

    ctx.write_json("extraction.json", {{"input", o.input},
                                       {"electrode", std::string(to_string(e))},
                                       {"rows", data.rows.size()},
                                       {"sigma0_hat_Pa", fit.sigma0_hat},
                                       {"EFVF_hat_Pa_m3", fit.EFVF_hat},
                                       {"rms_residual_F", fit.rms_residual},
                                       {"iterations", fit.iterations},
                                       {"converged", fit.converged},
                                       {"gradient_norm", fit.gradient_norm}});
    ctx.write_manifest();
    std::printf("sigma0 = %.6g MPa, E_F*V_F = %.6g Pa*m^3 (%s after %zu iterations)\n", fit.sigma0_hat / 1e6,
                fit.EFVF_hat, fit.converged ? "converged" : "NOT converged", fit.iterations);
    if (!fit.converged) {
        std::cerr << "error: fit did not converge; best iterate written\n";
        return kNoConvergence;
    }
    return kSuccess;
}

}  // namespace paddle::cli
