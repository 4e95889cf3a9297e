// paddle_lab: command-line front end for the paddle cantilever model.

#include "commands.hpp"

#include "paddle/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace paddle;
using namespace paddle::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Paddle cantilever thin-film test system simulator"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--config", global.config_path, "Model configuration JSON");
    app.add_option("--out", global.out_dir, "Output directory (PADDLE_LAB_OUT overrides)");
    app.add_option("--seed", global.seed, "Random seed for noise");
    app.add_option("--electrode", global.electrode, "Electrode: top or bottom")->check(CLI::IsMember({"top", "bottom"}));

    DesignOptions design;
    auto* design_cmd = app.add_subcommand("design", "Stress profile comparison and geometry report");
    design_cmd->add_option("--load", design.load, "Tip load for the stress profile, N");
    design_cmd->add_option("--samples", design.samples, "Stress samples along the beam")->check(CLI::Range(2, 100000));

    CurvesOptions curves;
    auto* curves_cmd = app.add_subcommand("curves", "Capacitance, force or film+beam force over a y_p grid");
    curves_cmd->add_option("--which", curves.which, "capacitance | force | film-beam")->required();
    curves_cmd->add_option("--ymin", curves.y_min, "Grid start, m");
    curves_cmd->add_option("--ymax", curves.y_max, "Grid end, m");
    curves_cmd->add_option("--points", curves.points, "Grid points");
    curves_cmd->add_option("--sigma0", curves.sigma0, "Film stresses for film-beam curves, Pa");

    EquilibriumOptions eq;
    auto* eq_cmd = app.add_subcommand("equilibrium", "Stable equilibrium at one voltage");
    eq_cmd->add_option("--sigma0", eq.sigma0, "Film residual stress, Pa (overrides config)");
    eq_cmd->add_option("--v", eq.voltage, "Actuation voltage, V");

    PullInOptions pullin;
    auto* pullin_cmd = app.add_subcommand("pullin", "Pull-in voltage of one electrode");
    pullin_cmd->add_option("--sigma0", pullin.sigma0, "Film residual stress, Pa (overrides config)");

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Equilibria over a voltage list");
    sweep_cmd->add_option("--sigma0", sweep.sigma0, "Film residual stress, Pa (overrides config)");
    sweep_cmd->add_option("--v", sweep.voltages, "Explicit voltages, V");
    sweep_cmd->add_option("--vmin", sweep.v_min, "First voltage of an even grid, V");
    sweep_cmd->add_option("--vmax", sweep.v_max, "Last voltage of an even grid, V (default 1.2 x pull-in)");
    sweep_cmd->add_option("--steps", sweep.steps, "Grid voltages")->check(CLI::Range(2, 1000000));
    sweep_cmd->add_flag("--cv", sweep.write_cv, "Also write V_volt,C_F data for extract");
    sweep_cmd->add_option("--sigma-c", sweep.sigma_c, "Noise on --cv capacitances, F");

    CalibrateOptions cal;
    auto* cal_cmd = app.add_subcommand("calibrate", "Spacer calibration line C vs 1/d");
    cal_cmd->add_option("--spacers", cal.spacers, "Spacer thicknesses, m");
    cal_cmd->add_option("--sigma-c", cal.sigma_c, "Capacitance noise, F (0 = noise-free)");

    MeasureOptions meas;
    auto* meas_cmd = app.add_subcommand("measure", "Seeded noisy capacitance sample stream");
    meas_cmd->add_option("--c-true", meas.c_true, "True capacitance, F (default: C_top at --y-p)");
    meas_cmd->add_option("--y-p", meas.y_p, "Paddle deflection, m");
    meas_cmd->add_option("--samples", meas.samples, "Sample count")->check(CLI::Range(1, 100000000));
    meas_cmd->add_option("--sigma-c", meas.sigma_c, "Capacitance noise, F");
    meas_cmd->add_option("--dt", meas.dt, "Sample interval, s");

    ExtractOptions ext;
    auto* ext_cmd = app.add_subcommand("extract", "Fit film stress to V_volt,C_F data");
    ext_cmd->add_option("--input", ext.input, "Input CSV")->required();
    ext_cmd->add_option("--max-iter", ext.max_iterations, "Gauss-Newton iteration budget");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        auto* sub = app.get_subcommands().front();
        Context ctx(sub->get_name(), global);
        if (sub == design_cmd) return cmd_design(ctx, design);
        if (sub == curves_cmd) return cmd_curves(ctx, curves);
        if (sub == eq_cmd) return cmd_equilibrium(ctx, eq);
        if (sub == pullin_cmd) return cmd_pullin(ctx, pullin);
        if (sub == sweep_cmd) return cmd_sweep(ctx, sweep);
        if (sub == cal_cmd) return cmd_calibrate(ctx, cal);
        if (sub == meas_cmd) return cmd_measure(ctx, meas);
        if (sub == ext_cmd) return cmd_extract(ctx, ext);
    } catch (const NoStableEquilibrium& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNoStableEquilibrium;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
