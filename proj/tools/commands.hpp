#pragma once

#include "paddle/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace paddle::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 2,
    kNoStableEquilibrium = 3,
    kNoConvergence = 4,
};

inline constexpr const char* kToolVersion = "0.1.0";

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::optional<std::string> electrode;
};

/// Model loading, output placement and manifest bookkeeping shared by all
/// subcommands.
class Context {
public:
    Context(std::string command, const GlobalOptions& opts);

    PaddleModel model() const;
    std::uint64_t seed() const noexcept { return opts_.seed; }
    std::optional<Electrode> electrode() const;
    Electrode require_electrode(const char* why) const;

    /// Full path for an output file; records it for the manifest.
    std::filesystem::path output(const std::string& name);
    void write_text(const std::string& name, const std::string& text);
    void write_json(const std::string& name, const nlohmann::json& j);
    void write_manifest() const;

private:
    std::string command_;
    GlobalOptions opts_;
    std::filesystem::path out_dir_;
    std::vector<std::string> outputs_;
};

struct DesignOptions {
    double load = 1e-3;
    std::size_t samples = 11;
};

struct CurvesOptions {
    std::string which;
    double y_min = -55e-6;
    double y_max = 55e-6;
    std::size_t points = 221;
    std::vector<double> sigma0 = {100e6, 200e6, 300e6};
};

struct EquilibriumOptions {
    std::optional<double> sigma0;
    double voltage = 0.0;
};

struct PullInOptions {
    std::optional<double> sigma0;
};

struct SweepOptions {
    std::optional<double> sigma0;
    std::vector<double> voltages;
    double v_min = 0.0;
    std::optional<double> v_max;
    std::size_t steps = 21;
    bool write_cv = false;
    double sigma_c = 0.0;
};

struct CalibrateOptions {
    std::vector<double> spacers = {25e-6, 50e-6, 75e-6, 100e-6, 125e-6};
    double sigma_c = 0.0;
};

struct MeasureOptions {
    std::optional<double> c_true;
    double y_p = 0.0;
    std::size_t samples = 100;
    double sigma_c = 1e-16;
    double dt = 1e-2;
};

struct ExtractOptions {
    std::string input;
    std::size_t max_iterations = 100;
};

int cmd_design(Context& ctx, const DesignOptions& o);
int cmd_curves(Context& ctx, const CurvesOptions& o);
int cmd_equilibrium(Context& ctx, const EquilibriumOptions& o);
int cmd_pullin(Context& ctx, const PullInOptions& o);
int cmd_sweep(Context& ctx, const SweepOptions& o);
int cmd_calibrate(Context& ctx, const CalibrateOptions& o);
int cmd_measure(Context& ctx, const MeasureOptions& o);
int cmd_extract(Context& ctx, const ExtractOptions& o);

}  // namespace paddle::cli
