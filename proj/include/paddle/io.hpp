#pragma once

// File formats: JSON model configuration and the CSV tables emitted by the
// command-line tool. Numbers are written in round-trip scientific notation.

#include "paddle/extraction.hpp"
#include "paddle/instrument.hpp"
#include "paddle/mechanics.hpp"
#include "paddle/model.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace paddle::io {

inline constexpr std::string_view kSweepHeader =
    "V_volt,y_p_m,C_top_F,F_film_N,F_beam_N,F_elec_top_N,F_elec_bottom_N,F_total_N";
inline constexpr std::string_view kMeasurementHeader = "t_s,C_meas_F";
inline constexpr std::string_view kCalibrationHeader = "spacer_m,inv_spacer_per_m,C_F";
inline constexpr std::string_view kCVHeader = "V_volt,C_F";

/// 17 significant digits, scientific notation.
std::string format_number(double v);

/// Reads the model keys (eps0, l_b, l_p, w_p, t_b, b_root, d_c, d_e,
/// E_biaxial, K, E_F, t_F, A_F, sigma0). Omitted keys take their defaults;
/// w_p and b_root default to l_p, d_e to d_c, and A_F to b_root*l_b/2.
/// Unknown keys and non-numeric values throw InvalidParameter.
PaddleModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const PaddleModel& m);

/// Parses a JSON document; malformed text throws InvalidParameter.
PaddleModel load_model(std::istream& in);

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records);
void write_measurement_csv(std::ostream& os, std::span<const MeasurementSample> samples);
void write_calibration_csv(std::ostream& os, std::span<const CalibrationPoint> points);
void write_cv_csv(std::ostream& os, const CVDataset& data);

/// Reads the extraction input table. Every row is tagged with electrode e.
/// Throws InvalidParameter on a wrong header or unparsable field.
CVDataset read_cv_csv(std::istream& in, Electrode e, std::string source_name);

nlohmann::json to_json(const ForceBreakdown& b);

}  // namespace paddle::io
