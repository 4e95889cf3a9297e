#include "paddle/io.hpp"

#include "paddle/errors.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace paddle::io {

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

constexpr std::string_view kModelKeys[] = {"eps0", "l_b", "l_p", "w_p", "t_b", "b_root", "d_c",
                                           "d_e", "E_biaxial", "K", "E_F", "t_F", "A_F", "sigma0"};

bool known_key(const std::string& key)
{
    for (auto k : kModelKeys)
        if (k == key) return true;
    return false;
}

void read_number(const nlohmann::json& j, const char* key, double& out)
{
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_number()) throw InvalidParameter(key, "must be a number");
    out = it->get<double>();
}

}  // namespace

PaddleModel model_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw InvalidParameter("config", "top level must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known_key(key)) throw InvalidParameter(key, "unknown configuration key");

    PaddleModel m;
    auto& g = m.geom;
    read_number(j, "eps0", m.constants.eps0);
    read_number(j, "l_b", g.l_b);
    read_number(j, "l_p", g.l_p);
    g.w_p = g.l_p;
    g.b_root = g.l_p;
    read_number(j, "w_p", g.w_p);
    read_number(j, "b_root", g.b_root);
    read_number(j, "t_b", g.t_b);
    read_number(j, "d_c", g.d_c);
    g.d_e = g.d_c;
    read_number(j, "d_e", g.d_e);
    read_number(j, "E_biaxial", m.substrate.E_biaxial);
    read_number(j, "K", m.substrate.K);
    read_number(j, "E_F", m.film.E_F);
    read_number(j, "t_F", m.film.t_F);
    m.film.A_F = 0.5 * g.b_root * g.l_b;
    read_number(j, "A_F", m.film.A_F);
    read_number(j, "sigma0", m.film.sigma0);
    return m;
}

nlohmann::json model_to_json(const PaddleModel& m)
{
    const auto& g = m.geom;
    return {{"eps0", m.constants.eps0}, {"l_b", g.l_b},           {"l_p", g.l_p},    {"w_p", g.w_p},
            {"t_b", g.t_b},             {"b_root", g.b_root},     {"d_c", g.d_c},    {"d_e", g.d_e},
            {"E_biaxial", m.substrate.E_biaxial}, {"K", m.substrate.K}, {"E_F", m.film.E_F},
            {"t_F", m.film.t_F},        {"A_F", m.film.A_F},      {"sigma0", m.film.sigma0}};
}

PaddleModel load_model(std::istream& in)
{
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter("config", std::string("malformed JSON: ") + e.what());
    }
    return model_from_json(j);
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records)
{
    os << kSweepHeader << '\n';
    for (const auto& r : records) {
        const auto& b = r.breakdown;
        os << format_number(r.V) << ',' << format_number(r.y_p) << ',' << format_number(r.C_top) << ','
           << format_number(b.F_film) << ',' << format_number(b.F_beam) << ',' << format_number(b.F_elec_top) << ','
           << format_number(b.F_elec_bottom) << ',' << format_number(b.F_total) << '\n';
    }
}

void write_measurement_csv(std::ostream& os, std::span<const MeasurementSample> samples)
{
    os << kMeasurementHeader << '\n';
    for (const auto& s : samples) os << format_number(s.t) << ',' << format_number(s.C_meas) << '\n';
}

void write_calibration_csv(std::ostream& os, std::span<const CalibrationPoint> points)
{
    os << kCalibrationHeader << '\n';
    for (const auto& p : points)
        os << format_number(p.spacer) << ',' << format_number(p.inv_spacer) << ',' << format_number(p.C) << '\n';
}

void write_cv_csv(std::ostream& os, const CVDataset& data)
{
    os << kCVHeader << '\n';
    for (const auto& r : data.rows) os << format_number(r.V) << ',' << format_number(r.C) << '\n';
}

namespace {

double parse_field(const std::string& text, std::size_t line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidParameter("csv", "line " + std::to_string(line) + ": cannot parse '" + text + "'");
}

std::string trim_cr(std::string s)
{
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

CVDataset read_cv_csv(std::istream& in, Electrode e, std::string source_name)
{
    std::string line;
    if (!std::getline(in, line) || trim_cr(line) != kCVHeader)
        throw InvalidParameter("csv", "expected header '" + std::string(kCVHeader) + "'");

    CVDataset data;
    data.provenance = ExternalSource{std::move(source_name)};
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_cr(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw InvalidParameter("csv", "line " + std::to_string(line_no) + ": expected 2 fields");
        data.rows.push_back({parse_field(line.substr(0, comma), line_no), parse_field(line.substr(comma + 1), line_no), e});
    }
    return data;
}

nlohmann::json to_json(const ForceBreakdown& b)
{
    return {{"F_film_N", b.F_film},
            {"F_beam_N", b.F_beam},
            {"F_elec_top_N", b.F_elec_top},
            {"F_elec_bottom_N", b.F_elec_bottom},
            {"F_total_N", b.F_total}};
}

}  // namespace paddle::io
