#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include "quartit/dynamics.hpp"

namespace quartit {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write failure on '" + path + "'");
}

namespace detail {

inline std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string trim(std::string_view s) {
    const size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    const size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

inline std::string trace_to_csv(const TimeTrace& trace) {
    std::string out = "t_p_s,delta_rxx_ohm,mz\n";
    for (const auto& s : trace.samples)
        out += detail::csv_number(s.t_s) + "," + detail::csv_number(s.delta_rxx) + "," +
               detail::csv_number(s.mz) + "\n";
    return out;
}

inline std::string spectrum_to_csv(const Spectrum& spec) {
    std::string out = "frequency_hz,delta_rxx_ohm\n";
    for (const auto& s : spec.samples)
        out += detail::csv_number(s.frequency_hz) + "," + detail::csv_number(s.delta_rxx) +
               "\n";
    return out;
}

inline std::string map_to_csv(const SpectrumMap& map) {
    std::string out = "frequency_hz,t_p_s,delta_rxx_ohm\n";
    for (size_t fi = 0; fi < map.frequency_hz.size(); ++fi)
        for (size_t ti = 0; ti < map.tp_s.size(); ++ti)
            out += detail::csv_number(map.frequency_hz[fi]) + "," +
                   detail::csv_number(map.tp_s[ti]) + "," +
                   detail::csv_number(map.delta_rxx(static_cast<Eigen::Index>(fi),
                                                    static_cast<Eigen::Index>(ti))) +
                   "\n";
    return out;
}

/// Read a trace CSV with header t_p_s,delta_rxx_ohm[,mz].
inline TimeTrace trace_from_csv(std::string_view text) {
    TimeTrace trace;
    size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        const size_t eol = text.find('\n', pos);
        const std::string line = detail::trim(
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos));
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("t_p_s", 0) == 0) continue;
        std::istringstream ss(line);
        std::string field;
        double vals[3] = {0, 0, 0};
        int count = 0;
        while (std::getline(ss, field, ',') && count < 3) {
            try {
                vals[count] = std::stod(field);
            } catch (const std::exception&) {
                throw IoError("trace CSV: bad number '" + field + "' on line " +
                              std::to_string(line_no));
            }
            ++count;
        }
        if (count < 2)
            throw IoError("trace CSV: expected at least 2 columns on line " +
                          std::to_string(line_no));
        trace.samples.push_back({vals[0], vals[1], count > 2 ? vals[2] : 0.0});
    }
    return trace;
}

/// Line-oriented "key = value" system configuration. Keys: nuclide, f0_hz,
/// dq_hz, knight_hz, electrons_present, t1_s, t2_s, kappa, pol_step_d.
inline SpinSystem system_from_config(std::string_view text) {
    SpinSystem sys;
    sys.f0_hz = 0.0;  // force explicit f0
    size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        const size_t eol = text.find('\n', pos);
        std::string line = detail::trim(
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos));
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        auto as_number = [&](const char* what) {
            try {
                return std::stod(value);
            } catch (const std::exception&) {
                throw ConfigError("config line " + std::to_string(line_no) + ": bad " +
                                  std::string(what) + " value '" + value + "'");
            }
        };
        if (key == "nuclide")
            sys.nuclide = value;
        else if (key == "f0_hz")
            sys.f0_hz = as_number("f0_hz");
        else if (key == "dq_hz")
            sys.dq_hz = as_number("dq_hz");
        else if (key == "knight_hz")
            sys.knight_hz = as_number("knight_hz");
        else if (key == "t1_s")
            sys.t1_s = as_number("t1_s");
        else if (key == "t2_s")
            sys.t2_s = as_number("t2_s");
        else if (key == "kappa")
            sys.kappa = as_number("kappa");
        else if (key == "pol_step_d")
            sys.pol_step = as_number("pol_step_d");
        else if (key == "electrons_present") {
            if (value == "true" || value == "1")
                sys.electrons_present = true;
            else if (value == "false" || value == "0")
                sys.electrons_present = false;
            else
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": electrons_present must be true/false");
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
        }
    }
    try {
        sys.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("invalid system config: ") + err.what());
    }
    return sys;
}

}  // namespace quartit
