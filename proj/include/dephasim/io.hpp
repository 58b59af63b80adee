#pragma once

// Flat-file formats: sweep CSV, criterion report, and key = value configs.
//
// CSV layout:
//   gamma_T,concurrence,mutual_information
//   <one row per sample, 12 significant digits>
//   # transition,<gamma_T>
//   # maximum,<gamma_T>,<concurrence>,<mutual_information>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dephasim/error.hpp"
#include "dephasim/measures.hpp"
#include "dephasim/sweep.hpp"

namespace dephasim {

inline constexpr std::string_view kCsvHeader = "gamma_T,concurrence,mutual_information";

inline std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

inline std::string format_csv(const SweepResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const SweepRow& row : result.rows) {
    out += format_number(row.gamma_t) + ',' + format_number(row.concurrence) + ',' +
           format_number(row.mutual_information) + '\n';
  }
  for (double t : result.transitions) out += "# transition," + format_number(t) + '\n';
  for (const LocalMaximum& m : result.maxima) {
    out += "# maximum," + format_number(m.gamma_t) + ',' + format_number(m.concurrence) + ',' +
           format_number(m.mutual_information) + '\n';
  }
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  file << text;
  file.flush();
  if (!file) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

inline std::string read_text(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

inline void write_csv(const SweepResult& result, const std::string& path) {
  write_text(path, format_csv(result));
}

namespace detail {
inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t from = 0;
  for (;;) {
    const std::size_t at = line.find(sep, from);
    parts.push_back(line.substr(from, at - from));
    if (at == std::string_view::npos) return parts;
    from = at + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view text, const std::string& context) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::InvalidArgument, context + ": '" + std::string(text) +
                                                "' is not a number");
  return value;
}
}  // namespace detail

/// Parses text produced by format_csv; comment lines restore transitions
/// and maxima (maxima indices are recovered from the rows).
inline SweepResult parse_csv(std::string_view text, const std::string& origin = "<csv>") {
  SweepResult result;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t from = 0;
  while (from < text.size()) {
    std::size_t end = text.find('\n', from);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = detail::trim(text.substr(from, end - from));
    from = end + 1;
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto fields = detail::split(detail::trim(line.substr(1)), ',');
      if (fields[0] == "transition" && fields.size() == 2) {
        result.transitions.push_back(detail::parse_double(fields[1], where));
      } else if (fields[0] == "maximum" && fields.size() == 4) {
        LocalMaximum m{detail::parse_double(fields[1], where),
                       detail::parse_double(fields[2], where),
                       detail::parse_double(fields[3], where), 0};
        for (std::size_t k = 0; k < result.rows.size(); ++k)
          if (result.rows[k].gamma_t == m.gamma_t) m.index = k;
        result.maxima.push_back(m);
      }
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader)
        throw Error(ErrorCode::InvalidArgument, where + ": expected header '" +
                                                    std::string(kCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 3)
      throw Error(ErrorCode::InvalidArgument, where + ": expected 3 columns");
    result.rows.push_back({detail::parse_double(fields[0], where),
                           detail::parse_double(fields[1], where),
                           detail::parse_double(fields[2], where)});
    if (result.rows.size() > 1 &&
        !(result.rows.back().gamma_t > result.rows[result.rows.size() - 2].gamma_t))
      throw Error(ErrorCode::InvalidArgument, where + ": gamma_T must increase strictly");
  }
  if (!header_seen) throw Error(ErrorCode::InvalidArgument, origin + ": missing CSV header");
  return result;
}

inline SweepResult read_csv(const std::string& path) { return parse_csv(read_text(path), path); }

inline std::string format_report(const CriterionReport& r, const std::string& initial_state) {
  const auto flag = [](bool b) { return b ? "true" : "false"; };
  std::string out;
  out += "initial_state = " + initial_state + '\n';
  out += "xi = " + format_number(r.xi) + '\n';
  out += "zeta = " + format_number(r.zeta) + '\n';
  out += "eta = " + format_number(r.eta) + '\n';
  out += "xi_squared_form = " + format_number(r.xi_squared_form) + '\n';
  out += "block_min_eigenvalue = " + format_number(r.block_min_eigenvalue) + '\n';
  out += std::string("cubic_has_negative_root = ") + flag(r.cubic_has_negative_root) + '\n';
  out += std::string("squared_form_has_negative_root = ") +
         flag(r.squared_form_has_negative_root) + '\n';
  out += std::string("ineq14 = ") + flag(r.ineq14) + '\n';
  out += std::string("ineq15 = ") + flag(r.ineq15) + '\n';
  out += std::string("sufficient_entangled = ") + flag(r.sufficient_entangled) + '\n';
  out += "min_pt_eigenvalue = " + format_number(r.min_pt_eigenvalue) + '\n';
  return out;
}

/// `key = value` lines; '#' starts a comment; dashes in keys read as
/// underscores. A value may be wrapped in double quotes.
inline std::map<std::string, std::string> parse_config_text(std::string_view text,
                                                            const std::string& origin = "<config>") {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t from = 0;
  while (from < text.size()) {
    std::size_t end = text.find('\n', from);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(from, end - from);
    from = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidArgument,
                  origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(detail::trim(line.substr(0, eq)));
    for (char& ch : key)
      if (ch == '-') ch = '_';
    std::string_view value = detail::trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty())
      throw Error(ErrorCode::InvalidArgument,
                  origin + ":" + std::to_string(line_no) + ": empty key");
    out[key] = std::string(value);
  }
  return out;
}

inline SweepMode parse_mode(std::string_view text) {
  if (text == "qubit-sweep" || text == "qubit_sweep") return SweepMode::qubit_sweep;
  if (text == "qutrit-criterion" || text == "qutrit_criterion") return SweepMode::qutrit_criterion;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(text) + "'");
}

/// Overlays parsed config entries onto `config`; unknown keys are errors.
inline void apply_config(const std::map<std::string, std::string>& entries, SweepConfig& config) {
  const auto count = [](const std::string& key, const std::string& value) {
    const double v = detail::parse_double(value, key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9)
      throw Error(ErrorCode::InvalidArgument, key + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
  };
  for (const auto& [key, value] : entries) {
    if (key == "initial_state")
      config.initial_state = value;
    else if (key == "omega_ratio")
      config.omega_ratio = detail::parse_double(value, key);
    else if (key == "gamma_t_max")
      config.gamma_t_max = detail::parse_double(value, key);
    else if (key == "samples")
      config.samples = count(key, value);
    else if (key == "output" || key == "output_path")
      config.output_path = value;
    else if (key == "mode")
      config.mode = parse_mode(value);
    else if (key == "workers")
      config.workers = count(key, value);
    else
      throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
}

}  // namespace dephasim
