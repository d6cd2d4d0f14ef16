#pragma once

#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/solvers/trace.hpp"

// Trace serialization. CSV columns, in order: n, x_0.., y_0.., u_0..,
// z_0.., w_0.., r_0.., step, residual_primary, residual_coupling,
// dist_to_target, cut_count. Blocks of dimension 0 are omitted; absent
// values are empty cells. Reals use 17 significant digits.
namespace splitfp::cli {

namespace trace_io_detail {

struct Block {
  const char* name;
  int dim;
  std::optional<Point> IterationRecord::*member;
};

inline const char* kTail[] = {"step", "residual_primary", "residual_coupling", "dist_to_target", "cut_count"};

inline std::vector<Block> blocks(const TraceLayout& l) {
  return {{"y", l.y_dim, &IterationRecord::y},
          {"u", l.u_dim, &IterationRecord::u},
          {"z", l.z_dim, &IterationRecord::z},
          {"w", l.w_dim, &IterationRecord::w},
          {"r", l.r_dim, &IterationRecord::r}};
}

inline std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline double parse_real(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("trace csv: bad number '" + s + "' in " + where);
  }
  if (used != s.size()) throw ValidationError("trace csv: bad number '" + s + "' in " + where);
  return v;
}

}  // namespace trace_io_detail

inline std::string trace_csv_header(const TraceLayout& layout) {
  using namespace trace_io_detail;
  std::string h = "n";
  for (int i = 0; i < layout.x_dim; ++i) h += ",x_" + std::to_string(i);
  for (const Block& b : blocks(layout)) {
    for (int i = 0; i < b.dim; ++i) h += "," + std::string(b.name) + "_" + std::to_string(i);
  }
  for (const char* t : kTail) h += std::string(",") + t;
  return h;
}

inline void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
  using namespace trace_io_detail;
  check_trace_layout(trace);
  out << trace_csv_header(trace.layout) << '\n';
  for (const IterationRecord& r : trace.records) {
    std::string line = std::to_string(r.n);
    for (int i = 0; i < r.x.dim(); ++i) line += "," + real(r.x[i]);
    for (const Block& b : blocks(trace.layout)) {
      const std::optional<Point>& p = r.*b.member;
      for (int i = 0; i < b.dim; ++i) line += "," + (p ? real((*p)[i]) : std::string());
    }
    auto opt = [](const std::optional<double>& v) { return v ? real(*v) : std::string(); };
    line += "," + opt(r.step) + "," + real(r.residual_primary) + "," + opt(r.residual_coupling) + "," +
            opt(r.dist_to_target) + "," + (r.cut_count ? std::to_string(*r.cut_count) : std::string());
    out << line << '\n';
  }
}

/// Inverse of write_trace_csv. Family and stop reason are not part of the
/// CSV and are left at their defaults.
inline IterationTrace read_trace_csv(std::istream& in) {
  using namespace trace_io_detail;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("trace csv: missing header");
  const std::vector<std::string> head = split(line);
  IterationTrace t;
  auto count = [&](const std::string& prefix) {
    int c = 0;
    for (const std::string& h : head) c += h.rfind(prefix + "_", 0) == 0 ? 1 : 0;
    return c;
  };
  t.layout = TraceLayout{count("x"), count("y"), count("u"), count("z"), count("w"), count("r")};
  if (trace_csv_header(t.layout) != line) throw ValidationError("trace csv: unexpected header");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != head.size()) throw ValidationError("trace csv: wrong cell count in '" + line + "'");
    std::size_t c = 0;
    const long n = std::stol(cells[c++]);
    std::vector<double> x;
    for (int i = 0; i < t.layout.x_dim; ++i) x.push_back(parse_real(cells[c++], "x"));
    IterationRecord r = IterationRecord::bare(n, Point(std::span<const double>(x)));
    for (const Block& b : blocks(t.layout)) {
      if (b.dim == 0) continue;
      if (cells[c].empty()) {
        c += b.dim;
        continue;
      }
      std::vector<double> v;
      for (int i = 0; i < b.dim; ++i) v.push_back(parse_real(cells[c++], b.name));
      r.*b.member = Point(std::span<const double>(v));
    }
    auto opt = [&](const std::string& s, const char* where) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_real(s, where);
    };
    r.step = opt(cells[c++], "step");
    r.residual_primary = parse_real(cells[c++], "residual_primary");
    r.residual_coupling = opt(cells[c++], "residual_coupling");
    r.dist_to_target = opt(cells[c++], "dist_to_target");
    if (!cells[c].empty()) r.cut_count = std::stol(cells[c]);
    t.records.push_back(std::move(r));
  }
  return t;
}

/// The trace as a JSON document: family, stop reason and one object per
/// record with the same fields as the CSV (absent values omitted).
inline nlohmann::json trace_to_json(const IterationTrace& trace) {
  using nlohmann::json;
  auto vec = [](const Point& p) {
    json a = json::array();
    for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
    return a;
  };
  json records = json::array();
  for (const IterationRecord& r : trace.records) {
    json o{{"n", r.n}, {"x", vec(r.x)}, {"residual_primary", r.residual_primary}};
    for (const auto& [name, member] : {std::pair{"y", &IterationRecord::y}, std::pair{"u", &IterationRecord::u},
                                       std::pair{"z", &IterationRecord::z}, std::pair{"w", &IterationRecord::w},
                                       std::pair{"r", &IterationRecord::r}}) {
      if (r.*member) o[name] = vec(*(r.*member));
    }
    if (r.step) o["step"] = *r.step;
    if (r.residual_coupling) o["residual_coupling"] = *r.residual_coupling;
    if (r.dist_to_target) o["dist_to_target"] = *r.dist_to_target;
    if (r.cut_count) o["cut_count"] = *r.cut_count;
    records.push_back(std::move(o));
  }
  return json{{"family", family_name(trace.family)},
              {"stop_reason", stop_reason_name(trace.stop_reason)},
              {"records", std::move(records)}};
}

}  // namespace splitfp::cli
