#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "splitfp/diagnostics/fejer.hpp"
#include "splitfp/examples/catalog.hpp"
#include "splitfp/solvers/problem.hpp"
#include "splitfp/solvers/trace.hpp"

namespace splitfp::cli {

inline nlohmann::json point_json(const Point& p) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
  return a;
}

inline nlohmann::json fejer_json(const FejerReport& r) {
  nlohmann::json j{{"monotone", r.monotone}, {"max_uptick", r.max_uptick}};
  if (r.first_violation) {
    j["first_violation"] = {
        {"n", r.first_violation->n}, {"before", r.first_violation->before}, {"after", r.first_violation->after}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

/// ||x_n - x_0|| for every record and whether it never decreases.
struct AnchorDistances {
  std::vector<double> values;
  bool non_decreasing = true;
};

inline AnchorDistances anchor_distances(const IterationTrace& t) {
  AnchorDistances a;
  if (t.records.empty()) return a;
  const Point& x0 = t.records.front().x;
  for (const IterationRecord& r : t.records) {
    const double d = distance(r.x, x0);
    if (!a.values.empty() && d < a.values.back()) a.non_decreasing = false;
    a.values.push_back(d);
  }
  return a;
}

/// Run summary: stop reason, final iterate and residual, the Fejer report
/// against the reference when one is known, anchor distances for the
/// extragradient family, and expected-row checks for catalog examples.
inline nlohmann::json run_summary(const ProblemSpec& spec, const IterationTrace& t,
                                  const std::optional<examples::NamedExample>& example, std::uint64_t seed) {
  using nlohmann::json;
  const IterationRecord& last = t.final_record();
  json s{{"family", family_name(t.family)},
         {"stop_reason", stop_reason_name(t.stop_reason)},
         {"records", t.records.size()},
         {"final_n", last.n},
         {"final_x", point_json(last.x)},
         {"final_residual", last.residual_primary},
         {"seed", seed}};
  s["example"] = example ? json(example->id) : json(nullptr);
  if (last.y) s["final_y"] = point_json(*last.y);
  if (spec.reference_x) {
    s["reference_x"] = point_json(*spec.reference_x);
    if (spec.reference_y) s["reference_y"] = point_json(*spec.reference_y);
    if (last.dist_to_target) s["final_dist_to_target"] = *last.dist_to_target;
    if (t.records.size() >= 2 && (!spec.two_variable() || spec.reference_y)) {
      s["fejer"] = fejer_json(fejer_check(t, *spec.reference_x, spec.reference_y));
    }
  }
  if (t.family == Family::ExtraGradient) {
    const AnchorDistances a = anchor_distances(t);
    s["anchor_distance"] = {{"values", a.values}, {"non_decreasing", a.non_decreasing}};
  }
  if (example) {
    json rows = json::array();
    bool ok = true;
    for (const examples::RowCheck& c : examples::check_expected(*example, t)) {
      rows.push_back({{"n", c.n},
                      {"var", std::string(1, c.expected.var) + "_" + std::to_string(c.expected.component)},
                      {"expected", c.expected.value},
                      {"got", c.got},
                      {"tol", c.expected.tol},
                      {"provenance", examples::provenance_name(c.expected.provenance)},
                      {"pinned", c.expected.pinned},
                      {"ok", c.ok}});
      ok = ok && (c.ok || !c.expected.pinned);
    }
    s["expected"] = std::move(rows);
    s["expected_ok"] = ok;
  }
  return s;
}

/// Self-contained SVG line chart of log10(residual_primary) against n.
/// Records with a zero residual are left out of the line.
inline std::string residual_svg(const IterationTrace& t, const std::string& title) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  std::vector<std::pair<double, double>> pts;
  for (const IterationRecord& r : t.records) {
    if (r.residual_primary > 0.0 && std::isfinite(r.residual_primary)) {
      pts.emplace_back(static_cast<double>(r.n), std::log10(r.residual_primary));
    }
  }
  auto fmt = [](double v, int prec) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return std::string(buf);
  };
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + title +
         "</text>\n";
  svg += "<line x1=\"70\" y1=\"350\" x2=\"620\" y2=\"350\" stroke=\"black\"/>\n";
  svg += "<line x1=\"70\" y1=\"40\" x2=\"70\" y2=\"350\" stroke=\"black\"/>\n";
  svg += "<text x=\"345\" y=\"385\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">n</text>\n";
  svg += "<text x=\"18\" y=\"195\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 18 195)\">log10 residual</text>\n";
  if (pts.empty()) {
    svg += "<text x=\"345\" y=\"195\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           "no positive residuals</text>\n</svg>\n";
    return svg;
  }
  double n0 = pts.front().first, n1 = pts.back().first;
  double y0 = pts.front().second, y1 = y0;
  for (const auto& [n, y] : pts) {
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  y0 = std::floor(y0);
  y1 = std::ceil(y1);
  if (y1 <= y0) y1 = y0 + 1.0;
  if (n1 <= n0) n1 = n0 + 1.0;
  auto px = [&](double n) { return L + (W - L - R) * (n - n0) / (n1 - n0); };
  auto py = [&](double y) { return H - B - (H - T - B) * (y - y0) / (y1 - y0); };
  svg += "<text x=\"70\" y=\"366\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         fmt(n0, 0) + "</text>\n";
  svg += "<text x=\"620\" y=\"366\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         fmt(n1, 0) + "</text>\n";
  svg += "<text x=\"64\" y=\"354\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(y0, 0) +
         "</text>\n";
  svg += "<text x=\"64\" y=\"44\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(y1, 0) +
         "</text>\n";
  svg += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) svg += ' ';
    svg += fmt(px(pts[i].first), 2) + "," + fmt(py(pts[i].second), 2);
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

}  // namespace splitfp::cli
