#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "splitfp/cli/config.hpp"
#include "splitfp/cli/summary.hpp"
#include "splitfp/cli/trace_io.hpp"
#include "splitfp/examples/catalog.hpp"
#include "splitfp/operators/catalog.hpp"
#include "splitfp/operators/verify.hpp"
#include "splitfp/solvers/driver.hpp"

namespace fs = std::filesystem;
using namespace splitfp;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kInvalid = 2;
constexpr int kBreakdown = 3;

struct RunOptions {
  std::string config;
  std::string example;
  std::string out_dir = ".";
  std::optional<long> max_iters;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::string wq_branch;
  std::string format = "csv";
};

struct ReproduceOptions {
  std::string table;
  std::string wq_branch = "swapped";
  std::string out_dir;
};

struct VerifyOptions {
  std::string op;
  std::string cls;
  int samples = 1000;
  std::uint64_t seed = 1;
  std::optional<double> k;
  std::optional<int> dim;
  bool full = false;
};

std::string ten_digits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Ten significant digits, truncated after rounding to fifteen (the layout
// of the published tables).
std::string table_digits(double v) {
  if (v == 0.0 || !std::isfinite(v)) return ten_digits(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.14e", v);
  const std::string s = buf;
  const bool neg = s[0] == '-';
  const std::size_t e_pos = s.find('e');
  std::string digits;
  for (std::size_t i = neg ? 1 : 0; i < e_pos; ++i) {
    if (s[i] != '.') digits += s[i];
  }
  digits.resize(10);
  const int exp = std::stoi(s.substr(e_pos + 1));
  std::string out = neg ? "-" : "";
  if (exp >= 10 || exp < -5) return out + digits.substr(0, 1) + "." + digits.substr(1) + "e" + std::to_string(exp);
  if (exp < 0) return out + "0." + std::string(-exp - 1, '0') + digits;
  return out + digits.substr(0, exp + 1) + "." + digits.substr(exp + 1);
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + p.string());
  out << content;
}

void set_branch(ProblemSpec& spec, const std::string& branch) {
  if (branch.empty()) return;
  const WqBranch b = parse_wq_branch(branch);
  if (auto* p = std::get_if<ScfpepProblem>(&spec.problem)) p->branch = b;
}

int cmd_run(const RunOptions& o) {
  if (o.config.empty() == o.example.empty()) throw ValidationError("run: give exactly one of --config or --example");
  cli::RunConfig cfg = o.config.empty() ? cli::run_config_from_json(json{{"example", o.example}})
                                        : cli::load_run_config(o.config);
  set_branch(cfg.spec, o.wq_branch);
  if (o.max_iters) cfg.stopping.max_iters = *o.max_iters;
  if (o.tol) cfg.stopping.residual_tol = *o.tol;
  cfg.stopping.validate();
  if (o.format != "csv" && o.format != "json") throw ValidationError("run: --format must be csv or json");

  std::optional<examples::NamedExample> example;
  if (cfg.example_id) {
    example = examples::find_example(*cfg.example_id);
    example->spec = cfg.spec;
  }
  const IterationTrace trace = run(cfg.spec, cfg.x0, cfg.y0, cfg.stopping);

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  fs::path trace_path = dir / cfg.outputs.trace;
  if (o.format == "json") {
    trace_path.replace_extension(".json");
    write_file(trace_path, cli::trace_to_json(trace).dump(1) + "\n");
  } else {
    std::ostringstream csv;
    cli::write_trace_csv(trace, csv);
    write_file(trace_path, csv.str());
  }
  // Expected rows beyond a shortened run are not checked.
  if (example && cfg.stopping.max_iters != example->rule.max_iters) example.reset();
  const json summary = cli::run_summary(cfg.spec, trace, example, o.seed);
  write_file(dir / cfg.outputs.summary, summary.dump(2) + "\n");
  const std::string title = (cfg.example_id ? *cfg.example_id : family_name(trace.family)) + ": log10 residual";
  write_file(dir / cfg.outputs.plot, cli::residual_svg(trace, title));

  std::cout << "family: " << family_name(trace.family) << "\n"
            << "stop reason: " << stop_reason_name(trace.stop_reason) << "\n"
            << "records: " << trace.records.size() << "\n"
            << "final residual: " << ten_digits(trace.final_record().residual_primary) << "\n"
            << "trace: " << trace_path.string() << "\n";
  return kOk;
}

int cmd_reproduce(const ReproduceOptions& o) {
  const examples::NamedExample e = examples::example_for_table(o.table, parse_wq_branch(o.wq_branch));
  const examples::Start& s = e.starts.front();
  const IterationTrace trace = run(e.spec, s.x0, s.y0, e.rule);

  std::set<long> rows = {0, 1, 2, 3, trace.final_record().n};
  for (const examples::ExpectedValue& ev : e.expected) {
    if (ev.n && *ev.n != 0 && e.id != "bnm_t2") rows.insert(*ev.n);
  }
  if (e.id == "bnm_t2") rows.insert({98, 99, 100});
  std::cout << e.id << ": " << e.title << "\n";
  if (auto* p = std::get_if<ScfpepProblem>(&e.spec.problem)) {
    std::cout << "branch: " << wq_branch_name(p->branch) << "\n";
  }
  std::cout << "n\tx_n\ty_n\n";
  for (long n : rows) {
    if (n >= static_cast<long>(trace.records.size())) continue;
    const IterationRecord& r = trace.records[n];
    std::cout << n << '\t' << table_digits(r.x[0]) << '\t' << (r.y ? table_digits((*r.y)[0]) : "") << '\n';
  }

  int failures = 0;
  for (const examples::RowCheck& c : examples::check_expected(e, trace)) {
    const std::string var = std::string(1, c.expected.var) + "_" + std::to_string(c.n);
    const std::string line = var + " expected " + ten_digits(c.expected.value) + " got " + ten_digits(c.got) +
                             " delta " + ten_digits(std::abs(c.got - c.expected.value));
    if (!c.expected.pinned) {
      if (!c.ok) std::cout << "note (not pinned): " << line << "\n";
    } else if (!c.ok) {
      ++failures;
      std::cout << "MISMATCH " << line << " tol " << ten_digits(c.expected.tol) << "\n";
    }
  }
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    std::ostringstream csv;
    cli::write_trace_csv(trace, csv);
    write_file(fs::path(o.out_dir) / (o.table + ".csv"), csv.str());
  }
  std::cout << (failures == 0 ? "all pinned rows match" : std::to_string(failures) + " pinned rows differ") << "\n";
  return failures == 0 ? kOk : kMismatch;
}

int cmd_verify(const VerifyOptions& o) {
  FixedPointMap t = o.dim ? cli::config_detail::catalog_operator(o.op, o.dim) : catalog::find_operator(o.op);
  json cls = o.cls;
  if (o.k) cls = json{{"tag", o.cls}, {"k", *o.k}, {"lipschitz", *o.k}, {"eta", *o.k}};
  const MapClass c = cli::config_detail::map_class(cls, "class");
  const InequalityReport r = verify_class(t, c, o.samples, o.seed);
  if (o.full) {
    std::cout << r.to_text();
  } else {
    std::cout << "subject: " << r.subject << "\n"
              << "relation: " << r.relation << "\n"
              << "seed: " << r.seed << "\n"
              << "records: " << r.records.size() << "\n"
              << "violations: " << r.violations() << "\n";
  }
  if (const InequalityRecord* w = r.first_violation()) {
    std::cout << std::setprecision(17) << "witness: x=" << w->x;
    if (w->other) std::cout << " other=" << *w->other;
    std::cout << " n=" << w->power << " lhs=" << w->lhs << " rhs=" << w->rhs << "\n";
    return kMismatch;
  }
  std::cout << "pass\n";
  return kOk;
}

int cmd_list(const std::string& format) {
  const std::vector<examples::NamedExample> all = examples::catalog();
  if (format == "json") {
    json out = json::array();
    for (const examples::NamedExample& e : all) {
      json starts = json::array();
      for (const examples::Start& s : e.starts) {
        json j{{"x", cli::point_json(s.x0)}};
        if (s.y0) j["y"] = cli::point_json(*s.y0);
        starts.push_back(j);
      }
      json expected = json::array();
      for (const examples::ExpectedValue& ev : e.expected) {
        expected.push_back({{"n", ev.n ? json(*ev.n) : json("final")},
                            {"var", std::string(1, ev.var) + "_" + std::to_string(ev.component)},
                            {"value", ev.value},
                            {"tol", ev.tol},
                            {"provenance", examples::provenance_name(ev.provenance)},
                            {"pinned", ev.pinned}});
      }
      out.push_back({{"id", e.id},
                     {"title", e.title},
                     {"table", e.table ? json(*e.table) : json(nullptr)},
                     {"family", family_name(e.spec.family())},
                     {"starts", starts},
                     {"max_iters", e.rule.max_iters},
                     {"expected", expected},
                     {"notes", e.notes}});
    }
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  if (format != "csv") throw ValidationError("list-examples: --format must be csv or json");
  std::cout << "id,family,table,title\n";
  for (const examples::NamedExample& e : all) {
    std::cout << e.id << ',' << family_name(e.spec.family()) << ',' << e.table.value_or("") << ",\"" << e.title
              << "\"\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed point and split feasibility solvers"};
  app.require_subcommand(1);

  RunOptions run_o;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a solver and write trace, summary and plot");
  run_cmd->add_option("--config", run_o.config, "Run configuration (JSON)");
  run_cmd->add_option("--example", run_o.example, "Catalog example id instead of a config");
  run_cmd->add_option("--out-dir", run_o.out_dir, "Output directory");
  run_cmd->add_option("--max-iters", run_o.max_iters, "Override max iterations");
  run_cmd->add_option("--tol", run_o.tol, "Override residual tolerance");
  run_cmd->add_option("--seed", run_o.seed, "Seed recorded in the summary");
  run_cmd->add_option("--wq-branch", run_o.wq_branch, "Operator assignment for common fixed point problems")
      ->check(CLI::IsMember({"as_printed", "swapped"}));
  run_cmd->add_option("--format", run_o.format, "Trace format")->check(CLI::IsMember({"csv", "json"}));

  ReproduceOptions rep_o;
  CLI::App* rep_cmd = app.add_subcommand("reproduce", "Reproduce a published table and check pinned rows");
  rep_cmd->add_option("table", rep_o.table, "t1, t2, t3 or t4")->required();
  rep_cmd->add_option("--wq-branch", rep_o.wq_branch, "Operator assignment for t3/t4")
      ->check(CLI::IsMember({"as_printed", "swapped"}));
  rep_cmd->add_option("--out-dir", rep_o.out_dir, "Also write the trace CSV here");

  VerifyOptions ver_o;
  CLI::App* ver_cmd = app.add_subcommand("verify", "Sample-check an operator against a class inequality");
  ver_cmd->add_option("operator", ver_o.op, "Catalog operator name")->required();
  ver_cmd->add_option("class", ver_o.cls, "Class name, e.g. quasi-nonexpansive")->required();
  ver_cmd->add_option("--samples", ver_o.samples, "Number of samples");
  ver_cmd->add_option("--seed", ver_o.seed, "Sampling seed");
  ver_cmd->add_option("--k", ver_o.k, "Class constant (k, Lipschitz constant or eta)");
  ver_cmd->add_option("--dim", ver_o.dim, "Dimension for identity, scaledNeg, ballMap");
  ver_cmd->add_flag("--full", ver_o.full, "Print every checked record");

  std::string list_format = "csv";
  CLI::App* list_cmd = app.add_subcommand("list-examples", "List the example catalog");
  list_cmd->add_option("--format", list_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*run_cmd) return cmd_run(run_o);
    if (*rep_cmd) return cmd_reproduce(rep_o);
    if (*ver_cmd) return cmd_verify(ver_o);
    return cmd_list(list_format);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "solver aborted: " << e.what() << "\n";
    return kBreakdown;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
