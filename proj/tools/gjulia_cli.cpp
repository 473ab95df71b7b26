// gjulia-cli: potential-theoretic quantities of generalized Julia sets from a
// JSON sequence file. Run with --help for the commands.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gjulia/errors.hpp"
#include "gjulia/io.hpp"
#include "gjulia/k1_gamma.hpp"
#include "gjulia/measure.hpp"
#include "gjulia/orthopoly.hpp"
#include "gjulia/real_julia.hpp"
#include "gjulia/sequence.hpp"

namespace {

using nlohmann::json;
using namespace gjulia;

struct Job {
  std::string input;
  std::string output;
  std::string precision = "auto";
};

void emit(const Job& job, const std::string& text) {
  if (job.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(job.output, std::ios::binary);
  if (!out) throw InputError("cannot write " + job.output);
  out << text;
}

void emit_json(const Job& job, const SequenceInput& in, const std::string& command,
               const std::string& precision, json levels, json result, json errors) {
  json doc;
  doc["command"] = command;
  doc["input_digest"] = in.digest;
  doc["precision"] = precision;
  doc["levels"] = std::move(levels);
  doc["error_estimates"] = std::move(errors);
  doc["result"] = std::move(result);
  doc["sequence"] = in.document;
  emit(job, doc.dump(2) + "\n");
}

std::vector<std::string> csv_metadata(const SequenceInput& in, const std::string& command,
                                      const std::string& precision) {
  return {"command " + command, "input_digest " + in.digest, "precision " + precision};
}

// Commands that only run in double precision.
std::string require_f64(const Job& job, const std::string& command) {
  if (job.precision != "auto" && Precision::parse(job.precision).mode != ScalarMode::kFloat64)
    throw InputError(command + " supports --precision f64 only");
  return "f64";
}

Precision moment_precision(const Job& job, const CompositionTower& tower) {
  if (job.precision == "auto") return default_moment_precision(tower);
  return Precision::parse(job.precision);
}

Complex parse_point(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
    return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw InputError("expected a point \"re,im\", got \"" + text + "\"");
  }
}

const GammaSequence& require_gamma(const SequenceInput& in, const std::string& command) {
  if (!in.gamma) throw PreconditionError(command + " needs a k1_gamma sequence file");
  return *in.gamma;
}

json moment_values(const MomentTable& mt, unsigned bits) {
  json out = json::array();
  if (mt.exact) {
    for (const auto& c : *mt.exact) out.push_back(to_json(c));
  } else if (mt.extended) {
    const int digits = static_cast<int>(std::ceil(bits * 0.30103)) + 2;
    for (const auto& c : *mt.extended) out.push_back(c.str(digits));
  } else {
    for (const auto& c : mt.values) out.push_back(to_json(c));
  }
  return out;
}

const char* mode_name(ScalarMode mode) {
  switch (mode) {
    case ScalarMode::kExactRational: return "rational";
    case ScalarMode::kExtended: return "ext";
    case ScalarMode::kFloat64: return "f64";
  }
  return "f64";
}

int run_validate(const Job& job, int horizon) {
  const auto in = parse_sequence_file(job.input);
  const auto precision = require_f64(job, "validate");
  const auto report = validate_regularity(in.spec, horizon);
  const auto& c = in.spec.constants();
  json violations = json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"n", v.n}, {"j", v.j}, {"inequality", v.inequality}, {"message", v.message}});
  json result = {
      {"ok", report.ok},
      {"family", to_string(in.spec.family())},
      {"witnesses",
       {{"A1", report.min_leading}, {"A2", report.max_ratio}, {"A3", report.max_log_leading_per_degree}}},
      {"constants", {{"A1", c.A1}, {"A2", c.A2}, {"A3", c.A3}}},
      {"escape_radius", escape_radius(c.A1, c.A2)},
      {"violations", violations}};
  emit_json(job, in, "validate", precision, {{"horizon", horizon}}, result, json::object());
  return 0;
}

int run_capacity(const Job& job, double tol) {
  const auto in = parse_sequence_file(job.input);
  const auto precision = require_f64(job, "capacity");
  const CompositionTower tower(in.spec);
  const auto cap = capacity(tower, tol);
  json result = {{"capacity", cap.value}};
  json errors = {{"log_tail_bound", cap.tail_bound}};
  json levels = {{"series_terms", cap.levels}};
  if (in.gamma) {
    const auto closed = capacity_closed_form(*in.gamma);
    result["closed_form"] = closed.value;
    errors["closed_form_log_tail_bound"] = closed.tail_bound;
    levels["closed_form_terms"] = closed.terms;
  }
  emit_json(job, in, "capacity", precision, levels, result, errors);
  return 0;
}

struct Grid {
  double xmin = -2, xmax = 2, ymin = -2, ymax = 2;
  int nx = 101, ny = 101;
  int kmax = kDefaultGreenLevels;
};

int run_green_grid(const Job& job, const Grid& g) {
  const auto in = parse_sequence_file(job.input);
  const auto precision = require_f64(job, "green-grid");
  if (g.nx < 2 || g.ny < 2 || !(g.xmax > g.xmin) || !(g.ymax > g.ymin))
    throw InputError("grid needs nx, ny >= 2 and increasing bounds");
  const CompositionTower tower(in.spec);
  std::vector<std::vector<double>> rows;
  double max_error = 0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.ymin + (g.ymax - g.ymin) * j / (g.ny - 1);
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.xmin + (g.xmax - g.xmin) * i / (g.nx - 1);
      const auto r = green(tower, Complex(x, y), g.kmax);
      max_error = std::max(max_error, r.error_estimate);
      rows.push_back({x, y, r.value, r.error_estimate, r.escaped ? 1.0 : 0.0});
    }
  }
  auto meta = csv_metadata(in, "green-grid", precision);
  meta.push_back("levels k_max=" + std::to_string(g.kmax));
  meta.push_back("grid " + std::to_string(g.nx) + "x" + std::to_string(g.ny) + " row-major, y outer");
  meta.push_back("error_estimate max=" + format_double(max_error));
  emit(job, csv_document(meta, {"x", "y", "green", "error", "escaped"}, rows));
  return 0;
}

int run_measure(const Job& job, int level, const std::string& anchor_text) {
  const auto in = parse_sequence_file(job.input);
  const auto precision = require_f64(job, "measure");
  const CompositionTower tower(in.spec);
  const Complex anchor = anchor_text.empty() ? default_anchor(tower) : parse_point(anchor_text);
  const auto m = preimage_measure(tower, anchor, level);
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < m.points.size(); ++i)
    rows.push_back({m.points(i).real(), m.points(i).imag(), m.weight_value()});
  auto meta = csv_metadata(in, "measure", precision);
  meta.push_back("levels k=" + std::to_string(level));
  meta.push_back("anchor " + format_double(anchor.real()) + "," + format_double(anchor.imag()));
  meta.push_back("weight " + to_string(m.weight));
  meta.push_back("error_estimate preimage_residual=" + format_double(preimage_residual(tower, m)));
  emit(job, csv_document(meta, {"re", "im", "weight"}, rows));
  return 0;
}

int run_moments(const Job& job, int level) {
  const auto in = parse_sequence_file(job.input);
  const CompositionTower tower(in.spec);
  const auto p = moment_precision(job, tower);
  std::optional<ExtendedPrecisionScope> scope;
  if (p.mode == ScalarMode::kExtended) scope.emplace(p.bits);
  const auto mt = moments(tower, level, p);
  json result = {{"c", moment_values(mt, p.bits)}, {"count", mt.size()}};
  emit_json(job, in, "moments", p.to_string(), {{"level", level}}, result,
            {{"imaginary_defect", mt.imaginary_defect()}});
  return 0;
}

int run_opoly(const Job& job, int level, int check_level) {
  const auto in = parse_sequence_file(job.input);
  const auto precision = require_f64(job, "opoly");
  const CompositionTower tower(in.spec);
  const auto p = explicit_P_block(tower, level);
  const auto p1 = explicit_P1(in.spec);
  json result = {{"index", p.index},
                 {"coefficients", p.exact ? to_json(*p.exact) : to_json(p.numeric)},
                 {"P1", p1.exact ? to_json(*p1.exact) : to_json(p1.numeric)}};
  json levels = {{"level", level}};
  json errors = json::object();
  if (check_level > 0) {
    const auto m = preimage_measure(tower, default_anchor(tower), check_level);
    const auto res = orthogonality_residual(p.numeric, m, p.index - 1);
    double worst = 0;
    for (double r : res) worst = std::max(worst, r);
    levels["measure_level"] = check_level;
    errors["orthogonality_residual"] = worst;
  }
  emit_json(job, in, "opoly", precision, levels, result, errors);
  return 0;
}

int run_jacobi(const Job& job, int level, int N) {
  const auto in = parse_sequence_file(job.input);
  const CompositionTower tower(in.spec);
  const auto p = moment_precision(job, tower);
  std::optional<ExtendedPrecisionScope> scope;
  if (p.mode == ScalarMode::kExtended) scope.emplace(p.bits);
  const auto mt = moments(tower, level, p);
  const auto jc = jacobi_from_moments(mt, N);
  json result = {{"N", jc.N}, {"mode", mode_name(jc.mode)}};
  if (jc.a2_exact) {
    json a2 = json::array(), b = json::array(), a = json::array(), h = json::array();
    for (const auto& v : *jc.a2_exact) a2.push_back(to_json(v));
    for (const auto& v : *jc.b_exact) b.push_back(to_json(v));
    for (const auto& v : *jc.hankel_exact) h.push_back(to_json(v));
    for (std::size_t i = 0; i < jc.a_exact.size(); ++i)
      a.push_back(jc.a_exact[i] ? to_json(*jc.a_exact[i]) : json(jc.a[i]));
    result["a2"] = a2;
    result["b"] = b;
    result["a"] = a;
    result["hankel"] = h;
  } else {
    result["a2"] = jc.a2;
    result["b"] = jc.b;
    result["a"] = jc.a;
    result["hankel"] = jc.hankel;
  }
  emit_json(job, in, "jacobi", p.to_string(), {{"level", level}, {"moments_used", 2 * N + 1}},
            result, {{"imaginary_defect", mt.imaginary_defect()}});
  return 0;
}

int run_resolvent(const Job& job, int level, const std::string& z_text,
                  std::optional<int> truncation, int support_level) {
  const auto in = parse_sequence_file(job.input);
  const CompositionTower tower(in.spec);
  const auto p = moment_precision(job, tower);
  std::optional<ExtendedPrecisionScope> scope;
  if (p.mode == ScalarMode::kExtended) scope.emplace(p.bits);
  const auto mt = moments(tower, level, p);
  const double M = support_bound(tower, support_level);
  const auto r = resolvent(mt, parse_point(z_text), M, truncation);
  json result = {{"z", to_json(r.z)}, {"value", to_json(r.value)}, {"support_bound", M}};
  emit_json(job, in, "resolvent", p.to_string(),
            {{"level", level}, {"truncation", r.truncation}, {"support_level", support_level}},
            result, {{"tail_bound", r.tail_bound}});
  return 0;
}

int run_intervals(const Job& job, int n) {
  const auto in = parse_sequence_file(job.input);
  const auto precision = require_f64(job, "intervals");
  const CompositionTower tower(in.spec);
  const auto sys = basic_intervals(tower, n);
  const auto report = cantor_diagnostics(sys);
  json levels = json::array();
  double residual = 0;
  for (const auto& lvl : sys.levels) {
    json iv = json::array(), gaps = json::array();
    for (const auto& I : lvl.intervals) {
      iv.push_back({static_cast<double>(I.a), static_cast<double>(I.b)});
      for (long double x : {I.a, I.b})
        residual = std::max(residual, static_cast<double>(
                                          std::abs(std::abs(tower_eval_real(tower, x, lvl.n)) - 1)));
    }
    for (const auto& G : lvl.gaps) gaps.push_back({static_cast<double>(G.a), static_cast<double>(G.b)});
    levels.push_back({{"n", lvl.n}, {"intervals", iv}, {"parent", lvl.parent}, {"gaps", gaps}});
  }
  json diag = json::array();
  for (const auto& c : report.levels) {
    json row = {{"n", c.n}, {"count", c.count}, {"max_length", c.max_length},
                {"total_length", c.total_length}};
    if (c.min_gap) row["min_gap"] = *c.min_gap;
    diag.push_back(row);
  }
  json result = {{"levels", levels},
                 {"diagnostics", diag},
                 {"max_length_decreasing", report.max_length_decreasing},
                 {"total_length_nonincreasing", report.total_length_nonincreasing}};
  emit_json(job, in, "intervals", precision, {{"n", n}}, result,
            {{"endpoint_residual", residual}});
  return 0;
}

int run_k1_smoothness(const Job& job, int horizon, int samples) {
  const auto in = parse_sequence_file(job.input);
  const auto precision = require_f64(job, "k1-smoothness");
  const auto& gs = require_gamma(in, "k1-smoothness");
  const auto report = smoothness_verdict(gs, horizon);
  const auto probe = holder_constant_probe(gs, CompositionTower(in.spec), samples);
  json rows = json::array();
  double worst = 0;
  for (const auto& s : probe.samples) {
    json row = {{"t", s.t}, {"green", s.green}, {"ratio", s.ratio}};
    if (s.exact_green) {
      row["exact_green"] = *s.exact_green;
      worst = std::max(worst, std::abs(s.green - *s.exact_green));
    }
    rows.push_back(row);
  }
  json result = {{"verdict", to_string(report.verdict)},
                 {"reason", report.reason},
                 {"epsilon_partial_sums", report.epsilon_partial_sums},
                 {"four_n_delta", report.four_n_delta},
                 {"holder_probe", {{"samples", rows}, {"max_ratio", probe.max_ratio}}}};
  json errors = json::object();
  if (worst > 0 || (!probe.samples.empty() && probe.samples[0].exact_green))
    errors["green_vs_exact"] = worst;
  emit_json(job, in, "k1-smoothness", precision, {{"horizon", horizon}, {"samples", samples}},
            result, errors);
  return 0;
}

int run_k1_pw(const Job& job, int N, int depth_offset, bool csv) {
  const auto in = parse_sequence_file(job.input);
  const auto precision = require_f64(job, "k1-pw");
  const auto& gs = require_gamma(in, "k1-pw");
  if (csv) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : k1_table(gs, N))
      rows.push_back({double(r.n), r.gamma, r.epsilon, r.delta, r.first_length, r.pw_term, r.pw_partial});
    auto meta = csv_metadata(in, "k1-pw", precision);
    meta.push_back("levels N=" + std::to_string(N));
    meta.push_back("error_estimate none (closed-form recursions)");
    emit(job, csv_document(meta, {"n", "gamma", "epsilon", "delta", "l1", "s", "S"}, rows));
    return 0;
  }
  const auto pw = pw_sum(gs, N, depth_offset);
  json result = {{"critical_points", pw.critical_points},
                 {"terms", pw.terms},
                 {"partial_sums", pw.partial_sums},
                 {"lower_bound_ok", pw.lower_bound_ok},
                 {"verdict_hint", to_string(pw.verdict_hint)}};
  emit_json(job, in, "k1-pw", precision, {{"N", N}, {"depth_offset", pw.depth_offset}}, result,
            {{"green_truncation", "below double resolution at depth n + depth_offset"}});
  return 0;
}

void print_error(ErrorKind kind, const std::string& message) {
  json err = {{"error", {{"kind", to_string(kind)}, {"exit_code", static_cast<int>(kind)},
                         {"message", message}}}};
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Julia sets of regular polynomial sequences"};
  app.require_subcommand(1);
  Job job;
  std::function<int()> action;

  auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", job.input, "JSON sequence file")->required();
    sub->add_option("-o,--output", job.output, "output file (default stdout)");
    sub->add_option("--precision", job.precision, "f64, ext:<bits> or rational");
    return sub;
  };

  int horizon = 50;
  auto* validate = add("validate", "check the regularity inequalities");
  validate->add_option("--horizon", horizon)->check(CLI::Range(1, 100000));
  validate->callback([&] { action = [&] { return run_validate(job, horizon); }; });

  double tol = 1e-12;
  auto* cap = add("capacity", "logarithmic capacity");
  cap->add_option("--tol", tol)->check(CLI::PositiveNumber);
  cap->callback([&] { action = [&] { return run_capacity(job, tol); }; });

  Grid grid;
  auto* gg = add("green-grid", "Green's function on a grid (CSV)");
  gg->add_option("--xmin", grid.xmin);
  gg->add_option("--xmax", grid.xmax);
  gg->add_option("--ymin", grid.ymin);
  gg->add_option("--ymax", grid.ymax);
  gg->add_option("--nx", grid.nx)->check(CLI::Range(2, 4096));
  gg->add_option("--ny", grid.ny)->check(CLI::Range(2, 4096));
  gg->add_option("--kmax", grid.kmax)->check(CLI::Range(1, 160));
  gg->callback([&] { action = [&] { return run_green_grid(job, grid); }; });

  int level = 6;
  std::string anchor;
  auto* meas = add("measure", "preimage counting measure (CSV)");
  meas->add_option("--level", level)->check(CLI::Range(1, 40));
  meas->add_option("--anchor", anchor, "re,im");
  meas->callback([&] { action = [&] { return run_measure(job, level, anchor); }; });

  auto* mom = add("moments", "moments c_0..c_{D_l - 1} of the equilibrium measure");
  mom->add_option("--level,--levels", level)->check(CLI::Range(1, 40));
  mom->callback([&] { action = [&] { return run_moments(job, level); }; });

  int check_level = 0;
  auto* op = add("opoly", "explicit orthogonal polynomial P_{D_l}");
  op->add_option("--level,--levels", level)->check(CLI::Range(0, 40));
  op->add_option("--check-level", check_level, "measure level for an orthogonality residual")
      ->check(CLI::Range(0, 20));
  op->callback([&] { action = [&] { return run_opoly(job, level, check_level); }; });

  int N = 5;
  auto* jac = add("jacobi", "Jacobi recurrence coefficients from moments");
  jac->add_option("--level,--levels", level)->check(CLI::Range(1, 40));
  jac->add_option("-N", N)->check(CLI::Range(1, 100000));
  jac->callback([&] { action = [&] { return run_jacobi(job, level, N); }; });

  std::string z;
  std::optional<int> truncation;
  int support_level = 10;
  auto* res = add("resolvent", "Stieltjes transform of the equilibrium measure");
  res->add_option("--level,--levels", level)->check(CLI::Range(1, 40));
  res->add_option("--z", z, "re,im")->required();
  res->add_option("--truncation", truncation)->check(CLI::NonNegativeNumber);
  res->add_option("--support-level", support_level)->check(CLI::Range(1, 20));
  res->callback([&] {
    action = [&] { return run_resolvent(job, level, z, truncation, support_level); };
  });

  int n = 6;
  auto* iv = add("intervals", "basic intervals of a real Cantor-type set");
  iv->add_option("-n,--n", n)->check(CLI::Range(0, 30));
  iv->callback([&] { action = [&] { return run_intervals(job, n); }; });

  int samples = 11;
  auto* sm = add("k1-smoothness", "Hoelder-1/2 verdict and probe for K_1(gamma)");
  sm->add_option("--horizon", horizon)->check(CLI::Range(1, 100000));
  sm->add_option("--samples", samples)->check(CLI::Range(2, 1000));
  sm->callback([&] { action = [&] { return run_k1_smoothness(job, horizon, samples); }; });

  int depth_offset = 40;
  bool csv = false;
  auto* pw = add("k1-pw", "Parreau-Widom partial sums for K_1(gamma)");
  pw->add_option("-N", N)->check(CLI::Range(1, 1000));
  pw->add_option("--depth-offset", depth_offset)->check(CLI::Range(1, 4000));
  pw->add_flag("--csv", csv, "emit the (n, gamma, eps, delta, l1, s, S) table");
  pw->callback([&] { action = [&] { return run_k1_pw(job, N, depth_offset, csv); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(ErrorKind::kInput, e.what());
    return static_cast<int>(ErrorKind::kInput);
  }

  try {
    return action();
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    print_error(ErrorKind::kNumerical, e.what());
    return static_cast<int>(ErrorKind::kNumerical);
  }
}
