#include "gjulia/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "gjulia/errors.hpp"

namespace gjulia {

const char* to_string(Family family) {
  switch (family) {
    case Family::kExplicit:
      return "explicit";
    case Family::kQuadraticC:
      return "quadratic_c";
    case Family::kK1Gamma:
      return "k1_gamma";
    case Family::kAutonomous:
      return "autonomous";
  }
  return "explicit";
}

const char* to_string(TailRule tail) {
  switch (tail) {
    case TailRule::kRepeatLast:
      return "repeat-last";
    case TailRule::kRepeatCycle:
      return "repeat-cycle";
    case TailRule::kFinite:
      return "explicit-finite";
  }
  return "repeat-last";
}

Generator Generator::from_exact(const Polynomial<Rational>& p) {
  return Generator{p.cast<Complex>(), p};
}

Generator Generator::from_coefficients(const std::vector<ComplexRational>& c) {
  if (c.empty()) throw InputError("polynomial with no coefficients");
  bool real = true;
  Polynomial<Complex>::Coefficients numeric(static_cast<Eigen::Index>(c.size()));
  Polynomial<Rational>::Coefficients exact(static_cast<Eigen::Index>(c.size()));
  for (std::size_t j = 0; j < c.size(); ++j) {
    numeric(j) = Complex(to_double(c[j].re), to_double(c[j].im));
    exact(j) = c[j].re;
    if (c[j].im != 0) real = false;
  }
  Generator g{Polynomial<Complex>(std::move(numeric)), std::nullopt};
  if (real) g.exact = Polynomial<Rational>(std::move(exact));
  return g;
}

Generator Generator::from_numeric(const Polynomial<Complex>& p) {
  return Generator{p, std::nullopt};
}

bool Generator::is_real() const {
  const auto& c = numeric.coefficients();
  for (Eigen::Index j = 0; j < c.size(); ++j)
    if (c(j).imag() != 0.0) return false;
  return true;
}

namespace {

RegularityReport witnesses(const std::vector<Generator>& generators) {
  RegularityReport report;
  report.horizon = static_cast<int>(generators.size());
  report.min_leading = std::numeric_limits<double>::infinity();
  report.max_log_leading_per_degree = -std::numeric_limits<double>::infinity();
  for (const auto& g : generators) {
    const auto& p = g.numeric;
    const double lead = std::abs(p.leading());
    report.min_leading = std::min(report.min_leading, lead);
    for (int j = 0; j < p.degree(); ++j)
      report.max_ratio = std::max(report.max_ratio, std::abs(p[j]) / lead);
    report.max_log_leading_per_degree = std::max(
        report.max_log_leading_per_degree, std::log(lead) / p.degree());
  }
  return report;
}

Generator pick(const std::vector<Generator>& list, TailRule tail, int n) {
  const int size = static_cast<int>(list.size());
  if (n < 1) throw PreconditionError("generator index must be >= 1");
  if (n <= size) return list[n - 1];
  switch (tail) {
    case TailRule::kRepeatLast:
      return list.back();
    case TailRule::kRepeatCycle:
      return list[(n - 1) % size];
    case TailRule::kFinite:
      break;
  }
  throw PreconditionError("sequence is explicit-finite with " +
                          std::to_string(size) + " generators; f_" +
                          std::to_string(n) + " requested");
}

std::string format_value(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

SequenceSpec::SequenceSpec(Family family, TailRule tail, Source source,
                           std::optional<int> length,
                           RegularityConstants constants)
    : family_(family),
      tail_(tail),
      source_(std::move(source)),
      length_(length),
      constants_(constants) {
  if (!(constants_.A1 > 0 && constants_.A2 > 0 && constants_.A3 > 0))
    throw InputError("regularity constants A1, A2, A3 must be positive");
}

SequenceSpec SequenceSpec::from_list(
    std::vector<Generator> generators, TailRule tail,
    std::optional<RegularityConstants> constants) {
  if (generators.empty()) throw InputError("sequence needs a generator");
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].degree() < 2)
      throw InputError("f_" + std::to_string(i + 1) +
                       " has degree < 2; generators must be nonlinear");
  const RegularityConstants c =
      constants ? *constants : constants_from_witnesses(witnesses(generators));
  std::optional<int> length;
  if (tail == TailRule::kFinite) length = static_cast<int>(generators.size());
  auto list = std::make_shared<const std::vector<Generator>>(
      std::move(generators));
  return SequenceSpec(
      Family::kExplicit, tail,
      [list, tail](int n) { return pick(*list, tail, n); }, length, c);
}

SequenceSpec SequenceSpec::autonomous(
    Generator f, std::optional<RegularityConstants> constants) {
  SequenceSpec spec = from_list({std::move(f)}, TailRule::kRepeatLast,
                                constants);
  return spec.with_family(Family::kAutonomous);
}

SequenceSpec SequenceSpec::quadratic_c(
    const std::vector<ComplexRational>& c, TailRule tail,
    std::optional<RegularityConstants> constants) {
  std::vector<Generator> generators;
  generators.reserve(c.size());
  for (const auto& value : c)
    generators.push_back(Generator::from_coefficients(
        {value, ComplexRational{0, 0}, ComplexRational{1, 0}}));
  return from_list(std::move(generators), tail, constants)
      .with_family(Family::kQuadraticC);
}

Generator SequenceSpec::generator(int n) const {
  if (n < 1) throw PreconditionError("generator index must be >= 1");
  if (length_ && n > *length_)
    throw PreconditionError("sequence has only " + std::to_string(*length_) +
                            " generators; f_" + std::to_string(n) +
                            " requested");
  return source_(n);
}

SequenceSpec SequenceSpec::shifted(int k) const {
  if (k < 0) throw PreconditionError("shift must be >= 0");
  std::optional<int> length;
  if (length_) {
    if (*length_ <= k)
      throw PreconditionError("shift exceeds the finite sequence length");
    length = *length_ - k;
  }
  Source source = source_;
  return SequenceSpec(family_, tail_,
                      [source, k](int n) { return source(n + k); }, length,
                      constants_);
}

SequenceSpec SequenceSpec::with_constants(RegularityConstants constants) const {
  return SequenceSpec(family_, tail_, source_, length_, constants);
}

SequenceSpec SequenceSpec::with_family(Family family) const {
  SequenceSpec copy = *this;
  copy.family_ = family;
  return copy;
}

RegularityReport validate_regularity(const SequenceSpec& spec, int horizon) {
  if (horizon < 1) throw PreconditionError("horizon must be >= 1");
  if (spec.length()) horizon = std::min(horizon, *spec.length());
  std::vector<Generator> generators;
  generators.reserve(horizon);
  for (int n = 1; n <= horizon; ++n) generators.push_back(spec.generator(n));
  RegularityReport report = witnesses(generators);

  const auto& c = spec.constants();
  auto fail = [&](int n, int j, const char* which, std::string message) {
    report.ok = false;
    report.violations.push_back({n, j, which, std::move(message)});
  };
  for (int n = 1; n <= horizon; ++n) {
    const auto& p = generators[n - 1].numeric;
    const int d = p.degree();
    if (d < 2) {
      fail(n, -1, "degree", "deg f_" + std::to_string(n) + " = " +
                                std::to_string(d) + " < 2");
      continue;
    }
    const double lead = std::abs(p.leading());
    const std::string lead_name =
        "|a_{" + std::to_string(n) + "," + std::to_string(d) + "}|";
    if (lead < c.A1)
      fail(n, d, "A1", lead_name + "=" + format_value(lead) + " < A1");
    for (int j = 0; j < d; ++j) {
      const double a = std::abs(p[j]);
      if (a > c.A2 * lead)
        fail(n, j, "A2",
             "|a_{" + std::to_string(n) + "," + std::to_string(j) + "}|=" +
                 format_value(a) + " > A2*" + lead_name + "=" +
                 format_value(c.A2 * lead));
    }
    if (std::log(lead) > c.A3 * d)
      fail(n, d, "A3",
           "log" + lead_name + "=" + format_value(std::log(lead)) +
               " > A3*d_" + std::to_string(n) + "=" + format_value(c.A3 * d));
  }
  return report;
}

RegularityConstants constants_from_witnesses(const RegularityReport& report) {
  RegularityConstants c;
  c.A1 = report.min_leading;
  c.A2 = report.max_ratio > 0 ? report.max_ratio : 1.0;
  c.A3 = std::max(report.max_log_leading_per_degree, 1e-3);
  return c;
}

double escape_radius(double A1, double A2) {
  if (!(A1 > 0 && A2 > 0))
    throw PreconditionError("escape_radius requires A1, A2 > 0");
  const double b = A1 * (1.0 + A2) + 2.0;
  double r = (b + std::sqrt(b * b - 8.0 * A1)) / (2.0 * A1);
  r = std::max(r, std::nextafter(1.0 + A2, 2.0 + A2));
  auto holds = [&](double R) { return A1 * R * (1.0 - A2 / (R - 1.0)) > 2.0; };
  r = std::nextafter(r, std::numeric_limits<double>::infinity());
  for (int guard = 0; !holds(r) && guard < 64; ++guard)
    r = std::nextafter(r, std::numeric_limits<double>::infinity());
  if (!holds(r)) r *= 1.0 + 1e-12;
  return r;
}

CompositionTower::CompositionTower(SequenceSpec spec, TowerOptions options)
    : spec_(std::move(spec)), options_(options) {
  int levels = options_.generator_levels;
  if (spec_.length()) levels = std::min(levels, *spec_.length());
  if (levels < 1) throw PreconditionError("tower needs at least one level");
  generators_.reserve(levels);
  for (int n = 1; n <= levels; ++n) generators_.push_back(spec_.generator(n));

  cumulative_degrees_.push_back(BigInt(1));
  inverse_degrees_.push_back(1.0);
  log_leading_sums_.push_back(0.0);
  exact_ = true;
  for (int n = 1; n <= levels; ++n) {
    const Generator& g = generators_[n - 1];
    cumulative_degrees_.push_back(cumulative_degrees_.back() * g.degree());
    inverse_degrees_.push_back(inverse_degrees_.back() / g.degree());
    log_leading_sums_.push_back(log_leading_sums_.back() +
                                std::log(std::abs(g.numeric.leading())) *
                                    inverse_degrees_.back());
    if (!g.exact) exact_ = false;
  }

  composed_.push_back(generators_[0].numeric);
  for (int n = 2; n <= levels; ++n) {
    if (cumulative_degrees_[n] > options_.materialization_cap) break;
    auto outcome = compose_checked(generators_[n - 1].numeric, composed_.back(),
                                   options_.materialization_cap);
    if (outcome.overflow) break;
    composed_.push_back(std::move(*outcome.polynomial));
  }
  if (cumulative_degrees_[1] > options_.materialization_cap) composed_.clear();

  if (exact_) {
    for (int n = 1; n <= levels; ++n) {
      if (cumulative_degrees_[n] > options_.exact_cache_cap) break;
      const auto& f = *generators_[n - 1].exact;
      exact_composed_.push_back(
          n == 1 ? f : compose(f, exact_composed_.back(),
                               options_.materialization_cap));
    }
  }

  const auto& c = spec_.constants();
  escape_radius_ = options_.escape_radius ? *options_.escape_radius
                                          : gjulia::escape_radius(c.A1, c.A2);
}

const Generator& CompositionTower::generator(int n) const {
  if (n < 1 || n > levels())
    throw PreconditionError("tower level " + std::to_string(n) +
                            " outside 1.." + std::to_string(levels()));
  return generators_[n - 1];
}

const Polynomial<Complex>& CompositionTower::composed(int k) const {
  if (k < 1 || k > materialized_levels())
    throw PreconditionError(
        "F_" + std::to_string(k) +
        " is not materialized (degree cap or float overflow); use tower "
        "evaluation");
  return composed_[k - 1];
}

Polynomial<Rational> CompositionTower::composed_exact(int k) const {
  if (!exact_)
    throw PreconditionError(
        "exact compositions need real rational generator coefficients");
  if (k < 1 || k > levels())
    throw PreconditionError("level " + std::to_string(k) + " out of range");
  if (cumulative_degrees_[k] > options_.materialization_cap)
    throw PreconditionError("deg F_" + std::to_string(k) + " = " +
                            cumulative_degrees_[k].str() +
                            " exceeds the materialization cap; lower the level");
  if (k <= static_cast<int>(exact_composed_.size()))
    return exact_composed_[k - 1];
  int start = static_cast<int>(exact_composed_.size());
  Polynomial<Rational> p =
      start > 0 ? exact_composed_.back() : *generators_[0].exact;
  if (start == 0) start = 1;
  for (int n = start + 1; n <= k; ++n)
    p = compose(*generators_[n - 1].exact, p, options_.materialization_cap);
  return p;
}

const BigInt& CompositionTower::cumulative_degree(int k) const {
  if (k < 0 || k > levels())
    throw PreconditionError("level " + std::to_string(k) + " out of range");
  return cumulative_degrees_[k];
}

double CompositionTower::inverse_cumulative_degree(int k) const {
  if (k < 0 || k > levels())
    throw PreconditionError("level " + std::to_string(k) + " out of range");
  return inverse_degrees_[k];
}

double CompositionTower::log_leading_sum(int k) const {
  if (k < 0 || k > levels())
    throw PreconditionError("level " + std::to_string(k) + " out of range");
  return log_leading_sums_[k];
}

CompositionTower CompositionTower::shifted(int k) const {
  return CompositionTower(spec_.shifted(k), options_);
}

double TowerPoint::log_abs() const {
  return log_scale ? log_value.real() : std::log(std::abs(value));
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex log1p_complex(Complex eta) {
  if (std::abs(eta) < 1e-8) return eta - 0.5 * eta * eta;
  return std::log(1.0 + eta);
}

// log f(w) from log w: d log w + log a_d + log(1 + eta) with
// eta = sum_{j<d} (a_j / a_d) w^{j-d}.
Complex log_step(const Polynomial<Complex>& p, Complex log_w) {
  const int d = p.degree();
  const Complex lead = p.leading();
  Complex eta(0.0, 0.0);
  for (int j = 0; j < d; ++j) {
    if (p[j] == Complex(0.0)) continue;
    eta += (p[j] / lead) * std::exp(static_cast<double>(j - d) * log_w);
  }
  Complex out = static_cast<double>(d) * log_w + std::log(lead) +
                log1p_complex(eta);
  out.imag(std::remainder(out.imag(), kTwoPi));
  return out;
}

bool finite(Complex w) {
  return std::isfinite(w.real()) && std::isfinite(w.imag());
}

}  // namespace

TowerPoint tower_start(Complex z) {
  if (std::isnan(z.real()) || std::isnan(z.imag()))
    throw InputError("NaN input point");
  TowerPoint state;
  state.value = z;
  state.log_value = z == Complex(0.0) ? Complex(-std::numeric_limits<double>::infinity(), 0.0)
                                      : std::log(z);
  return state;
}

void advance(const Generator& f, TowerPoint& state, double escape_radius) {
  const auto& p = f.numeric;
  if (!state.log_scale) {
    const Complex w = evaluate(p, state.value);
    if (finite(w) && std::abs(w) <= kLogScaleThreshold) {
      state.value = w;
      state.log_value = w == Complex(0.0)
                            ? Complex(-std::numeric_limits<double>::infinity(), 0.0)
                            : std::log(w);
    } else {
      state.log_value = finite(w) ? std::log(w) : log_step(p, state.log_value);
      state.log_scale = true;
    }
  } else {
    state.log_value = log_step(p, state.log_value);
  }
  ++state.level;
  if (!state.escaped_at && state.log_abs() > std::log(escape_radius))
    state.escaped_at = state.level;
}

TowerPoint tower_eval(const CompositionTower& tower, Complex z, int k) {
  if (k < 1) throw PreconditionError("tower_eval requires k >= 1");
  TowerPoint state = tower_start(z);
  if (std::abs(z) > tower.escape_radius()) state.escaped_at = 0;
  for (int n = 1; n <= k; ++n)
    advance(tower.generator(n), state, tower.escape_radius());
  return state;
}

std::pair<Complex, Complex> tower_eval_with_derivative(
    const CompositionTower& tower, Complex z, int k) {
  if (std::isnan(z.real()) || std::isnan(z.imag()))
    throw InputError("NaN input point");
  Complex value = z;
  Complex slope(1.0, 0.0);
  for (int n = 1; n <= k; ++n) {
    auto [v, s] = evaluate_with_derivative(tower.generator(n).numeric, value);
    slope *= s;
    value = v;
    if (!finite(value) || !finite(slope))
      throw NumericalError("F_" + std::to_string(n) +
                           "(z) left double range; lower k");
  }
  return {value, slope};
}

CapacityResult capacity(const CompositionTower& tower, double tol) {
  if (!(tol > 0)) throw PreconditionError("capacity tolerance must be > 0");
  if (tower.spec().length())
    throw PreconditionError("capacity needs an infinite sequence (tail rule)");
  const auto& c = tower.spec().constants();
  const double scale = 2.0 * (c.A3 + std::max(0.0, -std::log(c.A1)) / 2.0);
  CapacityResult result;
  for (int k = 1; k <= tower.levels(); ++k) {
    result.levels = k;
    result.tail_bound = scale * tower.inverse_cumulative_degree(k);
    if (result.tail_bound < tol) break;
  }
  result.value = std::exp(-tower.log_leading_sum(result.levels));
  if (result.tail_bound >= tol)
    throw NumericalError("capacity tail bound " +
                         format_value(result.tail_bound) +
                         " not below tolerance within available levels");
  return result;
}

GreenResult green_from_state(const CompositionTower& tower, TowerPoint state,
                             int k_max) {
  if (k_max < 1) throw PreconditionError("green requires k_max >= 1");
  if (k_max > tower.levels())
    throw PreconditionError("green needs " + std::to_string(k_max) +
                            " levels; sequence provides " +
                            std::to_string(tower.levels()));
  const double radius = tower.escape_radius();
  state.level = 0;
  state.escaped_at.reset();
  if (state.log_abs() > std::log(radius)) state.escaped_at = 0;

  double previous = state.log_abs();
  double current = previous;
  for (int n = 1; n <= k_max; ++n) {
    advance(tower.generator(n), state, radius);
    previous = current;
    current = state.log_abs() * tower.inverse_cumulative_degree(n);
  }
  GreenResult result;
  result.level_used = k_max;
  if (!state.escaped_at) {
    // Orbit stayed in the escape disk: G(z) = G_k(F_k z)/D_k is at most of
    // order log R / D_k.
    result.value = 0.0;
    result.escaped = false;
    result.error_estimate =
        2.0 * std::log(radius) * tower.inverse_cumulative_degree(k_max);
    return result;
  }
  result.escaped = true;
  result.value = current;
  result.error_estimate = k_max > 1 ? std::abs(current - previous) : current;
  return result;
}

GreenResult green(const CompositionTower& tower, Complex z, int k_max) {
  return green_from_state(tower, tower_start(z), k_max);
}

double green_functional_check(const CompositionTower& tower, Complex z, int k) {
  if (k < 0) throw PreconditionError("depth k must be >= 0");
  const GreenResult direct = green(tower, z);
  if (!direct.escaped)
    throw PreconditionError("green_functional_check requires an escaping z");
  if (k == 0) return 0.0;
  const TowerPoint image = tower_eval(tower, z, k);
  const CompositionTower shifted = tower.shifted(k);
  const GreenResult far = green_from_state(shifted, image);
  return std::abs(direct.value -
                  far.value * tower.inverse_cumulative_degree(k));
}

}  // namespace gjulia
