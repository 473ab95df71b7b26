#include "gjulia/k1_gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gjulia/errors.hpp"

namespace gjulia {

const char* to_string(GammaTail tail) {
  switch (tail) {
    case GammaTail::kRepeatLast:
      return "repeat-last";
    case GammaTail::kRepeatCycle:
      return "repeat-cycle";
    case GammaTail::kFinite:
      return "explicit-finite";
    case GammaTail::kEpsilonGeometric:
      return "epsilon-geometric";
    case GammaTail::kEpsilonPower:
      return "epsilon-power";
  }
  return "repeat-last";
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kOptimalHolder:
      return "optimal-holder";
    case Verdict::kNotOptimal:
      return "not-optimal";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(PWHint hint) {
  switch (hint) {
    case PWHint::kConvergent:
      return "convergent-criterion";
    case PWHint::kDivergent:
      return "divergent-criterion";
    case PWHint::kNone:
      return "none";
  }
  return "none";
}

namespace {

const Rational kQuarter(1, 4);

bool list_tail(GammaTail t) {
  return t == GammaTail::kRepeatLast || t == GammaTail::kRepeatCycle ||
         t == GammaTail::kFinite;
}

Rational rational_power(Rational base, int n) {
  Rational out = 1;
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

}  // namespace

GammaSequence GammaSequence::from_list(std::vector<Rational> gamma,
                                       GammaTail tail) {
  if (!list_tail(tail))
    throw InputError("from_list needs a repeat or finite tail rule");
  GammaSequence gs;
  gs.tail_ = tail;
  gs.values_ = std::move(gamma);
  gs.validate();
  return gs;
}

GammaSequence GammaSequence::constant(const Rational& gamma) {
  return from_list({gamma}, GammaTail::kRepeatLast);
}

GammaSequence GammaSequence::epsilon_geometric(const Rational& scale,
                                               const Rational& ratio) {
  GammaSequence gs;
  gs.tail_ = GammaTail::kEpsilonGeometric;
  gs.scale_ = scale;
  gs.ratio_ = ratio;
  gs.validate();
  return gs;
}

GammaSequence GammaSequence::epsilon_power(const Rational& scale, double power,
                                           int offset) {
  GammaSequence gs;
  gs.tail_ = GammaTail::kEpsilonPower;
  gs.scale_ = scale;
  gs.power_ = power;
  gs.offset_ = offset;
  gs.validate();
  return gs;
}

void GammaSequence::validate() const {
  switch (tail_) {
    case GammaTail::kRepeatLast:
    case GammaTail::kRepeatCycle:
    case GammaTail::kFinite:
      if (values_.empty()) throw InputError("gamma list is empty");
      for (std::size_t i = 0; i < values_.size(); ++i)
        if (!(values_[i] > 0 && values_[i] <= kQuarter))
          throw InputError("gamma_" + std::to_string(i + 1) + " = " +
                           gjulia::to_string(values_[i]) +
                           " outside (0, 1/4]");
      return;
    case GammaTail::kEpsilonGeometric:
      if (!(scale_ >= 0 && ratio_ > 0 && ratio_ < 1))
        throw InputError("epsilon_geometric needs scale >= 0 and 0 < ratio < 1");
      if (!(scale_ * ratio_ < kQuarter))
        throw InputError("epsilon_geometric gives gamma_1 <= 0");
      return;
    case GammaTail::kEpsilonPower:
      if (!(scale_ >= 0 && power_ > 0 && offset_ >= 0))
        throw InputError("epsilon_power needs scale >= 0, power > 0, offset >= 0");
      if (!(to_double(scale_) * std::pow(1.0 + offset_, -power_) < 0.25))
        throw InputError("epsilon_power gives gamma_1 <= 0");
      return;
  }
}

std::optional<int> GammaSequence::length() const {
  if (tail_ == GammaTail::kFinite) return static_cast<int>(values_.size());
  return std::nullopt;
}

std::optional<Rational> GammaSequence::gamma_exact(int n) const {
  if (n < 1) throw PreconditionError("gamma index must be >= 1");
  const int size = static_cast<int>(values_.size());
  switch (tail_) {
    case GammaTail::kFinite:
      if (n > size)
        throw PreconditionError("gamma sequence has only " +
                                std::to_string(size) + " terms");
      return values_[n - 1];
    case GammaTail::kRepeatLast:
      return values_[std::min(n, size) - 1];
    case GammaTail::kRepeatCycle:
      return values_[(n - 1) % size];
    case GammaTail::kEpsilonGeometric:
      return kQuarter - scale_ * rational_power(ratio_, n);
    case GammaTail::kEpsilonPower:
      if (power_ == std::floor(power_) && power_ <= 64)
        return kQuarter -
               scale_ / rational_power(Rational(n + offset_), static_cast<int>(power_));
      return std::nullopt;
  }
  return std::nullopt;
}

long double GammaSequence::epsilon(int n) const {
  if (n < 1) throw PreconditionError("gamma index must be >= 1");
  switch (tail_) {
    case GammaTail::kEpsilonGeometric:
      return scale_.convert_to<long double>() *
             std::pow(ratio_.convert_to<long double>(), static_cast<long double>(n));
    case GammaTail::kEpsilonPower:
      return scale_.convert_to<long double>() *
             std::pow(static_cast<long double>(n + offset_),
                      -static_cast<long double>(power_));
    default:
      return (kQuarter - *gamma_exact(n)).convert_to<long double>();
  }
}

long double GammaSequence::gamma(int n) const {
  if (list_tail(tail_)) return gamma_exact(n)->convert_to<long double>();
  return 0.25L - epsilon(n);
}

long double GammaSequence::log_delta(int n) const {
  long double sum = 0;
  for (int j = 1; j <= n; ++j) sum += std::log(gamma(j));
  return sum;
}

long double GammaSequence::gamma_inf() const {
  if (list_tail(tail_)) {
    Rational m = *std::min_element(values_.begin(), values_.end());
    return m.convert_to<long double>();
  }
  return gamma(1);
}

long double GammaSequence::gamma_sup() const {
  if (list_tail(tail_)) {
    Rational m = *std::max_element(values_.begin(), values_.end());
    return m.convert_to<long double>();
  }
  return 0.25L;
}

SequenceSpec GammaSequence::to_spec() const {
  const GammaSequence copy = *this;
  RegularityConstants c;
  // Widened by a few ulps so the bounds survive rounding of the coefficients.
  constexpr double slack = 1e-12;
  c.A1 = static_cast<double>(1 / (2 * gamma_sup())) * (1 - slack);
  c.A2 = static_cast<double>(1 - 2 * gamma_inf()) * (1 + slack);
  if (c.A2 <= 0) c.A2 = 1.0;  // no lower coefficients when gamma = 1/2
  c.A3 = std::max(static_cast<double>(std::log(1 / (2 * gamma_inf())) / 2) * (1 + slack), 1e-3);
  auto source = [copy](int n) {
    if (auto g = copy.gamma_exact(n)) {
      const Rational s = 1 / (2 * *g);
      return Generator::from_exact(Polynomial<Rational>{1 - s, 0, s});
    }
    const double s = static_cast<double>(1 / (2 * copy.gamma(n)));
    return Generator::from_numeric(
        Polynomial<Complex>{Complex(1 - s), Complex(0), Complex(s)});
  };
  TailRule rule = tail_ == GammaTail::kRepeatCycle ? TailRule::kRepeatCycle
                  : tail_ == GammaTail::kFinite    ? TailRule::kFinite
                                                   : TailRule::kRepeatLast;
  return SequenceSpec(Family::kK1Gamma, rule, source, length(), c);
}

long double v_map(long double gamma, long double t) {
  if (!(gamma > 0 && gamma <= 0.25L))
    throw PreconditionError("v_map needs gamma in (0, 1/4]");
  if (!(t >= -1 && t <= 1)) throw PreconditionError("v_map needs t in [-1, 1]");
  return std::sqrt(std::max(0.0L, 1 - 2 * gamma * (1 - t)));
}

long double endpoints(const GammaSequence& gs, const std::vector<int>& signs) {
  long double u = -1;
  for (int k = static_cast<int>(signs.size()); k >= 1; --k) {
    const int s = signs[k - 1];
    if (s != 1 && s != -1) throw InputError("sign word entries must be +1 or -1");
    u = s * v_map(gs.gamma(k), u);
  }
  return u;
}

long double first_interval_length(const GammaSequence& gs, int n) {
  if (n < 0) throw PreconditionError("level must be >= 0");
  long double e = 2;
  for (int k = n; k >= 1; --k) {
    const long double g = gs.gamma(k);
    e = 2 * g * e / (1 + std::sqrt(std::max(0.0L, 1 - 2 * g * e)));
  }
  return e;
}

GammaCapacity capacity_closed_form(const GammaSequence& gs, double tol) {
  if (gs.tail() == GammaTail::kFinite)
    throw PreconditionError(
        "capacity needs an infinite gamma sequence to bound the tail");
  if (!(tol > 0)) throw PreconditionError("tolerance must be > 0");
  const long double worst = std::abs(std::log(gs.gamma_inf()));
  GammaCapacity out;
  long double sum = 0, weight = 1;
  for (int n = 1; n <= 4000; ++n) {
    weight /= 2;
    sum += weight * std::log(gs.gamma(n));
    out.terms = n;
    out.tail_bound = static_cast<double>(weight * worst);
    if (out.tail_bound < tol) break;
  }
  out.value = static_cast<double>(2 * std::exp(sum));
  return out;
}

namespace {

// Whether the repeating part of a list tail has eps > 0 somewhere.
bool repeating_part_positive(const GammaSequence& gs) {
  const auto& v = gs.values();
  if (gs.tail() == GammaTail::kRepeatLast) return v.back() < kQuarter;
  return std::any_of(v.begin(), v.end(), [](const Rational& g) { return g < kQuarter; });
}

}  // namespace

SmoothnessReport smoothness_verdict(const GammaSequence& gs, int horizon) {
  if (horizon < 1) throw PreconditionError("horizon must be >= 1");
  SmoothnessReport r;
  if (gs.length()) horizon = std::min(horizon, *gs.length());
  long double sum = 0, log4d = 0;
  for (int n = 1; n <= horizon; ++n) {
    sum += gs.epsilon(n);
    log4d += std::log(4 * gs.gamma(n));
    r.epsilon_partial_sums.push_back(static_cast<double>(sum));
    r.four_n_delta.push_back(static_cast<double>(std::exp(log4d)));
  }
  switch (gs.tail()) {
    case GammaTail::kFinite:
      r.verdict = Verdict::kInconclusive;
      r.reason = "finite data: partial sums only, no limit claimed";
      break;
    case GammaTail::kRepeatLast:
    case GammaTail::kRepeatCycle:
      if (repeating_part_positive(gs)) {
        r.verdict = Verdict::kNotOptimal;
        r.reason = "eps_n > 0 recurs in the tail, so sum eps_n diverges";
      } else {
        r.verdict = Verdict::kOptimalHolder;
        r.reason = "eps_n = 0 in the tail, so sum eps_n converges";
      }
      break;
    case GammaTail::kEpsilonGeometric:
      r.verdict = Verdict::kOptimalHolder;
      r.reason = "geometric eps_n, sum eps_n = " +
                 format_double(to_double(gs.scale() * gs.ratio() / (1 - gs.ratio())));
      break;
    case GammaTail::kEpsilonPower:
      if (gs.scale() == 0 || gs.power() > 1) {
        r.verdict = Verdict::kOptimalHolder;
        r.reason = "eps_n ~ n^(-p) with p > 1, sum eps_n converges";
      } else {
        r.verdict = Verdict::kNotOptimal;
        r.reason = "eps_n ~ n^(-p) with p <= 1, sum eps_n diverges";
      }
      break;
  }
  return r;
}

HolderProbe holder_constant_probe(const GammaSequence& gs,
                                  const CompositionTower& tower,
                                  int sample_count) {
  if (sample_count < 2) throw PreconditionError("sample_count must be >= 2");
  HolderProbe probe;
  probe.verdict = smoothness_verdict(gs, 1).verdict;
  const bool chebyshev = gs.gamma_inf() == 0.25L && gs.gamma_sup() == 0.25L;
  const int k_max = std::min(kDefaultGreenLevels, tower.levels());
  for (int i = 0; i < sample_count; ++i) {
    const double t = std::pow(10.0, -1.0 - 5.0 * i / (sample_count - 1));
    const Complex z(1.0 + t, 0.0);
    HolderSample s;
    s.t = t;
    s.green = green(tower, z, k_max).value;
    s.ratio = s.green / std::sqrt(t);
    if (chebyshev) s.exact_green = std::acosh(1.0 + t);
    probe.max_ratio = std::max(probe.max_ratio, s.ratio);
    probe.samples.push_back(s);
  }
  return probe;
}

namespace {

PWHint pw_hint(const GammaSequence& gs) {
  switch (gs.tail()) {
    case GammaTail::kFinite:
      return PWHint::kNone;
    case GammaTail::kRepeatLast:
    case GammaTail::kRepeatCycle:
      return repeating_part_positive(gs) ? PWHint::kDivergent : PWHint::kConvergent;
    case GammaTail::kEpsilonGeometric:
      return PWHint::kConvergent;
    case GammaTail::kEpsilonPower:
      return gs.scale() == 0 || gs.power() > 2 ? PWHint::kConvergent
                                               : PWHint::kDivergent;
  }
  return PWHint::kNone;
}

// 2 gamma_k written through eps_k to keep digits when eps_k is tiny.
long double two_gamma(const GammaSequence& gs, int k) {
  return (1 - 4 * gs.epsilon(k)) / 2;
}

constexpr int kMaxExtraDepth = 4000;
constexpr long double kLogSwitch = 1e6L;

long double pw_term(const GammaSequence& gs, int n, int depth_offset) {
  const long double eps = gs.epsilon(n);
  if (eps == 0) return 0;
  const long double sigma = 8 * eps / (1 - 4 * eps);
  auto need = [&](int level) {
    if (gs.length() && level > *gs.length())
      throw PreconditionError("pw_sum needs gamma_" + std::to_string(level) +
                              "; the finite sequence stops at " +
                              std::to_string(*gs.length()));
  };
  // w = F_k(z_n) - 1 at k = n + 1.
  int k = n + 1;
  need(k);
  long double w = sigma * (2 + sigma) / two_gamma(gs, k);
  long double L = 0;
  bool log_scale = false;
  const int target = n + depth_offset;
  while (k < target || !log_scale) {
    if (k >= n + kMaxExtraDepth) break;
    need(k + 1);
    const long double tg = two_gamma(gs, k + 1);
    if (!log_scale) {
      w = w * (2 + w) / tg;
      if (w > kLogSwitch) {
        L = std::log1p(w);
        log_scale = true;
      }
    } else {
      L = 2 * L - std::log(tg) + std::log1p((tg - 1) * std::exp(-2 * L));
    }
    ++k;
  }
  if (!log_scale) L = std::log1p(w);
  // s_n = (1/2) lim 2^{-(k-n)} log F_k; beyond level k each step adds
  // log(1/(2 gamma_j)) up to terms of order F^{-2}.
  long double s = std::ldexp(L, -(k - n));
  if (!gs.length()) {
    for (int j = k + 1; j <= k + 64; ++j)
      s += std::ldexp(-std::log(two_gamma(gs, j)), -(j - n));
  }
  return s / 2;
}

}  // namespace

PWSummary pw_sum(const GammaSequence& gs, int N, int depth_offset) {
  if (N < 1) throw PreconditionError("N must be >= 1");
  if (depth_offset < 1) throw PreconditionError("depth offset must be >= 1");
  PWSummary out;
  out.depth_offset = depth_offset;
  out.verdict_hint = pw_hint(gs);
  long double total = 0;
  for (int n = 1; n <= N; ++n) {
    long double z = 0;
    for (int k = n - 1; k >= 1; --k) z = v_map(gs.gamma(k), z);
    const long double s = pw_term(gs, n, depth_offset);
    const long double eps = gs.epsilon(n);
    total += s;
    out.critical_points.push_back(static_cast<double>(z));
    out.terms.push_back(static_cast<double>(s));
    out.partial_sums.push_back(static_cast<double>(total));
    out.lower_bound_ok.push_back(eps > 0 ? s > 2 * eps : s == 0);
  }
  return out;
}

std::vector<long double> critical_set(const GammaSequence& gs, int n,
                                      std::size_t cap) {
  if (n < 1) throw PreconditionError("critical_set needs n >= 1");
  if (n - 1 >= 63 || (std::size_t{1} << (n - 1)) > cap)
    throw PreconditionError("2^(n-1) critical points exceed the cap " +
                            std::to_string(cap));
  std::vector<long double> set{0.0L};
  for (int k = n - 1; k >= 1; --k) {
    std::vector<long double> next;
    next.reserve(2 * set.size());
    for (long double y : set) {
      const long double v = v_map(gs.gamma(k), y);
      next.push_back(v);
      next.push_back(-v);
    }
    set = std::move(next);
  }
  std::sort(set.begin(), set.end());
  for (long double x : set) {
    long double F = x;
    for (int k = 1; k <= n - 1; ++k) F = 1 + (F - 1) * (F + 1) / (2 * gs.gamma(k));
    if (std::abs(F) >= 1e-10L)
      throw NumericalError("critical point residual " +
                           format_double(static_cast<double>(F)) +
                           " above 1e-10");
  }
  return set;
}

std::vector<K1Row> k1_table(const GammaSequence& gs, int N) {
  const PWSummary pw = pw_sum(gs, N);
  std::vector<K1Row> rows;
  long double log_delta = 0;
  for (int n = 1; n <= N; ++n) {
    log_delta += std::log(gs.gamma(n));
    K1Row r;
    r.n = n;
    r.gamma = static_cast<double>(gs.gamma(n));
    r.epsilon = static_cast<double>(gs.epsilon(n));
    r.delta = static_cast<double>(std::exp(log_delta));
    r.first_length = static_cast<double>(first_interval_length(gs, n));
    r.pw_term = pw.terms[n - 1];
    r.pw_partial = pw.partial_sums[n - 1];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace gjulia
