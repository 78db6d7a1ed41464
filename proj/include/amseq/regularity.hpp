#pragma once

// Inversion calculus: sequences from ratios of regularity or concavity ratios,
// the conversions between the two, recovery of a sequence from its mean,
// admissibility, regularity and exponential Delta_2 profiles, and nu / hat.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "amseq/seqcore.hpp"

namespace amseq {

// ----------------------------------------------------------------------------
// Trend classification
// ----------------------------------------------------------------------------

enum class Trend { bounded, unbounded, inconclusive };

inline const char* to_string(Trend t) {
  switch (t) {
    case Trend::bounded: return "bounded";
    case Trend::unbounded: return "unbounded";
    default: return "inconclusive";
  }
}

/// Bounded/unbounded evidence from values at three increasing checkpoints.
/// Growth per unit of log(checkpoint) must keep pace (ratio >= 0.75) to count
/// as unbounded and must visibly decay (ratio <= 0.6) to count as bounded.
inline Trend classify_trend(const std::array<double, 3>& at, const std::array<double, 3>& values) {
  double scale = std::max({std::abs(values[0]), std::abs(values[1]), std::abs(values[2]), 1e-300});
  double e1 = values[1] - values[0], e2 = values[2] - values[1];
  if (std::abs(e1) <= 1e-6 * scale && std::abs(e2) <= 1e-6 * scale) return Trend::bounded;
  if (e1 <= 0 && e2 <= 0) return Trend::bounded;
  if (e1 > 0 && e2 > 0) {
    double d1 = e1 / std::log(at[1] / at[0]);
    double d2 = e2 / std::log(at[2] / at[1]);
    double q = d2 / d1;
    if (q >= 0.75) return Trend::unbounded;
    if (q <= 0.6) return Trend::bounded;
  }
  return Trend::inconclusive;
}

/// Checkpoints horizon/100, horizon/10, horizon (clamped to >= 1).
inline std::array<std::uint64_t, 3> decade_checkpoints(std::uint64_t horizon) {
  return {std::max<std::uint64_t>(horizon / 100, 1), std::max<std::uint64_t>(horizon / 10, 2), horizon};
}

namespace detail {

template <class V>
ratio_t<V> slack() {
  if constexpr (scalar_traits<V>::exact)
    return ratio_t<V>(0);
  else
    return 1e-12;
}

template <class R>
double as_double(const R& r) {
  if constexpr (std::is_same_v<R, double>)
    return r;
  else
    return r.template convert_to<double>();
}

template <class R>
R inv_index(std::uint64_t n) {
  if constexpr (std::is_same_v<R, double>)
    return 1.0 / static_cast<double>(n);
  else
    return R(1, static_cast<long>(n));
}

}  // namespace detail

// ----------------------------------------------------------------------------
// Admissibility and reconstruction from r
// ----------------------------------------------------------------------------

enum class DivergenceEvidence { sup_r_unbounded, series_divergent, inconclusive };

inline const char* to_string(DivergenceEvidence e) {
  switch (e) {
    case DivergenceEvidence::sup_r_unbounded: return "sup-r-unbounded";
    case DivergenceEvidence::series_divergent: return "series-divergent";
    default: return "inconclusive";
  }
}

struct AdmissibilityVerdict {
  bool recurrence_ok = true;
  std::optional<std::uint64_t> first_violation;
  DivergenceEvidence divergence_evidence = DivergenceEvidence::inconclusive;
  double sup_r = 1.0;
  double series = 0.0;  // sum_{j=2}^{N} (1/j)(1 - 1/r_j)
  Index horizon = 0;
};

inline constexpr double kSupRGate = 1e3;
inline constexpr double kSeriesGate = 1e2;

/// Recurrence (n+1) r_{n+1} >= n r_n + 1 (exact in rational mode) plus
/// divergence evidence for the limit condition.
template <class R>
AdmissibilityVerdict check_ratio_admissibility(const RatioSeq<R>& r, std::uint64_t horizon) {
  horizon = std::min<std::uint64_t>(horizon, r.size());
  AdmissibilityVerdict v;
  v.horizon = horizon;
  const R tol = std::is_same_v<R, double> ? R(1e-12) : R(0);
  if (horizon >= 1 && r[1] != R(1)) {
    v.recurrence_ok = false;
    v.first_violation = 1;
  }
  for (std::uint64_t n = 1; n < horizon; ++n) {
    R lhs = R(n + 1) * r[n + 1];
    R rhs = R(n) * r[n] + R(1);
    if (lhs < rhs - tol * rhs) {
      if (v.recurrence_ok) v.first_violation = n;
      v.recurrence_ok = false;
      break;
    }
  }
  auto cps = decade_checkpoints(horizon);
  std::array<double, 3> at{}, sups{}, sers{};
  double series = 0, sup = 0;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    double rn = detail::as_double(r[n]);
    sup = std::max(sup, rn);
    if (n >= 2 && rn > 0) series += (1.0 - 1.0 / rn) / static_cast<double>(n);
    while (next < 3 && cps[next] == n) {
      at[next] = static_cast<double>(n);
      sups[next] = sup;
      sers[next] = series;
      ++next;
    }
  }
  v.sup_r = sup;
  v.series = series;
  bool trend_ok = horizon >= 100;
  if (sup > kSupRGate || (trend_ok && classify_trend(at, sups) == Trend::unbounded))
    v.divergence_evidence = DivergenceEvidence::sup_r_unbounded;
  else if (series > kSeriesGate || (trend_ok && classify_trend(at, sers) == Trend::unbounded))
    v.divergence_evidence = DivergenceEvidence::series_divergent;
  return v;
}

/// xi_1 = 1, xi_n = (1/(n r_n)) prod_{j=2}^{n} (1 + 1/(j r_j - 1)).
template <class V>
Seq seq_from_ratio(const RatioSeq<ratio_t<V>>& r) {
  using R = ratio_t<V>;
  std::uint64_t n_max = r.size();
  auto verdict = check_ratio_admissibility(r, n_max);
  if (!verdict.recurrence_ok) throw NotRatioSequence(*verdict.first_violation);
  std::vector<std::string> warnings;
  if (verdict.divergence_evidence == DivergenceEvidence::inconclusive)
    warnings.push_back("divergence inconclusive: sequence may not be null");
  std::vector<V> xi(n_max + 1, scalar_traits<V>::zero());
  if constexpr (scalar_traits<V>::exact) {
    R prod = 1;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      if (n >= 2) prod *= R(1) + R(1) / (R(n) * r[n] - R(1));
      xi[n] = prod / (R(n) * r[n]);
    }
  } else {
    double log_prod = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      double rn = r[n];
      if (n >= 2) log_prod += std::log1p(1.0 / (static_cast<double>(n) * rn - 1.0));
      xi[n] = LogReal::from_log(log_prod - std::log(static_cast<double>(n) * rn));
    }
  }
  return Seq::tabulated(std::move(xi), std::move(warnings));
}

// ----------------------------------------------------------------------------
// Concavity ratios
// ----------------------------------------------------------------------------

/// xi_1 = 1, xi_n = 1/(n prod_{j<n} c_j); requires c_n >= n/(n+1).
template <class V>
Seq seq_from_concavity(const ConcavitySeq<ratio_t<V>>& c) {
  using R = ratio_t<V>;
  std::uint64_t n_max = c.size() + 1;
  const R tol = detail::slack<V>();
  for (std::uint64_t n = 1; n < n_max; ++n) {
    R floor_n = R(1) - detail::inv_index<R>(n + 1);
    if (!(c[n] > R(0)) || c[n] < floor_n - tol) throw NotConcavitySequence(n);
  }
  std::vector<V> xi(n_max + 1, scalar_traits<V>::zero());
  // log(n prod c_j) -> infinity iff xi is null.
  std::array<double, 3> at{}, lv{};
  auto cps = decade_checkpoints(n_max);
  std::size_t next = 0;
  auto record = [&](std::uint64_t n, double log_inv) {
    while (next < 3 && cps[next] == n) {
      at[next] = static_cast<double>(n);
      lv[next] = log_inv;
      ++next;
    }
  };
  if constexpr (scalar_traits<V>::exact) {
    R prod = 1;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      if (n >= 2) prod *= c[n - 1];
      xi[n] = R(1) / (R(n) * prod);
      record(n, -scalar_traits<V>::log_value(xi[n]));
    }
  } else {
    double log_prod = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      if (n >= 2) log_prod += std::log(c[n - 1]);
      double log_inv = std::log(static_cast<double>(n)) + log_prod;
      xi[n] = LogReal::from_log(-log_inv);
      record(n, log_inv);
    }
  }
  std::vector<std::string> warnings;
  if (n_max < 100 || classify_trend(at, lv) != Trend::unbounded)
    warnings.push_back("nullity not evidenced: n prod c_j does not grow at the horizon");
  return Seq::tabulated(std::move(xi), std::move(warnings));
}

/// The am-image test on a concavity sequence: c_1 >= 1/2 and c_n + 1/c_{n+1} <= 2.
template <class R>
std::optional<std::uint64_t> first_am_image_violation(const ConcavitySeq<R>& c, const R& tol) {
  if (c.size() >= 1 && c[1] < R(1) / R(2) - tol) return 1;
  for (std::uint64_t n = 1; n + 1 <= c.size(); ++n)
    if (c[n] + R(1) / c[n + 1] > R(2) + tol) return n + 1;
  return std::nullopt;
}

/// c_n = (r_{n+1} - 1/(n+1)) / r_n.
template <class R>
ConcavitySeq<R> ratio_to_concavity(const RatioSeq<R>& r) {
  ConcavitySeq<R> c;
  std::uint64_t n_max = r.size();
  c.c.assign(n_max, R(0));
  for (std::uint64_t n = 1; n < n_max; ++n) c.c[n] = (r[n + 1] - detail::inv_index<R>(n + 1)) / r[n];
  R tol = std::is_same_v<R, double> ? R(1e-12) : R(0);
  c.am_image_flag = n_max >= 2 && !first_am_image_violation(c, tol);
  return c;
}

/// r_1 = 1, r_{n+1} = 1/(n+1) + c_n r_n, i.e. r_n = 1/n + sum_{k<n} (1/k) prod_{j=k}^{n-1} c_j.
template <class R>
RatioSeq<R> concavity_to_ratio(const ConcavitySeq<R>& c) {
  RatioSeq<R> r;
  std::uint64_t n_max = c.size() + 1;
  r.r.assign(n_max + 1, R(0));
  r.r[1] = R(1);
  for (std::uint64_t n = 1; n < n_max; ++n) r.r[n + 1] = detail::inv_index<R>(n + 1) + c[n] * r[n];
  return r;
}

/// Am-image membership through r alone:
/// (r_n - 1/n)/r_{n-1} + r_n/(r_{n+1} - 1/(n+1)) <= 2 for 1 < n < N, and r_2 >= 1.
template <class R>
std::optional<std::uint64_t> first_ratio_am_image_violation(const RatioSeq<R>& r, const R& tol) {
  // c_1 >= 1/2 is r_2 - 1/2 >= 1/2.
  if (r.size() >= 2 && r[2] < R(1) - tol) return 1;
  for (std::uint64_t n = 2; n < r.size(); ++n) {
    R lhs = (r[n] - detail::inv_index<R>(n)) / r[n - 1] + r[n] / (r[n + 1] - detail::inv_index<R>(n + 1));
    if (lhs > R(2) + tol) return n;
  }
  return std::nullopt;
}

// ----------------------------------------------------------------------------
// Recovering a sequence from its arithmetic mean
// ----------------------------------------------------------------------------

/// eta_n = n x_n - (n-1) x_{n-1} after checking that n x_n is nondecreasing
/// and concave up to the horizon.
template <class V>
Seq invert_am(const Seq& x, std::uint64_t horizon) {
  using T = scalar_traits<V>;
  auto t = x.dense<V>(horizon);
  const auto& xv = t->values;
  std::vector<V> eta(horizon + 1, T::zero());
  auto w = [&](std::uint64_t n) { return T::from_index(n) * xv[n]; };  // n x_n
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    if (n + 1 <= horizon) {
      V lhs = T::from_index(2 * n) * xv[n];
      V rhs = w(n + 1) + (n >= 2 ? w(n - 1) : T::zero());
      if constexpr (T::exact) {
        if (lhs < rhs) throw NotAmImage(n);
      } else {
        if (rhs.log_value() - lhs.log_value() > 1e-12) throw NotAmImage(n);
      }
    }
    if (n == 1) {
      eta[1] = xv[1];
      continue;
    }
    if constexpr (T::exact) {
      eta[n] = w(n) - w(n - 1);
      if (eta[n] < 0) throw NotAmImage(n);
    } else {
      auto wn = w(n), wp = w(n - 1);
      if (wp.log_value() - wn.log_value() > 1e-12) throw NotAmImage(n);
      eta[n] = wp < wn ? log_sub(wn, wp).value : LogReal::zero();
    }
  }
  return Seq::tabulated(std::move(eta));
}

/// Product-formula recovery eta_n = (1 - c_{n-1}) / prod_{j<n} c_j on inputs
/// normalised to x_1 = 1; used to cross-check invert_am.
template <class V>
std::vector<V> invert_am_by_concavity(const Seq& x, std::uint64_t horizon) {
  using T = scalar_traits<V>;
  using R = ratio_t<V>;
  if (!(T::ratio(x.value<V>(1), T::one()) == R(1))) throw DomainError("product-formula recovery needs x_1 = 1");
  auto c = concavity_ratio<V>(x, horizon);
  std::vector<V> eta(horizon + 1, T::zero());
  eta[1] = T::one();
  if constexpr (T::exact) {
    R prod = 1;
    for (std::uint64_t n = 2; n <= horizon; ++n) {
      prod *= c[n - 1];
      eta[n] = (R(1) - c[n - 1]) / prod;
    }
  } else {
    double log_prod = 0;
    for (std::uint64_t n = 2; n <= horizon; ++n) {
      log_prod += std::log(c[n - 1]);
      double gap = 1.0 - c[n - 1];
      eta[n] = gap > 0 ? LogReal::from_log(std::log(gap) - log_prod) : LogReal::zero();
    }
  }
  return eta;
}

// ----------------------------------------------------------------------------
// Profiles
// ----------------------------------------------------------------------------

struct Delta2Profile {
  double sup_value = 0.0;
  std::uint64_t argmax = 1;
  std::vector<std::pair<std::uint64_t, double>> samples;  // (m, S_{m^2} / S_m) at the trend checkpoints
  Trend trend = Trend::inconclusive;
};

/// sup_{m <= M} m^2 (s_a)_{m^2} / (m (s_a)_m) = S_{m^2} / S_m; trend from
/// m = M^{1/2}, M^{2/3}, M.
inline Delta2Profile exp_delta2_profile(const Seq& s, std::uint64_t M) {
  if (M < 1) throw DomainError("exp-Delta2 profile needs M >= 1");
  Index top = Index(M) * M;
  Delta2Profile p;
  std::shared_ptr<const DenseTable<LogReal>> t;
  if (top <= dense_horizon_limit() && !s.node().closed_prefix(top)) t = s.dense<LogReal>(M * M);
  auto prefix = [&](std::uint64_t k) { return t ? t->prefix[k] : s.prefix_sum(Index(k)); };
  std::array<std::uint64_t, 3> cps = {static_cast<std::uint64_t>(std::llround(std::sqrt(double(M)))),
                                      static_cast<std::uint64_t>(std::llround(std::cbrt(double(M) * double(M)))), M};
  for (std::uint64_t m = 1; m <= M; ++m) {
    LogReal sm = prefix(m);
    if (sm.is_zero()) throw FiniteRankError(m);
    double v = std::exp(prefix(m * m).log_value() - sm.log_value());
    if (v > p.sup_value) {
      p.sup_value = v;
      p.argmax = m;
    }
    for (auto c : cps)
      if (c == m) p.samples.emplace_back(m, v);
  }
  if (p.samples.size() == 3) {
    std::array<double, 3> at{}, vals{};
    for (int i = 0; i < 3; ++i) {
      at[i] = static_cast<double>(p.samples[i].first);
      vals[i] = p.samples[i].second;
    }
    p.trend = classify_trend(at, vals);
  }
  return p;
}

struct RegularityProfile {
  double sup_r = 1.0;
  std::uint64_t argmax = 1;
  Trend r_trend = Trend::inconclusive;
  double potter_required = 0.0;   // max over sampled m < n of log(s_m/s_n) / log(n/m)
  std::optional<double> potter_p;  // on the 0.01 grid, when below 1 and r is not growing
  std::uint64_t horizon = 0;
};

/// Geometric sample 1, 2, ..., with ratio about 1.25, up to the horizon.
inline std::vector<std::uint64_t> geometric_sample(std::uint64_t horizon, double ratio = 1.25) {
  std::vector<std::uint64_t> out;
  double x = 1;
  while (true) {
    auto m = static_cast<std::uint64_t>(std::ceil(x - 1e-9));
    if (m > horizon) break;
    if (out.empty() || out.back() != m) out.push_back(m);
    x *= ratio;
  }
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

inline RegularityProfile regularity_profile(const Seq& s, std::uint64_t horizon) {
  RegularityProfile p;
  p.horizon = horizon;
  auto t = s.dense<LogReal>(horizon);
  auto cps = decade_checkpoints(horizon);
  std::array<double, 3> at{}, sups{};
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    if (t->values[n].is_zero()) throw FiniteRankError(n);
    double r = std::exp(t->mean(n).log_value() - t->values[n].log_value());
    if (r > p.sup_r) {
      p.sup_r = r;
      p.argmax = n;
    }
    while (next < 3 && cps[next] == n) {
      at[next] = static_cast<double>(n);
      sups[next] = p.sup_r;
      ++next;
    }
  }
  p.r_trend = horizon >= 100 ? classify_trend(at, sups) : Trend::inconclusive;
  double need = 0.0;
  for (auto m : geometric_sample(horizon)) {
    double lm = t->values[m].log_value(), logm = std::log(static_cast<double>(m));
    for (std::uint64_t n = m + 1; n <= horizon; ++n)
      need = std::max(need, (lm - t->values[n].log_value()) / (std::log(static_cast<double>(n)) - logm));
  }
  p.potter_required = need;
  double grid = std::ceil((need - 1e-9) * 100.0) / 100.0;
  if (grid < 1.0 && p.r_trend != Trend::unbounded) p.potter_p = std::max(grid, 0.01);
  return p;
}

// ----------------------------------------------------------------------------
// nu and hat
// ----------------------------------------------------------------------------

namespace detail {

inline LogReal prefix_or_summable(const Seq& s, const Index& k) {
  try {
    return s.prefix_sum(k);
  } catch (const HorizonExceeded&) {
    throw SummableError("summable or horizon exceeded: partial sums of " + s.label() +
                        " stay below the target within the evaluable range");
  }
}

inline constexpr double kReachSlack = 1e-13;

}  // namespace detail

/// min{k >= from : S_k >= n s_1} by exponential then binary search; `from`
/// lets callers exploit monotonicity in n.
inline Index nu(const Seq& s, const Index& n, const Index& from = 1) {
  if (n < 1) throw DomainError("nu needs n >= 1");
  LogReal target = LogReal::from_index(n) * s.eval(Index(1));
  double goal = target.log_value() + std::log1p(-detail::kReachSlack);
  auto reached = [&](const Index& k) { return detail::prefix_or_summable(s, k).log_value() >= goal; };
  Index lo = from < 1 ? Index(1) : from;
  if (reached(lo)) return lo;
  const Index start = lo;
  Index step = 1;
  Index hi = lo + step;
  LogReal last = detail::prefix_or_summable(s, lo);
  while (!reached(hi)) {
    LogReal cur = detail::prefix_or_summable(s, hi);
    // Small steps from a large start move the sum by ~step/start; only a
    // flat sum over at least a doubling of the index counts as a plateau.
    if (step > 64 && step >= start && cur.log_value() - last.log_value() < 1e-15)
      throw SummableError("summable or horizon exceeded: partial sums of " + s.label() + " plateau below the target");
    if (log_index(hi) > 600.0) throw SummableError("summable or horizon exceeded: nu beyond 10^260");
    last = cur;
    lo = hi;
    step *= 2;
    hi = lo + step;
  }
  // reached(hi), !reached(lo)
  while (hi - lo > 1) {
    Index mid = (lo + hi) / 2;
    if (reached(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

struct HatSeq {
  Seq base;
  std::vector<Index> nu;        // nu[0] unused
  std::vector<LogReal> values;  // values[n] = (base_a)_{nu_n}

  std::uint64_t size() const { return values.size() - 1; }
  Seq as_seq() const { return Seq::tabulated(values); }
};

inline HatSeq hat(const Seq& s, std::uint64_t horizon) {
  HatSeq h{s, std::vector<Index>(horizon + 1, Index(0)), std::vector<LogReal>(horizon + 1)};
  Index prev = 1;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    prev = nu(s, Index(n), prev);
    h.nu[n] = prev;
    h.values[n] = detail::prefix_or_summable(s, prev) / LogReal::from_index(prev);
  }
  return h;
}

}  // namespace amseq
