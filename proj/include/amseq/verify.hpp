#pragma once

// Lemma-verification harness: each identity or inequality is a named,
// parameterised check that produces a CheckReport with the worst normalised
// slack over its samples.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amseq/counterexamples.hpp"
#include "amseq/regularity.hpp"
#include "amseq/seqcore.hpp"

namespace amseq {

enum class Status { pass, fail, inconclusive, inapplicable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
    default: return "inapplicable";
  }
}

struct CheckReport {
  std::string check_id;
  nlohmann::json subject;
  Status status = Status::pass;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string witness;
  std::uint64_t sample_count = 0;
  std::string horizon;
  std::string numeric_mode = "log";
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> notes;

  nlohmann::json to_json() const {
    nlohmann::json j = {{"check_id", check_id},
                        {"subject", subject},
                        {"status", to_string(status)},
                        {"witness", witness},
                        {"sample_count", sample_count},
                        {"horizon", horizon},
                        {"numeric_mode", numeric_mode},
                        {"details", details},
                        {"notes", notes}};
    if (std::isfinite(worst_margin))
      j["worst_margin"] = worst_margin;
    else
      j["worst_margin"] = nullptr;
    return j;
  }
};

inline std::string witness_at(const Index& n) { return "n=" + to_decimal(n); }
inline std::string witness_at(const Index& m, const Index& n) { return "m=" + to_decimal(m) + ",n=" + to_decimal(n); }

/// Tracks the worst normalised slack (rhs - lhs) / max(|lhs|, |rhs|) over a
/// family of inequalities. In exact mode any violation fails outright; in the
/// log backend a violation fails once it exceeds the tolerance.
class MarginTracker {
 public:
  MarginTracker(double tol, bool exact) : tol_(tol), exact_(exact) {}

  void record(double margin, const std::string& witness, bool exact_violation = false) {
    ++count_;
    if (exact_violation) {
      if (!violated_) first_violation_ = witness;
      violated_ = true;
    }
    if (margin < worst_ || count_ == 1) {
      worst_ = margin;
      witness_ = witness;
    }
  }

  void le(double lhs, double rhs, const std::string& w) { record(rel(lhs, rhs), w); }
  void le(LogReal lhs, LogReal rhs, const std::string& w) { record(rel(lhs, rhs), w); }
  void le(const Rational& lhs, const Rational& rhs, const std::string& w) {
    record(rel(lhs, rhs), w, exact_ && lhs > rhs);
  }

  void lt(double lhs, double rhs, const std::string& w) { record(rel(lhs, rhs), w); }
  void lt(LogReal lhs, LogReal rhs, const std::string& w) { record(rel(lhs, rhs), w); }
  void lt(const Rational& lhs, const Rational& rhs, const std::string& w) {
    record(rel(lhs, rhs), w, exact_ && lhs >= rhs);
  }

  void eq(double lhs, double rhs, const std::string& w) { record(-std::abs(rel(lhs, rhs)), w); }
  void eq(LogReal lhs, LogReal rhs, const std::string& w) { record(-std::abs(rel(lhs, rhs)), w); }
  void eq(const Rational& lhs, const Rational& rhs, const std::string& w) {
    record(-std::abs(rel(lhs, rhs)), w, exact_ && lhs != rhs);
  }

  /// Exact comparisons on cross-multiplied integers (common positive scale).
  void le_int(const Index& lhs, const Index& rhs, const std::string& w) { record(rel(lhs, rhs), w, lhs > rhs); }
  void lt_int(const Index& lhs, const Index& rhs, const std::string& w) { record(rel(lhs, rhs), w, lhs >= rhs); }
  void eq_int(const Index& lhs, const Index& rhs, const std::string& w) {
    record(-std::abs(rel(lhs, rhs)), w, lhs != rhs);
  }

  bool failed() const { return violated_ || (!exact_ && count_ > 0 && worst_ < -tol_); }
  std::uint64_t count() const { return count_; }
  double worst() const { return worst_; }

  /// Folds the tracked samples into a report; never upgrades a failing status.
  void apply(CheckReport& r) const {
    r.sample_count += count_;
    if (count_ > 0 && worst_ < r.worst_margin) {
      r.worst_margin = worst_;
      r.witness = witness_;
    }
    if (failed()) {
      r.status = Status::fail;
      if (violated_) r.witness = first_violation_;
    }
  }

  static double rel(double lhs, double rhs) {
    double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return (rhs - lhs) / scale;
  }
  static double rel(LogReal lhs, LogReal rhs) {
    if (lhs.is_zero() && rhs.is_zero()) return 0.0;
    if (lhs.is_zero()) return 1.0;
    if (rhs.is_zero()) return -1.0;
    double d = lhs.log_value() - rhs.log_value();
    return d <= 0 ? -std::expm1(d) : std::expm1(-d);
  }
  static double rel(const Index& lhs, const Index& rhs) {
    Index scale = std::max(abs(lhs), abs(rhs));
    if (scale == 0) return 0.0;
    Index d = rhs - lhs;
    double m = index_ratio(abs(d), scale);
    return d < 0 ? -m : m;
  }
  static double rel(const Rational& lhs, const Rational& rhs) {
    Rational scale = std::max(abs(lhs), abs(rhs));
    if (scale == 0) return 0.0;
    return Rational((rhs - lhs) / scale).convert_to<double>();
  }

 private:
  double tol_;
  bool exact_;
  std::uint64_t count_ = 0;
  double worst_ = std::numeric_limits<double>::infinity();
  std::string witness_;
  bool violated_ = false;
  std::string first_violation_;
};

// ============================================================================
// Point evaluation shared by the checks
// ============================================================================

template <class V>
struct MeanPoint {
  V value, mean, mean2;
};

/// Value, first and second mean at each requested index: closed forms for
/// step sequences, a single streaming pass otherwise.
template <class V>
std::map<Index, MeanPoint<V>> collect_points(const Seq& s, std::vector<Index> idx) {
  std::map<Index, MeanPoint<V>> out;
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty()) return out;
  if (const auto* st = dynamic_cast<const detail::StepNode*>(&s.node())) {
    auto fill = [&](const StepSeq<V>& z) {
      for (const auto& j : idx) out[j] = {z.value_at(j), z.am_at(j), z.am2_at(j)};
    };
    if constexpr (std::is_same_v<V, LogReal>) {
      fill(st->log_step());
    } else {
      if (st->rational_step())
        fill(*st->rational_step());
      else
        fill(convert_step<Rational>(st->log_step()));
    }
    return out;
  }
  if (idx.front() < 1) throw DomainError("sequence index must be >= 1");
  if (idx.back() > dense_horizon_limit()) throw HorizonExceeded("horizon exceeded: " + s.label());
  MeanCursor<V> cur(s, idx.back().convert_to<std::uint64_t>());
  std::size_t next = 0;
  while (next < idx.size() && cur.next())
    while (next < idx.size() && idx[next] == cur.n()) out[idx[next++]] = {cur.value(), cur.mean(), cur.mean2()};
  return out;
}

/// Whether s is evaluable at arbitrary indices in closed form.
inline bool has_closed_means(const Seq& s) { return dynamic_cast<const detail::StepNode*>(&s.node()) != nullptr; }

/// First n <= horizon with s_n = 0, if any.
inline std::optional<std::uint64_t> first_zero(const Seq& s, std::uint64_t horizon) {
  if (has_closed_means(s)) {
    if (s.eval(Index(horizon)).is_zero()) {
      for (std::uint64_t n = 1; n <= horizon; n = n * 2 > horizon && n < horizon ? horizon : n * 2)
        if (s.eval(Index(n)).is_zero()) return n;
      return horizon;
    }
    return std::nullopt;
  }
  // Nonincreasing: a zero anywhere shows up at the horizon first.
  if (!s.eval(Index(horizon)).is_zero()) return std::nullopt;
  std::uint64_t lo = 1, hi = horizon;
  if (s.eval(Index(1)).is_zero()) return 1;
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (s.eval(Index(mid)).is_zero())
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

template <class V>
CheckReport make_report(const std::string& id, const Seq& s, const Index& horizon) {
  CheckReport r;
  r.check_id = id;
  r.subject = s.describe();
  r.horizon = to_decimal(horizon);
  r.numeric_mode = scalar_traits<V>::mode;
  return r;
}

inline void mark_inapplicable(CheckReport& r, const std::string& why) {
  r.status = Status::inapplicable;
  r.notes.push_back("precondition skipped: " + why);
}

template <class V>
ratio_t<V> ratio_of(const V& a, const V& b) {
  return scalar_traits<V>::ratio(a, b);
}

template <class R>
double to_dbl(const R& r) {
  if constexpr (std::is_same_v<R, double>)
    return r;
  else
    return r.template convert_to<double>();
}

// ============================================================================
// Sampling
// ============================================================================

/// Deterministic random pairs m <= n <= horizon with n - m <= max_span.
inline std::vector<std::pair<Index, Index>> random_pairs(std::uint64_t seed, std::uint64_t horizon, std::size_t count,
                                                         std::uint64_t max_span) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Index, Index>> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t m = 1 + rng() % horizon;
    std::uint64_t room = std::min(horizon - m, max_span);
    std::uint64_t n = m + (room == 0 ? 0 : rng() % (room + 1));
    out.emplace_back(Index(m), Index(n));
  }
  return out;
}

/// Up to `points` indices spread geometrically over [a, b] (endpoints included).
inline std::vector<Index> geometric_grid(const Index& a, const Index& b, int points = 16) {
  std::vector<Index> out;
  if (b < a) return out;
  double la = log_index(a), lb = log_index(b);
  out.push_back(a);
  for (int i = 1; i + 1 < points; ++i) {
    double l = la + (lb - la) * i / (points - 1);
    Index j = floor_exp(l);
    if (j > a && j < b) out.push_back(j);
  }
  out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ============================================================================
// Lemma checks
// ============================================================================

/// (s_a)_n = (m/n) prod_{j=m+1}^{n} (1 + 1/(j r_j - 1)) (s_a)_m.
template <class V>
CheckReport check_ratio_identity(const Seq& s, const std::vector<std::pair<Index, Index>>& pairs, double tol) {
  using T = scalar_traits<V>;
  Index top = 1;
  for (const auto& [m, n] : pairs) top = std::max(top, n);
  auto r = make_report<V>("ratio-identity", s, top);
  if (auto z = first_zero(s, top.convert_to<std::uint64_t>())) {
    mark_inapplicable(r, "zero entry at n = " + std::to_string(*z) + " (finite rank)");
    return r;
  }
  MarginTracker t(tol, T::exact);
  auto horizon = top.convert_to<std::uint64_t>();
  if constexpr (T::exact) {
    struct Active {
      std::uint64_t m, n;
      Rational prod = 1, mean_m = 0;
    };
    std::vector<Active> act;
    for (const auto& [m, n] : pairs) act.push_back({to_u64(m), to_u64(n)});
    MeanCursor<Rational> cur(s, horizon);
    while (cur.next()) {
      std::uint64_t j = cur.n();
      bool active = false;
      for (const auto& a : act) active = active || (j > a.m && j <= a.n);
      Rational factor = 1;  // the product starts at j = m + 1 >= 2
      if (active) {
        Rational jr = Rational(Index(j)) * (cur.mean() / cur.value());  // j r_j
        factor = Rational(1) + Rational(1) / (jr - 1);
      }
      for (auto& a : act) {
        if (j == a.m) a.mean_m = cur.mean();
        if (j > a.m && j <= a.n) a.prod *= factor;
        if (j == a.n) {
          Rational rhs = Rational(Index(a.m), Index(a.n)) * a.prod * a.mean_m;
          t.eq(cur.mean(), rhs, witness_at(a.m, a.n));
        }
      }
    }
  } else {
    auto tab = s.dense<LogReal>(horizon);
    std::vector<long double> cum(horizon + 1, 0.0L);
    for (std::uint64_t j = 2; j <= horizon; ++j) {
      double jr = std::exp(tab->prefix[j].log_value() - tab->values[j].log_value());  // S_j / s_j = j r_j
      cum[j] = cum[j - 1] + std::log1p(1.0 / (jr - 1.0));
    }
    for (const auto& [m, n] : pairs) {
      auto mm = to_u64(m), nn = to_u64(n);
      double rhs = std::log(double(mm) / double(nn)) + static_cast<double>(cum[nn] - cum[mm]) +
                   tab->mean(mm).log_value();
      t.eq(tab->mean(nn), LogReal::from_log(rhs), witness_at(m, n));
    }
  }
  t.apply(r);
  return r;
}

/// (s_a)_n <= (m/n)^{1 - 2/phi_m} (s_a)_m for sampled n >= m where m phi_m > 2;
/// needs phi nondecreasing and phi <= r(s). Evaluated in the log domain since
/// the exponent is irrational.
inline CheckReport check_ratio_bound(const Seq& s, const std::vector<double>& phi, std::uint64_t horizon, double tol) {
  auto r = make_report<LogReal>("ratio-bound", s, Index(horizon));
  if (auto z = first_zero(s, horizon)) {
    mark_inapplicable(r, "zero entry at n = " + std::to_string(*z));
    return r;
  }
  auto tab = s.dense<LogReal>(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    double rn = std::exp(tab->mean(n).log_value() - tab->values[n].log_value());
    if (phi[n] > rn * (1 + tol) || (n > 1 && phi[n] < phi[n - 1])) {
      mark_inapplicable(r, "phi must be nondecreasing and below r(s); fails at n = " + std::to_string(n));
      return r;
    }
  }
  MarginTracker t(tol, false);
  auto sample = geometric_sample(horizon, 1.5);
  for (auto m : sample) {
    if (double(m) * phi[m] <= 2.0) continue;
    double expo = 1.0 - 2.0 / phi[m];
    for (auto n : sample) {
      if (n < m) continue;
      double rhs = expo * std::log(double(m) / double(n)) + tab->mean(m).log_value();
      t.le(tab->mean(n), LogReal::from_log(rhs), witness_at(Index(m), Index(n)));
    }
  }
  t.apply(r);
  if (t.count() == 0) mark_inapplicable(r, "no m with m phi_m > 2 in range");
  return r;
}

/// H_n - r(e_a)_n: (a) positive for n > 1, (b) strictly increasing where
/// e_{n+1} > 0, (c) equal to sum_{i=2}^{n} e_i H_{i-1} / sum_{i<=n} e_i.
template <class V>
CheckReport check_H_bound(const Seq& e, std::uint64_t horizon, double tol) {
  using T = scalar_traits<V>;
  using R = ratio_t<V>;
  auto r = make_report<V>("H-bound", e, Index(horizon));
  if (e.eval(Index(std::min<std::uint64_t>(2, horizon))).is_zero()) {
    mark_inapplicable(r, "lemma needs e_2 > 0");
    return r;
  }
  MarginTracker pos(tol, T::exact), inc(tol, T::exact), ident(tol, T::exact);
  if constexpr (T::exact) {
    // Cross-multiplied integer forms avoid a gcd per step. With
    // r_n = T_n / S_n = P / Q (unreduced) and H_n = h / k:
    //   (a) P k < h Q,  (b) (n+1)(P'Q - PQ') < QQ',  (c) h S - T = W.
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    MeanCursor<Rational> cur(e, horizon);
    Index P0, Q0;
    Rational w = 0, prev_h = 0;
    while (cur.next()) {
      std::uint64_t n = cur.n();
      const Rational &S = cur.prefix(), &Tn = cur.prefix2(), &H = cur.harmonic();
      if (n >= 2) w += cur.value() * prev_h;
      Index P = numerator(Tn) * denominator(S), Q = denominator(Tn) * numerator(S);
      auto wn = witness_at(Index(n));
      if (n >= 2) {
        pos.lt_int(P * denominator(H), numerator(H) * Q, wn);
        if (cur.value() != 0) {
          Index lhs = Index(n) * (P * Q0), rhs = Index(n) * (P0 * Q) + Q * Q0;
          inc.lt_int(lhs, rhs, wn);
        }
      }
      // h S - T = W over the common denominator k * dS * dT * dW; the
      // products are large, so this runs at every n <= 1000 and on a
      // geometric grid beyond.
      bool sample = n <= 1000 || n == horizon || (n & (n - 1)) == 0 || n % 1000 == 0;
      if (sample) {
      const Index &hk = denominator(H), &dS = denominator(S), &dT = denominator(Tn), &dW = denominator(w);
      Index lhs = (numerator(H) * numerator(S) * dT - numerator(Tn) * hk * dS) * dW;
      Index rhs = numerator(w) * hk * dS * dT;
      ident.eq_int(lhs, rhs, wn);
      }
      prev_h = H;
      P0 = std::move(P);
      Q0 = std::move(Q);
    }
  } else {
  MeanCursor<V> cur(e, horizon);
  R prev_h = R(0), prev_d = R(0);
  V w = T::zero();
  LogAccumulator wacc;
  bool have_prev = false;
  while (cur.next()) {
    std::uint64_t n = cur.n();
    if (n >= 2) {
      if constexpr (T::exact)
        w += cur.value() * prev_h;
      else {
        wacc.add(cur.value() * LogReal::from_linear(prev_h));
        w = wacc.value();
      }
    }
    R rn = T::ratio(cur.prefix2(), cur.prefix());  // r(e_a)_n = T_n / S_n
    R h = cur.harmonic();
    R d = h - rn;
    if (n >= 2) {
      pos.lt(rn, h, witness_at(Index(n)));
      ident.eq(d, T::ratio(w, cur.prefix()), witness_at(Index(n)));
      if (have_prev && !T::is_zero(cur.value())) {
        if constexpr (T::exact)
          inc.lt(prev_d, d, witness_at(Index(n)));
        else
          inc.record(MarginTracker::rel(prev_d, d), witness_at(Index(n)));
      }
    } else {
      ident.eq(d, R(0), witness_at(Index(n)));
    }
    prev_h = h;
    prev_d = d;
    have_prev = true;
  }
  }
  pos.apply(r);
  inc.apply(r);
  ident.apply(r);
  r.details = {{"below_H", pos.failed() ? "fail" : "pass"},
               {"gap_increasing", inc.failed() ? "fail" : "pass"},
               {"identity", ident.failed() ? "fail" : "pass"}};
  if (!T::exact) r.notes.push_back("strict inequalities checked to tolerance in the log backend");
  return r;
}

/// Both two-sided chains relating means at m and n >= m.
template <class V>
CheckReport check_sandwich(const Seq& e, const std::vector<std::pair<Index, Index>>& pairs, double tol) {
  using T = scalar_traits<V>;
  Index top = 1;
  std::vector<Index> idx;
  for (const auto& [m, n] : pairs) {
    top = std::max(top, n);
    idx.push_back(m);
    idx.push_back(n);
  }
  auto r = make_report<V>("sandwich", e, top);
  auto pts = collect_points<V>(e, idx);
  MarginTracker t(tol, T::exact);
  for (const auto& [m, n] : pairs) {
    const auto& pm = pts.at(m);
    const auto& pn = pts.at(n);
    V q = T::from_index(m) / T::from_index(n);
    auto w = witness_at(m, n);
    auto dh = T::harmonic_diff(n, m);
    t.le(q * difference(pm.mean, pn.value) + pn.value, pn.mean, w);
    t.le(pn.mean, q * difference(pm.mean, pm.value) + pm.value, w);
    t.le(q * (pm.mean2 + scale(pm.mean, dh)), pn.mean2, w);
    t.le(pn.mean2, q * pm.mean2 + scale(pn.mean, dh), w);
  }
  t.apply(r);
  return r;
}

/// With n = floor(m r(e)_m): r(e_a)_n > (1/2) log r(e)_m.
template <class V>
CheckReport check_log_jump(const Seq& e, const std::vector<Index>& ms, const Index& horizon, double tol) {
  using T = scalar_traits<V>;
  auto r = make_report<V>("log-jump", e, horizon);
  bool closed = has_closed_means(e);
  std::uint64_t skipped = 0;
  auto jump_of = [&](const Index& m, const MeanPoint<V>& p) -> std::optional<Index> {
    if (T::is_zero(p.value)) return std::nullopt;
    Index n;
    if constexpr (T::exact) {
      Rational mr = T::from_index(m) * p.mean / p.value;
      n = boost::multiprecision::numerator(mr) / boost::multiprecision::denominator(mr);
    } else {
      double l = log_index(m) + p.mean.log_value() - p.value.log_value();
      n = floor_exp(l + 1e-15);
      if (n < m) n = m;
    }
    if (!closed && n > horizon) return std::nullopt;
    return n;
  };
  std::vector<std::pair<Index, Index>> jumps;
  std::map<Index, MeanPoint<V>> first, second;
  if (closed) {
    first = collect_points<V>(e, ms);
    std::vector<Index> ns;
    for (const auto& m : ms) {
      if (auto n = jump_of(m, first.at(m))) {
        jumps.emplace_back(m, *n);
        ns.push_back(*n);
      } else {
        ++skipped;
      }
    }
    second = collect_points<V>(e, ns);
  } else {
    // One streaming pass: each jump target lies at or beyond its m.
    std::set<std::uint64_t> starts, targets;
    for (const auto& m : ms) starts.insert(to_u64(m));
    MeanCursor<V> cur(e, to_u64(horizon));
    while (cur.next()) {
      std::uint64_t n = cur.n();
      if (starts.empty() && (targets.empty() || n > *targets.rbegin())) break;
      bool is_start = starts.erase(n) > 0, is_target = targets.count(n) > 0;
      if (!is_start && !is_target) continue;
      MeanPoint<V> p{cur.value(), cur.mean(), cur.mean2()};
      if (is_target) second[Index(n)] = p;
      if (is_start) {
        first[Index(n)] = p;
        if (auto j = jump_of(Index(n), p)) {
          jumps.emplace_back(Index(n), *j);
          if (*j == n)
            second[Index(n)] = p;
          else
            targets.insert(to_u64(*j));
        } else {
          ++skipped;
        }
      }
    }
  }
  MarginTracker t(tol, false);
  for (const auto& [m, n] : jumps) {
    const auto& pm = first.at(m);
    const auto& pn = second.at(n);
    double rm = T::to_double(T::ratio(pm.mean, pm.value));
    double lhs = std::exp(T::log_value(pn.mean2) - T::log_value(pn.mean));
    t.lt(0.5 * std::log(rm), lhs, witness_at(m, n));
  }
  t.apply(r);
  if (skipped > 0)
    r.notes.push_back(std::to_string(skipped) + " sample(s) skipped: jump index beyond the horizon or zero entry");
  if (t.count() == 0) mark_inapplicable(r, "no evaluable samples");
  return r;
}

/// r(e_a)_{n+1} <= r(e_a)_n + 1/(n+1) and r(e_a)_{n+1} < (1 + 1/n) r(e_a)_n for all n < horizon.
template <class V>
CheckReport check_upward_variation(const Seq& e, std::uint64_t horizon, double tol) {
  using T = scalar_traits<V>;
  using R = ratio_t<V>;
  auto r = make_report<V>("upward-variation", e, Index(horizon));
  MarginTracker t(tol, T::exact);
  if constexpr (T::exact) {
    // r_n = T_n / S_n = P / Q unreduced; cross-multiplied:
    //   (n+1) P' Q <= (n+1) P Q' + Q Q'  and  n P' Q < (n+1) P Q'.
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    MeanCursor<Rational> cur(e, horizon);
    Index P0, Q0;
    while (cur.next()) {
      std::uint64_t n = cur.n();
      Index P = numerator(cur.prefix2()) * denominator(cur.prefix());
      Index Q = denominator(cur.prefix2()) * numerator(cur.prefix());
      if (n >= 2) {
        auto w = witness_at(Index(n - 1));
        Index cross = P * Q0, back = P0 * Q;
        t.le_int(Index(n) * cross, Index(n) * back + Q * Q0, w);
        t.lt_int(Index(n - 1) * cross, Index(n) * back, w);
      }
      P0 = std::move(P);
      Q0 = std::move(Q);
    }
    t.apply(r);
    return r;
  }
  MeanCursor<V> cur(e, horizon);
  R prev = R(0);
  while (cur.next()) {
    std::uint64_t n = cur.n();
    R rn = T::ratio(cur.prefix2(), cur.prefix());
    if (n >= 2) {
      std::uint64_t k = n - 1;
      auto w = witness_at(Index(k));
      t.le(rn, prev + detail::inv_index<R>(n), w);
      t.lt(rn, (R(1) + detail::inv_index<R>(k)) * prev, w);
    }
    prev = rn;
  }
  t.apply(r);
  return r;
}

/// The same inequalities at explicit sample indices, for closed-form kinds.
inline CheckReport check_upward_variation_at(const Seq& e, const std::vector<Index>& samples, double tol) {
  std::vector<Index> idx;
  for (const auto& n : samples) {
    idx.push_back(n);
    idx.push_back(n + 1);
  }
  Index top = idx.empty() ? Index(1) : *std::max_element(idx.begin(), idx.end());
  auto r = make_report<LogReal>("upward-variation", e, top);
  auto pts = collect_points<LogReal>(e, idx);
  MarginTracker t(tol, false);
  for (const auto& n : samples) {
    const auto& a = pts.at(n);
    const auto& b = pts.at(n + 1);
    double ra = std::exp(a.mean2.log_value() - a.mean.log_value());
    double rb = std::exp(b.mean2.log_value() - b.mean.log_value());
    double inv_next = 1.0 / index_to_double(n + 1);
    t.le(rb, ra + inv_next, witness_at(n));
    t.lt(rb, ra * (1.0 + 1.0 / index_to_double(n)), witness_at(n));
  }
  t.apply(r);
  r.notes.push_back("sampled at breakpoint neighbourhoods");
  return r;
}

/// With phi <= r(e_a) <= beta phi and n = floor(m e^{phi_m}):
/// (e_{a^2})_n <= 2 beta e^2 (m/n) log(n/m) (e_a)_m.
inline CheckReport check_monotone_lemma(const Seq& e, const std::vector<double>& phi, std::uint64_t horizon,
                                        double tol) {
  auto r = make_report<LogReal>("monotone-lemma", e, Index(horizon));
  if (auto z = first_zero(e, horizon)) {
    mark_inapplicable(r, "zero entry at n = " + std::to_string(*z));
    return r;
  }
  Seq a = am(e);
  auto tab = a.dense<LogReal>(horizon);
  std::uint64_t start = 0;
  for (std::uint64_t m = 1; m <= horizon; ++m)
    if (double(m) * phi[m] > 2.0) {
      start = m;
      break;
    }
  if (start == 0) {
    mark_inapplicable(r, "no m with m phi_m > 2 in range");
    return r;
  }
  double beta = 0;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    double rn = std::exp(tab->mean(n).log_value() - tab->values[n].log_value());
    if (phi[n] > rn * (1 + tol) || (n > 1 && phi[n] < phi[n - 1])) {
      mark_inapplicable(r, "phi must be nondecreasing and below r(e_a); fails at n = " + std::to_string(n));
      return r;
    }
    if (n >= start) beta = std::max(beta, rn / phi[n]);
  }
  double K = 2.0 * beta * std::exp(2.0);
  MarginTracker t(tol, false);
  std::uint64_t skipped = 0;
  for (auto m : geometric_sample(horizon, 1.25)) {
    if (m < start) continue;
    double ln = std::log(double(m)) + phi[m];
    if (ln > std::log(double(horizon))) {
      ++skipped;
      continue;
    }
    auto n = floor_exp(ln).convert_to<std::uint64_t>();
    if (n <= m || n > horizon) {
      ++skipped;
      continue;
    }
    double ratio = double(m) / double(n);
    LogReal rhs = LogReal::from_linear(K * ratio * std::log(1.0 / ratio)) * tab->values[m];
    t.le(tab->mean(n), rhs, witness_at(Index(m), Index(n)));
  }
  t.apply(r);
  r.details = {{"beta", beta}, {"K", K}, {"first_m", start}};
  if (skipped > 0) r.notes.push_back(std::to_string(skipped) + " sample(s) skipped: jump index beyond the horizon");
  if (t.count() == 0) mark_inapplicable(r, "no evaluable samples");
  return r;
}

/// Am-image corollaries on x = am(e): concavity flag set, c_n nondecreasing
/// within [1 - 1/(n+1), 1], and the ratio-only membership test agreeing with
/// the direct concavity test on both x and e.
template <class V>
CheckReport check_concavity_corollaries(const Seq& e, std::uint64_t horizon, double tol) {
  using T = scalar_traits<V>;
  using R = ratio_t<V>;
  auto r = make_report<V>("am-image-corollaries", e, Index(horizon));
  if (auto z = first_zero(e, horizon)) {
    mark_inapplicable(r, "zero entry at n = " + std::to_string(*z));
    return r;
  }
  Seq x = am(e);
  auto c = concavity_ratio<V>(x, horizon);
  MarginTracker t(tol, T::exact);
  R slack = detail::slack<V>();
  if (!c.am_image_flag) t.record(-1.0, "am-image flag", true);
  for (std::uint64_t n = 1; n < horizon; ++n) {
    auto w = witness_at(Index(n));
    t.le(c[n], R(1), w);
    t.le(R(1) - detail::inv_index<R>(n + 1), c[n], w);
    if (n >= 2) t.le(c[n - 1], c[n], w);
  }
  auto agree = [&](const Seq& s, const std::string& label) {
    auto cs = concavity_ratio<V>(s, horizon);
    auto rs = ratio_of_regularity<V>(s, horizon);
    bool direct = cs.am_image_flag;
    bool via_r = !first_ratio_am_image_violation(rs, slack);
    if (direct != via_r) t.record(-1.0, "membership tests disagree on " + label, true);
    return direct;
  };
  bool x_member = agree(x, "am(e)");
  bool e_member = agree(e, "e");
  t.apply(r);
  r.details = {{"am_e_is_am_image", x_member}, {"e_is_am_image", e_member}};
  return r;
}

// ============================================================================
// Counterexample batteries
// ============================================================================

namespace detail {

/// Smallest k such that holds[k..K] are all true (holds is 1-based); K + 1 if none.
inline int empirical_k0(const std::vector<bool>& holds, int K) {
  int k0 = K + 1;
  for (int k = K; k >= 1; --k) {
    if (!holds[k]) break;
    k0 = k;
  }
  return k0;
}

inline nlohmann::json property_json(const std::vector<bool>& holds, const std::vector<double>& values, int K, int first) {
  nlohmann::json vals = nlohmann::json::array(), ok = nlohmann::json::array();
  for (int k = first; k <= K; ++k) {
    vals.push_back(values[k]);
    ok.push_back(static_cast<bool>(holds[k]));
  }
  int k0 = empirical_k0(holds, K);
  nlohmann::json j = {{"first_stage", first}, {"values", vals}, {"holds", ok}};
  if (k0 <= K)
    j["k0"] = k0;
  else
    j["k0"] = nullptr;
  return j;
}

}  // namespace detail

/// Critical samples for the crux on stage k: endpoints and geometric grids of
/// (m_k, n_k] and (n_k, m_{k+1}], j = m_k + 1 and j ~ 3k n_k.
inline std::vector<Index> example6_crux_samples(const Example6Params& p, int k) {
  const auto& st = p.stage(k);
  Index hi = k < p.K ? p.stage(k + 1).m : st.n * Index(30 * k);
  std::vector<Index> out;
  if (st.n > st.m) {
    auto g = geometric_grid(st.m + 1, st.n);
    out.insert(out.end(), g.begin(), g.end());
  }
  auto g2 = geometric_grid(st.n + 1, hi);
  out.insert(out.end(), g2.begin(), g2.end());
  Index x = st.n * Index(3 * k);
  if (x > st.n && x <= hi) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Example6Findings {
  int k0_first_order = 0, k0_crux = 0, k0_signature = 0;
};

/// The witness battery for the cancellation counterexample.
inline CheckReport check_example6(const Example6Params& p, double tol) {
  const int K = p.K;
  CheckReport r;
  r.check_id = "example6";
  r.subject = {{"kind", "construction"}, {"params", {{"construction", "example6"}, {"K", K}}}};
  r.horizon = to_decimal(p.stage(K).n);
  r.numeric_mode = "log";
  const auto& xi = p.xi;
  const auto& eta = p.eta;
  auto ratio = [](LogReal a, LogReal b) { return std::exp(a.log_value() - b.log_value()); };

  MarginTracker sandwich(tol, false);
  std::vector<bool> first_order(K + 1), xi_asym(K + 1), eta_asym(K + 1), second_asym(K + 1), crux(K + 1),
      liminf(K + 1), limsup(K + 1), signature(K + 1);
  std::vector<double> v_first(K + 1), v_xi(K + 1), v_eta(K + 1), v_second(K + 1), v_crux(K + 1), v_inf(K + 1),
      v_sup(K + 1);
  std::uint64_t samples = 0;
  for (int k = 1; k <= K; ++k) {
    const auto& st = p.stage(k);
    LogReal d = p.delta(k);
    double kd = k, ek = std::exp(-kd * kd);
    auto w = "k=" + std::to_string(k);
    // Breakpoint sandwich.
    LogReal xa = xi.am_at(st.m), ea = eta.am_at(st.m), ea2 = eta.am2_at(st.m), xa2 = xi.am2_at(st.m);
    LogReal top = LogReal::from_linear(1.0 + 1.0 / kd) * d;
    sandwich.eq(xi.value_at(st.m), d, w);
    sandwich.eq(eta.value_at(st.m), d, w);
    sandwich.le(d, xa, w);
    sandwich.le(xa, ea, w);
    sandwich.le(ea, ea2, w);
    sandwich.le(ea2, top, w);
    sandwich.le(xa, xa2, w);
    sandwich.le(xa2, top, w);
    // Asymptotics at n_k.
    LogReal xan = xi.am_at(st.n), ean = eta.am_at(st.n), xa2n = xi.am2_at(st.n), ea2n = eta.am2_at(st.n);
    v_first[k] = ratio(ean, xan);
    first_order[k] = v_first[k] >= kd / 4.0;
    v_xi[k] = ratio(xan, d) / ek;
    xi_asym[k] = v_xi[k] >= 1.5 && v_xi[k] <= 2.5;
    v_eta[k] = ratio(ean, d) / ek;
    eta_asym[k] = v_eta[k] >= kd - 1 && v_eta[k] <= kd + 1;
    double s1 = ratio(xa2n, d) / (ek * kd * kd), s2 = ratio(ea2n, d) / (ek * kd * kd);
    v_second[k] = std::min(s1, s2);
    second_asym[k] = s1 >= 0.5 && s1 <= 2 && s2 >= 0.5 && s2 <= 2;
    // Crux 2 xi_{a^2} >= eta_{a^2} over the stage.
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& j : example6_crux_samples(p, k)) {
      LogReal lhs = eta.am2_at(j), rhs = LogReal::from_linear(2.0) * xi.am2_at(j);
      worst = std::min(worst, MarginTracker::rel(lhs, rhs));
      ++samples;
    }
    v_crux[k] = worst;
    crux[k] = worst >= -tol;
    // liminf / limsup signature of xi_{a^2} / xi_a.
    v_inf[k] = ratio(xa2, xa);
    liminf[k] = v_inf[k] <= 1.0 + 2.0 / kd;
    v_sup[k] = ratio(xa2n, xan);
    limsup[k] = v_sup[k] >= kd * kd / 8.0;
    signature[k] = liminf[k] && limsup[k];
  }
  sandwich.apply(r);
  r.sample_count += samples + 4ull * K;
  auto k0 = [&](const std::vector<bool>& h) { return detail::empirical_k0(h, K); };
  int limit = std::min(10, K - 1);
  struct Prop {
    const char* name;
    const std::vector<bool>* holds;
    const std::vector<double>* values;
    bool gating;
  };
  // The asymptotic bands are reported only: (eta_a)_{n_k} e^{k^2} / delta_k
  // equals k(1 - e^{-k^2}) + (eta_a)_{m_k} / delta_k, which exceeds k + 1
  // whenever (eta_a)_{m_k} > delta_k, so the band [k - 1, k + 1] is missed by
  // a 1/k-sized margin even though the ratio to k tends to 1.
  std::vector<Prop> props = {{"first_order_ratio", &first_order, &v_first, true},
                             {"xi_a_asymptotic", &xi_asym, &v_xi, false},
                             {"eta_a_asymptotic", &eta_asym, &v_eta, false},
                             {"second_order_asymptotic", &second_asym, &v_second, false},
                             {"crux", &crux, &v_crux, true},
                             {"liminf_signature", &liminf, &v_inf, true},
                             {"limsup_signature", &limsup, &v_sup, true}};
  nlohmann::json det = nlohmann::json::object();
  det["sandwich"] = sandwich.failed() ? "fail" : "pass";
  int worst_k0 = 1;
  for (const auto& pr : props) {
    det[pr.name] = detail::property_json(*pr.holds, *pr.values, K, 1);
    int kk = k0(*pr.holds);
    if (!pr.gating) {
      if (kk > limit) r.notes.push_back(std::string(pr.name) + " (reported only): no k0 <= " + std::to_string(limit));
      continue;
    }
    worst_k0 = std::max(worst_k0, kk);
    if (kk > limit) {
      r.status = Status::fail;
      r.notes.push_back(std::string(pr.name) + ": no k0 <= " + std::to_string(limit));
    }
  }
  det["k0_max"] = worst_k0;
  int crux_k0 = k0(crux);
  if (crux_k0 <= K) {
    double m = std::numeric_limits<double>::infinity();
    for (int k = crux_k0; k <= K; ++k) m = std::min(m, v_crux[k]);
    det["crux_worst_margin_from_k0"] = m;
  }
  r.details = det;
  return r;
}

/// Indices probed on stage k of the omega^{1/2} construction: endpoints, a
/// geometric grid and the analytic minimiser of the lower bound.
inline std::vector<Index> omega_half_samples(const OmegaHalfParams& p, int k) {
  Index lo = k == 1 ? Index(1) : p.mk(k) + 1;
  Index hi;
  if (k < p.K)
    hi = p.mk(k + 1);
  else
    hi = p.mk(k) * p.mk(k);  // open tail: well past the minimiser
  auto out = geometric_grid(lo, hi);
  if (k >= 3 && p.mk(k - 1) >= 4) {
    double mk = index_to_double(p.mk(k)), mk1 = index_to_double(p.mk(k - 1));
    double lx = 2.0 * (log_index(p.mk(k)) - std::log(4.0) + std::log1p(std::sqrt(1.0 - 4.0 / mk1)));
    (void)mk;
    Index x = floor_exp(lx);
    for (Index j : {x, Index(x + 1)})
      if (j >= lo && j <= hi) out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline CheckReport check_omega_half(const OmegaHalfParams& p, double tol) {
  const int K = p.K;
  CheckReport r;
  r.check_id = "omega-half";
  r.subject = {{"kind", "construction"}, {"params", {{"construction", "omega-half"}, {"K", K}}}};
  r.horizon = to_decimal(p.mk(K));
  r.numeric_mode = "log";
  const auto& xi = p.xi;
  auto sqrt_inv = [](const Index& j) { return LogReal::from_log(-0.5 * log_index(j)); };
  MarginTracker sandwich(tol, false);
  std::vector<bool> below(K + 1), bound(K + 1), mean_band(K + 1), growth(K + 1);
  std::vector<double> v_below(K + 1), v_ratio(K + 1, 0.0), v_band(K + 1, 0.0), v_growth(K + 1, 0.0),
      v_asym(K + 1, 0.0);
  std::uint64_t samples = 0;
  for (int k = 1; k <= K; ++k) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& j : omega_half_samples(p, k)) {
      worst = std::min(worst, MarginTracker::rel(sqrt_inv(j), xi.am2_at(j)));
      ++samples;
    }
    v_below[k] = worst;
    below[k] = worst >= -tol;
    if (k >= 2 && k < K) {
      const Index& next = p.mk(k + 1);
      LogReal lvl = p.level(k);
      auto w = "k=" + std::to_string(k);
      sandwich.le(lvl, xi.am_at(next), w);
      sandwich.le(xi.am_at(next), xi.am2_at(next), w);
      sandwich.le(xi.am2_at(next), LogReal::from_linear(1.0 + 1.0 / k) * lvl, w);
    }
    if (k >= 3) {
      const Index& mk = p.mk(k);
      const Index& mk1 = p.mk(k - 1);
      Index jk = mk * mk / mk1;
      LogReal xa = xi.am_at(jk);
      v_ratio[k] = std::exp(sqrt_inv(jk).log_value() - xa.log_value());
      bound[k] = v_ratio[k] >= 0.25 * std::sqrt(index_to_double(mk1));
      v_band[k] = std::exp(xa.log_value() + log_index(mk));
      mean_band[k] = v_band[k] >= 1.5 && v_band[k] <= 2.5;
      // Within-step asymptotic m_k/(j m_{k-1}) + 1/m_k on a geometric grid.
      double err = 0;
      Index hi = k < K ? p.mk(k + 1) : mk * mk;
      for (const auto& j : geometric_grid(mk + 1, hi, 8)) {
        double approx = std::exp(log_index(mk) - log_index(j) - log_index(mk1)) + std::exp(-log_index(mk));
        err = std::max(err, std::abs(xi.am_at(j).linear() / approx - 1.0));
      }
      v_asym[k] = err;
    }
    if (k >= 4) {
      v_growth[k] = v_ratio[k] / v_ratio[k - 1];
      growth[k] = v_growth[k] >= 3.0;
    }
  }
  sandwich.apply(r);
  r.sample_count += samples;
  nlohmann::json det = nlohmann::json::object();
  det["sandwich"] = sandwich.failed() ? "fail" : "pass";
  det["below_second_mean"] = detail::property_json(below, v_below, K, 1);
  det["divergence_bound"] = detail::property_json(bound, v_ratio, K, 3);
  det["mean_band"] = detail::property_json(mean_band, v_band, K, 3);
  det["growth_factor"] = detail::property_json(growth, v_growth, K, 4);
  nlohmann::json asym = nlohmann::json::array();
  for (int k = 3; k <= K; ++k) asym.push_back(v_asym[k]);
  det["within_step_relative_error"] = asym;
  int k0_below = detail::empirical_k0(below, K);
  // The divergence properties start at stage 3 (j_k needs m_{k-1} >= 1).
  std::vector<bool> div(K + 1);
  for (int k = 1; k <= K; ++k) div[k] = k >= 3 && bound[k] && mean_band[k] && (k < 4 || growth[k]);
  int k0_div = detail::empirical_k0(div, K);
  det["k0_below_second_mean"] = k0_below;
  det["k0_divergence"] = k0_div;
  if (k0_below > K) {
    r.status = Status::fail;
    r.notes.push_back("omega^{1/2} <= xi_{a^2} fails on the last stage");
  }
  if (k0_div > K - 1) {
    r.status = Status::fail;
    r.notes.push_back("divergence of omega^{1/2}/xi_a not evidenced across two stages");
  }
  r.details = det;
  return r;
}

// ============================================================================
// Profiles and signatures
// ============================================================================

/// Running sup of y/x over the samples up to each checkpoint.
inline std::vector<double> sampled_profile(const Seq& x, const Seq& y, const std::vector<Index>& samples,
                                           const std::vector<Index>& checkpoints) {
  auto prof = domination_profile_sampled(y, x, samples, checkpoints);
  std::vector<double> out;
  for (const auto& [c, v] : prof) out.push_back(v);
  return out;
}

/// Second-order boundedness next to first-order growth: the signature of a
/// failed cancellation. Profiles compare y_{a^p}/x_{a^p} at p = order and
/// order - 1; with `raw_y` the numerator stays y at both orders.
/// `expect` says whether the signature should be present.
inline CheckReport check_cancellation_witness(const Seq& x, const Seq& y, int order, bool raw_y,
                                              const std::vector<Index>& samples,
                                              const std::vector<Index>& checkpoints, double bound, bool expect,
                                              double tol) {
  CheckReport r;
  r.check_id = "cancellation-witness";
  r.subject = {{"x", x.describe()}, {"y", y.describe()}, {"order", order}, {"raw_numerator", raw_y}};
  r.horizon = checkpoints.empty() ? "0" : to_decimal(checkpoints.back());
  r.numeric_mode = "log";
  auto pow_or_self = [](const Seq& s, int p) { return p > 0 ? am_pow(s, p) : s; };
  Seq xo = pow_or_self(x, order), yo = raw_y ? y : pow_or_self(y, order);
  Seq xl = pow_or_self(x, order - 1), yl = raw_y ? y : pow_or_self(y, order - 1);
  auto high = sampled_profile(xo, yo, samples, checkpoints);
  auto low = sampled_profile(xl, yl, samples, checkpoints);
  double high_max = high.empty() ? 0 : *std::max_element(high.begin(), high.end());
  bool bounded = high_max <= bound * (1 + tol);
  // Growth: nondecreasing (a running sup), rising at the last checkpoint and
  // at least doubling overall.
  bool growing = low.size() >= 2 && low.back() > low[low.size() - 2] && low.back() >= 2.0 * low.front();
  bool detected = bounded && growing;
  r.sample_count = samples.size();
  r.worst_margin = (bound - high_max) / bound;
  r.details = {{"order_profile", high}, {"lower_order_profile", low}, {"bound", bound},
               {"second_order_bounded", bounded}, {"first_order_growing", growing}, {"signature", detected},
               {"expected", expect}};
  r.status = detected == expect ? Status::pass : Status::fail;
  return r;
}

/// hat(omega^p) against omega^{p'} with 1/p - 1/p' = 1: the ratio over
/// 10 <= n <= horizon must stay in a band of width (sup/inf) at most 8.
inline CheckReport check_hat_power(double p, std::uint64_t horizon) {
  if (!(p > 0 && p < 1)) throw DomainError("hat power needs 0 < p < 1");
  Seq s = Seq::omega_power(p);
  CheckReport r = make_report<LogReal>("hat-power", s, Index(horizon));
  double pp = p / (1.0 - p);
  auto h = hat(s, horizon);
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  std::uint64_t arg_lo = 0, arg_hi = 0;
  for (std::uint64_t n = 10; n <= horizon; ++n) {
    double v = std::exp(h.values[n].log_value() + pp * std::log(double(n)));
    if (v < lo) lo = v, arg_lo = n;
    if (v > hi) hi = v, arg_hi = n;
  }
  r.sample_count = horizon >= 10 ? horizon - 9 : 0;
  double width = hi / lo;
  r.worst_margin = (8.0 - width) / 8.0;
  r.witness = "n=" + std::to_string(width > 8 ? arg_hi : arg_lo);
  r.status = width <= 8.0 ? Status::pass : Status::fail;
  r.details = {{"p", p},           {"p_prime", pp},       {"ratio_inf", lo}, {"ratio_sup", hi},
               {"band_width", width}, {"nu_at_horizon", to_decimal(h.nu[horizon])}};
  return r;
}

/// hat on a summable input must raise the summability error.
inline CheckReport check_hat_summable(const Seq& s, std::uint64_t horizon) {
  CheckReport r = make_report<LogReal>("hat-summable-error", s, Index(horizon));
  r.sample_count = 1;
  try {
    hat(s, horizon);
    r.status = Status::fail;
    r.notes.push_back("hat returned on a summable input");
  } catch (const SummableError& e) {
    r.status = Status::pass;
    r.details = {{"error", e.what()}};
  }
  return r;
}

// ============================================================================
// Coherence checks
// ============================================================================

struct LogBand {
  double v_low = 0, v_high = 0;  // r(am(s))_n / log n at the fit points
  double limit = 0;              // L in v = L + c / log n
  double min = 0, max = 0;       // over the band range
  bool holds = false;
};

/// r(am(s))_n / log n over [lo, hi], with the limit L of the fit v = L + c/log n
/// through n = hi/100 and hi. The band holds when L stays clear of 0.
inline LogBand log_band(const Seq& s, std::uint64_t lo, std::uint64_t hi) {
  Seq a = am(s);
  auto tab = a.dense<LogReal>(hi);
  auto v = [&](std::uint64_t n) {
    return std::exp(tab->mean(n).log_value() - tab->values[n].log_value()) / std::log(double(n));
  };
  LogBand b;
  b.min = std::numeric_limits<double>::infinity();
  for (std::uint64_t n = lo; n <= hi; ++n) {
    double x = v(n);
    b.min = std::min(b.min, x);
    b.max = std::max(b.max, x);
  }
  std::uint64_t n1 = std::max<std::uint64_t>(hi / 100, 2), n2 = hi;
  b.v_low = v(n1);
  b.v_high = v(n2);
  double u1 = 1.0 / std::log(double(n1)), u2 = 1.0 / std::log(double(n2));
  double c = (b.v_low - b.v_high) / (u1 - u2);
  b.limit = b.v_high - c * u2;
  b.holds = b.limit >= 0.1 && b.min > 0;
  return b;
}

/// Bounded exponential Delta_2 profile iff r(am(s)) ~ log: both kinds of
/// evidence must agree. `sup_bound`, when positive, is the recorded constant
/// the profile must stay below.
inline CheckReport check_exp_delta2_coherence(const Seq& s, std::uint64_t M, std::uint64_t band_hi, double sup_bound) {
  CheckReport r = make_report<LogReal>("exp-delta2-coherence", s, Index(band_hi));
  auto prof = exp_delta2_profile(s, M);
  auto band = log_band(s, 100, band_hi);
  bool increasing = prof.samples.size() == 3 && prof.samples[0].second < prof.samples[1].second &&
                    prof.samples[1].second < prof.samples[2].second;
  bool bounded = prof.trend == Trend::bounded && (sup_bound <= 0 || prof.sup_value < sup_bound);
  bool growing = increasing && prof.trend != Trend::bounded;
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& [m, v] : prof.samples) samples.push_back({m, v});
  r.details = {{"delta2_sup", prof.sup_value}, {"delta2_argmax", prof.argmax}, {"delta2_samples", samples},
               {"delta2_trend", to_string(prof.trend)}, {"band_limit", band.limit}, {"band_min", band.min},
               {"band_max", band.max}, {"band_holds", band.holds}, {"recorded_bound", sup_bound}};
  r.sample_count = M + (band_hi - 99);
  if (bounded && band.holds) {
    r.status = Status::pass;
    r.details["direction"] = "bounded and log-equivalent";
  } else if (growing && !band.holds) {
    r.status = Status::pass;
    r.details["direction"] = "growing and not log-equivalent";
  } else if ((bounded && !band.holds) || (growing && band.holds)) {
    r.status = Status::fail;
  } else {
    r.status = Status::inconclusive;
  }
  return r;
}

/// Delta_2 profiles of am^{p-1}(s) and am^p(s) stay within
/// [alpha/(2 beta), beta/(2 alpha)] of each other, alpha and beta being the
/// extreme values of r(am^p s)_n / log n for 2 <= n <= M^2.
inline CheckReport check_higher_order_delta2(const Seq& s, std::uint64_t M, int max_order, double tol) {
  CheckReport r = make_report<LogReal>("higher-order-delta2", s, Index(M) * M);
  MarginTracker t(tol, false);
  nlohmann::json orders = nlohmann::json::array();
  for (int p = 1; p <= max_order; ++p) {
    Seq lower = p == 1 ? s : am_pow(s, p - 1);
    Seq upper = am_pow(s, p);
    auto top = M * M;
    auto tu = am(upper).dense<LogReal>(top);  // r(upper)_n = mean(upper)_n / upper_n
    auto tl = lower.dense<LogReal>(top);
    auto tp = upper.dense<LogReal>(top);
    double alpha = std::numeric_limits<double>::infinity(), beta = 0;
    for (std::uint64_t n = 2; n <= top; ++n) {
      double v = std::exp(tu->values[n].log_value() - tp->values[n].log_value()) / std::log(double(n));
      alpha = std::min(alpha, v);
      beta = std::max(beta, v);
    }
    double lo = alpha / (2 * beta), hi = beta / (2 * alpha);
    double sup_upper = 0, rmin = std::numeric_limits<double>::infinity(), rmax = 0;
    for (std::uint64_t m = 2; m <= M; ++m) {
      double pl = std::exp(tl->prefix[m * m].log_value() - tl->prefix[m].log_value());
      double pu = std::exp(tp->prefix[m * m].log_value() - tp->prefix[m].log_value());
      double q = pl / pu;
      sup_upper = std::max(sup_upper, pu);
      rmin = std::min(rmin, q);
      rmax = std::max(rmax, q);
      t.le(lo, q, "p=" + std::to_string(p) + ",m=" + std::to_string(m));
      t.le(q, hi, "p=" + std::to_string(p) + ",m=" + std::to_string(m));
    }
    auto prof = exp_delta2_profile(upper, M);
    if (prof.trend == Trend::unbounded) t.record(-1.0, "p=" + std::to_string(p) + " profile grows", false);
    orders.push_back({{"order", p}, {"alpha", alpha}, {"beta", beta}, {"band", {lo, hi}}, {"ratio_min", rmin},
                      {"ratio_max", rmax}, {"delta2_sup", sup_upper}, {"delta2_trend", to_string(prof.trend)}});
  }
  t.apply(r);
  r.details = {{"orders", orders}};
  return r;
}

/// sup r(s) and sup r(am(s)) show the same bounded/unbounded trend.
inline CheckReport check_regular_iff_am_regular(const Seq& s, std::uint64_t horizon) {
  CheckReport r = make_report<LogReal>("regular-iff-am-regular", s, Index(horizon));
  auto a = regularity_profile(s, horizon);
  auto b = regularity_profile(am(s), horizon);
  r.sample_count = 2 * horizon;
  r.details = {{"sup_r", a.sup_r}, {"r_trend", to_string(a.r_trend)}, {"sup_r_am", b.sup_r},
               {"r_am_trend", to_string(b.r_trend)}};
  if (a.r_trend == Trend::inconclusive || b.r_trend == Trend::inconclusive)
    r.status = Status::inconclusive;
  else
    r.status = a.r_trend == b.r_trend ? Status::pass : Status::fail;
  return r;
}

/// am(s) <= D_2(am(s)) <= 2 am(s) pointwise up to the horizon.
inline CheckReport check_delta_half(const Seq& s, std::uint64_t horizon, double tol) {
  CheckReport r = make_report<LogReal>("delta-half", s, Index(horizon));
  Seq a = am(s);
  auto tab = a.dense<LogReal>(horizon);
  MarginTracker t(tol, false);
  LogReal two = LogReal::from_linear(2.0);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    LogReal d = tab->values[(n + 1) / 2];
    t.le(tab->values[n], d, witness_at(Index(n)));
    t.le(d, two * tab->values[n], witness_at(Index(n)));
  }
  t.apply(r);
  return r;
}

// ============================================================================
// Harmonic bounds and inversion
// ============================================================================

/// 1/n + log n < H_n < 1 + log n for 1 < n <= limit, and the chain
/// log(n/m) - 1/(m+1) < log((n+1)/(m+1)) < H_n - H_m < log(n/m).
///
/// The middle and right links for all pairs follow from consecutive pairs:
/// H_k - log(k+1) increases and H_k - log k decreases. The outer bound
/// log(n/m) - 1/(m+1) < H_n - H_m reduces to H_m - log m - gamma < 1/(m+1).
/// The left link alone is tested as stated; for fixed m it fails once n/m is
/// large, and the first failing n per m is reported.
inline CheckReport check_harmonic_bounds(std::uint64_t limit, std::size_t big_pairs, std::uint64_t seed, double tol) {
  CheckReport r;
  r.check_id = "harmonic-bounds";
  r.subject = {{"kind", "formula"}, {"params", {{"family", "harmonic"}}}};
  r.horizon = std::to_string(limit);
  r.numeric_mode = "log";
  const auto& H = HarmonicEngine::global();
  MarginTracker single(tol, false), right(tol, false), middle(tol, false), outer(tol, false), left(0.0, false);
  for (std::uint64_t n = 2; n <= limit; ++n) {
    double h = H.harmonic(n), ln = std::log(double(n));
    single.lt(1.0 / double(n) + ln, h, witness_at(Index(n)));
    single.lt(h, 1.0 + ln, witness_at(Index(n)));
  }
  for (std::uint64_t m = 1; m < limit; ++m) {
    long double x = 1.0L / static_cast<long double>(m + 1);
    long double y = 1.0L / static_cast<long double>(m);
    // H_{m+1} - H_m = 1/(m+1) against log((m+2)/(m+1)) and log((m+1)/m).
    middle.lt(static_cast<double>(std::log1p(x)), static_cast<double>(x), witness_at(Index(m), Index(m + 1)));
    right.lt(static_cast<double>(x), static_cast<double>(std::log1p(y)), witness_at(Index(m), Index(m + 1)));
    double em = static_cast<double>(H.harmonic(m) - std::log(static_cast<long double>(m)) - kEulerGamma);
    if (m >= 1000) em = 0.5 / double(m) - 1.0 / (12.0 * double(m) * double(m));
    outer.lt(em, static_cast<double>(x), witness_at(Index(m)));
  }
  // Left link: g(n) = log(n/m) - log((n+1)/(m+1)) increases in n; find the first failing n.
  std::uint64_t left_fail_m = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> left_first;
  for (std::uint64_t m = 1; m < limit; ++m) {
    auto g = [&](std::uint64_t n) {
      return std::log1p(1.0 / double(m)) - std::log1p(1.0 / double(n)) - 1.0 / double(m + 1);
    };  // log(n/m) - log((n+1)/(m+1)) - 1/(m+1)
    if (g(limit) < 0) continue;
    std::uint64_t lo = m, hi = limit;
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      (g(mid) >= 0 ? hi : lo) = mid;
    }
    ++left_fail_m;
    if (!left_first) left_first = {{m, hi}};
  }
  // Big pairs through the cancellation-free excess (H_n - H_m) - log(n/m).
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mexp(3.0, 30.0), texp(-3.0, 3.0);
  for (std::size_t i = 0; i < big_pairs; ++i) {
    Index m = floor_exp(mexp(rng) * std::log(10.0));
    double t = std::pow(10.0, texp(rng));
    Index n = m + floor_exp(log_index(m) + std::log(t));
    if (n <= m) n = m + 1;
    double ex = harmonic_excess(n, m);
    double im = 1.0 / index_to_double(m), in = 1.0 / index_to_double(n);
    double shift = std::log1p(im) - std::log1p(in);  // log(n/m) - log((n+1)/(m+1))
    auto w = witness_at(m, n);
    right.lt(ex, 0.0, w);
    right.record(-ex > 0 ? 1.0 : -1.0, w);
    middle.record(ex + shift > 0 ? (ex + shift) / shift : -1.0, w);
    outer.record(ex + 1.0 / (index_to_double(m) + 1.0) > 0 ? 1.0 : -1.0, w);
  }
  double cross = std::abs(HarmonicEngine::asymptotic(Index(limit)) - H.harmonic(limit)) / H.harmonic(limit);
  for (auto* t : {&single, &right, &middle, &outer}) t->apply(r);
  r.details = {{"eq1", single.failed() ? "fail" : "pass"},
               {"right_link", right.failed() ? "fail" : "pass"},
               {"middle_link", middle.failed() ? "fail" : "pass"},
               {"outer_bound", outer.failed() ? "fail" : "pass"},
               {"left_link", left_first ? "fail" : "pass"},
               {"left_link_failing_m_count", left_fail_m},
               {"crossover_relative_error", cross},
               {"big_pairs", big_pairs}};
  if (left_first) {
    r.details["left_link_first_failure"] = {{"m", left_first->first}, {"n", left_first->second}};
    r.status = Status::fail;
    r.witness = witness_at(Index(left_first->first), Index(left_first->second));
    r.notes.push_back("log(n/m) - 1/(m+1) < log((n+1)/(m+1)) fails once n/m is large; first failure m=" +
                      std::to_string(left_first->first) + ", n=" + std::to_string(left_first->second));
  }
  if (cross >= 1e-12) {
    r.status = Status::fail;
    r.notes.push_back("asymptotic and summed harmonic numbers disagree at the crossover");
  }
  return r;
}

/// Integer-valued n r_n with random increments >= 1 always pass the recurrence.
inline RatioSeq<Rational> random_admissible_ratio(std::mt19937_64& rng, std::uint64_t N) {
  RatioSeq<Rational> r;
  r.r.assign(N + 1, Rational(0));
  Index R = 1;
  r.r[1] = 1;
  for (std::uint64_t n = 2; n <= N; ++n) {
    R += 1 + rng() % 3;
    r.r[n] = Rational(R, Index(n));
  }
  return r;
}

/// c_n = (n + a_n)/(n + 1) with a_n in {0, 1, 2} stays above n/(n+1).
inline ConcavitySeq<Rational> random_admissible_concavity(std::mt19937_64& rng, std::uint64_t N) {
  ConcavitySeq<Rational> c;
  c.c.assign(N, Rational(0));
  for (std::uint64_t n = 1; n < N; ++n) c.c[n] = Rational(Index(n + rng() % 3), Index(n + 1));
  return c;
}

/// Exact roundtrips r -> xi -> r and c -> xi -> c on random admissible inputs.
inline CheckReport check_inversion_roundtrip(std::uint64_t seed, std::size_t count, std::uint64_t N) {
  CheckReport r;
  r.check_id = "inversion-roundtrip";
  r.subject = {{"kind", "random"}, {"params", {{"count", count}, {"seed", seed}}}};
  r.horizon = std::to_string(N);
  r.numeric_mode = "rational";
  std::mt19937_64 rng(seed);
  MarginTracker t(0.0, true);
  for (std::size_t i = 0; i < count; ++i) {
    auto rr = random_admissible_ratio(rng, N);
    Seq xi = seq_from_ratio<Rational>(rr);
    auto back = ratio_of_regularity<Rational>(xi, N);
    bool same = back.r == rr.r;
    t.record(same ? 0.0 : -1.0, "ratio input " + std::to_string(i), !same);
    auto cc = random_admissible_concavity(rng, N);
    Seq xc = seq_from_concavity<Rational>(cc);
    auto cback = concavity_ratio<Rational>(xc, N);
    bool csame = cback.c == cc.c;
    t.record(csame ? 0.0 : -1.0, "concavity input " + std::to_string(i), !csame);
    auto conv = concavity_to_ratio(ratio_to_concavity(rr));
    bool cv = conv.r == rr.r;
    t.record(cv ? 0.0 : -1.0, "conversion input " + std::to_string(i), !cv);
  }
  t.apply(r);
  return r;
}

// ============================================================================
// Suites
// ============================================================================

struct SuiteConfig {
  std::string suite = "lemmas";
  std::vector<std::string> subjects;  // empty: the suite's defaults
  std::vector<std::string> checks;    // empty: every check of the suite
  std::string mode = "log";
  std::uint64_t horizon = 10000;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  int stages_example6 = 8;
  int stages_omega_half = 4;
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s = {"lemmas",  "example6",   "omega-half", "hat",        "coherence",
                                             "inversion", "harmonic", "delta-half", "all"};
  return s;
}

inline const std::vector<std::string>& known_subjects() {
  static const std::vector<std::string> s = {"omega",    "omega-1/3",    "omega-1/2",   "omega-2/3",
                                             "omega-2",  "log-n",        "log2-n",      "iterated-log",
                                             "finite-rank", "example6-xi", "example6-eta", "omega-half-xi"};
  return s;
}

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> s = {
      "ratio-identity",    "sandwich",          "H-bound",           "upward-variation",
      "log-jump",          "ratio-bound",       "monotone-lemma",    "am-image-corollaries",
      "example6",          "omega-half",        "cancellation-witness", "hat-power",
      "hat-summable-error", "exp-delta2-coherence", "higher-order-delta2", "regular-iff-am-regular",
      "iterated-log-trend", "inversion-roundtrip", "harmonic-bounds",   "delta-half"};
  return s;
}

inline Seq make_subject(const std::string& id, int ex6_stages = 8, int oh_stages = 4) {
  if (id == "omega") return Seq::omega_power(1.0);
  if (id == "omega-1/3") return Seq::omega_power(1.0 / 3.0);
  if (id == "omega-1/2") return Seq::omega_power(0.5);
  if (id == "omega-2/3") return Seq::omega_power(2.0 / 3.0);
  if (id == "omega-2") return Seq::omega_power(2.0);
  if (id == "log-n") return Seq::log_power(1.0);
  if (id == "log2-n") return Seq::log_power(2.0);
  if (id == "iterated-log") return Seq::iterated_log();
  if (id == "finite-rank") return Seq::indicator();
  if (id == "example6-xi") return Seq::step(build_example6(ex6_stages).xi);
  if (id == "example6-eta") return Seq::step(build_example6(ex6_stages).eta);
  if (id == "omega-half-xi") return Seq::step(build_omega_half(oh_stages).xi);
  throw ConfigError("unknown subject: " + id);
}

namespace detail {

/// Nondecreasing lower envelope factor * min_{j in [n, N]} v_j (1-based).
inline std::vector<double> lower_envelope(const std::vector<double>& v, double factor) {
  std::vector<double> out(v.size(), 0.0);
  double run = std::numeric_limits<double>::infinity();
  for (std::size_t n = v.size() - 1; n >= 1; --n) {
    run = std::min(run, v[n]);
    out[n] = factor * run;
  }
  return out;
}

inline std::vector<double> ratio_values(const Seq& s, std::uint64_t horizon) {
  auto tab = s.dense<LogReal>(horizon);
  std::vector<double> r(horizon + 1, 0.0);
  for (std::uint64_t n = 1; n <= horizon; ++n)
    r[n] = std::exp(tab->mean(n).log_value() - tab->values[n].log_value());
  return r;
}

template <class V>
void run_lemmas(const Seq& s, const SuiteConfig& cfg, std::vector<CheckReport>& out) {
  const bool exact = scalar_traits<V>::exact;
  std::uint64_t N = cfg.horizon;
  // Pair sets: exact products stay cheap on moderate spans.
  std::vector<std::pair<Index, Index>> id_pairs =
      random_pairs(cfg.seed, N, exact ? 12 : 50, exact ? 300 : N);
  id_pairs.emplace_back(Index(1), Index(1));
  id_pairs.emplace_back(Index(2), Index(std::min<std::uint64_t>(4, N)));
  if (exact) {
    id_pairs.emplace_back(Index(N > 300 ? N - 300 : 1), Index(N));
  } else {
    id_pairs.emplace_back(Index(1), Index(N));
    id_pairs.emplace_back(Index(N / 2), Index(N));
  }
  auto sw_pairs = random_pairs(cfg.seed + 1, N, 100, N);
  sw_pairs.emplace_back(Index(N), Index(N));
  sw_pairs.emplace_back(Index(1), Index(N));
  for (auto& p : sw_pairs)
    if (p.first > p.second) std::swap(p.first, p.second);
  std::vector<Index> ms;
  for (auto m : geometric_sample(N, 1.5)) ms.push_back(Index(m));

  auto want = [&](const char* id) {
    return cfg.checks.empty() || std::find(cfg.checks.begin(), cfg.checks.end(), id) != cfg.checks.end();
  };
  auto skip = [&](const char* id, const std::string& why) {
    auto r = make_report<V>(id, s, Index(N));
    mark_inapplicable(r, why);
    out.push_back(r);
  };
  bool finite_rank = first_zero(s, N).has_value();
  if (want("ratio-identity")) out.push_back(check_ratio_identity<V>(s, id_pairs, cfg.tol));
  if (want("sandwich")) out.push_back(check_sandwich<V>(s, sw_pairs, cfg.tol));
  if (want("H-bound")) out.push_back(check_H_bound<V>(s, N, cfg.tol));
  if (want("upward-variation")) out.push_back(check_upward_variation<V>(s, N, cfg.tol));
  if (want("log-jump")) {
    if (finite_rank)
      skip("log-jump", "finite-rank subject: r(e) undefined");
    else
      out.push_back(check_log_jump<V>(s, ms, Index(N), cfg.tol));
  }
  // Envelope-based phi for the two phi-parameterised lemmas (log backend).
  if (want("ratio-bound")) {
    if (finite_rank)
      skip("ratio-bound", "finite-rank subject");
    else
      out.push_back(check_ratio_bound(s, lower_envelope(ratio_values(s, N), 0.9), N, cfg.tol));
  }
  if (want("monotone-lemma")) {
    if (finite_rank)
      skip("monotone-lemma", "finite-rank subject");
    else
      out.push_back(check_monotone_lemma(s, lower_envelope(ratio_values(am(s), N), 1.0), N, cfg.tol));
  }
  if (want("am-image-corollaries")) {
    std::uint64_t cN = exact ? std::min<std::uint64_t>(N, 2000) : N;
    if (finite_rank) {
      skip("am-image-corollaries", "finite-rank subject");
    } else {
      out.push_back(check_concavity_corollaries<V>(s, cN, cfg.tol));
      if (cN < N) out.back().notes.push_back("exact concavity tables capped at 2000");
    }
  }
}

inline void run_example6_suite(const SuiteConfig& cfg, std::vector<CheckReport>& out) {
  auto p = build_example6(cfg.stages_example6);
  out.push_back(check_example6(p, cfg.tol));
  Seq xi = Seq::step(p.xi), eta = Seq::step(p.eta);
  std::vector<std::pair<Index, Index>> pairs;
  std::vector<Index> ms, ups, cps, samples;
  int crux_k0 = out.back().details["crux"]["k0"].is_null() ? p.K : out.back().details["crux"]["k0"].get<int>();
  for (int k = 1; k <= p.K; ++k) {
    const auto& st = p.stage(k);
    ms.push_back(st.m);
    ups.push_back(st.m);
    if (st.m > 1) ups.push_back(st.m - 1);
    ups.push_back(st.n);
    if (k < p.K) pairs.emplace_back(st.m, p.stage(k + 1).m);
    pairs.emplace_back(st.m, st.n);
    if (k >= crux_k0) {
      auto c = example6_crux_samples(p, k);
      samples.insert(samples.end(), c.begin(), c.end());
      samples.push_back(st.n);
      cps.push_back(st.n);
    }
  }
  auto sw = check_sandwich<LogReal>(eta, pairs, cfg.tol);
  out.push_back(sw);
  out.push_back(check_log_jump<LogReal>(eta, ms, p.stage(p.K).n, cfg.tol));
  out.push_back(check_upward_variation_at(eta, ups, cfg.tol));
  std::sort(samples.begin(), samples.end());
  out.push_back(check_cancellation_witness(xi, eta, 2, false, samples, cps, 2.0, true, cfg.tol));
  out.back().notes.push_back("samples from the crux threshold stage k0 = " + std::to_string(crux_k0));
  // Negative control: a sequence against itself shows no signature.
  out.push_back(check_cancellation_witness(xi, xi, 2, false, samples, cps, 2.0, false, cfg.tol));
}

inline void run_omega_half_suite(const SuiteConfig& cfg, std::vector<CheckReport>& out) {
  auto p = build_omega_half(cfg.stages_omega_half);
  out.push_back(check_omega_half(p, cfg.tol));
  Seq xi = Seq::step(p.xi), w = Seq::omega_power(0.5);
  std::vector<Index> samples, cps;
  for (int k = 1; k <= p.K; ++k) {
    auto s = omega_half_samples(p, k);
    samples.insert(samples.end(), s.begin(), s.end());
    if (k >= 3) {
      Index jk = p.mk(k) * p.mk(k) / p.mk(k - 1);
      samples.push_back(jk);
    }
    cps.push_back(k < p.K ? p.mk(k + 1) : p.mk(k) * p.mk(k));
  }
  std::sort(samples.begin(), samples.end());
  out.push_back(check_cancellation_witness(xi, w, 2, true, samples, cps, 1.0, true, cfg.tol));
}

inline void run_hat_suite(const SuiteConfig& cfg, std::vector<CheckReport>& out) {
  std::uint64_t N = std::min<std::uint64_t>(cfg.horizon, 1000);
  for (double p : {1.0 / 3.0, 0.5, 2.0 / 3.0}) out.push_back(check_hat_power(p, N));
  out.push_back(check_hat_summable(Seq::omega_power(2.0), N));
}

inline void run_coherence_suite(const SuiteConfig& cfg, std::vector<CheckReport>& out) {
  // The log band needs two decades past 1e4 to separate log growth from powers.
  std::uint64_t band = std::min<std::uint64_t>(std::max<std::uint64_t>(cfg.horizon, 1000000), dense_horizon_limit());
  struct Entry {
    const char* id;
    double bound;
  };
  for (auto e : {Entry{"omega", 2.0}, Entry{"log-n", 4.0}, Entry{"omega-2", 1.65}, Entry{"omega-1/2", 0},
                 Entry{"omega-2/3", 0}}) {
    Seq s = make_subject(e.id);
    out.push_back(check_exp_delta2_coherence(s, 1000, band, e.bound));
  }
  for (const char* id : {"omega", "log-n"}) out.push_back(check_higher_order_delta2(make_subject(id), 316, 2, cfg.tol));
  for (const char* id : {"omega", "omega-1/2", "log-n", "omega-2"})
    out.push_back(check_regular_iff_am_regular(make_subject(id), band));
  // r(eta_a) ~ log log n: trend-only report.
  Seq il = Seq::iterated_log();
  auto prof = exp_delta2_profile(il, 1000);
  CheckReport r = make_report<LogReal>("iterated-log-trend", il, Index(1000000));
  r.status = Status::inconclusive;
  r.details = {{"delta2_sup", prof.sup_value}, {"delta2_trend", to_string(prof.trend)}};
  r.notes.push_back("trend-only subject: r(eta_a) ~ log log n is not decidable at feasible horizons");
  out.push_back(r);
}

inline void run_delta_half_suite(const SuiteConfig& cfg, std::vector<CheckReport>& out) {
  std::uint64_t N = std::min<std::uint64_t>(cfg.horizon, 100000);
  for (const char* id : {"omega", "omega-1/2", "example6-xi"})
    out.push_back(check_delta_half(make_subject(id, cfg.stages_example6), N, cfg.tol));
}

}  // namespace detail

inline void sort_reports(std::vector<CheckReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const CheckReport& a, const CheckReport& b) {
    if (a.check_id != b.check_id) return a.check_id < b.check_id;
    return a.subject.dump() < b.subject.dump();
  });
}

/// Runs a named suite; reports come back sorted by check id, then subject.
inline std::vector<CheckReport> run_suite(const SuiteConfig& cfg) {
  const auto& suites = known_suites();
  if (cfg.suite.empty()) return {};
  if (std::find(suites.begin(), suites.end(), cfg.suite) == suites.end())
    throw ConfigError("unknown suite: " + cfg.suite);
  if (cfg.mode != "log" && cfg.mode != "rational") throw ConfigError("mode must be rational or log");
  if (cfg.horizon < 10) throw ConfigError("horizon must be at least 10");
  if (!(cfg.tol > 0 && cfg.tol <= 1e-3)) throw ConfigError("tolerance must lie in (0, 1e-3]");
  for (const auto& s : cfg.subjects)
    if (std::find(known_subjects().begin(), known_subjects().end(), s) == known_subjects().end())
      throw ConfigError("unknown subject: " + s);
  for (const auto& c : cfg.checks)
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      throw ConfigError("unknown check: " + c);
  std::vector<CheckReport> out;
  bool all = cfg.suite == "all";
  if (all || cfg.suite == "lemmas") {
    std::vector<std::string> subs = cfg.subjects;
    if (subs.empty()) subs = {"omega-1/3", "omega-1/2", "omega-2/3", "omega", "log-n", "log2-n"};
    for (const auto& id : subs) {
      Seq s = make_subject(id, cfg.stages_example6, cfg.stages_omega_half);
      if (cfg.mode == "rational")
        detail::run_lemmas<Rational>(s, cfg, out);
      else
        detail::run_lemmas<LogReal>(s, cfg, out);
    }
  }
  if (all || cfg.suite == "example6") detail::run_example6_suite(cfg, out);
  if (all || cfg.suite == "omega-half") detail::run_omega_half_suite(cfg, out);
  if (all || cfg.suite == "hat") detail::run_hat_suite(cfg, out);
  if (all || cfg.suite == "coherence") detail::run_coherence_suite(cfg, out);
  if (all || cfg.suite == "inversion") out.push_back(check_inversion_roundtrip(cfg.seed, 100, 1000));
  if (all || cfg.suite == "harmonic")
    out.push_back(check_harmonic_bounds(std::min<std::uint64_t>(std::max<std::uint64_t>(cfg.horizon, 1000), 1000000),
                                        1000, cfg.seed, cfg.tol));
  if (all || cfg.suite == "delta-half") detail::run_delta_half_suite(cfg, out);
  if (!cfg.checks.empty())
    std::erase_if(out, [&](const CheckReport& r) {
      return std::find(cfg.checks.begin(), cfg.checks.end(), r.check_id) == cfg.checks.end();
    });
  sort_reports(out);
  return out;
}

inline bool any_failure(const std::vector<CheckReport>& reports) {
  return std::any_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.status == Status::fail; });
}

}  // namespace amseq
