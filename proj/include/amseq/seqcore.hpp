#pragma once

// The sequence model and the arithmetic-mean calculus.
//
// A Seq is an immutable handle to a nonincreasing nonnegative sequence. Formula
// and step kinds have closed forms at any Index; derived kinds (means,
// ampliations, hats, tabulated reconstructions) are evaluated on a memoized
// dense table up to the dense horizon.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <nlohmann/json.hpp>

#include "amseq/numerics.hpp"
#include "amseq/stepseq.hpp"

namespace amseq {

/// Largest index evaluable by dense enumeration (derived kinds stop here).
inline std::uint64_t& dense_horizon_limit() {
  static std::uint64_t limit = 1'000'000;
  return limit;
}

template <class V>
struct DenseTable {
  std::vector<V> values;  // values[0] is unused
  std::vector<V> prefix;  // prefix[n] = sum_{j <= n} values[j]

  std::uint64_t size() const { return values.size() - 1; }
  V mean(std::uint64_t n) const { return prefix[n] / scalar_traits<V>::from_index(n); }
};

template <class V>
DenseTable<V> make_table(std::vector<V> values) {
  DenseTable<V> t;
  t.prefix.assign(values.size(), scalar_traits<V>::zero());
  if constexpr (scalar_traits<V>::exact) {
    V run = 0;
    for (std::size_t n = 1; n < values.size(); ++n) {
      run += values[n];
      t.prefix[n] = run;
    }
  } else {
    LogAccumulator acc;
    for (std::size_t n = 1; n < values.size(); ++n) {
      acc.add(values[n]);
      t.prefix[n] = acc.value();
    }
  }
  t.values = std::move(values);
  return t;
}

class Seq;

namespace detail {

class SeqNode {
 public:
  virtual ~SeqNode() = default;

  virtual nlohmann::json describe() const = 0;
  virtual std::string label() const = 0;

  virtual std::optional<LogReal> closed_value(const Index&) const { return std::nullopt; }
  virtual std::optional<LogReal> closed_prefix(const Index&) const { return std::nullopt; }

  /// Values computable one at a time without a table (formula and step kinds).
  virtual bool has_direct() const { return false; }
  virtual LogReal direct_log(std::uint64_t) const { throw HorizonExceeded(); }
  virtual Rational direct_rational(std::uint64_t) const { throw HorizonExceeded(); }

  /// Tabulated kinds have a finite length; everything else is unbounded.
  virtual std::uint64_t natural_length() const { return std::numeric_limits<std::uint64_t>::max(); }
  virtual std::vector<std::string> warnings() const { return {}; }

  virtual std::vector<LogReal> fill_log(std::uint64_t n) const {
    std::vector<LogReal> v(n + 1);
    for (std::uint64_t i = 1; i <= n; ++i) v[i] = direct_log(i);
    return v;
  }
  virtual std::vector<Rational> fill_rational(std::uint64_t n) const {
    std::vector<Rational> v(n + 1);
    for (std::uint64_t i = 1; i <= n; ++i) v[i] = direct_rational(i);
    return v;
  }

  template <class V>
  std::shared_ptr<const DenseTable<V>> dense(std::uint64_t n) const {
    if (n > dense_horizon_limit())
      throw HorizonExceeded("horizon exceeded: " + label() + " is dense-only beyond " +
                            std::to_string(dense_horizon_limit()));
    if (n > natural_length())
      throw HorizonExceeded("horizon exceeded: " + label() + " is tabulated to " + std::to_string(natural_length()));
    std::lock_guard lock(mu_);
    auto& slot = cache<V>();
    if (slot && slot->size() >= n) return slot;
    // Grow geometrically so that incremental evaluation stays linear overall.
    std::uint64_t target = n;
    if (slot) target = std::max(target, std::min<std::uint64_t>(2 * slot->size(), dense_horizon_limit()));
    target = std::min(target, natural_length());
    std::vector<V> values;
    if constexpr (std::is_same_v<V, LogReal>)
      values = fill_log(target);
    else
      values = fill_rational(target);
    slot = std::make_shared<const DenseTable<V>>(make_table(std::move(values)));
    return slot;
  }

 private:
  template <class V>
  std::shared_ptr<const DenseTable<V>>& cache() const {
    if constexpr (std::is_same_v<V, LogReal>)
      return log_cache_;
    else
      return rational_cache_;
  }

  mutable std::mutex mu_;
  mutable std::shared_ptr<const DenseTable<LogReal>> log_cache_;
  mutable std::shared_ptr<const DenseTable<Rational>> rational_cache_;
};

}  // namespace detail

class Seq {
 public:
  Seq() = default;
  explicit Seq(std::shared_ptr<const detail::SeqNode> node) : node_(std::move(node)) {}

  // Built-in formula families.
  static Seq omega_power(double p);
  static Seq log_power(double p, double q = 0.0);
  static Seq iterated_log();
  static Seq indicator();
  static Seq constant();
  static Seq step(StepSeq<LogReal> z);
  static Seq step(StepSeq<Rational> z);
  static Seq tabulated(std::vector<LogReal> values, std::vector<std::string> warnings = {});
  static Seq tabulated(std::vector<Rational> values, std::vector<std::string> warnings = {});

  bool valid() const { return node_ != nullptr; }
  const detail::SeqNode& node() const { return *node_; }
  std::shared_ptr<const detail::SeqNode> node_ptr() const { return node_; }

  std::string label() const { return node_->label(); }
  nlohmann::json describe() const { return node_->describe(); }
  std::vector<std::string> warnings() const { return node_->warnings(); }

  /// Value at n: closed form when the kind has one, dense table otherwise.
  LogReal eval(const Index& n) const {
    if (n < 1) throw DomainError("sequence index must be >= 1");
    if (auto v = node_->closed_value(n)) return *v;
    if (n > dense_horizon_limit()) throw HorizonExceeded("horizon exceeded: " + label());
    auto k = n.convert_to<std::uint64_t>();
    return node_->dense<LogReal>(k)->values[k];
  }
  LogReal eval(std::uint64_t n) const { return eval(Index(n)); }

  /// sum_{j <= n} s_j.
  LogReal prefix_sum(const Index& n) const {
    if (n < 1) throw DomainError("sequence index must be >= 1");
    if (auto v = node_->closed_prefix(n)) return *v;
    if (n > dense_horizon_limit()) throw HorizonExceeded("horizon exceeded: " + label());
    auto k = n.convert_to<std::uint64_t>();
    return node_->dense<LogReal>(k)->prefix[k];
  }

  /// (s_a)_n.
  LogReal mean_at(const Index& n) const { return prefix_sum(n) / LogReal::from_index(n); }

  template <class V>
  std::shared_ptr<const DenseTable<V>> dense(std::uint64_t n) const {
    return node_->dense<V>(n);
  }

  /// Single value in the requested backend.
  template <class V>
  V value(std::uint64_t n) const {
    if (node_->has_direct()) {
      if constexpr (std::is_same_v<V, LogReal>)
        return node_->direct_log(n);
      else
        return node_->direct_rational(n);
    }
    return node_->dense<V>(n)->values[n];
  }

 private:
  std::shared_ptr<const detail::SeqNode> node_;
};

namespace detail {

inline std::string fmt_param(double x) {
  nlohmann::json j = x;
  return j.dump();
}

// ----------------------------------------------------------------------------
// Formula kinds
// ----------------------------------------------------------------------------

class FormulaNode : public SeqNode {
 public:
  bool has_direct() const override { return true; }
  LogReal direct_log(std::uint64_t n) const override { return LogReal::from_log(log_at(static_cast<double>(n))); }
  Rational direct_rational(std::uint64_t n) const override { return Rational(std::exp(log_at(static_cast<double>(n)))); }
  std::optional<LogReal> closed_value(const Index& n) const override {
    if (n <= Index(std::uint64_t{1} << 52)) return direct_log(n.convert_to<std::uint64_t>());
    return LogReal::from_log(log_at_log(log_index(n)));
  }

 protected:
  virtual double log_at(double n) const { return log_at_log(std::log(n)); }
  /// log s_n as a function of t = log n.
  virtual double log_at_log(double t) const = 0;
};

/// n^{-p}.
class OmegaPowerNode final : public FormulaNode {
 public:
  explicit OmegaPowerNode(double p) : p_(p) {
    if (!(p > 0)) throw DomainError("omega-p needs p > 0");
    if (p_ != 1.0) zeta_ = boost::math::zeta(p_);
  }
  nlohmann::json describe() const override {
    return {{"kind", "formula"}, {"params", {{"family", "omega-p"}, {"p", p_}}}};
  }
  std::string label() const override { return p_ == 1.0 ? "omega" : "omega^" + fmt_param(p_); }
  Rational direct_rational(std::uint64_t n) const override {
    if (p_ == 1.0) return Rational(1, static_cast<long>(n));
    return Rational(std::pow(static_cast<double>(n), -p_));
  }
  LogReal direct_log(std::uint64_t n) const override {
    return LogReal::from_log(-p_ * std::log(static_cast<double>(n)));
  }

  /// Euler-Maclaurin beyond the dense range.
  std::optional<LogReal> closed_prefix(const Index& n) const override {
    if (n <= dense_horizon_limit()) return std::nullopt;
    if (p_ == 1.0) return LogReal::from_linear(harmonic(n));
    double t = log_index(n);
    double k = index_to_double(n);
    double kp = std::exp(-p_ * t);  // k^{-p}
    double tail = 0.5 * kp - p_ * kp / (12.0 * k) + p_ * (p_ + 1) * (p_ + 2) * kp / (720.0 * k * k * k);
    if (p_ < 1.0) {
      // k^{1-p}/(1-p) dominates; keep it in the log domain.
      double lead_log = (1.0 - p_) * t - std::log(1.0 - p_);
      double rest = zeta_ + tail;
      return LogReal::from_log(lead_log + std::log1p(rest * std::exp(-lead_log)));
    }
    double lead = std::exp((1.0 - p_) * t) / (1.0 - p_);  // negative
    return LogReal::from_linear(zeta_ + lead + tail);
  }

  double p() const { return p_; }

 protected:
  double log_at_log(double t) const override { return -p_ * t; }

 private:
  double p_;
  double zeta_ = 0.0;
};

/// log^p n (log log n)^q / n, held constant before the point where it starts decreasing.
class LogPowerNode final : public FormulaNode {
 public:
  LogPowerNode(double p, double q) : p_(p), q_(q) {
    if (p_ < 0 || q_ < 0) throw DomainError("log-power needs p, q >= 0");
    // d/dt log f = p/t + q/(t log t) - 1 with t = log n; decreasing in t, so f
    // decreases from the first n where it is <= 0.
    start_ = 3;
    auto slope = [&](double t) { return p_ / t + (q_ > 0 ? q_ / (t * std::log(t)) : 0.0) - 1.0; };
    while (slope(std::log(static_cast<double>(start_))) > 0) ++start_;
  }
  nlohmann::json describe() const override {
    return {{"kind", "formula"}, {"params", {{"family", "log-power"}, {"p", p_}, {"q", q_}}}};
  }
  std::string label() const override {
    std::string s = "log^" + fmt_param(p_) + "(n)/n";
    if (q_ != 0) s = "log^" + fmt_param(p_) + "(n)(loglog n)^" + fmt_param(q_) + "/n";
    return s;
  }
  std::uint64_t monotone_start() const { return start_; }

 protected:
  double log_at_log(double t) const override {
    t = std::max(t, std::log(static_cast<double>(start_)));
    double v = p_ * std::log(t) - t;
    if (q_ != 0) v += q_ * std::log(std::log(t));
    return v;
  }

 private:
  double p_, q_;
  std::uint64_t start_;
};

/// exp(int_{e^e}^n dt/(t log log t)) / (n log^2 log n), constant below n = 16.
class IteratedLogNode final : public FormulaNode {
 public:
  IteratedLogNode() : ei1_(boost::math::expint(1.0)) {}
  nlohmann::json describe() const override {
    return {{"kind", "formula"}, {"params", {{"family", "iterated-log"}}}};
  }
  std::string label() const override { return "iterated-log"; }

 protected:
  double log_at_log(double t) const override {
    t = std::max(t, std::log(16.0));
    double u = std::log(t);  // log log n
    return boost::math::expint(u) - ei1_ - t - 2.0 * std::log(u);
  }

 private:
  double ei1_;
};

/// <1, 0, 0, ...>.
class IndicatorNode final : public SeqNode {
 public:
  nlohmann::json describe() const override { return {{"kind", "formula"}, {"params", {{"family", "indicator"}}}}; }
  std::string label() const override { return "indicator"; }
  bool has_direct() const override { return true; }
  LogReal direct_log(std::uint64_t n) const override { return n == 1 ? LogReal::one() : LogReal::zero(); }
  Rational direct_rational(std::uint64_t n) const override { return Rational(n == 1 ? 1 : 0); }
  std::optional<LogReal> closed_value(const Index& n) const override {
    return n == 1 ? LogReal::one() : LogReal::zero();
  }
  std::optional<LogReal> closed_prefix(const Index&) const override { return LogReal::one(); }
};

/// <1, 1, 1, ...> (not null; kept for boundary cases of the calculus).
class ConstantNode final : public SeqNode {
 public:
  nlohmann::json describe() const override { return {{"kind", "formula"}, {"params", {{"family", "constant"}}}}; }
  std::string label() const override { return "constant"; }
  bool has_direct() const override { return true; }
  LogReal direct_log(std::uint64_t) const override { return LogReal::one(); }
  Rational direct_rational(std::uint64_t) const override { return Rational(1); }
  std::optional<LogReal> closed_value(const Index&) const override { return LogReal::one(); }
  std::optional<LogReal> closed_prefix(const Index& n) const override { return LogReal::from_index(n); }
  std::vector<std::string> warnings() const override { return {"non-null: constant sequence"}; }
};

// ----------------------------------------------------------------------------
// Step and tabulated kinds
// ----------------------------------------------------------------------------

class StepNode final : public SeqNode {
 public:
  explicit StepNode(StepSeq<LogReal> z) : log_(std::move(z)) {}
  explicit StepNode(StepSeq<Rational> z) : log_(convert_step<LogReal>(z)), rational_(std::move(z)) {}

  nlohmann::json describe() const override {
    nlohmann::json breaks = nlohmann::json::array();
    for (const auto& m : log_.breakpoints()) breaks.push_back(to_decimal(m));
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : log_.levels()) levels.push_back(l.log_value());
    return {{"kind", "step"}, {"params", {{"breakpoints", breaks}, {"levels", levels}}}};
  }
  std::string label() const override { return "step[" + std::to_string(log_.segments()) + "]"; }

  bool has_direct() const override { return true; }
  LogReal direct_log(std::uint64_t n) const override { return log_.value_at(Index(n)); }
  Rational direct_rational(std::uint64_t n) const override {
    if (rational_) return rational_->value_at(Index(n));
    return Rational(log_.value_at(Index(n)).linear());
  }
  std::optional<LogReal> closed_value(const Index& n) const override { return log_.value_at(n); }
  std::optional<LogReal> closed_prefix(const Index& n) const override { return log_.prefix_at(n); }

  const StepSeq<LogReal>& log_step() const { return log_; }
  const std::optional<StepSeq<Rational>>& rational_step() const { return rational_; }

 private:
  StepSeq<LogReal> log_;
  std::optional<StepSeq<Rational>> rational_;
};

class TabulatedNode final : public SeqNode {
 public:
  TabulatedNode(std::variant<std::vector<LogReal>, std::vector<Rational>> values, std::vector<std::string> warnings)
      : values_(std::move(values)), warnings_(std::move(warnings)) {
    length_ = std::visit([](const auto& v) { return static_cast<std::uint64_t>(v.size() - 1); }, values_);
  }
  nlohmann::json describe() const override {
    nlohmann::json logs = nlohmann::json::array();
    for (std::uint64_t n = 1; n <= length_; ++n) logs.push_back(direct_log(n).log_value());
    return {{"kind", "tabulated"}, {"params", {{"log_values", logs}}}};
  }
  std::string label() const override { return "tabulated[" + std::to_string(length_) + "]"; }
  std::uint64_t natural_length() const override { return length_; }
  std::vector<std::string> warnings() const override { return warnings_; }
  bool has_direct() const override { return true; }
  LogReal direct_log(std::uint64_t n) const override {
    check(n);
    if (auto* lv = std::get_if<std::vector<LogReal>>(&values_)) return (*lv)[n];
    const auto& r = std::get<std::vector<Rational>>(values_)[n];
    return LogReal::from_log(scalar_traits<Rational>::log_value(r));
  }
  Rational direct_rational(std::uint64_t n) const override {
    check(n);
    if (auto* rv = std::get_if<std::vector<Rational>>(&values_)) return (*rv)[n];
    return Rational(std::get<std::vector<LogReal>>(values_)[n].linear());
  }
  std::optional<LogReal> closed_value(const Index& n) const override {
    if (n > length_) throw HorizonExceeded("horizon exceeded: " + label());
    return direct_log(n.convert_to<std::uint64_t>());
  }

 private:
  void check(std::uint64_t n) const {
    if (n == 0) throw DomainError("sequence index must be >= 1");
    if (n > length_) throw HorizonExceeded("horizon exceeded: " + label());
  }
  std::variant<std::vector<LogReal>, std::vector<Rational>> values_;
  std::vector<std::string> warnings_;
  std::uint64_t length_;
};

// ----------------------------------------------------------------------------
// Derived kinds
// ----------------------------------------------------------------------------

class AmNode final : public SeqNode {
 public:
  explicit AmNode(Seq operand) : op_(std::move(operand)) {}
  nlohmann::json describe() const override {
    return {{"kind", "derived"}, {"params", {{"op", "am"}, {"operand", op_.describe()}}}};
  }
  std::string label() const override { return "am(" + op_.label() + ")"; }
  std::uint64_t natural_length() const override { return op_.node().natural_length(); }

  std::optional<LogReal> closed_value(const Index& n) const override {
    if (auto p = op_.node().closed_prefix(n)) return *p / LogReal::from_index(n);
    return std::nullopt;
  }
  std::optional<LogReal> closed_prefix(const Index& n) const override {
    if (const auto* st = dynamic_cast<const StepNode*>(&op_.node())) return st->log_step().prefix2_at(n);
    return std::nullopt;
  }
  std::vector<LogReal> fill_log(std::uint64_t n) const override { return fill<LogReal>(n); }
  std::vector<Rational> fill_rational(std::uint64_t n) const override { return fill<Rational>(n); }
  const Seq& operand() const { return op_; }

 private:
  template <class V>
  std::vector<V> fill(std::uint64_t n) const {
    auto t = op_.dense<V>(n);
    std::vector<V> out(n + 1, scalar_traits<V>::zero());
    for (std::uint64_t i = 1; i <= n; ++i) out[i] = t->mean(i);
    return out;
  }
  Seq op_;
};

class AmpliationNode final : public SeqNode {
 public:
  AmpliationNode(Seq operand, std::uint64_t m) : op_(std::move(operand)), m_(m) {
    if (m_ < 1) throw DomainError("ampliation factor must be >= 1");
  }
  nlohmann::json describe() const override {
    return {{"kind", "derived"}, {"params", {{"op", "ampliation"}, {"m", m_}, {"operand", op_.describe()}}}};
  }
  std::string label() const override { return "D" + std::to_string(m_) + "(" + op_.label() + ")"; }
  std::uint64_t natural_length() const override {
    auto l = op_.node().natural_length();
    return l > std::numeric_limits<std::uint64_t>::max() / m_ ? l : l * m_;
  }
  std::optional<LogReal> closed_value(const Index& n) const override {
    return op_.node().closed_value((n + m_ - 1) / m_);
  }
  std::vector<LogReal> fill_log(std::uint64_t n) const override { return fill<LogReal>(n); }
  std::vector<Rational> fill_rational(std::uint64_t n) const override { return fill<Rational>(n); }

 private:
  template <class V>
  std::vector<V> fill(std::uint64_t n) const {
    std::uint64_t base = (n + m_ - 1) / m_;
    auto t = op_.dense<V>(std::max<std::uint64_t>(base, 1));
    std::vector<V> out(n + 1, scalar_traits<V>::zero());
    for (std::uint64_t i = 1; i <= n; ++i) out[i] = t->values[(i + m_ - 1) / m_];
    return out;
  }
  Seq op_;
  std::uint64_t m_;
};

}  // namespace detail

inline Seq Seq::omega_power(double p) { return Seq(std::make_shared<detail::OmegaPowerNode>(p)); }
inline Seq Seq::log_power(double p, double q) { return Seq(std::make_shared<detail::LogPowerNode>(p, q)); }
inline Seq Seq::iterated_log() { return Seq(std::make_shared<detail::IteratedLogNode>()); }
inline Seq Seq::indicator() { return Seq(std::make_shared<detail::IndicatorNode>()); }
inline Seq Seq::constant() { return Seq(std::make_shared<detail::ConstantNode>()); }
inline Seq Seq::step(StepSeq<LogReal> z) { return Seq(std::make_shared<detail::StepNode>(std::move(z))); }
inline Seq Seq::step(StepSeq<Rational> z) { return Seq(std::make_shared<detail::StepNode>(std::move(z))); }
inline Seq Seq::tabulated(std::vector<LogReal> values, std::vector<std::string> warnings) {
  return Seq(std::make_shared<detail::TabulatedNode>(std::move(values), std::move(warnings)));
}
inline Seq Seq::tabulated(std::vector<Rational> values, std::vector<std::string> warnings) {
  return Seq(std::make_shared<detail::TabulatedNode>(std::move(values), std::move(warnings)));
}

// ============================================================================
// Operators
// ============================================================================

/// n -> (1/n) sum_{j <= n} s_j.
inline Seq am(const Seq& s) { return Seq(std::make_shared<detail::AmNode>(s)); }

/// p-fold arithmetic mean.
inline Seq am_pow(const Seq& s, int p) {
  if (p < 1) throw DomainError("am_pow needs p >= 1");
  Seq out = s;
  for (int i = 0; i < p; ++i) out = am(out);
  return out;
}

/// D_m: every entry repeated m times.
inline Seq ampliation(const Seq& s, std::uint64_t m) {
  if (m == 1) return s;
  return Seq(std::make_shared<detail::AmpliationNode>(s, m));
}

template <class R>
struct RatioSeq {
  std::vector<R> r;  // r[0] unused; r[1] = 1 for a ratio of regularity

  std::uint64_t size() const { return r.size() - 1; }
  const R& operator[](std::uint64_t n) const { return r[n]; }
};

template <class R>
struct ConcavitySeq {
  std::vector<R> c;  // c[1..N-1]
  bool am_image_flag = false;

  std::uint64_t size() const { return c.size() - 1; }
  const R& operator[](std::uint64_t n) const { return c[n]; }
};

/// r_n = (s_a)_n / s_n for n <= horizon.
template <class V>
RatioSeq<ratio_t<V>> ratio_of_regularity(const Seq& s, std::uint64_t horizon) {
  using T = scalar_traits<V>;
  auto t = s.dense<V>(horizon);
  RatioSeq<ratio_t<V>> out;
  out.r.assign(horizon + 1, ratio_t<V>(0));
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    if (T::is_zero(t->values[n])) throw FiniteRankError(n);
    out.r[n] = T::ratio(t->mean(n), t->values[n]);
  }
  return out;
}

/// c_n = n s_n / ((n+1) s_{n+1}) for n < horizon, with the am-image test
/// c_n + 1/c_{n+1} <= 2 (and c_1 >= 1/2) recorded in the flag.
template <class V>
ConcavitySeq<ratio_t<V>> concavity_ratio(const Seq& s, std::uint64_t horizon) {
  using T = scalar_traits<V>;
  using R = ratio_t<V>;
  auto t = s.dense<V>(horizon);
  ConcavitySeq<R> out;
  out.c.assign(horizon, R(0));
  for (std::uint64_t n = 1; n <= horizon; ++n)
    if (T::is_zero(t->values[n])) throw FiniteRankError(n);
  for (std::uint64_t n = 1; n + 1 <= horizon; ++n)
    out.c[n] = T::ratio(T::from_index(n) * t->values[n], T::from_index(n + 1) * t->values[n + 1]);
  bool flag = horizon >= 2 && out.c[1] >= R(1) / R(2);
  const R slack = T::exact ? R(0) : R(1e-12);
  for (std::uint64_t n = 1; flag && n + 1 < horizon; ++n)
    if (out.c[n] + R(1) / out.c[n + 1] > R(2) + slack) flag = false;
  out.am_image_flag = flag;
  return out;
}

/// sup_{n <= c} x_n / y_n at each checkpoint c (dense scan, log backend).
inline std::vector<std::pair<Index, double>> domination_profile(const Seq& x, const Seq& y,
                                                                const std::vector<Index>& checkpoints) {
  std::vector<std::pair<Index, double>> out;
  if (checkpoints.empty()) return out;
  Index last = *std::max_element(checkpoints.begin(), checkpoints.end());
  if (last > dense_horizon_limit()) throw HorizonExceeded("domination profile beyond the dense horizon");
  auto n = last.convert_to<std::uint64_t>();
  auto tx = x.dense<LogReal>(n);
  auto ty = y.dense<LogReal>(n);
  std::vector<double> run(n + 1, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (ty->values[i].is_zero()) throw DomainError("domination profile: denominator vanishes", i);
    best = std::max(best, tx->values[i].log_value() - ty->values[i].log_value());
    run[i] = best;
  }
  for (const auto& c : checkpoints) out.emplace_back(c, std::exp(run[c.convert_to<std::uint64_t>()]));
  return out;
}

/// Same profile with the sup taken over an explicit sample set; for kinds
/// evaluable in closed form at big indices.
inline std::vector<std::pair<Index, double>> domination_profile_sampled(const Seq& x, const Seq& y,
                                                                        std::vector<Index> samples,
                                                                        const std::vector<Index>& checkpoints) {
  std::sort(samples.begin(), samples.end());
  std::vector<std::pair<Index, double>> out;
  for (const auto& c : checkpoints) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& j : samples) {
      if (j > c) break;
      best = std::max(best, x.eval(j).log_value() - y.eval(j).log_value());
    }
    out.emplace_back(c, std::exp(best));
  }
  return out;
}

struct PointwiseResult {
  bool holds = true;
  std::optional<std::uint64_t> first_violation;
  double worst_ratio = 0.0;  // max x_n / y_n
  std::uint64_t horizon = 0;
};

/// Pointwise x_n <= y_n (1 + tol) for n <= horizon; labelled "pointwise" in reports.
inline PointwiseResult pointwise_dominates(const Seq& x, const Seq& y, std::uint64_t horizon, double tol = 1e-12) {
  auto tx = x.dense<LogReal>(horizon);
  auto ty = y.dense<LogReal>(horizon);
  PointwiseResult r;
  r.horizon = horizon;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    double d = tx->values[n].log_value() - ty->values[n].log_value();
    if (tx->values[n].is_zero()) continue;
    worst = std::max(worst, d);
    if (d > std::log1p(tol) && r.holds) {
      r.holds = false;
      r.first_violation = n;
    }
  }
  r.worst_ratio = std::exp(worst);
  return r;
}

// ============================================================================
// Streaming means
// ============================================================================

/// Walks n = 1, 2, ... keeping s_n, S_n = n (s_a)_n, T_n = n (s_{a^2})_n and H_n
/// without materializing tables; the workhorse of the lemma checks.
template <class V>
class MeanCursor {
  using T = scalar_traits<V>;

 public:
  MeanCursor(const Seq& s, std::uint64_t horizon) : seq_(s), horizon_(horizon) {
    if (!s.node().has_direct()) table_ = s.dense<V>(horizon);
  }

  bool next() {
    if (n_ >= horizon_) return false;
    ++n_;
    value_ = table_ ? table_->values[n_] : seq_.value<V>(n_);
    V nn = T::from_index(n_);
    if constexpr (T::exact) {
      prefix_ += value_;
      prefix2_ += prefix_ / nn;
      harmonic_ += Rational(1, static_cast<long>(n_));
    } else {
      acc_.add(value_);
      prefix_ = acc_.value();
      acc2_.add(prefix_ / nn);
      prefix2_ = acc2_.value();
      harmonic_ = T::harmonic(n_);
    }
    return true;
  }

  std::uint64_t n() const { return n_; }
  const V& value() const { return value_; }
  const V& prefix() const { return prefix_; }
  const V& prefix2() const { return prefix2_; }
  V mean() const { return prefix_ / T::from_index(n_); }
  V mean2() const { return prefix2_ / T::from_index(n_); }
  const ratio_t<V>& harmonic() const { return harmonic_; }

 private:
  Seq seq_;
  std::uint64_t horizon_;
  std::shared_ptr<const DenseTable<V>> table_;
  std::uint64_t n_ = 0;
  V value_ = T::zero(), prefix_ = T::zero(), prefix2_ = T::zero();
  ratio_t<V> harmonic_ = ratio_t<V>(0);
  LogAccumulator acc_, acc2_;
};

}  // namespace amseq
