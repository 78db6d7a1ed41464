#pragma once

// Precision substrate: nonnegative reals stored as natural logs, unbounded
// integer indices, harmonic numbers at arbitrary indices, and an exact
// rational backend sharing the same arithmetic surface.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <deque>
#include <mutex>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "amseq/errors.hpp"

namespace amseq {

using Index = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kLn2 = 0.69314718055994530941723212145817657;

// ============================================================================
// Index helpers
// ============================================================================

/// Mantissa/exponent split of a positive integer: n = mant * 2^exp, mant in [0.5, 1).
inline double index_frexp(const Index& n, long& exp) {
  return mpz_get_d_2exp(&exp, n.backend().data());
}

/// Natural log of a positive Index, accurate to about one ulp of the mantissa.
inline double log_index(const Index& n) {
  if (n <= 0) throw DomainError("log of a non-positive index");
  long e = 0;
  double m = index_frexp(n, e);
  return std::log(m) + static_cast<double>(e) * kLn2;
}

/// Nearest double (inf beyond the double range).
inline double index_to_double(const Index& n) {
  if (n == 0) return 0.0;
  long e = 0;
  double m = index_frexp(n, e);
  return std::ldexp(m, static_cast<int>(std::min<long>(e, 100000)));
}

/// a / b for positive integers of any magnitude.
inline double index_ratio(const Index& a, const Index& b) {
  if (a == 0) return 0.0;
  long ea = 0, eb = 0;
  double ma = index_frexp(a, ea);
  double mb = index_frexp(b, eb);
  long shift = ea - eb;
  if (shift > 2000) return std::numeric_limits<double>::infinity();
  if (shift < -2000) return 0.0;
  return std::ldexp(ma / mb, static_cast<int>(shift));
}

inline std::string to_decimal(const Index& n) { return n.str(); }

inline Index parse_index(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw DomainError("not a decimal index: '" + s + "'");
  return Index(s);
}

inline std::uint64_t to_u64(const Index& n) {
  if (n < 0 || n > Index(std::numeric_limits<std::uint64_t>::max()))
    throw HorizonExceeded("index does not fit a machine word");
  return n.convert_to<std::uint64_t>();
}

/// Exact conversion of a finite nonnegative double's integer part.
inline Index floor_of_double(double x) {
  if (!(x >= 0) || !std::isfinite(x)) throw DomainError("floor of a non-finite or negative value");
  int e = 0;
  double m = std::frexp(std::floor(x), &e);  // floor(x) = m * 2^e
  if (e <= 0) return Index(0);
  auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
  Index r(mant);
  if (e >= 53) return r << (e - 53);
  return r >> (53 - e);
}

/// floor(e^L) with e^L evaluated at double precision.
inline Index floor_exp(double log_value) {
  if (log_value < 0) return Index(0);
  if (log_value < 709.0) return floor_of_double(std::exp(log_value));
  double t = log_value / kLn2;
  double e2 = std::floor(t);
  double mant = std::exp2(t - e2);  // [1, 2)
  Index m(static_cast<std::uint64_t>(std::ldexp(mant, 52)));
  auto shift = static_cast<long>(e2) - 52;
  return m << static_cast<unsigned>(shift);
}

/// floor(fl(e^x) * m): the transcendental factor is rounded once to double,
/// the product with the exact integer is then taken exactly.
struct FloorResult {
  Index value;
  bool ambiguous = false;          // fractional part within 1e-9 of an integer
  bool precision_limited = false;  // fl(e^x) carries no fractional bits; floor is of the rounded constant
};

inline FloorResult floor_exp_times(double x, const Index& m) {
  if (x == 0.0) return {m};  // e^0 is the one exact case
  double d = std::exp(x);
  if (!std::isfinite(d)) throw ConstructionError("exponential factor overflows double");
  int e = 0;
  double mant = std::frexp(d, &e);
  auto mi = static_cast<std::uint64_t>(std::ldexp(mant, 53));
  int pow2 = e - 53;  // d = mi * 2^pow2
  Index p = Index(mi) * m;
  FloorResult out;
  if (pow2 >= 0) {
    out.value = p << pow2;
    out.precision_limited = true;
    return out;
  }
  Index q = p >> static_cast<unsigned>(-pow2);
  Index rem = p - (q << static_cast<unsigned>(-pow2));
  double frac = index_ratio(rem, Index(1) << static_cast<unsigned>(-pow2));
  out.value = q;
  // Half an ulp of fl(e^x), scaled by m: once it reaches the distance to the
  // nearest integer the floor of the true product is not determined.
  double err = index_to_double(m) * std::ldexp(1.0, pow2 - 1);
  if (err >= std::min(frac, 1.0 - frac)) {
    out.precision_limited = true;
    return out;
  }
  if (frac < 1e-9 && q > 0) {
    out.ambiguous = true;
    out.value = q - 1;
  } else if (frac > 1.0 - 1e-9) {
    out.ambiguous = true;
  }
  return out;
}

// ============================================================================
// LogReal
// ============================================================================

/// Nonnegative extended real held as its natural log; -inf encodes zero.
class LogReal {
 public:
  constexpr LogReal() = default;

  static constexpr LogReal from_log(double l) { return LogReal(l); }
  static LogReal from_linear(double x) {
    if (x < 0 || std::isnan(x)) throw DomainError("LogReal from a negative value");
    return LogReal(x == 0 ? -std::numeric_limits<double>::infinity() : std::log(x));
  }
  static LogReal from_index(const Index& n) { return n == 0 ? zero() : LogReal(log_index(n)); }
  static LogReal from_index(std::uint64_t n) {
    return n == 0 ? zero() : LogReal(std::log(static_cast<double>(n)));
  }
  static constexpr LogReal zero() { return LogReal(); }
  static constexpr LogReal one() { return LogReal(0.0); }

  constexpr double log_value() const { return log_; }
  double linear() const { return std::exp(log_); }
  constexpr bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }

  friend constexpr LogReal operator*(LogReal a, LogReal b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return LogReal(a.log_ + b.log_);
  }
  friend LogReal operator/(LogReal a, LogReal b) {
    if (b.is_zero()) throw DomainError("LogReal division by zero");
    if (a.is_zero()) return zero();
    return LogReal(a.log_ - b.log_);
  }
  friend LogReal operator+(LogReal a, LogReal b);
  friend LogReal operator-(LogReal a, LogReal b);
  LogReal& operator+=(LogReal b) { return *this = *this + b; }
  LogReal& operator*=(LogReal b) { return *this = *this * b; }

  friend constexpr bool operator==(LogReal a, LogReal b) { return a.log_ == b.log_; }
  friend constexpr std::partial_ordering operator<=>(LogReal a, LogReal b) { return a.log_ <=> b.log_; }

 private:
  explicit constexpr LogReal(double l) : log_(l) {}
  double log_ = -std::numeric_limits<double>::infinity();
};

/// log(e^a + e^b) as max + log1p(exp(min - max)).
inline LogReal log_add(LogReal a, LogReal b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  double hi = std::max(a.log_value(), b.log_value());
  double lo = std::min(a.log_value(), b.log_value());
  return LogReal::from_log(hi + std::log1p(std::exp(lo - hi)));
}

inline LogReal operator+(LogReal a, LogReal b) { return log_add(a, b); }

struct LogDiff {
  LogReal value;
  bool degenerate = false;  // operands agreed to within 1e-14 relative
};

/// a - b for a >= b. Tiny negative differences within 4 ulps clamp to zero.
inline LogDiff log_sub(LogReal a, LogReal b) {
  if (b.is_zero()) return {a, false};
  double delta = b.log_value() - a.log_value();  // <= 0 when a >= b
  if (delta > 4 * std::numeric_limits<double>::epsilon())
    throw DomainError("LogReal subtraction with a negative result");
  if (delta >= 0) return {LogReal::zero(), true};
  double rel = -std::expm1(delta);  // (a - b) / a
  LogDiff d;
  d.degenerate = rel < 1e-14;
  d.value = LogReal::from_log(a.log_value() + std::log(rel));
  return d;
}

inline LogReal operator-(LogReal a, LogReal b) { return log_sub(a, b).value; }

inline LogReal pow(LogReal a, double p) {
  if (a.is_zero()) return p > 0 ? LogReal::zero() : LogReal::one();
  return LogReal::from_log(a.log_value() * p);
}

/// Compensated sum of nonnegative LogReals; relative error stays near machine
/// epsilon independent of the number of terms.
class LogAccumulator {
 public:
  void add(LogReal x) {
    if (x.is_zero()) return;
    if (empty_) {
      ref_ = x.log_value();
      sum_ = 1.0L;
      comp_ = 0.0L;
      empty_ = false;
      return;
    }
    double delta = x.log_value() - ref_;
    if (delta > 64.0) {
      long double scale = std::exp(static_cast<long double>(-delta));
      sum_ *= scale;
      comp_ *= scale;
      ref_ = x.log_value();
      delta = 0.0;
    }
    long double term = std::exp(static_cast<long double>(delta));
    long double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term))
      comp_ += (sum_ - t) + term;
    else
      comp_ += (term - t) + sum_;
    sum_ = t;
  }

  LogReal value() const {
    if (empty_) return LogReal::zero();
    return LogReal::from_log(ref_ + static_cast<double>(std::log(sum_ + comp_)));
  }

 private:
  bool empty_ = true;
  double ref_ = 0.0;
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

// ============================================================================
// Harmonic numbers
// ============================================================================

class HarmonicEngine {
 public:
  explicit HarmonicEngine(std::uint64_t exact_cache_limit = 1'000'000) : limit_(exact_cache_limit) {
    if (limit_ < 1000) throw DomainError("harmonic cache limit must be at least 1000");
    if (!load_cache()) {
      build();
      save_cache();
    }
  }

  /// Process-wide engine with the default crossover, built on first use.
  static const HarmonicEngine& global() {
    static const HarmonicEngine engine;
    return engine;
  }

  std::uint64_t exact_cache_limit() const { return limit_; }

  double harmonic(std::uint64_t n) const {
    if (n == 0) throw DomainError("harmonic number of 0");
    if (n <= limit_) return cache_[n];
    return asymptotic(Index(n));
  }

  double harmonic(const Index& n) const {
    if (n <= 0) throw DomainError("harmonic number of 0");
    if (n <= limit_) return cache_[n.convert_to<std::uint64_t>()];
    return asymptotic(n);
  }

  /// ln n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4); truncation error < 1/(252 n^6).
  static double asymptotic(const Index& n) {
    double inv = 1.0 / index_to_double(n);
    double inv2 = inv * inv;
    return log_index(n) + kEulerGamma + 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0;
  }

  /// H_n - H_m for n >= m >= 1, without cancellation at large indices.
  double diff(const Index& n, const Index& m) const {
    if (m < 1) throw DomainError("harmonic_diff needs m >= 1");
    if (n < m) throw DomainError("harmonic_diff needs n >= m");
    Index d = n - m;
    if (d == 0) return 0.0;
    if (d <= 64) {
      long double s = 0.0L;
      for (Index i = n; i > m; --i) s += 1.0L / static_cast<long double>(index_to_double(i));
      return static_cast<double>(s);
    }
    if (n <= limit_) return cache_[n.convert_to<std::uint64_t>()] - cache_[m.convert_to<std::uint64_t>()];
    if (m >= 1000) {
      double t = index_ratio(d, m);
      double in = 1.0 / index_to_double(n);
      double im = 1.0 / index_to_double(m);
      double sq = t * in * (im + in);  // 1/m^2 - 1/n^2
      double gap = 0.5 * t * in - sq / 12.0 + sq * (im * im + in * in) / 120.0;
      return std::log1p(t) - gap;
    }
    return asymptotic(n) - cache_[m.convert_to<std::uint64_t>()];
  }

  /// (H_n - H_m) - log(n/m) for n >= m >= 1, resolved to full relative
  /// precision even when both terms agree to many digits.
  double excess(const Index& n, const Index& m) const {
    if (m < 1 || n < m) throw DomainError("harmonic excess needs n >= m >= 1");
    if (n == m) return 0.0;
    if (m >= 1000) {
      // e(k) = H_k - log k - gamma = 1/(2k) - 1/(12k^2) + 1/(120k^4) - ...; return e(n) - e(m).
      double t = index_ratio(n - m, m);
      double in = 1.0 / index_to_double(n);
      double im = 1.0 / index_to_double(m);
      double sq = t * in * (im + in);
      return -(0.5 * t * in - sq / 12.0 + sq * (im * im + in * in) / 120.0);
    }
    auto mm = m.convert_to<std::uint64_t>();
    if (n <= 2000) {
      // sum over i of 1/i - log(i/(i-1)) = -(x^2/2 + x^3/3 + ...), x = 1/i.
      auto nn = n.convert_to<std::uint64_t>();
      long double s = 0.0L;
      for (std::uint64_t i = mm + 1; i <= nn; ++i) {
        long double x = 1.0L / static_cast<long double>(i);
        s -= -std::log1p(-x) - x;
      }
      return static_cast<double>(s);
    }
    double em = cache_[mm] - std::log(static_cast<double>(mm)) - kEulerGamma;
    double in = 1.0 / index_to_double(n);
    double en = n <= limit_ ? cache_[n.convert_to<std::uint64_t>()] - log_index(n) - kEulerGamma
                            : 0.5 * in - in * in / 12.0;
    return en - em;
  }

 private:
  void build() {
    cache_.assign(limit_ + 1, 0.0);
    long double s = 0.0L, c = 0.0L;
    for (std::uint64_t i = 1; i <= limit_; ++i) {
      long double term = 1.0L / static_cast<long double>(i);
      long double t = s + term;
      c += (s - t) + term;
      s = t;
      cache_[i] = static_cast<double>(s + c);
    }
  }

  std::filesystem::path cache_file() const {
    const char* dir = std::getenv("AMSEQ_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return {};
    return std::filesystem::path(dir) / ("harmonic_" + std::to_string(limit_) + ".bin");
  }

  bool load_cache() {
    auto path = cache_file();
    if (path.empty()) return false;
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::vector<double> data(limit_ + 1);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in || data[1] != 1.0) return false;
    cache_ = std::move(data);
    return true;
  }

  void save_cache() const {
    auto path = cache_file();
    if (path.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (out)
      out.write(reinterpret_cast<const char*>(cache_.data()),
                static_cast<std::streamsize>(cache_.size() * sizeof(double)));
  }

  std::uint64_t limit_;
  std::vector<double> cache_;
};

inline double harmonic(const Index& n) { return HarmonicEngine::global().harmonic(n); }
inline double harmonic_diff(const Index& n, const Index& m) { return HarmonicEngine::global().diff(n, m); }
inline double harmonic_excess(const Index& n, const Index& m) { return HarmonicEngine::global().excess(n, m); }

/// Exact harmonic numbers for the rational backend; grown on demand.
class ExactHarmonic {
 public:
  static constexpr std::uint64_t kMaxIndex = 20'000;

  static const Rational& at(std::uint64_t n) {
    static ExactHarmonic inst;
    return inst.get(n);
  }

  static Rational diff(const Index& n, const Index& m) {
    if (m < 1 || n < m) throw DomainError("harmonic_diff needs n >= m >= 1");
    if (n > kMaxIndex) throw HorizonExceeded("exact harmonic numbers limited to 2e4");
    return at(n.convert_to<std::uint64_t>()) - at(m.convert_to<std::uint64_t>());
  }

 private:
  const Rational& get(std::uint64_t n) {
    if (n > kMaxIndex) throw HorizonExceeded("exact harmonic numbers limited to 2e4");
    std::lock_guard lock(mu_);
    if (h_.empty()) h_.emplace_back(0);
    while (h_.size() <= n) {
      auto k = static_cast<long>(h_.size());
      h_.push_back(h_.back() + Rational(1, k));
    }
    return h_[n];
  }

  std::mutex mu_;
  std::deque<Rational> h_;  // stable references across growth
};

// ============================================================================
// Scalar traits: one arithmetic surface for the log and rational backends
// ============================================================================

template <class V>
struct scalar_traits;

template <>
struct scalar_traits<LogReal> {
  using ratio_type = double;
  static constexpr bool exact = false;
  static constexpr const char* mode = "log";

  static LogReal zero() { return LogReal::zero(); }
  static LogReal one() { return LogReal::one(); }
  static LogReal from_index(std::uint64_t n) { return LogReal::from_index(n); }
  static LogReal from_index(const Index& n) { return LogReal::from_index(n); }
  static LogReal from_ratio(double r) { return LogReal::from_linear(r); }
  static LogReal from_double(double x) { return LogReal::from_linear(x); }
  static LogReal from_log(double l) { return LogReal::from_log(l); }
  static double ratio(LogReal a, LogReal b) {
    if (b.is_zero()) throw DomainError("ratio with zero denominator");
    if (a.is_zero()) return 0.0;
    return std::exp(a.log_value() - b.log_value());
  }
  static double ratio_from_index(std::uint64_t n) { return static_cast<double>(n); }
  static double to_double(double r) { return r; }
  static double log_value(LogReal v) { return v.log_value(); }
  static bool is_zero(LogReal v) { return v.is_zero(); }
  static double harmonic(std::uint64_t n) { return HarmonicEngine::global().harmonic(n); }
  static double harmonic_diff(const Index& n, const Index& m) { return HarmonicEngine::global().diff(n, m); }
  /// floor of a ratio value; the flag reports a value within 1e-9 of an integer.
  static std::uint64_t floor(double r) { return static_cast<std::uint64_t>(std::floor(r)); }
};

template <>
struct scalar_traits<Rational> {
  using ratio_type = Rational;
  static constexpr bool exact = true;
  static constexpr const char* mode = "rational";

  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_index(std::uint64_t n) { return Rational(Index(n)); }
  static Rational from_index(const Index& n) { return Rational(n); }
  static Rational from_ratio(const Rational& r) { return r; }
  /// Every finite double is a dyadic rational; this is its exact value.
  static Rational from_double(double x) { return Rational(x); }
  static Rational from_log(double l) { return Rational(std::exp(l)); }
  static Rational ratio(const Rational& a, const Rational& b) {
    if (b == 0) throw DomainError("ratio with zero denominator");
    return a / b;
  }
  static Rational ratio_from_index(std::uint64_t n) { return Rational(Index(n)); }
  static double to_double(const Rational& r) { return r.convert_to<double>(); }
  static double log_value(const Rational& v) {
    if (v == 0) return -std::numeric_limits<double>::infinity();
    return log_index(boost::multiprecision::numerator(v)) - log_index(boost::multiprecision::denominator(v));
  }
  static bool is_zero(const Rational& v) { return v == 0; }
  static Rational harmonic(std::uint64_t n) { return ExactHarmonic::at(n); }
  static Rational harmonic_diff(const Index& n, const Index& m) { return ExactHarmonic::diff(n, m); }
  static std::uint64_t floor(const Rational& r) {
    Index q = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
    return to_u64(q);
  }
};

template <class V>
using ratio_t = typename scalar_traits<V>::ratio_type;

/// v * r with r a (positive) ratio-domain value.
inline LogReal scale(LogReal v, double r) { return v * LogReal::from_linear(r); }
inline Rational scale(const Rational& v, const Rational& r) { return v * r; }

/// Subtraction in either backend; the log backend clamps rounding-level negatives.
inline LogReal difference(LogReal a, LogReal b) { return a - b; }
inline Rational difference(const Rational& a, const Rational& b) { return a - b; }

/// Linear value, saturating to 0 / inf outside the double range.
inline double to_linear(LogReal v) { return v.linear(); }
inline double to_linear(const Rational& v) { return v.convert_to<double>(); }

}  // namespace amseq
