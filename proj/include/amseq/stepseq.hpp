#pragma once

// Piecewise-constant nonincreasing sequences with closed-form first and
// second arithmetic means at arbitrary (big) indices.
//
// Layout: level eps_0 on (0, m_1], eps_k on (m_k, m_{k+1}], and the last level
// continues past the last breakpoint. At every breakpoint m_k we cache
// A_k = (z_a)_{m_k} and B_k = (z_{a^2})_{m_k}; between breakpoints
//
//   (z_a)_j     = (m_k / j) (A_k - eps_k) + eps_k
//   (z_{a^2})_j = (m_k / j) (B_k - eps_k + (A_k - eps_k)(H_j - H_{m_k})) + eps_k

#include <algorithm>
#include <cstddef>
#include <vector>

#include "amseq/numerics.hpp"

namespace amseq {

template <class V>
class StepSeq {
  using traits = scalar_traits<V>;

 public:
  explicit StepSeq(V head_level) : levels_{std::move(head_level)} {
    if (traits::is_zero(levels_[0])) throw ConstructionError("step levels must be positive");
  }

  std::size_t segments() const { return levels_.size(); }
  const std::vector<Index>& breakpoints() const { return breaks_; }
  const std::vector<V>& levels() const { return levels_; }
  /// A_k for k = 1..K (index k-1).
  const std::vector<V>& mean_at_breaks() const { return mean_; }
  /// B_k for k = 1..K (index k-1).
  const std::vector<V>& mean2_at_breaks() const { return mean2_; }
  /// True when some A_k - eps_k or B_k - eps_k lost all significance in the log backend.
  bool degenerate() const { return degenerate_; }

  /// Segment k holding j: 0 on the head (0, m_1], k on (m_k, m_{k+1}].
  std::size_t segment_of(const Index& j) const {
    if (j < 1) throw DomainError("step index must be >= 1");
    return static_cast<std::size_t>(std::lower_bound(breaks_.begin(), breaks_.end(), j) - breaks_.begin());
  }

  V value_at(const Index& j) const { return levels_[segment_of(j)]; }

  V am_at(const Index& j) const {
    std::size_t k = segment_of(j);
    if (k == 0) return levels_[0];
    const Index& mk = breaks_[k - 1];
    return traits::from_index(mk) / traits::from_index(j) * excess_[k - 1] + levels_[k];
  }

  V am2_at(const Index& j) const {
    std::size_t k = segment_of(j);
    if (k == 0) return levels_[0];
    const Index& mk = breaks_[k - 1];
    auto dh = traits::harmonic_diff(j, mk);
    V inner = excess2_[k - 1] + scale(excess_[k - 1], dh);
    return traits::from_index(mk) / traits::from_index(j) * inner + levels_[k];
  }

  /// Partial sum through j, i.e. j (z_a)_j.
  V prefix_at(const Index& j) const { return traits::from_index(j) * am_at(j); }
  /// j (z_{a^2})_j.
  V prefix2_at(const Index& j) const { return traits::from_index(j) * am2_at(j); }

  /// Closes the open last level at new_m and continues with new_level.
  StepSeq extend(const Index& new_m, V new_level) const {
    if (!breaks_.empty() && new_m <= breaks_.back())
      throw ConstructionError("breakpoints must be strictly increasing");
    if (new_m < 1) throw ConstructionError("breakpoints must be positive");
    if (!(new_level < levels_.back())) throw ConstructionError("levels must be strictly decreasing");
    if (traits::is_zero(new_level)) throw ConstructionError("step levels must be positive");
    StepSeq out = *this;
    V a = am_at(new_m);
    V b = am2_at(new_m);
    out.breaks_.push_back(new_m);
    out.levels_.push_back(new_level);
    out.mean_.push_back(a);
    out.mean2_.push_back(b);
    out.excess_.push_back(out.checked_diff(a, new_level));
    out.excess2_.push_back(out.checked_diff(b, new_level));
    return out;
  }

 private:
  V checked_diff(const V& a, const V& b) {
    if constexpr (traits::exact) {
      return a - b;
    } else {
      LogDiff d = log_sub(a, b);
      degenerate_ = degenerate_ || d.degenerate;
      return d.value;
    }
  }

  std::vector<Index> breaks_;
  std::vector<V> levels_;
  std::vector<V> mean_, mean2_;
  std::vector<V> excess_, excess2_;  // A_k - eps_k, B_k - eps_k
  bool degenerate_ = false;
};

template <class V>
V step_am_at(const StepSeq<V>& z, const Index& j) {
  return z.am_at(j);
}

template <class V>
V step_am2_at(const StepSeq<V>& z, const Index& j) {
  return z.am2_at(j);
}

template <class V>
StepSeq<V> extend_step(const StepSeq<V>& z, const Index& new_m, V new_level) {
  return z.extend(new_m, std::move(new_level));
}

/// Rebuild a step sequence in another backend from its breakpoints and levels.
template <class W, class V>
StepSeq<W> convert_step(const StepSeq<V>& z) {
  auto conv = [](const V& v) {
    if constexpr (std::is_same_v<W, V>) {
      return v;
    } else if constexpr (std::is_same_v<W, Rational>) {
      return Rational(v.linear());
    } else {
      return LogReal::from_log(scalar_traits<V>::log_value(v));
    }
  };
  StepSeq<W> out(conv(z.levels()[0]));
  for (std::size_t k = 0; k < z.breakpoints().size(); ++k) out = out.extend(z.breakpoints()[k], conv(z.levels()[k + 1]));
  return out;
}

}  // namespace amseq
