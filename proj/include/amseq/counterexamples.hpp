#pragma once

// Deterministic builds of the two step-sequence counterexamples: the
// second-order cancellation failure (xi, eta) and the step sequence below
// omega^{1/2} in the second mean but not in the first.
//
// Both are built in the log backend: their levels are transcendental and
// their breakpoints leave the range of exact harmonic numbers after a few stages.

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amseq/stepseq.hpp"

namespace amseq {

/// Guard on breakpoint magnitude: log10(m) may not exceed this.
inline constexpr double kMaxLog10Index = 1e6;

inline void check_index_guard(double log_m) {
  if (log_m / std::log(10.0) > kMaxLog10Index)
    throw ConstructionError("index-magnitude guard: breakpoint beyond 10^(10^6)");
}

/// Minimal j > lower with (z_{a^2})_j <= bound, where the last (open) level of
/// z is the one in force beyond `lower`. (z_{a^2}) is nonincreasing, so an
/// exponential then binary search finds the boundary.
template <class V>
Index stage_condition_search(const StepSeq<V>& z, const Index& lower, const V& bound) {
  if (!(z.levels().back() < bound)) throw UnreachableBound();
  if (!z.breakpoints().empty() && lower < z.breakpoints().back())
    throw DomainError("stage search must start on the open last level");
  auto ok = [&](const Index& j) { return !(bound < z.am2_at(j)); };
  Index lo = lower;  // !ok(lo) unless lo == lower (not a candidate)
  Index step = 1;
  Index hi = lower + 1;
  while (!ok(hi)) {
    lo = hi;
    step *= 2;
    hi = lower + step;
    check_index_guard(log_index(hi));
  }
  while (hi - lo > 1) {
    Index mid = (lo + hi) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

inline const char* floor_flag(const FloorResult& f) {
  if (f.precision_limited) return "precision-limited";
  if (f.ambiguous) return "ambiguous";
  return "exact";
}

// ----------------------------------------------------------------------------
// Second-order cancellation failure
// ----------------------------------------------------------------------------

struct Example6Stage {
  int k = 0;
  Index m;            // m_k
  Index n;            // n_k = floor(e^{k^2} m_k)
  double log_delta;   // log delta_k
  std::string n_floor = "exact";
};

struct Example6Params {
  int K = 0;
  std::vector<Example6Stage> stages;  // k = 1..K at index k-1
  double log_delta_next = 0;          // log delta_{K+1}, the open tail level of xi
  StepSeq<LogReal> xi{LogReal::one()};
  StepSeq<LogReal> eta{LogReal::one()};

  const Example6Stage& stage(int k) const { return stages.at(static_cast<std::size_t>(k - 1)); }
  LogReal delta(int k) const {
    return LogReal::from_log(k == K + 1 ? log_delta_next : stage(k).log_delta);
  }
};

/// m_1 = 1, delta_1 = 1, delta_{k+1} = e^{-k^2} delta_k, n_k = floor(e^{k^2} m_k);
/// xi = delta_{k+1} on (m_k, m_{k+1}]; eta = k delta_{k+1} on (m_k, n_k] and
/// delta_{k+1} on (n_k, m_{k+1}]; m_{k+1} is the least index past n_k with
/// (eta_{a^2})_{m_{k+1}} <= (1 + 1/(k+1)) delta_{k+1}. The tighter constant
/// makes the breakpoint sandwich hold with (1 + 1/k) at every m_k.
inline Example6Params build_example6(int K) {
  if (K < 2) throw DomainError("example6 needs K >= 2");
  Example6Params p;
  p.K = K;
  Index m = 1;
  double log_delta = 0.0;
  for (int k = 1; k <= K; ++k) {
    double kk = static_cast<double>(k) * k;
    Example6Stage st;
    st.k = k;
    st.m = m;
    st.log_delta = log_delta;
    FloorResult f = floor_exp_times(kk, m);
    st.n = f.value;
    st.n_floor = floor_flag(f);
    double log_next = log_delta - kk;
    LogReal next = LogReal::from_log(log_next);
    p.xi = p.xi.extend(m, next);
    p.eta = p.eta.extend(m, LogReal::from_index(std::uint64_t(k)) * next);
    // At k = 1 both eta levels coincide; the n_1 breakpoint would not be a step.
    if (k >= 2) p.eta = p.eta.extend(st.n, next);
    p.stages.push_back(st);
    log_delta = log_next;
    if (k < K) {
      LogReal bound = LogReal::from_linear(1.0 + 1.0 / (k + 1)) * next;
      m = stage_condition_search(p.eta, st.n, bound);
    }
  }
  p.log_delta_next = log_delta;
  return p;
}

// ----------------------------------------------------------------------------
// Step sequence below omega^{1/2}
// ----------------------------------------------------------------------------

struct OmegaHalfParams {
  int K = 0;
  std::vector<Index> m;                // m_1 = 0, m_2, ..., m_K at index k-1
  std::vector<std::string> lower_flag; // floor flag of the e^{2 m_k} lower bound, per m_{k+1}
  StepSeq<LogReal> xi{LogReal::one()};

  const Index& mk(int k) const { return m.at(static_cast<std::size_t>(k - 1)); }
  /// Level on (m_k, m_{k+1}]: 1 for k = 1, 1/m_k afterwards.
  LogReal level(int k) const { return k == 1 ? LogReal::one() : LogReal::one() / LogReal::from_index(mk(k)); }
};

/// m_1 = 0; xi = 1 on (0, m_2] and 1/m_k on (m_k, m_{k+1}]; m_{k+1} is the least
/// index >= max(floor(e^{2 m_k}) + 1, m_k + 1) with (xi_{a^2})_{m_{k+1}} <= (1 + 1/k)/m_k
/// (no condition at k = 1, where 1/m_1 is undefined).
inline OmegaHalfParams build_omega_half(int K) {
  if (K < 2) throw DomainError("omega-half needs K >= 2");
  OmegaHalfParams p;
  p.K = K;
  p.m.push_back(Index(0));
  for (int k = 1; k < K; ++k) {
    const Index& mk = p.m.back();
    double x = 2.0 * mk.convert_to<double>();
    check_index_guard(x);
    Index lower;
    std::string flag = "exact";
    if (x < 700.0) {
      FloorResult f = floor_exp_times(x, Index(1));
      lower = f.value + 1;
      flag = floor_flag(f);
    } else {
      lower = floor_exp(x) + 1;
      flag = "precision-limited";
    }
    if (lower < mk + 1) lower = mk + 1;
    Index next = lower;
    if (k >= 2) {
      // xi currently ends with level 1/m_k on (m_k, infinity).
      LogReal bound = LogReal::from_linear(1.0 + 1.0 / k) / LogReal::from_index(mk);
      Index found = stage_condition_search(p.xi, lower - 1, bound);
      next = found;
    }
    p.xi = p.xi.extend(next, LogReal::one() / LogReal::from_index(next));
    p.m.push_back(next);
    p.lower_flag.push_back(flag);
  }
  return p;
}

// ----------------------------------------------------------------------------
// Serialization
// ----------------------------------------------------------------------------

inline nlohmann::json step_to_json(const StepSeq<LogReal>& z) {
  nlohmann::json breaks = nlohmann::json::array(), levels = nlohmann::json::array();
  for (const auto& b : z.breakpoints()) breaks.push_back(to_decimal(b));
  for (const auto& l : z.levels()) levels.push_back(l.log_value());
  return {{"breakpoints", breaks}, {"log_levels", levels}};
}

inline StepSeq<LogReal> step_from_json(const nlohmann::json& j) {
  const auto& levels = j.at("log_levels");
  const auto& breaks = j.at("breakpoints");
  if (levels.size() != breaks.size() + 1) throw ConfigError("step: need one more level than breakpoints");
  StepSeq<LogReal> z(LogReal::from_log(levels.at(0).get<double>()));
  for (std::size_t i = 0; i < breaks.size(); ++i)
    z = z.extend(parse_index(breaks[i].get<std::string>()), LogReal::from_log(levels.at(i + 1).get<double>()));
  return z;
}

inline nlohmann::json to_json(const Example6Params& p) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : p.stages)
    stages.push_back({{"k", s.k}, {"m", to_decimal(s.m)}, {"n", to_decimal(s.n)}, {"log_delta", s.log_delta},
                      {"n_floor", s.n_floor}});
  return {{"construction", "example6"}, {"K", p.K},           {"stages", stages},
          {"log_delta_next", p.log_delta_next}, {"xi", step_to_json(p.xi)}, {"eta", step_to_json(p.eta)}};
}

inline nlohmann::json to_json(const OmegaHalfParams& p) {
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : p.m) ms.push_back(to_decimal(m));
  return {{"construction", "omega-half"}, {"K", p.K}, {"m", ms}, {"lower_bound_floor", p.lower_flag},
          {"xi", step_to_json(p.xi)}};
}

inline Example6Params example6_from_json(const nlohmann::json& j) {
  if (j.value("construction", "") != "example6") throw ConfigError("not an example6 parameter file");
  Example6Params p;
  p.K = j.at("K").get<int>();
  for (const auto& s : j.at("stages")) {
    Example6Stage st;
    st.k = s.at("k").get<int>();
    st.m = parse_index(s.at("m").get<std::string>());
    st.n = parse_index(s.at("n").get<std::string>());
    st.log_delta = s.at("log_delta").get<double>();
    st.n_floor = s.at("n_floor").get<std::string>();
    p.stages.push_back(st);
  }
  p.log_delta_next = j.at("log_delta_next").get<double>();
  p.xi = step_from_json(j.at("xi"));
  p.eta = step_from_json(j.at("eta"));
  return p;
}

inline OmegaHalfParams omega_half_from_json(const nlohmann::json& j) {
  if (j.value("construction", "") != "omega-half") throw ConfigError("not an omega-half parameter file");
  OmegaHalfParams p;
  p.K = j.at("K").get<int>();
  for (const auto& m : j.at("m")) p.m.push_back(parse_index(m.get<std::string>()));
  p.lower_flag = j.at("lower_bound_floor").get<std::vector<std::string>>();
  p.xi = step_from_json(j.at("xi"));
  return p;
}

}  // namespace amseq
