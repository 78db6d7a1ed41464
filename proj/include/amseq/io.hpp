#pragma once

// Serialization: sequence descriptors <-> Seq, report and table writers.

#include <ctime>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amseq/counterexamples.hpp"
#include "amseq/regularity.hpp"
#include "amseq/seqcore.hpp"
#include "amseq/verify.hpp"

namespace amseq {

// ----------------------------------------------------------------------------
// Scalars
// ----------------------------------------------------------------------------

/// "a/b", "a" or a JSON number (taken as its exact binary value).
inline Rational parse_rational(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) return Rational(v.get<double>());
  if (!v.is_string()) throw ConfigError("expected a number or an \"a/b\" string");
  auto s = v.get<std::string>();
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(parse_index(s));
    Index den = parse_index(s.substr(slash + 1));
    if (den == 0) throw ConfigError("zero denominator in " + s);
    return Rational(parse_index(s.substr(0, slash)), den);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("malformed rational: " + s);
  }
}

inline std::string rational_string(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return to_decimal(numerator(r));
  return to_decimal(numerator(r)) + "/" + to_decimal(denominator(r));
}

/// Shortest round-trip decimal form of a double.
inline std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// ----------------------------------------------------------------------------
// Descriptors
// ----------------------------------------------------------------------------

/// Descriptor of s; in rational mode tabulated sequences carry exact values.
inline nlohmann::json seq_to_json(const Seq& s, const std::string& mode = "log") {
  nlohmann::json d = s.describe();
  if (mode == "rational" && d.value("kind", "") == "tabulated") {
    nlohmann::json vals = nlohmann::json::array();
    for (std::uint64_t n = 1; n <= s.node().natural_length(); ++n)
      vals.push_back(rational_string(s.node().direct_rational(n)));
    d["params"]["values"] = vals;
  }
  return d;
}

/// Parses a step given by breakpoints and either log levels ("levels" /
/// "log_levels") or exact linear levels ("values").
inline Seq step_from_descriptor(const nlohmann::json& p) {
  const auto& breaks = p.at("breakpoints");
  if (p.contains("values")) {
    const auto& vals = p.at("values");
    if (vals.size() != breaks.size() + 1) throw ConfigError("step: need one more level than breakpoints");
    StepSeq<Rational> z(parse_rational(vals.at(0)));
    for (std::size_t i = 0; i < breaks.size(); ++i)
      z = z.extend(parse_index(breaks[i].get<std::string>()), parse_rational(vals.at(i + 1)));
    return Seq::step(z);
  }
  nlohmann::json q = {{"breakpoints", breaks}, {"log_levels", p.contains("levels") ? p.at("levels") : p.at("log_levels")}};
  return Seq::step(step_from_json(q));
}

inline Seq seq_from_json(const nlohmann::json& d) {
  try {
    std::string kind = d.at("kind").get<std::string>();
    const nlohmann::json params = d.contains("params") ? d.at("params") : nlohmann::json::object();
    if (kind == "formula") {
      std::string fam = params.at("family").get<std::string>();
      if (fam == "omega-p") return Seq::omega_power(params.at("p").get<double>());
      if (fam == "log-power") return Seq::log_power(params.at("p").get<double>(), params.value("q", 0.0));
      if (fam == "iterated-log") return Seq::iterated_log();
      if (fam == "indicator") return Seq::indicator();
      if (fam == "constant") return Seq::constant();
      throw ConfigError("unknown formula family: " + fam);
    }
    if (kind == "step") return step_from_descriptor(params);
    if (kind == "tabulated") {
      if (params.contains("values")) {
        std::vector<Rational> v(1, Rational(0));  // 1-based
        for (const auto& x : params.at("values")) v.push_back(parse_rational(x));
        return Seq::tabulated(v);
      }
      std::vector<LogReal> v(1, LogReal::zero());  // 1-based
      for (const auto& x : params.at("log_values"))
        v.push_back(x.is_null() ? LogReal::zero() : LogReal::from_log(x.get<double>()));
      return Seq::tabulated(v);
    }
    if (kind == "derived") {
      std::string op = params.at("op").get<std::string>();
      Seq inner = seq_from_json(params.at("operand"));
      if (op == "am") return am(inner);
      if (op == "ampliation") return ampliation(inner, params.at("m").get<std::uint64_t>());
      throw ConfigError("unknown derived op: " + op);
    }
    throw ConfigError("unknown sequence kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed sequence descriptor: ") + e.what());
  }
}

/// 1-based list from {"r": [...]} / {"c": [...]} or a bare array.
inline std::vector<Rational> read_one_based(const nlohmann::json& j, const char* key) {
  const nlohmann::json& arr = j.is_array() ? j : j.at(key);
  std::vector<Rational> out(1, Rational(0));
  for (const auto& x : arr) out.push_back(parse_rational(x));
  return out;
}

// ----------------------------------------------------------------------------
// Reports
// ----------------------------------------------------------------------------

inline std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// JSON: {"generated_at": ..., "reports": [...]}; the timestamp line is
/// omitted when `timestamp` is false so that reruns are byte-identical.
inline std::string reports_to_json(const std::vector<CheckReport>& reports, bool timestamp) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  if (timestamp) out["generated_at"] = utc_timestamp();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  out["reports"] = arr;
  return out.dump(2) + "\n";
}

inline std::string reports_to_csv(const std::vector<CheckReport>& reports, bool timestamp) {
  std::ostringstream os;
  if (timestamp) os << "# generated_at " << utc_timestamp() << "\n";
  os << "check_id,subject,status,worst_margin,witness,sample_count,horizon,numeric_mode,notes\n";
  for (const auto& r : reports) {
    std::string notes;
    for (const auto& n : r.notes) notes += (notes.empty() ? "" : "; ") + n;
    os << csv_quote(r.check_id) << ',' << csv_quote(r.subject.dump()) << ',' << to_string(r.status) << ','
       << (std::isfinite(r.worst_margin) ? fmt_double(r.worst_margin) : "") << ',' << csv_quote(r.witness) << ','
       << r.sample_count << ',' << r.horizon << ',' << r.numeric_mode << ',' << csv_quote(notes) << '\n';
  }
  return os.str();
}

// ----------------------------------------------------------------------------
// Tables
// ----------------------------------------------------------------------------

/// Column-oriented numeric table; every value column carries its log and,
/// when representable, linear form (plus the exact value in rational mode).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_quote(r[i]);
      os << '\n';
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rows) rs.push_back(r);
    return {{"columns", columns}, {"rows", rs}};
  }
};

inline std::vector<std::string> value_cells(LogReal v) {
  double lin = v.linear();
  bool repr = v.is_zero() || (lin != 0.0 && std::isfinite(lin));
  return {v.is_zero() ? "-inf" : fmt_double(v.log_value()), repr ? fmt_double(lin) : ""};
}

inline std::vector<std::string> value_cells(const Rational& v) {
  double lin = v.convert_to<double>();
  std::vector<std::string> cells;
  if (v > 0)
    cells = {fmt_double(scalar_traits<Rational>::log_value(v)), lin != 0.0 && std::isfinite(lin) ? fmt_double(lin) : ""};
  else
    cells = {v == 0 ? "-inf" : "", fmt_double(lin)};
  cells.push_back(rational_string(v));
  return cells;
}

inline std::vector<std::string> value_cells(double v) {
  return {v > 0 ? fmt_double(std::log(v)) : "", fmt_double(v)};
}

template <class V>
std::vector<std::string> value_columns(const std::string& name) {
  std::vector<std::string> c = {name + "_log", name};
  if constexpr (std::is_same_v<V, Rational>) c.push_back(name + "_exact");
  return c;
}

/// Dense dump n, s_n up to the horizon.
template <class V>
Table dense_table(const Seq& s, std::uint64_t horizon, const std::string& name = "value") {
  Table t;
  t.columns = {"n"};
  for (auto& c : value_columns<V>(name)) t.columns.push_back(c);
  auto tab = s.dense<V>(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    std::vector<std::string> row = {std::to_string(n)};
    for (auto& c : value_cells(tab->values[n])) row.push_back(c);
    t.rows.push_back(std::move(row));
  }
  return t;
}

template <class R>
Table ratio_table(const std::vector<R>& v, std::size_t first, std::size_t last, const std::string& name) {
  Table t;
  t.columns = {"n"};
  using V = std::conditional_t<std::is_same_v<R, double>, double, Rational>;
  if constexpr (std::is_same_v<V, double>) {
    t.columns.push_back(name + "_log");
    t.columns.push_back(name);
  } else {
    for (auto& c : value_columns<Rational>(name)) t.columns.push_back(c);
  }
  for (std::size_t n = first; n <= last; ++n) {
    std::vector<std::string> row = {std::to_string(n)};
    for (auto& c : value_cells(v[n])) row.push_back(c);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace amseq
