// Command-line front end: gen, transform and check.
//
// Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage error,
// 3 capability error (horizon, summability, construction limits).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "amseq/amseq.hpp"

namespace {

using namespace amseq;

struct Options {
  std::string mode = "log";
  std::uint64_t horizon = 10000;
  double tol = 1e-9;
  std::string out;
  std::string format = "json";
  bool no_timestamp = false;
  std::uint64_t seed = 1;
};

void validate(const Options& o) {
  if (o.mode != "log" && o.mode != "rational") throw ConfigError("--mode must be rational or log");
  if (o.format != "json" && o.format != "csv") throw ConfigError("--format must be json or csv");
  if (o.horizon < 10) throw ConfigError("--horizon must be at least 10");
  if (!(o.tol > 0 && o.tol <= 1e-3)) throw ConfigError("--tol must lie in (0, 1e-3]");
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + o.out);
  f << text;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// A sequence from a descriptor, a transform result or a construction file.
Seq load_seq(const std::string& path, const std::string& component) {
  nlohmann::json j = read_json(path);
  if (j.contains("sequence")) return seq_from_json(j.at("sequence"));
  if (j.contains("construction")) {
    std::string c = j.at("construction").get<std::string>();
    if (c == "example6") {
      auto p = example6_from_json(j);
      if (component == "eta") return Seq::step(p.eta);
      if (component == "xi" || component.empty()) return Seq::step(p.xi);
    } else if (c == "omega-half") {
      if (component == "xi" || component.empty()) return Seq::step(omega_half_from_json(j).xi);
    }
    throw ConfigError("unknown component '" + component + "' of construction " + c);
  }
  return seq_from_json(j);
}

void warn_all(const std::vector<std::string>& ws) {
  for (const auto& w : ws) std::cerr << "warning: " << w << "\n";
}

template <class V>
std::string sequence_output(const Options& o, const Seq& s) {
  if (o.format == "csv") return dense_table<V>(s, o.horizon).to_csv();
  return seq_to_json(s, o.mode).dump(2) + "\n";
}

template <class V>
std::string table_output(const Options& o, const Seq& s, const Table& t, nlohmann::json extra = {}) {
  if (o.format == "csv") return t.to_csv();
  nlohmann::json j = {{"sequence", seq_to_json(s, o.mode)}, {"horizon", o.horizon}, {"mode", o.mode}};
  j["table"] = t.to_json();
  if (extra.is_object())
    for (auto& [k, v] : extra.items()) j[k] = v;
  return j.dump(2) + "\n";
}

// ----------------------------------------------------------------------------
// gen
// ----------------------------------------------------------------------------

struct GenArgs {
  std::string family;
  double p = 1.0;
  double q = 0.0;
  std::string file;
  int stages = 0;
};

template <class V>
Seq gen_from_file(const GenArgs& g, bool ratio) {
  using R = ratio_t<V>;
  if (g.file.empty()) throw ConfigError("--file is required");
  auto vals = read_one_based(read_json(g.file), ratio ? "r" : "c");
  std::vector<R> conv;
  for (const auto& v : vals) {
    if constexpr (std::is_same_v<R, Rational>)
      conv.push_back(v);
    else
      conv.push_back(v.template convert_to<double>());
  }
  if (ratio) return seq_from_ratio<V>(RatioSeq<R>{conv});
  ConcavitySeq<R> c;
  c.c = conv;
  return seq_from_concavity<V>(c);
}

template <class V>
std::string run_gen(const Options& o, const GenArgs& g) {
  const auto& f = g.family;
  if (f == "example6" || f == "omega-half") {
    if (o.mode == "rational") throw HorizonExceeded("constructions are built in the log backend only");
    if (o.format == "csv") throw ConfigError("constructions are written as json");
    int K = g.stages > 0 ? g.stages : (f == "example6" ? 8 : 4);
    nlohmann::json j = f == "example6" ? to_json(build_example6(K)) : to_json(build_omega_half(K));
    return j.dump(2) + "\n";
  }
  Seq s;
  if (f == "omega-p") {
    if (!(g.p > 0)) throw DomainError("omega-p needs p > 0");
    s = Seq::omega_power(g.p);
  } else if (f == "log-power") {
    s = Seq::log_power(g.p, g.q);
  } else if (f == "iterated-log") {
    s = Seq::iterated_log();
  } else if (f == "indicator") {
    s = Seq::indicator();
  } else if (f == "step") {
    if (g.file.empty()) throw ConfigError("--file is required");
    s = step_from_descriptor(read_json(g.file));
  } else if (f == "from-ratio") {
    s = gen_from_file<V>(g, true);
  } else if (f == "from-concavity") {
    s = gen_from_file<V>(g, false);
  } else {
    throw ConfigError("unknown family: " + f);
  }
  warn_all(s.warnings());
  return sequence_output<V>(o, s);
}

// ----------------------------------------------------------------------------
// transform
// ----------------------------------------------------------------------------

struct TransformArgs {
  std::string op;
  std::string in;
  std::string component;
  int power = 1;
  std::uint64_t m = 2;
};

template <class V>
std::string run_transform(const Options& o, const TransformArgs& t) {
  if (t.in.empty()) throw ConfigError("--in is required");
  Seq s = load_seq(t.in, t.component);
  const auto N = o.horizon;
  const auto& op = t.op;
  auto seq_result = [&](const Seq& r) { return table_output<V>(o, r, dense_table<V>(r, N)); };
  if (op == "am") return seq_result(am(s));
  if (op == "am2") return seq_result(am_pow(s, 2));
  if (op == "am-pow") {
    if (t.power < 1) throw DomainError("--p must be a positive integer for am-pow");
    return seq_result(am_pow(s, t.power));
  }
  if (op == "ampliation") {
    if (t.m < 1) throw DomainError("--m must be >= 1");
    return seq_result(ampliation(s, t.m));
  }
  if (op == "ratio") {
    auto r = ratio_of_regularity<V>(s, N);
    return table_output<V>(o, s, ratio_table(r.r, 1, N, "r"));
  }
  if (op == "concavity") {
    auto c = concavity_ratio<V>(s, N);
    return table_output<V>(o, s, ratio_table(c.c, 1, N - 1, "c"), {{"am_image", c.am_image_flag}});
  }
  if (op == "invert-am") {
    Seq e = invert_am<V>(s, N);
    return table_output<V>(o, s, dense_table<V>(e, N));
  }
  if (op == "hat") {
    if constexpr (std::is_same_v<V, Rational>) {
      throw HorizonExceeded("hat is evaluated in the log backend only");
    } else {
      auto h = hat(s, N);
      Table tab;
      tab.columns = {"n", "nu", "value_log", "value"};
      for (std::uint64_t n = 1; n <= N; ++n) {
        auto cells = value_cells(h.values[n]);
        tab.rows.push_back({std::to_string(n), to_decimal(h.nu[n]), cells[0], cells[1]});
      }
      return table_output<V>(o, s, tab);
    }
  }
  throw ConfigError("unknown transform: " + op);
}

// ----------------------------------------------------------------------------
// check
// ----------------------------------------------------------------------------

struct CheckArgs {
  std::string suite;
  std::vector<std::string> subjects;
  std::vector<std::string> checks;
  int stages = 0;
};

int run_check(const Options& o, const CheckArgs& c) {
  SuiteConfig cfg;
  cfg.suite = c.suite;
  cfg.subjects = c.subjects;
  cfg.checks = c.checks;
  cfg.mode = o.mode;
  cfg.horizon = o.horizon;
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  if (c.stages > 0) {
    if (c.suite == "omega-half")
      cfg.stages_omega_half = c.stages;
    else
      cfg.stages_example6 = c.stages;
  }
  auto reports = run_suite(cfg);
  bool stamp = !o.no_timestamp;
  emit(o, o.format == "csv" ? reports_to_csv(reports, stamp) : reports_to_json(reports, stamp));
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& r : reports) ++counts[static_cast<int>(r.status)];
  std::cerr << reports.size() << " report(s): " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2]
            << " inconclusive, " << counts[3] << " inapplicable\n";
  for (const auto& r : reports)
    if (r.status == Status::fail)
      std::cerr << "FAIL " << r.check_id << " " << r.subject.dump() << " at " << r.witness << "\n";
  return any_failure(reports) ? 1 : 0;
}

void add_common(CLI::App* sc, Options& o) {
  sc->add_option("--mode", o.mode, "Numeric backend: rational or log")->capture_default_str();
  sc->add_option("--horizon", o.horizon, "Largest index evaluated")->capture_default_str();
  sc->add_option("--tol", o.tol, "Relative tolerance for log-backend inequalities")->capture_default_str();
  sc->add_option("--out", o.out, "Output file (default: stdout)");
  sc->add_option("--format", o.format, "Output format: json or csv")->capture_default_str();
  sc->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp header line from reports");
  sc->add_option("--seed", o.seed, "Seed for sampled pairs and random inputs")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"amseq: arithmetic means of nonincreasing sequences"};
  app.require_subcommand(1);
  Options opts;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a sequence or construction");
  g->add_option("family", gen.family,
                "omega-p, log-power, iterated-log, indicator, step, from-ratio, from-concavity, example6, omega-half")
      ->required();
  g->add_option("--p", gen.p, "Exponent p");
  g->add_option("--q", gen.q, "Iterated-log exponent q (log-power)");
  g->add_option("--file", gen.file, "Input JSON (step, from-ratio, from-concavity)");
  g->add_option("--stages", gen.stages, "Number of construction stages K");
  add_common(g, opts);

  TransformArgs tr;
  auto* t = app.add_subcommand("transform", "Apply an operator to a sequence");
  t->add_option("op", tr.op, "am, am2, am-pow, ampliation, ratio, concavity, hat, invert-am")->required();
  t->add_option("--in", tr.in, "Input sequence JSON")->required();
  t->add_option("--component", tr.component, "Sequence of a construction file (xi or eta)");
  t->add_option("--p", tr.power, "Power for am-pow");
  t->add_option("--m", tr.m, "Factor for ampliation");
  add_common(t, opts);

  CheckArgs ck;
  auto* c = app.add_subcommand("check", "Run a verification suite");
  c->add_option("suite", ck.suite, "lemmas, example6, omega-half, hat, coherence, inversion, harmonic, delta-half, all")
      ->required();
  c->add_option("--subject", ck.subjects, "Subject id (repeatable)");
  c->add_option("--check", ck.checks, "Restrict to these check ids (repeatable)");
  c->add_option("--stages", ck.stages, "Construction stages for example6 / omega-half");
  add_common(c, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    validate(opts);
    bool rational = opts.mode == "rational";
    if (g->parsed()) {
      emit(opts, rational ? run_gen<Rational>(opts, gen) : run_gen<LogReal>(opts, gen));
      return 0;
    }
    if (t->parsed()) {
      emit(opts, rational ? run_transform<Rational>(opts, tr) : run_transform<LogReal>(opts, tr));
      return 0;
    }
    return run_check(opts, ck);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.error_class() == ErrorClass::usage ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
