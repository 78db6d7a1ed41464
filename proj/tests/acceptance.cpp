// Acceptance runner: one PASS/FAIL line per criterion. With --criterion k only
// criterion k runs; the exit code is nonzero when any selected criterion fails.

#include <CLI11.hpp>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "amseq/io.hpp"
#include "amseq/verify.hpp"

using namespace amseq;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;  // 0: no time budget
  std::function<Outcome()> run;
};

constexpr double kTol = 1e-9;

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

// Every report must be pass; the first offender is named.
Outcome all_pass(const std::vector<CheckReport>& reports, std::size_t expected_min = 1) {
  Outcome o;
  if (reports.size() < expected_min) {
    o.pass = false;
    o.detail = "expected at least " + std::to_string(expected_min) + " reports, got " + std::to_string(reports.size());
    return o;
  }
  for (const auto& r : reports)
    if (r.status != Status::pass) {
      o.pass = false;
      o.detail = r.check_id + " on " + r.subject.dump() + ": " + to_string(r.status) +
                 (r.witness.empty() ? "" : " at " + r.witness);
      return o;
    }
  o.detail = std::to_string(reports.size()) + " reports pass";
  return o;
}

std::vector<CheckReport> only(std::vector<CheckReport> v, const std::string& id) {
  std::erase_if(v, [&](const CheckReport& r) { return r.check_id != id; });
  return v;
}

Outcome inversion() {
  auto r = check_inversion_roundtrip(1, 100, 1000);
  Outcome o = all_pass({r});
  o.detail += ", " + std::to_string(r.sample_count) + " round trips";
  return o;
}

Outcome lemma_suite() {
  SuiteConfig cfg;
  cfg.suite = "lemmas";
  cfg.subjects = {"omega-1/3", "omega-1/2", "omega-2/3", "omega", "log-n", "log2-n"};
  cfg.checks = {"ratio-identity", "sandwich", "H-bound", "upward-variation", "log-jump"};
  cfg.tol = kTol;
  cfg.mode = "rational";
  cfg.horizon = 10000;
  auto exact = run_suite(cfg);
  cfg.mode = "log";
  cfg.horizon = 1000000;
  auto logm = run_suite(cfg);
  Outcome a = all_pass(exact, 30), b = all_pass(logm, 30);
  return {a.pass && b.pass, "rational@1e4: " + a.detail + "; log@1e6: " + b.detail};
}

Outcome harmonic_chain() {
  auto r = check_harmonic_bounds(1000000, 1000, 1, kTol);
  Outcome o;
  o.pass = r.status == Status::pass;
  std::ostringstream os;
  os << "single " << r.details["eq1"].get<std::string>() << ", right " << r.details["right_link"].get<std::string>()
     << ", middle " << r.details["middle_link"].get<std::string>() << ", outer "
     << r.details["outer_bound"].get<std::string>() << ", left " << r.details["left_link"].get<std::string>();
  if (r.details.contains("left_link_first_failure"))
    os << " (first m=" << r.details["left_link_first_failure"]["m"] << ", n=" << r.details["left_link_first_failure"]["n"]
       << "; " << r.details["left_link_failing_m_count"] << " values of m fail)";
  os << ", crossover rel err " << fmt(r.details["crossover_relative_error"].get<double>(), 3);
  o.detail = os.str();
  return o;
}

Outcome coherence() {
  SuiteConfig cfg;
  cfg.suite = "coherence";
  cfg.horizon = 1000000;
  auto reps = only(run_suite(cfg), "exp-delta2-coherence");
  Outcome o = all_pass(reps, 5);
  std::string per;
  for (const auto& r : reps) {
    const auto& d = r.details;
    per += " " + r.subject["params"].dump() + ":" + d.value("direction", "?") + " (sup " +
           fmt(d["delta2_sup"].get<double>()) + ", band " + fmt(d["band_min"].get<double>()) + ".." +
           fmt(d["band_max"].get<double>()) + ")";
  }
  o.detail += ";" + per;
  return o;
}

Outcome higher_order() {
  SuiteConfig cfg;
  cfg.suite = "coherence";
  cfg.horizon = 1000000;
  auto reps = only(run_suite(cfg), "higher-order-delta2");
  Outcome o = all_pass(reps, 2);
  for (const auto& r : reps)
    for (const auto& ord : r.details["orders"])
      o.detail += "; " + r.subject["params"].value("family", std::string("?")) + " p=" + ord["order"].dump() +
                  " ratio " + fmt(ord["ratio_min"].get<double>()) + ".." + fmt(ord["ratio_max"].get<double>()) +
                  " in [" + fmt(ord["band"][0].get<double>()) + ", " + fmt(ord["band"][1].get<double>()) + "]";
  return o;
}

Outcome example6() {
  SuiteConfig cfg;
  cfg.suite = "example6";
  cfg.stages_example6 = 8;
  cfg.tol = kTol;
  auto reps = run_suite(cfg);
  Outcome o = all_pass(reps, 6);
  for (const auto& r : reps)
    if (r.check_id == "example6") {
      const auto& d = r.details;
      o.detail += "; k0 max " + d["k0_max"].dump() + " (first_order_ratio " + d["first_order_ratio"]["k0"].dump() +
                  ", crux " + d["crux"]["k0"].dump() + ", liminf " + d["liminf_signature"]["k0"].dump() +
                  ", limsup " + d["limsup_signature"]["k0"].dump() + ")";
    }
  return o;
}

Outcome omega_half() {
  SuiteConfig cfg;
  cfg.suite = "omega-half";
  cfg.stages_omega_half = 4;
  cfg.tol = kTol;
  auto reps = run_suite(cfg);
  Outcome o = all_pass(reps, 2);
  for (const auto& r : reps)
    if (r.check_id == "omega-half")
      o.detail += "; k0 below " + r.details["k0_below_second_mean"].dump() + ", k0 divergence " +
                  r.details["k0_divergence"].dump() + ", growth " + r.details["growth_factor"]["values"].dump();
  return o;
}

Outcome hat_identity() {
  SuiteConfig cfg;
  cfg.suite = "hat";
  cfg.horizon = 1000;
  auto reps = run_suite(cfg);
  Outcome o = all_pass(reps, 4);
  for (const auto& r : reps)
    if (r.check_id == "hat-power")
      o.detail += "; p=" + fmt(r.details["p"].get<double>(), 3) + " band [" +
                  fmt(r.details["ratio_inf"].get<double>()) + ", " + fmt(r.details["ratio_sup"].get<double>()) + "]";
  return o;
}

Outcome delta_half() {
  SuiteConfig cfg;
  cfg.suite = "delta-half";
  cfg.horizon = 100000;
  cfg.tol = kTol;
  return all_pass(run_suite(cfg), 3);
}

Outcome determinism() {
  SuiteConfig cfg;
  cfg.suite = "all";
  auto a = reports_to_json(run_suite(cfg), false);
  auto b = reports_to_json(run_suite(cfg), false);
  return {a == b, a == b ? "identical reports, " + std::to_string(a.size()) + " bytes" : "reports differ"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  int only_id = 0;
  app.add_option("--criterion", only_id, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "inversion round trips exact in rational mode", 5, inversion},
      {2, "lemma checks on built-ins (rational 1e4, log 1e6)", 60, lemma_suite},
      {3, "harmonic bounds to 1e6 plus 1e3 big pairs", 30, harmonic_chain},
      {4, "exp-Delta2 and log coherence agree", 60, coherence},
      {5, "higher-order Delta2 consistency", 60, higher_order},
      {6, "example6 two-sequence construction, K = 8", 120, example6},
      {7, "omega^(1/2) construction, K = 4", 60, omega_half},
      {8, "hat identity on omega powers", 30, hat_identity},
      {9, "Delta_(1/2) for means to 1e5", 10, delta_half},
      {10, "determinism of full suite reports", 0, determinism},
  };

  bool failed = false;
  for (const auto& c : criteria) {
    if (only_id != 0 && c.id != only_id) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = c.budget_s <= 0 || secs < c.budget_s;
    bool pass = o.pass && in_budget;
    failed = failed || !pass;
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << c.title << "  [" << fmt(secs, 3)
              << " s";
    if (c.budget_s > 0) std::cout << " / " << c.budget_s << " s";
    std::cout << "]  " << o.detail;
    if (!in_budget) std::cout << "  (over time budget)";
    std::cout << std::endl;
  }
  return failed ? 1 : 0;
}
