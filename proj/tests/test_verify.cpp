#include <gtest/gtest.h>

#include "amseq/io.hpp"
#include "amseq/verify.hpp"

using namespace amseq;

namespace {

Seq omega() { return Seq::omega_power(1.0); }

bool has_note(const CheckReport& r, const std::string& needle) {
  for (const auto& n : r.notes)
    if (n.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(RatioIdentity, ExactOnOmega) {
  auto r = check_ratio_identity<Rational>(omega(), {{Index(2), Index(4)}, {Index(3), Index(3)}, {Index(1), Index(40)}},
                                          1e-12);
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_EQ(r.numeric_mode, "rational");
  EXPECT_EQ(r.sample_count, 3u);
  EXPECT_EQ(r.worst_margin, 0.0);
}

TEST(RatioIdentity, LogBackendWithinTolerance) {
  auto pairs = random_pairs(7, 5000, 50, 5000);
  auto r = check_ratio_identity<LogReal>(Seq::omega_power(0.5), pairs, 1e-10);
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_LE(std::abs(r.worst_margin), 1e-10);
}

TEST(RatioIdentity, FiniteRankIsInapplicable) {
  auto r = check_ratio_identity<Rational>(Seq::indicator(), {{Index(1), Index(5)}}, 1e-12);
  EXPECT_EQ(r.status, Status::inapplicable);
  EXPECT_TRUE(has_note(r, "finite rank"));
}

TEST(LogJump, OmegaAtFourJumpsToEight) {
  // 4 r(omega)_4 = 4 H_4 = 25/3, so the jump index is 8.
  auto r = check_log_jump<Rational>(omega(), {Index(4)}, Index(100), 1e-12);
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_EQ(r.witness, "m=4,n=8");
  auto rl = check_log_jump<LogReal>(omega(), {Index(4)}, Index(100), 1e-12);
  EXPECT_EQ(rl.witness, "m=4,n=8");
}

TEST(HBound, OmegaPassesBothBackends) {
  auto r = check_H_bound<Rational>(omega(), 2000, 1e-12);
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_EQ(r.details["identity"], "pass");
  auto rl = check_H_bound<LogReal>(omega(), 100000, 1e-9);
  EXPECT_EQ(rl.status, Status::pass);
}

TEST(HBound, IndicatorIsInapplicable) {
  auto r = check_H_bound<Rational>(Seq::indicator(), 100, 1e-12);
  EXPECT_EQ(r.status, Status::inapplicable);
}

TEST(Sandwich, HoldsOnBuiltins) {
  std::vector<std::pair<Index, Index>> pairs = {{Index(1), Index(1)}, {Index(1), Index(500)}, {Index(7), Index(90)}};
  for (double p : {1.0 / 3.0, 0.5, 1.0, 2.0}) {
    EXPECT_EQ(check_sandwich<Rational>(Seq::omega_power(p), pairs, 1e-12).status, Status::pass) << p;
    EXPECT_EQ(check_sandwich<LogReal>(Seq::omega_power(p), pairs, 1e-9).status, Status::pass) << p;
  }
  EXPECT_EQ(check_sandwich<Rational>(Seq::indicator(), pairs, 1e-12).status, Status::pass);
}

TEST(UpwardVariation, HoldsOnBuiltins) {
  EXPECT_EQ(check_upward_variation<Rational>(omega(), 3000, 1e-12).status, Status::pass);
  EXPECT_EQ(check_upward_variation<LogReal>(Seq::log_power(1.0), 100000, 1e-9).status, Status::pass);
  EXPECT_EQ(check_upward_variation<Rational>(Seq::indicator(), 200, 1e-12).status, Status::pass);
}

TEST(RatioBound, ConstantPhi) {
  // phi = 1 sits below r(omega) = H everywhere; phi = 2 exceeds H_1 = 1.
  std::vector<double> one(5001, 1.0), two(5001, 2.0);
  auto r = check_ratio_bound(omega(), one, 5000, 1e-9);
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_GT(r.sample_count, 0u);
  EXPECT_EQ(check_ratio_bound(omega(), two, 5000, 1e-9).status, Status::inapplicable);
  auto env = detail::lower_envelope(detail::ratio_values(omega(), 5000), 0.9);
  EXPECT_EQ(check_ratio_bound(omega(), env, 5000, 1e-9).status, Status::pass);
}

TEST(MonotoneLemma, OmegaPassesWithEnvelope) {
  std::uint64_t N = 20000;
  auto phi = detail::lower_envelope(detail::ratio_values(am(omega()), N), 1.0);
  auto r = check_monotone_lemma(omega(), phi, N, 1e-9);
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_GT(r.sample_count, 0u);
}

TEST(MonotoneLemma, RejectsPhiAboveRatio) {
  std::vector<double> phi(1001, 100.0);
  EXPECT_EQ(check_monotone_lemma(omega(), phi, 1000, 1e-9).status, Status::inapplicable);
}

TEST(Corollaries, OmegaPasses) {
  EXPECT_EQ(check_concavity_corollaries<Rational>(omega(), 500, 1e-12).status, Status::pass);
  EXPECT_EQ(check_concavity_corollaries<LogReal>(omega(), 20000, 1e-9).status, Status::pass);
}

TEST(Constructions, Example6AndOmegaHalfPass) {
  auto r6 = check_example6(build_example6(8), 1e-9);
  EXPECT_EQ(r6.status, Status::pass) << r6.to_json().dump();
  auto rh = check_omega_half(build_omega_half(4), 1e-9);
  EXPECT_EQ(rh.status, Status::pass) << rh.to_json().dump();
}

TEST(CancellationWitness, SignatureAndNegativeControl) {
  SuiteConfig cfg;
  std::vector<CheckReport> out;
  detail::run_example6_suite(cfg, out);
  int witness = 0;
  for (const auto& r : out) {
    EXPECT_NE(r.status, Status::fail) << r.check_id << " " << r.to_json().dump();
    if (r.check_id != "cancellation-witness") continue;
    ++witness;
    bool expected = r.details["expected"];
    EXPECT_EQ(r.details["signature"].get<bool>(), expected);
  }
  EXPECT_EQ(witness, 2);
}

TEST(CancellationWitness, MismatchedExpectationFails) {
  auto p = build_example6(6);
  Seq xi = Seq::step(p.xi);
  std::vector<Index> samples, cps;
  for (int k = 2; k <= p.K; ++k) {
    samples.push_back(p.stage(k).n);
    cps.push_back(p.stage(k).n);
  }
  auto r = check_cancellation_witness(xi, xi, 2, false, samples, cps, 2.0, true, 1e-9);
  EXPECT_EQ(r.status, Status::fail);
  EXPECT_FALSE(r.details["signature"].get<bool>());
}

TEST(HatPower, BandsWithinEight) {
  for (double p : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
    auto r = check_hat_power(p, 1000);
    EXPECT_EQ(r.status, Status::pass) << p;
    EXPECT_LE(r.details["band_width"].get<double>(), 8.0);
    EXPECT_NEAR(r.details["p_prime"].get<double>(), p / (1 - p), 1e-15);
  }
  EXPECT_THROW(check_hat_power(1.0, 100), DomainError);
}

TEST(HatSummable, OmegaSquaredRaises) {
  EXPECT_EQ(check_hat_summable(Seq::omega_power(2.0), 1000).status, Status::pass);
  // nu(omega, n) ~ e^n, so the divergent case stays at a small horizon.
  EXPECT_EQ(check_hat_summable(omega(), 100).status, Status::fail);
}

TEST(Harmonic, ChainsHoldExceptTheLeftLink) {
  auto r = check_harmonic_bounds(1000, 50, 3, 1e-12);
  EXPECT_EQ(r.details["eq1"], "pass");
  EXPECT_EQ(r.details["right_link"], "pass");
  EXPECT_EQ(r.details["middle_link"], "pass");
  EXPECT_EQ(r.details["outer_bound"], "pass");
  EXPECT_EQ(r.details["left_link"], "fail");
  EXPECT_EQ(r.details["left_link_first_failure"]["m"], 1);
  EXPECT_EQ(r.details["left_link_first_failure"]["n"], 5);
  EXPECT_EQ(r.status, Status::fail);
}

TEST(Inversion, RoundTripPasses) {
  auto r = check_inversion_roundtrip(5, 20, 200);
  EXPECT_EQ(r.status, Status::pass) << r.to_json().dump();
}

TEST(DeltaHalf, BuiltinsPass) {
  for (const char* id : {"omega", "omega-1/2"})
    EXPECT_EQ(check_delta_half(make_subject(id), 20000, 1e-9).status, Status::pass) << id;
}

TEST(Suite, EmptySuiteIsEmpty) {
  SuiteConfig cfg;
  cfg.suite = "";
  EXPECT_TRUE(run_suite(cfg).empty());
}

TEST(Suite, UnknownNamesAreConfigErrors) {
  SuiteConfig a;
  a.suite = "nope";
  EXPECT_THROW(run_suite(a), ConfigError);
  SuiteConfig b;
  b.subjects = {"omega-7"};
  EXPECT_THROW(run_suite(b), ConfigError);
  SuiteConfig c;
  c.checks = {"bogus"};
  EXPECT_THROW(run_suite(c), ConfigError);
  SuiteConfig d;
  d.mode = "float";
  EXPECT_THROW(run_suite(d), ConfigError);
  SuiteConfig e;
  e.horizon = 5;
  EXPECT_THROW(run_suite(e), ConfigError);
  EXPECT_THROW(make_subject("omega-7"), ConfigError);
}

TEST(Suite, LemmasOnOmegaPassAndAreDeterministic) {
  SuiteConfig cfg;
  cfg.subjects = {"omega"};
  cfg.horizon = 2000;
  auto a = run_suite(cfg);
  ASSERT_FALSE(a.empty());
  EXPECT_FALSE(any_failure(a));
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LE(a[i - 1].check_id, a[i].check_id);
  auto b = run_suite(cfg);
  EXPECT_EQ(reports_to_json(a, false), reports_to_json(b, false));
  cfg.mode = "rational";
  EXPECT_FALSE(any_failure(run_suite(cfg)));
}

TEST(Suite, ChecksFilterKeepsOnlyRequested) {
  SuiteConfig cfg;
  cfg.subjects = {"omega-1/2"};
  cfg.checks = {"sandwich", "H-bound"};
  cfg.horizon = 1000;
  auto out = run_suite(cfg);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].check_id, "H-bound");
  EXPECT_EQ(out[1].check_id, "sandwich");
}

TEST(Suite, FiniteRankGetsInapplicableNotes) {
  SuiteConfig cfg;
  cfg.subjects = {"finite-rank"};
  cfg.horizon = 500;
  auto out = run_suite(cfg);
  EXPECT_FALSE(any_failure(out));
  int inapplicable = 0;
  for (const auto& r : out)
    if (r.status == Status::inapplicable) {
      ++inapplicable;
      EXPECT_FALSE(r.notes.empty()) << r.check_id;
    }
  EXPECT_GE(inapplicable, 4);
}

TEST(Io, ReportsJsonShape) {
  SuiteConfig cfg;
  cfg.suite = "hat";
  auto out = run_suite(cfg);
  auto plain = nlohmann::json::parse(reports_to_json(out, false));
  EXPECT_FALSE(plain.contains("generated_at"));
  EXPECT_EQ(plain["reports"].size(), out.size());
  for (const auto& r : plain["reports"])
    for (const char* key : {"check_id", "subject", "status", "worst_margin", "witness", "sample_count", "horizon",
                            "numeric_mode", "notes"})
      EXPECT_TRUE(r.contains(key)) << key;
  auto stamped = nlohmann::json::parse(reports_to_json(out, true));
  EXPECT_TRUE(stamped.contains("generated_at"));
  auto csv = reports_to_csv(out, false);
  EXPECT_EQ(csv.rfind("check_id,", 0), 0u);
}

TEST(Io, SeqDescriptorRoundTrip) {
  for (const char* id : {"omega", "omega-1/2", "log-n", "iterated-log", "finite-rank", "example6-xi"}) {
    Seq s = make_subject(id, 5);
    Seq back = seq_from_json(seq_to_json(s));
    for (std::uint64_t n : {1ull, 2ull, 17ull, 1000ull, 123456ull})
    {
      LogReal a = back.eval(Index(n)), b = s.eval(Index(n));
      if (b.is_zero())
        EXPECT_TRUE(a.is_zero()) << id << " " << n;
      else
        EXPECT_NEAR(a.log_value(), b.log_value(), 1e-12) << id << " " << n;
    }
  }
  EXPECT_THROW(seq_from_json(nlohmann::json{{"kind", "wavelet"}}), ConfigError);
  EXPECT_THROW(seq_from_json(nlohmann::json::object()), ConfigError);
}
