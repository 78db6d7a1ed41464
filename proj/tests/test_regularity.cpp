#include <gtest/gtest.h>

#include <random>

#include "amseq/regularity.hpp"
#include "oracle.hpp"

using namespace amseq;

namespace {

Seq omega() { return Seq::omega_power(1.0); }

RatioSeq<Rational> harmonic_ratio(unsigned N) {
  RatioSeq<Rational> r;
  r.r.assign(N + 1, Rational(0));
  Rational h = 0;
  for (unsigned n = 1; n <= N; ++n) r.r[n] = (h += Rational(1, n));
  return r;
}

RatioSeq<double> harmonic_ratio_double(unsigned N) {
  RatioSeq<double> r;
  r.r.assign(N + 1, 0.0);
  for (unsigned n = 1; n <= N; ++n) r.r[n] = oracle::harmonic(oracle::Index(n));
  return r;
}

/// Admissible r: r_1 = 1, (n+1) r_{n+1} = n r_n + 1 + slack with random slack >= 0.
template <class R>
RatioSeq<R> random_ratio(std::mt19937_64& rng, unsigned N) {
  std::uniform_int_distribution<int> num(0, 8);
  RatioSeq<R> r;
  r.r.assign(N + 1, R(0));
  r.r[1] = R(1);
  for (unsigned n = 1; n < N; ++n) r.r[n + 1] = (R(n) * r.r[n] + R(1) + R(num(rng)) / R(16)) / R(n + 1);
  return r;
}

/// Admissible c: c_n in [n/(n+1), 1] on a random dyadic grid.
ConcavitySeq<Rational> random_concavity(std::mt19937_64& rng, unsigned N) {
  std::uniform_int_distribution<int> t(0, 8);
  ConcavitySeq<Rational> c;
  c.c.assign(N, Rational(0));
  for (unsigned n = 1; n < N; ++n) {
    Rational lo(n, n + 1);
    c.c[n] = lo + (Rational(1) - lo) * Rational(t(rng), 8);
  }
  return c;
}

}  // namespace

TEST(SeqFromRatio, ConstantRatioGivesConstantWithWarning) {
  RatioSeq<Rational> r;
  r.r.assign(51, Rational(1));
  auto v = check_ratio_admissibility(r, 50);
  EXPECT_TRUE(v.recurrence_ok);
  EXPECT_EQ(v.divergence_evidence, DivergenceEvidence::inconclusive);
  Seq s = seq_from_ratio<Rational>(r);
  for (std::uint64_t n = 1; n <= 50; ++n) ASSERT_EQ(s.value<Rational>(n), Rational(1));
  ASSERT_EQ(s.warnings().size(), 1u);
  EXPECT_NE(s.warnings()[0].find("inconclusive"), std::string::npos);
}

TEST(SeqFromRatio, HarmonicRatioGivesOmegaExactly) {
  auto r = harmonic_ratio(1000);
  auto v = check_ratio_admissibility(r, 1000);
  EXPECT_TRUE(v.recurrence_ok);
  Seq s = seq_from_ratio<Rational>(r);
  for (std::uint64_t n = 1; n <= 1000; ++n) ASSERT_EQ(s.value<Rational>(n), Rational(1, static_cast<long>(n)));
  // H is unbounded; evidence shows at a long horizon.
  auto vl = check_ratio_admissibility(harmonic_ratio_double(100000), 100000);
  EXPECT_NE(vl.divergence_evidence, DivergenceEvidence::inconclusive);
}

TEST(SeqFromRatio, TwoMinusInverseRoundTrips) {
  RatioSeq<Rational> r;
  r.r.assign(301, Rational(0));
  for (long n = 1; n <= 300; ++n) r.r[n] = Rational(2) - Rational(1, n);
  EXPECT_TRUE(check_ratio_admissibility(r, 300).recurrence_ok);
  Seq s = seq_from_ratio<Rational>(r);
  auto back = ratio_of_regularity<Rational>(s, 300);
  for (std::uint64_t n = 1; n <= 300; ++n) ASSERT_EQ(back[n], r[n]);
}

TEST(SeqFromRatio, RecurrenceViolationIsReported) {
  RatioSeq<Rational> r;
  r.r = {Rational(0), Rational(1), Rational(9, 10), Rational(2)};
  auto v = check_ratio_admissibility(r, 3);
  EXPECT_FALSE(v.recurrence_ok);
  EXPECT_EQ(v.first_violation, 1u);
  try {
    seq_from_ratio<Rational>(r);
    FAIL() << "expected NotRatioSequence";
  } catch (const NotRatioSequence& e) {
    EXPECT_EQ(e.at(), 1u);
    EXPECT_NE(std::string(e.what()).find("not a ratio sequence at n = 1"), std::string::npos);
  }
  // r_2 = 1 is the boundary and admissible.
  r.r = {Rational(0), Rational(1), Rational(1), Rational(1)};
  EXPECT_TRUE(check_ratio_admissibility(r, 3).recurrence_ok);
}

TEST(SeqFromRatio, RandomRoundTripsExact) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    auto r = random_ratio<Rational>(rng, 200);
    Seq s = seq_from_ratio<Rational>(r);
    auto back = ratio_of_regularity<Rational>(s, 200);
    for (std::uint64_t n = 1; n <= 200; ++n) ASSERT_EQ(back[n], r[n]) << t << " " << n;
  }
}

TEST(SeqFromRatio, LogModeRoundTripWithinTolerance) {
  auto r = harmonic_ratio_double(100000);
  Seq s = seq_from_ratio<LogReal>(r);
  auto back = ratio_of_regularity<LogReal>(s, 100000);
  for (std::uint64_t n = 1; n <= 100000; ++n) ASSERT_NEAR(back[n] / r[n], 1.0, 1e-10) << n;
}

TEST(SeqFromConcavity, Examples) {
  ConcavitySeq<Rational> one;
  one.c.assign(500, Rational(1));
  Seq w = seq_from_concavity<Rational>(one);
  for (std::uint64_t n = 1; n <= 500; ++n) ASSERT_EQ(w.value<Rational>(n), Rational(1, static_cast<long>(n)));
  EXPECT_TRUE(w.warnings().empty());

  ConcavitySeq<Rational> flat;
  flat.c.assign(500, Rational(0));
  for (long n = 1; n < 500; ++n) flat.c[n] = Rational(n, n + 1);
  Seq k = seq_from_concavity<Rational>(flat);
  for (std::uint64_t n = 1; n <= 500; ++n) ASSERT_EQ(k.value<Rational>(n), Rational(1));
  ASSERT_EQ(k.warnings().size(), 1u);
}

TEST(SeqFromConcavity, BoundViolation) {
  ConcavitySeq<Rational> c;
  c.c = {Rational(0), Rational(1), Rational(1, 2), Rational(1)};  // c_2 < 2/3
  try {
    seq_from_concavity<Rational>(c);
    FAIL();
  } catch (const NotConcavitySequence& e) {
    EXPECT_EQ(e.at(), 2u);
  }
}

TEST(SeqFromConcavity, RandomRoundTripsExact) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 20; ++t) {
    auto c = random_concavity(rng, 300);
    Seq s = seq_from_concavity<Rational>(c);
    auto back = concavity_ratio<Rational>(s, 300);
    for (std::uint64_t n = 1; n < 300; ++n) ASSERT_EQ(back[n], c[n]);
  }
}

TEST(Convert, HarmonicAndUnitConcavity) {
  auto c = ratio_to_concavity(harmonic_ratio(400));
  for (std::uint64_t n = 1; n < 400; ++n) ASSERT_EQ(c[n], Rational(1));
  ConcavitySeq<Rational> one;
  one.c.assign(400, Rational(1));
  auto r = concavity_to_ratio(one);
  auto h = harmonic_ratio(400);
  for (std::uint64_t n = 1; n <= 400; ++n) ASSERT_EQ(r[n], h[n]);
}

TEST(Convert, RandomRoundTripsInDouble) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto r = random_ratio<double>(rng, 1000);
    auto back = concavity_to_ratio(ratio_to_concavity(r));
    for (std::uint64_t n = 1; n <= 1000; ++n) ASSERT_NEAR(back[n] / r[n], 1.0, 1e-12);
  }
}

TEST(Convert, ConcavityOfARatioMatchesDirectConcavity) {
  Seq s = Seq::log_power(1.0);
  auto c1 = ratio_to_concavity(ratio_of_regularity<Rational>(s, 300));
  auto c2 = concavity_ratio<Rational>(s, 301);
  for (std::uint64_t n = 1; n < 300; ++n) ASSERT_EQ(c1[n], c2[n]);
}

TEST(AmImage, MembershipTestsAgree) {
  for (Seq s : {am(omega()), omega(), Seq::omega_power(0.5), am(Seq::log_power(2.0)),
                Seq::step(StepSeq<Rational>(Rational(1)).extend(Index(3), Rational(1, 100)))}) {
    auto c = concavity_ratio<Rational>(s, 400);
    auto r = ratio_of_regularity<Rational>(s, 400);
    bool by_c = !first_am_image_violation(c, Rational(0)).has_value();
    bool by_r = !first_ratio_am_image_violation(r, Rational(0)).has_value();
    EXPECT_EQ(by_c, by_r) << s.label();
    EXPECT_EQ(by_c, c.am_image_flag) << s.label();
  }
  EXPECT_TRUE(concavity_ratio<Rational>(am(omega()), 400).am_image_flag);
}

TEST(AmImage, CorollaryBoundsOnMeans) {
  auto c = concavity_ratio<LogReal>(am(Seq::omega_power(0.5)), 100000);
  for (std::uint64_t n = 1; n + 1 < 100000; ++n) {
    ASSERT_LE(c[n], 1.0 + 1e-12);
    ASSERT_GE(c[n], 1.0 - 1.0 / (n + 1) - 1e-12);
    ASSERT_LE(c[n], c[n + 1] + 1e-12);
  }
  auto r = ratio_of_regularity<LogReal>(am(Seq::log_power(1.0)), 100000);
  for (std::uint64_t n = 1; n < 100000; ++n) {
    ASSERT_LE(r[n + 1], r[n] + 1.0 / (n + 1) + 1e-12);
    ASSERT_LT(r[n] + 1.0 / (n + 1), (1.0 + 1.0 / n) * r[n] + 1e-12);
  }
}

TEST(InvertAm, Examples) {
  // x_n = H_n / n recovers omega.
  Seq eta = invert_am<Rational>(am(omega()), 1000);
  for (std::uint64_t n = 1; n <= 1000; ++n) ASSERT_EQ(eta.value<Rational>(n), Rational(1, static_cast<long>(n)));
  // x = omega = am(<1, 0, 0, ...>).
  Seq e1 = invert_am<Rational>(omega(), 100);
  EXPECT_EQ(e1.value<Rational>(1), Rational(1));
  for (std::uint64_t n = 2; n <= 100; ++n) ASSERT_EQ(e1.value<Rational>(n), Rational(0));
}

TEST(InvertAm, SqrtOmegaRoundTrip) {
  Seq x = Seq::omega_power(0.5);
  Seq eta = invert_am<LogReal>(x, 100000);
  auto back = am(eta).dense<LogReal>(100000);
  auto tx = x.dense<LogReal>(100000);
  for (std::uint64_t n = 1; n <= 100000; ++n)
    ASSERT_NEAR(std::exp(back->values[n].log_value() - tx->values[n].log_value()), 1.0, 1e-10) << n;
  auto prod = invert_am_by_concavity<LogReal>(x, 10000);
  auto direct = eta.dense<LogReal>(10000);
  for (std::uint64_t n = 1; n <= 10000; ++n)
    ASSERT_NEAR(std::exp(prod[n].log_value() - direct->values[n].log_value()), 1.0, 1e-8) << n;
}

TEST(InvertAm, ProductFormulaExact) {
  Seq x = am(Seq::log_power(1.0));
  Seq scaled = Seq::tabulated([&] {
    auto t = x.dense<Rational>(300);
    std::vector<Rational> v(301);
    for (int n = 1; n <= 300; ++n) v[n] = t->values[n] / t->values[1];
    return v;
  }());
  auto prod = invert_am_by_concavity<Rational>(scaled, 300);
  Seq eta = invert_am<Rational>(scaled, 300);
  for (std::uint64_t n = 1; n < 300; ++n) ASSERT_EQ(prod[n], eta.value<Rational>(n));
}

TEST(InvertAm, ConcavityViolation) {
  Seq s = Seq::step(StepSeq<Rational>(Rational(1)).extend(Index(3), Rational(1, 100)));
  try {
    invert_am<Rational>(s, 20);
    FAIL();
  } catch (const NotAmImage& e) {
    EXPECT_EQ(e.at(), 4u);  // 2*4*x_4 = 8/100 < 5 x_5 + 3 x_3
  }
  EXPECT_THROW(invert_am_by_concavity<Rational>(Seq::tabulated(std::vector<Rational>{0, 2, 1}), 2), DomainError);
}

TEST(ExpDelta2, Omega) {
  auto p = exp_delta2_profile(omega(), 1000);
  EXPECT_LT(p.sup_value, 2.0);
  EXPECT_GT(p.sup_value, 1.8);
  EXPECT_NE(p.trend, Trend::unbounded);
  // values are H_{m^2} / H_m
  auto q = exp_delta2_profile(omega(), 10);
  EXPECT_NEAR(q.samples.back().second, oracle::harmonic(oracle::Index(100)) / oracle::harmonic(oracle::Index(10)),
              1e-14);
}

TEST(ExpDelta2, SqrtOmegaGrows) {
  auto p = exp_delta2_profile(Seq::omega_power(0.5), 1000);
  EXPECT_EQ(p.argmax, 1000u);
  EXPECT_EQ(p.trend, Trend::unbounded);
  EXPECT_NEAR(p.sup_value / std::sqrt(1000.0), 1.0, 0.05);
}

TEST(ExpDelta2, SummableIsBounded) {
  auto p = exp_delta2_profile(Seq::omega_power(2.0), 1000);
  EXPECT_LT(p.sup_value, 1.65);
  EXPECT_NE(p.trend, Trend::unbounded);
  EXPECT_NEAR(p.samples.back().second, 1.0, 2e-3);
}

TEST(RegularityProfile, Examples) {
  auto a = regularity_profile(Seq::omega_power(0.5), 100000);
  EXPECT_LE(a.sup_r, 2.01);
  ASSERT_TRUE(a.potter_p.has_value());
  EXPECT_DOUBLE_EQ(*a.potter_p, 0.5);

  auto b = regularity_profile(omega(), 100000);
  EXPECT_NEAR(b.sup_r, oracle::harmonic(oracle::Index(100000)), 1e-9);
  EXPECT_EQ(b.r_trend, Trend::unbounded);
  EXPECT_FALSE(b.potter_p.has_value());

  auto c = regularity_profile(Seq::log_power(1.0), 100000);
  EXPECT_EQ(c.r_trend, Trend::unbounded);
  EXPECT_FALSE(c.potter_p.has_value());
}

TEST(Nu, Examples) {
  EXPECT_EQ(nu(omega(), Index(1)), Index(1));
  EXPECT_EQ(nu(Seq::omega_power(0.5), Index(1)), Index(1));
  EXPECT_EQ(nu(omega(), Index(2)), Index(4));
  for (long n : {50L, 200L, 1000L}) {
    Index k = nu(Seq::omega_power(0.5), Index(n));
    EXPECT_NEAR(k.convert_to<double>() / (n * n / 4.0), 1.0, 3.0 / n) << n;
  }
  EXPECT_THROW(nu(omega(), Index(0)), DomainError);
}

TEST(Nu, DefiningInequalities) {
  Seq s = Seq::omega_power(1.0 / 3);
  auto t = s.dense<Rational>(5000);
  for (long n = 1; n <= 60; ++n) {
    auto k = nu(s, Index(n)).convert_to<std::uint64_t>();
    ASSERT_GE(t->prefix[k], Rational(n) * t->values[1]);
    if (k > 1) {
      ASSERT_LT(t->prefix[k - 1], Rational(n) * t->values[1]);
    }
  }
}

TEST(Hat, SqrtOmegaHatIsOmegaUpToBand) {
  auto h = hat(Seq::omega_power(0.5), 1000);
  for (std::uint64_t n = 10; n <= 1000; ++n) {
    double v = h.values[n].linear() * n;
    ASSERT_GE(v, 1.0);
    ASSERT_LE(v, 8.0);
  }
  for (std::uint64_t n = 1; n < 1000; ++n) {
    ASSERT_LE(h.nu[n], h.nu[n + 1]);
    ASSERT_GE(h.values[n], h.values[n + 1]);
  }
  EXPECT_EQ(h.values[1], Seq::omega_power(0.5).eval(1));
}

TEST(Hat, CubeRootOmegaHatIsSqrtOmegaUpToBand) {
  auto h = hat(Seq::omega_power(1.0 / 3), 1000);
  double lo = 1e300, hi = 0;
  for (std::uint64_t n = 10; n <= 1000; ++n) {
    double v = h.values[n].linear() * std::sqrt(double(n));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT(hi / lo, 2.0);
}

TEST(Hat, SummableInputIsAnError) {
  EXPECT_THROW(hat(Seq::omega_power(2.0), 10), SummableError);
  try {
    nu(Seq::omega_power(2.0), Index(3));
  } catch (const SummableError& e) {
    EXPECT_NE(std::string(e.what()).find("summable"), std::string::npos);
    EXPECT_EQ(e.error_class(), ErrorClass::capability);
  }
}
