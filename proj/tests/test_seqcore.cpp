#include <gtest/gtest.h>

#include <random>

#include "amseq/seqcore.hpp"
#include "oracle.hpp"

using namespace amseq;

namespace {

Seq omega() { return Seq::omega_power(1.0); }

double lin(LogReal v) { return v.linear(); }

}  // namespace

TEST(Eval, FormulaValues) {
  EXPECT_NEAR(lin(omega().eval(4)), 0.25, 1e-16);
  Index big = boost::multiprecision::pow(Index(10), 40);
  EXPECT_NEAR(Seq::omega_power(0.5).eval(big).log_value(), -20 * std::log(10.0), 1e-12);
  EXPECT_THROW(omega().eval(Index(0)), DomainError);
  EXPECT_EQ(omega().value<Rational>(4), Rational(1, 4));
}

TEST(Eval, StepLookup) {
  Seq s = Seq::step(StepSeq<Rational>(Rational(1)).extend(Index(2), Rational(1, 2)));
  EXPECT_NEAR(lin(s.eval(3)), 0.5, 1e-16);
  EXPECT_EQ(s.value<Rational>(3), Rational(1, 2));
  EXPECT_EQ(s.value<Rational>(2), Rational(1));
}

TEST(Eval, BuiltinsAreNonincreasingAndNull) {
  for (Seq s : {Seq::omega_power(1.0 / 3), Seq::omega_power(2.0), Seq::log_power(1.0), Seq::log_power(2.0),
                Seq::log_power(1.0, 1.0), Seq::iterated_log()}) {
    auto t = s.dense<LogReal>(100000);
    for (std::uint64_t n = 1; n < 100000; ++n) ASSERT_GE(t->values[n], t->values[n + 1]) << s.label() << " " << n;
    EXPECT_LT(t->values[100000].log_value(), t->values[1].log_value() - 1.0) << s.label();
  }
}

TEST(Eval, LogAndRationalBackendsAgree) {
  for (Seq s : {omega(), Seq::omega_power(0.5), Seq::log_power(2.0), am(omega()), ampliation(omega(), 3)}) {
    auto tl = s.dense<LogReal>(1000);
    auto tr = s.dense<Rational>(1000);
    for (std::uint64_t n = 1; n <= 1000; ++n) {
      double a = tl->values[n].linear(), b = tr->values[n].convert_to<double>();
      ASSERT_NEAR(a / b, 1.0, 1e-10) << s.label() << " " << n;
    }
  }
}

TEST(Eval, PrefixSumRecurrence) {
  auto tr = Seq::omega_power(0.5).dense<Rational>(500);
  for (std::uint64_t n = 2; n <= 500; ++n) ASSERT_EQ(tr->prefix[n], tr->prefix[n - 1] + tr->values[n]);
  auto tl = Seq::omega_power(0.5).dense<LogReal>(100000);
  for (std::uint64_t n = 2; n <= 100000; n += 7) {
    double want = (tl->prefix[n - 1] + tl->values[n]).log_value();
    ASSERT_NEAR(tl->prefix[n].log_value(), want, 1e-13);
  }
}

TEST(Eval, ClosedPrefixBeyondDenseRange) {
  // omega^p partial sums past 1e6 come from Euler-Maclaurin; compare with the
  // dense sum continued exactly in long double.
  Seq w = Seq::omega_power(0.5);
  long double s = 0;
  for (std::uint64_t j = 1; j <= 2000000; ++j) s += 1.0L / std::sqrt(static_cast<long double>(j));
  EXPECT_NEAR(w.prefix_sum(Index(2000000)).linear() / static_cast<double>(s), 1.0, 1e-12);
  EXPECT_NEAR(omega().prefix_sum(Index(2000000)).linear() / oracle::harmonic(Index(2000000)), 1.0, 1e-14);
}

TEST(Am, Values) {
  Seq e1 = Seq::indicator();
  auto t = am(e1).dense<Rational>(50);
  for (std::uint64_t n = 1; n <= 50; ++n) ASSERT_EQ(t->values[n], Rational(1, static_cast<long>(n)));
  EXPECT_EQ(am(omega()).value<Rational>(4), Rational(25, 48));
}

TEST(Am, OmegaMeanIsHarmonicOverN) {
  auto t = am(omega()).dense<Rational>(10000);
  oracle::Rational h = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    h += oracle::Rational(1, static_cast<long>(n));
    ASSERT_EQ(t->values[n], h / static_cast<long>(n)) << n;
  }
}

TEST(Am, DominatesOperandAndIsMonotoneInIt) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    // Random nonincreasing x <= y.
    std::vector<Rational> x(201), y(201);
    Rational lx = 1, ly = 2;
    for (int n = 1; n <= 200; ++n) {
      if (d(rng) == 1) lx /= 2;
      if (d(rng) == 1) ly = std::max(lx, Rational(ly / 2));
      x[n] = lx;
      y[n] = std::max(lx, ly);
    }
    auto ax = am(Seq::tabulated(x)).dense<Rational>(200);
    auto ay = am(Seq::tabulated(y)).dense<Rational>(200);
    for (int n = 1; n <= 200; ++n) {
      ASSERT_LE(ax->values[n], ay->values[n]);
      ASSERT_GE(ax->values[n], x[n]);
    }
  }
}

TEST(Am, MeanGrowthProperties) {
  Seq s = Seq::log_power(1.0);
  auto t = s.dense<LogReal>(20000);
  for (std::uint64_t n = 1; n < 20000; ++n)  // n (s_a)_n strictly increasing
    ASSERT_LT(t->prefix[n], t->prefix[n + 1]);
  for (std::uint64_t m : {1ull, 7ull, 100ull, 5000ull})
    for (std::uint64_t n = m; n <= 20000; n += 331)  // (s_a)_n >= (m/n)(s_a)_m
      ASSERT_GE(t->mean(n).log_value() + 1e-12,
                (t->mean(m) * LogReal::from_index(m) / LogReal::from_index(n)).log_value());
}

TEST(AmPow, Values) {
  EXPECT_EQ(am_pow(omega(), 2).value<Rational>(1), Rational(1));
  EXPECT_EQ(am_pow(omega(), 2).value<Rational>(3), Rational(85, 108));
  auto t = am_pow(Seq::indicator(), 2).dense<Rational>(100);
  for (unsigned n = 1; n <= 100; ++n)
    ASSERT_EQ(t->values[n], oracle::harmonic_exact(n) / static_cast<long>(n));
  EXPECT_EQ(am_pow(omega(), 1).label(), am(omega()).label());
  EXPECT_THROW(am_pow(omega(), 0), DomainError);
}

TEST(Ampliation, Values) {
  EXPECT_EQ(ampliation(omega(), 1).label(), omega().label());
  EXPECT_NEAR(lin(ampliation(omega(), 2).eval(3)), 0.5, 1e-16);
  EXPECT_EQ(ampliation(omega(), 2).value<Rational>(3), Rational(1, 2));
}

TEST(Ampliation, MeanOfOmegaSatisfiesDeltaHalf) {
  Seq a = am(omega());
  auto ta = a.dense<LogReal>(100000);
  auto td = ampliation(a, 2).dense<LogReal>(100000);
  for (std::uint64_t n = 1; n <= 100000; ++n) {
    double r = std::exp(td->values[n].log_value() - ta->values[n].log_value());
    ASSERT_GE(r, 1.0 - 1e-12);
    ASSERT_LE(r, 2.0 + 1e-12);
  }
}

TEST(Ratio, OmegaRatioIsHarmonic) {
  auto r = ratio_of_regularity<Rational>(omega(), 1000);
  EXPECT_EQ(r[4], Rational(25, 12));
  for (unsigned n = 1; n <= 1000; ++n) ASSERT_EQ(r[n], oracle::harmonic_exact(n));
  auto rl = ratio_of_regularity<LogReal>(Seq::omega_power(0.5), 1000);
  EXPECT_DOUBLE_EQ(rl[1], 1.0);
}

TEST(Ratio, SqrtOmegaIsRegular) {
  auto r = ratio_of_regularity<LogReal>(Seq::omega_power(0.5), 1000000);
  double sup = 0;
  for (std::uint64_t n = 1; n <= 1000000; ++n) sup = std::max(sup, r[n]);
  EXPECT_LT(sup, 2.01);
  EXPECT_GT(sup, 1.99);
}

TEST(Ratio, RecurrenceIdentityExact) {
  for (Seq s : {omega(), Seq::log_power(1.0), Seq::omega_power(2.0 / 3)}) {
    auto r = ratio_of_regularity<Rational>(s, 600);
    auto t = s.dense<Rational>(600);
    for (std::uint64_t n = 1; n < 600; ++n) {
      Rational lhs = (Rational(n + 1) * r[n + 1] - 1) * t->values[n + 1];
      Rational rhs = Rational(n) * r[n] * t->values[n];
      ASSERT_EQ(lhs, rhs) << s.label() << " " << n;
    }
  }
}

TEST(Ratio, FiniteRankIsRejected) {
  EXPECT_THROW(ratio_of_regularity<Rational>(Seq::indicator(), 10), FiniteRankError);
  try {
    ratio_of_regularity<LogReal>(Seq::indicator(), 10);
  } catch (const FiniteRankError& e) {
    EXPECT_EQ(e.at(), 2u);
  }
  EXPECT_THROW(concavity_ratio<LogReal>(Seq::indicator(), 10), FiniteRankError);
}

TEST(Concavity, Values) {
  auto c = concavity_ratio<Rational>(omega(), 500);
  for (std::uint64_t n = 1; n < 500; ++n) ASSERT_EQ(c[n], Rational(1));
  auto k = concavity_ratio<Rational>(Seq::constant(), 500);
  for (std::uint64_t n = 1; n < 500; ++n) ASSERT_EQ(k[n], Rational(n, n + 1));
}

TEST(Concavity, MeanOfOmegaIsAnAmImage) {
  EXPECT_TRUE(concavity_ratio<LogReal>(am(omega()), 100000).am_image_flag);
  EXPECT_TRUE(concavity_ratio<Rational>(am(omega()), 2000).am_image_flag);
  // A step with a sharp drop is not a mean.
  Seq s = Seq::step(StepSeq<Rational>(Rational(1)).extend(Index(3), Rational(1, 100)));
  EXPECT_FALSE(concavity_ratio<Rational>(s, 50).am_image_flag);
}

TEST(Domination, Profiles) {
  Seq w = Seq::omega_power(0.5);
  auto self = domination_profile(w, w, {Index(10), Index(1000)});
  for (auto& [c, v] : self) EXPECT_DOUBLE_EQ(v, 1.0);
  auto down = domination_profile(omega(), w, {Index(10), Index(100), Index(10000)});
  for (auto& [c, v] : down) EXPECT_DOUBLE_EQ(v, 1.0);
  auto up = domination_profile(w, omega(), {Index(100), Index(10000), Index(1000000)});
  EXPECT_NEAR(up[0].second, 10.0, 1e-12);
  EXPECT_NEAR(up[1].second, 100.0, 1e-10);
  EXPECT_NEAR(up[2].second, 1000.0, 1e-9);
  auto sampled = domination_profile_sampled(w, omega(), {Index(1), Index(100), Index(1) << 80},
                                            {Index(100), Index(1) << 80});
  EXPECT_NEAR(sampled[0].second, 10.0, 1e-12);
  EXPECT_NEAR(std::log2(sampled[1].second), 40.0, 1e-9);
}

TEST(Domination, Pointwise) {
  auto ok = pointwise_dominates(omega(), Seq::omega_power(0.5), 1000);
  EXPECT_TRUE(ok.holds);
  auto bad = pointwise_dominates(Seq::omega_power(0.5), omega(), 1000);
  EXPECT_FALSE(bad.holds);
  EXPECT_EQ(bad.first_violation, 2u);
}

TEST(Horizon, DerivedKindsStopAtTheDenseLimit) {
  EXPECT_THROW(am(am(omega())).eval(Index(2000000)), HorizonExceeded);
  // Means of closed-form kinds remain evaluable.
  EXPECT_NO_THROW(am(omega()).eval(Index(1) << 100));
  Seq st = Seq::step(StepSeq<LogReal>(LogReal::one()).extend(Index(5), LogReal::from_linear(0.1)));
  EXPECT_NO_THROW(am(am(st)).eval(Index(1) << 100));
}

TEST(MeanCursor, MatchesTables) {
  Seq s = Seq::log_power(2.0);
  MeanCursor<Rational> c(s, 300);
  auto t = s.dense<Rational>(300);
  auto t2 = am(am(s)).dense<Rational>(300);
  while (c.next()) {
    ASSERT_EQ(c.mean(), t->mean(c.n()));
    ASSERT_EQ(c.mean2(), t2->values[c.n()]);
    ASSERT_EQ(c.harmonic(), oracle::harmonic_exact(static_cast<unsigned>(c.n())));
  }
}

TEST(Describe, Labels) {
  EXPECT_EQ(omega().describe()["params"]["family"], "omega-p");
  EXPECT_EQ(am(omega()).describe()["params"]["op"], "am");
  EXPECT_EQ(ampliation(omega(), 2).describe()["params"]["m"], 2);
}
