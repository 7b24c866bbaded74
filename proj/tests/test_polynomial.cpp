#include <gtest/gtest.h>

#include "ffdioph/brute_force.hpp"
#include "ffdioph/polynomial.hpp"

using namespace ffdioph;

namespace {

Polynomial P(const FieldSpec& f, std::vector<Rep> c) { return Polynomial(f, std::move(c)); }

Polynomial product(const Factorization& fac, const FieldSpec& f) {
  Polynomial acc = Polynomial::one(f);
  for (const auto& [g, e] : fac)
    for (int i = 0; i < e; ++i) acc = acc * g;
  return acc;
}

// Every monic polynomial of degree <= dmax.
std::vector<Polynomial> monic_upto(const FieldSpec& f, int dmax) {
  std::vector<Polynomial> out;
  for (int d = 0; d <= dmax; ++d)
    for (auto& p : enumerate_polys(f, d, true)) out.push_back(std::move(p));
  return out;
}

}  // namespace

TEST(Polynomial, Canonical) {
  const auto f2 = FieldSpec::make(2);
  EXPECT_TRUE(P(f2, {0, 0}).is_zero());
  EXPECT_EQ(P(f2, {0, 0}).degree(), kZeroDegree);
  EXPECT_TRUE(P(f2, {}).abs().is_zero());
  EXPECT_EQ(P(f2, {1, 0, 1, 0}).degree(), 2);
  EXPECT_EQ(P(f2, {1, 0, 1}).abs(), AbsValue::power(2));
  EXPECT_EQ(P(f2, {1, 0, 1}).str(), "X^2 + 1");
  EXPECT_THROW(P(f2, {2}), DomainError);
}

TEST(Polynomial, DivmodExamples) {
  const auto f2 = FieldSpec::make(2), f3 = FieldSpec::make(3);
  auto [q1, r1] = divmod(P(f2, {1, 0, 1}), P(f2, {1, 1}));
  EXPECT_EQ(q1, P(f2, {1, 1}));
  EXPECT_TRUE(r1.is_zero());
  auto [q2, r2] = divmod(P(f3, {0, 0, 1}), P(f3, {1, 1}));
  EXPECT_EQ(q2, P(f3, {2, 1}));
  EXPECT_EQ(r2, P(f3, {1}));
  const auto a = P(f3, {2, 0, 1, 1});
  EXPECT_EQ(a * Polynomial::one(f3), a);
  EXPECT_THROW(divmod(a, Polynomial(f3)), DivisionByZeroError);
}

TEST(Polynomial, DivmodReconstructs) {
  for (std::uint32_t k : {2u, 3u, 4u}) {
    const auto f = FieldSpec::of_size(k);
    const auto polys = monic_upto(f, 3);
    for (const auto& a : polys)
      for (const auto& b : polys) {
        const auto s = b.scaled(k - 1);
        auto [q, r] = divmod(a, s);
        EXPECT_EQ(q * s + r, a);
        EXPECT_LT(r.degree(), s.degree());
      }
  }
}

TEST(Polynomial, MixedFieldsRejected) {
  const auto a = P(FieldSpec::make(2), {1, 1});
  const auto b = P(FieldSpec::make(3), {1, 1});
  EXPECT_THROW(a + b, FieldMismatchError);
  EXPECT_THROW(a * b, FieldMismatchError);
}

TEST(Polynomial, Gcd) {
  const auto f2 = FieldSpec::make(2), f3 = FieldSpec::make(3);
  EXPECT_EQ(poly_gcd(P(f2, {1, 0, 1}), P(f2, {1, 1})), P(f2, {1, 1}));
  EXPECT_EQ(poly_gcd(P(f2, {0, 1}), P(f2, {1, 1})), Polynomial::one(f2));
  EXPECT_EQ(poly_gcd(P(f3, {1, 2}), Polynomial(f3)), P(f3, {2, 1}));
  EXPECT_THROW(poly_gcd(Polynomial(f3), Polynomial(f3)), DomainError);
}

TEST(Polynomial, GcdDividesAndIsGreatest) {
  const auto f = FieldSpec::make(3);
  const auto polys = monic_upto(f, 3);
  for (const auto& a : polys)
    for (const auto& b : polys) {
      const auto g = poly_gcd(a, b);
      EXPECT_TRUE(g.is_monic());
      EXPECT_TRUE((a % g).is_zero());
      EXPECT_TRUE((b % g).is_zero());
      for (const auto& c : polys)
        if ((a % c).is_zero() && (b % c).is_zero()) EXPECT_TRUE((g % c).is_zero());
    }
}

TEST(Polynomial, FactorExamples) {
  const auto f2 = FieldSpec::make(2);
  const auto fac1 = poly_factor(P(f2, {1, 0, 1}));
  ASSERT_EQ(fac1.size(), 1u);
  EXPECT_EQ(fac1[0].first, P(f2, {1, 1}));
  EXPECT_EQ(fac1[0].second, 2);
  const auto fac2 = poly_factor(P(f2, {1, 1, 1}));
  ASSERT_EQ(fac2.size(), 1u);
  EXPECT_EQ(fac2[0].second, 1);
  EXPECT_TRUE(poly_factor(P(FieldSpec::make(3), {2})).empty());
  EXPECT_THROW(poly_factor(Polynomial(f2)), DomainError);
}

TEST(Polynomial, FactorRoundTripAndIrreducible) {
  // Degrees above the trial-division cutoff exercise the splitting algorithms.
  for (std::uint32_t k : {2u, 3u, 4u, 5u}) {
    const auto f = FieldSpec::of_size(k);
    const int dmax = k <= 3 ? 8 : 5;
    for (int d = 1; d <= dmax; ++d) {
      for_each_poly(f, d, true, [&](const Polynomial& p) {
        const auto fac = poly_factor(p.scaled(k - 1));
        EXPECT_EQ(product(fac, f).scaled(k - 1), p.scaled(k - 1)) << p.str();
        for (const auto& [g, e] : fac) {
          EXPECT_TRUE(g.is_monic());
          EXPECT_TRUE(is_irreducible(g)) << g.str();
        }
      });
    }
  }
}

TEST(Polynomial, IrreducibleCountsMatchNecklaceFormula) {
  for (std::uint32_t k : {2u, 3u, 4u}) {
    const auto f = FieldSpec::of_size(k);
    for (int d = 1; d <= (k == 2 ? 8 : 5); ++d) {
      BigInt count = 0;
      for_each_poly(f, d, true, [&](const Polynomial& p) {
        if (is_irreducible(p)) ++count;
      });
      EXPECT_EQ(count, count_monic_irreducibles(k, d)) << "k=" << k << " d=" << d;
    }
  }
  EXPECT_EQ(count_monic_irreducibles(2, 4), 3);
}

TEST(Polynomial, Mobius) {
  const auto f2 = FieldSpec::make(2);
  EXPECT_EQ(poly_mobius(P(f2, {0, 1})), -1);
  EXPECT_EQ(poly_mobius(P(f2, {1, 0, 1})), 0);
  EXPECT_EQ(poly_mobius(P(f2, {0, 1, 1})), 1);
  EXPECT_EQ(poly_mobius(P(f2, {1})), 1);
}

TEST(Polynomial, MobiusSumOverDivisors) {
  // sum over monic d | f of mu(d) vanishes unless f = 1.
  const auto f = FieldSpec::make(3);
  const auto polys = monic_upto(f, 4);
  for (const auto& p : polys) {
    int sum = 0;
    for (const auto& d : polys)
      if (d.degree() <= p.degree() && (p % d).is_zero()) sum += poly_mobius(d);
    EXPECT_EQ(sum, p.degree() == 0 ? 1 : 0) << p.str();
  }
}

TEST(Polynomial, TotientExamples) {
  const auto f2 = FieldSpec::make(2), f3 = FieldSpec::make(3);
  EXPECT_EQ(totient(P(f2, {0, 0, 1})), 2);
  EXPECT_EQ(totient(P(f2, {0, 1, 1})), 1);
  EXPECT_EQ(totient(P(f2, {1})), 0);
  EXPECT_EQ(totient(P(f3, {0, 1})), 2);
  EXPECT_EQ(totient_monic(P(f3, {0, 1})), 1);
  EXPECT_EQ(unit_count(P(f3, {2})), 1);
  EXPECT_THROW(totient(Polynomial(f2)), DomainError);
}

TEST(Polynomial, TotientMatchesBruteForce) {
  for (std::uint32_t k : {2u, 3u, 4u}) {
    const auto f = FieldSpec::of_size(k);
    for (const auto& q : monic_upto(f, k == 4 ? 4 : 6)) {
      ASSERT_EQ(totient(q), brute::totient(q)) << q.str();
      if (q.degree() > 0) ASSERT_EQ(totient_monic(q), brute::totient_monic(q)) << q.str();
    }
  }
}

TEST(Polynomial, TotientMultiplicative) {
  for (std::uint32_t k : {2u, 3u}) {
    const auto f = FieldSpec::of_size(k);
    const auto polys = monic_upto(f, 5);
    for (const auto& a : polys)
      for (const auto& b : polys) {
        if (a.degree() + b.degree() > 6 || !coprime(a, b)) continue;
        EXPECT_EQ(unit_count(a * b), unit_count(a) * unit_count(b));
      }
  }
}

TEST(Polynomial, TotientComparableToNorm) {
  for (std::uint32_t k : {2u, 3u}) {
    const auto f = FieldSpec::of_size(k);
    const int dmax = 8;
    // table_bound[D] = product over d <= D of (1 - k^-d)^e_d, with e_d the most
    // distinct degree-d irreducible factors a degree-D polynomial can have.
    std::vector<Rational> table_bound(dmax + 1, Rational(1));
    for (int D = 1; D <= dmax; ++D)
      for (int d = 1; d <= D; ++d) {
        const BigInt norm = big_pow(k, d);
        const unsigned e = static_cast<unsigned>(std::min<BigInt>(count_monic_irreducibles(k, d), D / d));
        table_bound[D] *= Rational(boost::multiprecision::pow(norm - 1, e), boost::multiprecision::pow(norm, e));
      }
    for (const auto& q : monic_upto(f, dmax)) {
      if (q.degree() == 0) continue;
      const Rational ratio(totient(q), big_pow(k, q.degree()));
      Rational omega_bound = 1;
      for (std::size_t i = 0; i < poly_factor(q).size(); ++i) omega_bound *= Rational(k - 1, k);
      EXPECT_LE(ratio, 1);
      EXPECT_GE(ratio, omega_bound) << q.str();
      EXPECT_GE(ratio, table_bound[q.degree()]) << q.str();
    }
    EXPECT_GT(table_bound[dmax], 0);
  }
}

TEST(Polynomial, AbsValueRules) {
  const auto f = FieldSpec::make(3);
  const auto polys = monic_upto(f, 3);
  for (const auto& a : polys)
    for (const auto& b : polys) {
      EXPECT_EQ((a * b).abs(), a.abs() * b.abs());
      EXPECT_LE((a + b).abs(), max(a.abs(), b.abs()));
      if (a.degree() != b.degree()) EXPECT_EQ((a + b).abs(), max(a.abs(), b.abs()));
    }
  EXPECT_LT(AbsValue::zero(), AbsValue::power(-5));
}

TEST(Polynomial, Enumeration) {
  const auto f2 = FieldSpec::make(2), f3 = FieldSpec::make(3);
  const auto lin = enumerate_polys(f2, 1, true);
  ASSERT_EQ(lin.size(), 2u);
  EXPECT_EQ(lin[0], P(f2, {0, 1}));
  EXPECT_EQ(lin[1], P(f2, {1, 1}));
  EXPECT_EQ(enumerate_polys(f3, 0, true), std::vector<Polynomial>{Polynomial::one(f3)});
  EXPECT_EQ(enumerate_polys(f2, 2, false).size(), 4u);
  EXPECT_EQ(enumerate_polys(f3, 2, false).size(), 18u);

  EXPECT_EQ(enumerate_vectors(f2, 1, 1).size(), 2u);
  EXPECT_EQ(enumerate_vectors(f2, 2, 0).size(), 3u);
  EXPECT_EQ(enumerate_vectors(f3, 1, 0).size(), 2u);
  for (std::size_t m : {1u, 2u, 3u})
    for (int N = 0; N <= 2; ++N) {
      const auto vs = enumerate_vectors(f2, m, N);
      EXPECT_EQ(BigInt(vs.size()), big_pow(2, m * (N + 1)) - big_pow(2, m * N));
      for (const auto& v : vs) EXPECT_EQ(v.norm_inf(), AbsValue::power(N));
    }
}

TEST(PolyVector, ContentAndIndependence) {
  const auto f2 = FieldSpec::make(2);
  const PolyVector q({P(f2, {0, 0, 1}), P(f2, {0, 1})});
  EXPECT_EQ(q.content(), P(f2, {0, 1}));
  EXPECT_EQ(PolyVector({P(f2, {0, 1}), P(f2, {1})}).content(), Polynomial::one(f2));
  const PolyVector e1({P(f2, {1}), P(f2, {})}), e2({P(f2, {}), P(f2, {1})});
  EXPECT_TRUE(linearly_independent(e1, e2));
  EXPECT_FALSE(linearly_independent(q, q.scaled(P(f2, {1, 1}))));
}
