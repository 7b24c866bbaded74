#include <gtest/gtest.h>

#include "ffdioph/exponents.hpp"

using namespace ffdioph;

namespace {

const FieldSpec F2 = FieldSpec::of_size(2);
const FieldSpec F3 = FieldSpec::of_size(3);

std::map<int, std::optional<std::int64_t>> interleaved(int N_max) {
  std::map<int, std::optional<std::int64_t>> t;
  for (int N = 0; N <= N_max; ++N) t[N] = N % 2 ? -2 * N : -4 * N;
  return t;
}

}  // namespace

TEST(BlockCounts, Examples) {
  const auto all1 = SetFamily::all_nonzero(F2, 1);
  EXPECT_EQ(all1.block_count(0), 1);
  for (int N = 1; N <= 8; ++N) EXPECT_EQ(all1.block_count(N), big_pow(2, N));
  const auto all2 = SetFamily::all_nonzero(F2, 2);
  for (int N = 0; N <= 8; ++N) EXPECT_EQ(all2.block_count(N), 3 * big_pow(4, N));
  const auto lac = SetFamily::lacunary_list(F2, 1, {1, 2, 4, 8});
  for (int N = 0; N <= 9; ++N)
    EXPECT_EQ(lac.block_count(N), (N == 1 || N == 2 || N == 4 || N == 8) ? big_pow(2, N) : BigInt(0));
  const auto rows = block_counts(all1, 5);
  EXPECT_EQ(rows.back().cumulative, big_pow(2, 6) - 1);
}

TEST(BlockCounts, ClosedFormsMatchEnumeration) {
  std::vector<SetFamily> fams{SetFamily::all_nonzero(F2, 1),
                              SetFamily::all_nonzero(F2, 2),
                              SetFamily::all_nonzero(F3, 1),
                              SetFamily::monic_coords(F2, 2),
                              SetFamily::monic_coords(F3, 1),
                              SetFamily::lacunary(F2, 1, 2),
                              SetFamily::lacunary(F2, 2, 3),
                              SetFamily::degree_pattern(F2, {Rational(1), Rational(1, 2)}),
                              SetFamily::degree_pattern(F3, {Rational(1, 3), Rational(1)})};
  for (const auto& S : fams)
    for (int N = 0; N <= (S.m() == 2 || S.field().k() == 3 ? 4 : 6); ++N)
      EXPECT_EQ(S.block_count(N), S.block_count_enumerated(N)) << S.describe() << " N=" << N;
  for (int N = 0; N <= 6; ++N)
    EXPECT_EQ(SetFamily::all_nonzero(F2, 2).block_count(N), SetFamily::all_nonzero(F2, 2).block_count_enumerated(N));
}

TEST(BlockCounts, ExplicitFamilies) {
  const auto X = Polynomial::x(F2), one = Polynomial::one(F2);
  const auto S = SetFamily::explicit_list(F2, 1, {PolyVector({X}), PolyVector({X * X}), PolyVector({X + one}), PolyVector({X})});
  EXPECT_EQ(S.block_count(1), 2);
  EXPECT_EQ(S.block_count(2), 1);
  EXPECT_FALSE(S.infinite());
  EXPECT_TRUE(S.contains(PolyVector({X * X})));
  EXPECT_FALSE(S.contains(PolyVector({one})));
  EXPECT_THROW(gamma_of_S(S, 8), DomainError);
  EXPECT_THROW(SetFamily::explicit_list(F2, 1, {PolyVector({Polynomial(F2)})}), DomainError);
}

TEST(VOfS, OraclesAndEstimates) {
  for (std::size_t m : {1u, 2u}) {
    const auto S = SetFamily::all_nonzero(F2, m);
    const auto e = v_of_S(S, 12);
    EXPECT_EQ(*e.exact, Rational(static_cast<long long>(m)));
    EXPECT_NEAR(e.value, static_cast<double>(m), 0.1);
  }
  const auto lac = SetFamily::lacunary(F2, 1, 2);
  EXPECT_NEAR(v_of_S(lac, 12).value, 1.0, 0.1);
  EXPECT_EQ(*lac.oracle_v(), 1);
  const auto pat = SetFamily::degree_pattern(F2, {Rational(1), Rational(1, 2)});
  EXPECT_EQ(*pat.oracle_v(), Rational(3, 2));
  EXPECT_NEAR(v_of_S(pat, 12).value, 1.5, 0.1);
  EXPECT_THROW(v_of_S(SetFamily::explicit_list(F2, 1, {}), 8), DomainError);
}

TEST(GammaOfS, MatchesV) {
  std::vector<SetFamily> fams{SetFamily::all_nonzero(F2, 1), SetFamily::all_nonzero(F2, 2), SetFamily::monic_coords(F2, 2),
                              SetFamily::lacunary(F2, 1, 2), SetFamily::degree_pattern(F2, {Rational(1), Rational(1, 2)})};
  for (const auto& S : fams) {
    const double g = gamma_of_S(S, 12).value;
    EXPECT_NEAR(g, v_of_S(S, 12).value, 0.1) << S.describe();
    EXPECT_NEAR(g, static_cast<double>(*S.oracle_v()), 0.1) << S.describe();
  }
}

TEST(LambdaOfPsi, Examples) {
  const auto S = SetFamily::all_nonzero(F2, 1);
  const auto p3 = lambda_of_psi(ApproxFunction::power(3), S, 24);
  EXPECT_EQ(*p3.exact, 3);
  EXPECT_DOUBLE_EQ(p3.value, 3.0);
  EXPECT_TRUE(p3.converged);
  const auto pl = lambda_of_psi(ApproxFunction::power_log(2, 1), S, 64);
  EXPECT_NEAR(pl.value, 2.0, 0.1);
  EXPECT_TRUE(pl.converged);
  const auto tab = lambda_of_psi(ApproxFunction::table(interleaved(64)), S, 64);
  EXPECT_FALSE(tab.converged);
  EXPECT_FALSE(tab.exact.has_value());
  EXPECT_THROW(lambda_of_psi(ApproxFunction::table({}), S, 16), DomainError);
}

TEST(LambdaOfPsi, RestrictedAlongSparseSupport) {
  const auto lac = SetFamily::lacunary(F2, 1, 2);
  const auto hat = ApproxFunction::restricted(ApproxFunction::power(2), lac);
  const auto e = lambda_of_psi(hat, SetFamily::all_nonzero(F2, 1), 64);
  EXPECT_NEAR(e.value, 2.0, 1e-9);
  EXPECT_EQ(*e.exact, 2);
  const auto q = PolyVector({Polynomial::monomial(F2, 3, 1)});
  EXPECT_FALSE(hat.at(q).has_value());
  EXPECT_EQ(*hat.at(PolyVector({Polynomial::monomial(F2, 4, 1)})), -8);
}

TEST(EtaOfPsi, PowerClosedForm) {
  for (std::size_t m : {1u, 2u})
    for (std::size_t n : {1u, 2u})
      for (int v : {2, 3}) {
        const auto S = SetFamily::all_nonzero(F2, m);
        const auto e = eta_of_psi(ApproxFunction::power(v), S, n, 12);
        const Rational expect(static_cast<long long>(m + n), v + 1);
        EXPECT_EQ(*e.exact, expect);
        EXPECT_NEAR(e.value, static_cast<double>(expect), 0.05) << m << n << v;
      }
  EXPECT_EQ(*eta_of_psi(ApproxFunction::power(3), SetFamily::all_nonzero(F2, 1), 1, 12).exact, Rational(1, 2));
}

TEST(EtaOfPsi, ConstantPsiIsFlagged) {
  std::map<int, std::optional<std::int64_t>> c;
  for (int N = 0; N <= 12; ++N) c[N] = -3;
  const auto e = eta_of_psi(ApproxFunction::table(c), SetFamily::all_nonzero(F2, 1), 1, 12);
  EXPECT_FALSE(e.converged);
  EXPECT_NEAR(e.value, 2.0, 1e-9);
  EXPECT_THROW(eta_of_psi(ApproxFunction::table({}), SetFamily::all_nonzero(F2, 1), 1, 12), DomainError);
}

TEST(EtaOfPsi, LacunarySupport) {
  const auto lac = SetFamily::lacunary(F2, 1, 2);
  const auto hat = ApproxFunction::restricted(ApproxFunction::power(3), lac);
  const auto e = eta_of_psi(hat, SetFamily::all_nonzero(F2, 1), 1, 64);
  // Blocks at N = 2^j carry 2^N vectors: the block terms are 2^(2N - eta 4N).
  EXPECT_NEAR(e.value, 0.5, 0.05);
}

TEST(CountsC, DefinitionAndMonotone) {
  const auto S = SetFamily::all_nonzero(F2, 1);
  const auto psi = ApproxFunction::power(2);
  for (int N = 0; N <= 8; ++N) {
    EXPECT_EQ(C_of(N, 1, psi, S), 1);  // only the N = 0 block, where psi = 1
    EXPECT_EQ(C_of(N, 2, psi, S), big_pow(2, N + 1) - 1);
    EXPECT_EQ(C_of(N, 3, psi, S), big_pow(2, N + 1) - 1);
  }
  for (int N = 0; N < 8; ++N)
    for (const Rational v : {Rational(1), Rational(5, 2), Rational(4)}) {
      EXPECT_LE(C_of(N, v, psi, S), C_of(N + 1, v, psi, S));
      EXPECT_LE(C_of(N, v, psi, S), C_of(N, v + 1, psi, S));
    }
}

TEST(DeltaOf, PowerFamily) {
  const auto S = SetFamily::all_nonzero(F2, 1);
  const auto psi = ApproxFunction::power(3);
  const auto g = gamma_of(3, psi, S, 12);
  EXPECT_NEAR(g.value, 1.0, 0.1);
  EXPECT_EQ(*g.exact, 1);
  const auto d = delta_of(3, psi, 1, S, 12);
  EXPECT_EQ(*d.exact, Rational(1, 2));
  EXPECT_EQ(*d.exact, *eta_of_psi(psi, S, 1, 12).exact);
  const auto below = delta_of(2, psi, 1, S, 12);
  EXPECT_FALSE(below.converged);
  EXPECT_EQ(*below.exact, 0);
  const auto sup = delta_sup(psi, 1, S, arithmetic_grid(0, 6, Rational(1, 4)), 12);
  EXPECT_EQ(sup.argmax, 3);
  EXPECT_NEAR(sup.value.value, 0.5, 0.05);
}

TEST(DeltaOf, CompareExponents) {
  for (std::size_t m : {1u, 2u})
    for (std::size_t n : {1u, 2u})
      for (int v : {2, 3, 4}) {
        const auto S = SetFamily::all_nonzero(F2, m);
        const auto psi = ApproxFunction::power(v);
        const auto sup = delta_sup(psi, n, S, arithmetic_grid(0, 8, Rational(1, 2)), 12);
        const auto eta = eta_of_psi(psi, S, n, 12);
        const double nn = static_cast<double>(n);
        EXPECT_GE(std::min(sup.value.value, nn) + 0.05, std::min(eta.value, nn));
        EXPECT_EQ(*sup.value.exact, *eta.exact);
      }
}

TEST(LargeBlocks, Witnesses) {
  const auto all1 = SetFamily::all_nonzero(F2, 1);
  const auto w = large_blocks_witnesses(all1, 1, Rational(1, 2), 10);
  EXPECT_EQ(w.size(), 11u);
  const auto lac = SetFamily::lacunary(F2, 1, 2);
  EXPECT_EQ(large_blocks_witnesses(lac, 1, Rational(1, 2), 10), (std::vector<int>{1, 2, 4, 8}));
  const auto many = large_blocks_witnesses(SetFamily::all_nonzero(F2, 2), 2, 3, 6);
  EXPECT_EQ(many.size(), 7u);
  for (int N0 = 0; N0 <= 6; ++N0) {
    const auto ws = large_blocks_witnesses(all1, 1, Rational(1, 10), 10);
    EXPECT_TRUE(std::any_of(ws.begin(), ws.end(), [&](int N) { return N > N0; }));
  }
  EXPECT_THROW(large_blocks_witnesses(all1, 1, 0, 4), DomainError);
}

TEST(Split, PowerFamilyCover) {
  const auto S = SetFamily::all_nonzero(F2, 1);
  const auto psi = ApproxFunction::power(3);
  const auto rep = split_S_prime_and_Svtheta(psi, S, 1, Rational(3, 5), Rational(1, 4), 12);
  EXPECT_TRUE(rep.covers);
  EXPECT_EQ(rep.mu, Rational(10, 3));
  // Every q with N >= 1 has psi = |q|^-3 exactly: it sits in S(3, 1/4) and S(13/4, 1/4).
  BigInt in_three = 0;
  for (const auto& p : rep.parts)
    if (p.v == 3 || p.v == Rational(13, 4)) {
      EXPECT_EQ(p.members, big_pow(2, 13) - 1);
      EXPECT_TRUE(p.majorant_converges);
      EXPECT_TRUE(p.terms_decrease);
    }
  EXPECT_TRUE(rep.parts[0].majorant_converges);
  for (const auto& p : rep.parts) EXPECT_TRUE(p.majorant_converges) << rational_string(p.v);
  // mu < v0: all large q fall in S'.
  const auto low = split_S_prime_and_Svtheta(psi, S, 1, Rational(3, 2), Rational(1, 4), 12);
  EXPECT_TRUE(low.covers);
  EXPECT_EQ(low.parts[0].members, big_pow(2, 13) - 2);
  EXPECT_TRUE(low.parts[0].terms_decrease);
  EXPECT_THROW(split_S_prime_and_Svtheta(psi, S, 1, 1, 0, 8), DomainError);
}

TEST(Split, RestrictedPsiStillCovers) {
  const auto hat = ApproxFunction::restricted(ApproxFunction::power(2), SetFamily::lacunary(F2, 2, 2));
  const auto rep = split_S_prime_and_Svtheta(hat, SetFamily::all_nonzero(F2, 2), 1, 1, Rational(1, 3), 9);
  EXPECT_TRUE(rep.covers);
  BigInt total = 0;
  for (const auto& p : rep.parts) total += p.members;
  EXPECT_GE(total, big_pow(4, 10) - 1);
}
