#include <gtest/gtest.h>

#include "ffdioph/field.hpp"

using namespace ffdioph;

namespace {

// F_4 = F_2[t]/(t^2+t+1); rep 2 is t, rep 3 is t+1.
constexpr Rep kT = 2, kT1 = 3;

}  // namespace

TEST(Field, SmallExamples) {
  const auto f2 = FieldSpec::make(2), f3 = FieldSpec::make(3), f4 = FieldSpec::make(2, 2);
  EXPECT_EQ(f2.add(1, 1), 0u);
  EXPECT_EQ(f3.add(2, 2), 1u);
  EXPECT_EQ(f4.modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
  EXPECT_EQ(f4.add(kT, kT1), 1u);
  EXPECT_EQ(f2.mul(1, 1), 1u);
  EXPECT_EQ(f4.mul(kT, kT), kT1);
  EXPECT_EQ(f3.inv(2), 2u);
  EXPECT_EQ(f2.inv(1), 1u);
  EXPECT_EQ(f4.inv(kT), kT1);
  for (Rep a = 0; a < 4; ++a) EXPECT_EQ(f4.mul(a, 0), 0u);
}

TEST(Field, InverseBySearch) {
  for (auto [p, l] : {std::pair{2u, 3u}, {3u, 2u}, {5u, 1u}, {2u, 4u}}) {
    const auto f = FieldSpec::make(p, l);
    for (Rep a = 1; a < f.k(); ++a) {
      Rep found = 0;
      for (Rep b = 1; b < f.k(); ++b)
        if (f.mul_reference(a, b) == 1) found = b;
      EXPECT_EQ(f.inv(a), found) << f.describe() << " a=" << a;
    }
  }
  EXPECT_THROW(FieldSpec::make(3).inv(0), DivisionByZeroError);
}

TEST(Field, EnumerateOrder) {
  EXPECT_EQ(ff_enumerate(FieldSpec::make(2)).size(), 2u);
  const auto els = ff_enumerate(FieldSpec::make(3));
  ASSERT_EQ(els.size(), 3u);
  for (Rep i = 0; i < 3; ++i) EXPECT_EQ(els[i].rep, i);
  const auto f4 = ff_enumerate(FieldSpec::make(2, 2));
  EXPECT_EQ(f4.size(), 4u);
  EXPECT_EQ(f4[0].rep, 0u);
  EXPECT_EQ(f4[1].rep, 1u);
}

TEST(Field, AxiomsExhaustive) {
  for (std::uint32_t k : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const auto f = FieldSpec::of_size(k);
    for (Rep a = 0; a < k; ++a) {
      EXPECT_EQ(f.add(a, 0), a);
      EXPECT_EQ(f.mul(a, 1), a);
      EXPECT_EQ(f.add(a, f.neg(a)), 0u);
      if (a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
      for (Rep b = 0; b < k; ++b) {
        EXPECT_EQ(f.add(a, b), f.add(b, a));
        EXPECT_EQ(f.mul(a, b), f.mul(b, a));
        EXPECT_EQ(f.mul(a, b), f.mul_reference(a, b));
        for (Rep c = 0; c < k; ++c) {
          EXPECT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
          EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
          EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
      }
    }
  }
}

TEST(Field, FrobeniusIsAdditive) {
  for (std::uint32_t k : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const auto f = FieldSpec::of_size(k);
    auto frob = [&](Rep a) {
      Rep r = 1;
      for (std::uint32_t i = 0; i < f.p(); ++i) r = f.mul(r, a);
      return r;
    };
    for (Rep a = 0; a < k; ++a)
      for (Rep b = 0; b < k; ++b) EXPECT_EQ(frob(f.add(a, b)), f.add(frob(a), frob(b)));
  }
}

TEST(Field, TablesMatchReferenceOnLargerFields) {
  for (std::uint32_t k : {16u, 25u, 27u, 49u, 64u, 81u, 128u, 243u, 256u}) {
    const auto f = FieldSpec::of_size(k);
    for (Rep a = 0; a < k; ++a)
      for (Rep b = 0; b < k; ++b) ASSERT_EQ(f.mul(a, b), f.mul_reference(a, b)) << "k=" << k;
  }
}

TEST(Field, ConstructionErrors) {
  EXPECT_THROW(FieldSpec::make(4), DomainError);
  EXPECT_THROW(FieldSpec::make(2, 2, {1, 0, 1}), DomainError);  // t^2+1 = (t+1)^2
  EXPECT_THROW(FieldSpec::make(2, 2, {1, 1}), DomainError);
  EXPECT_THROW(FieldSpec::of_size(6), DomainError);
  EXPECT_NO_THROW(FieldSpec::make(3, 2, {2, 2, 1}));
}

TEST(Field, MixingFieldsIsRejected) {
  const auto f3 = FieldSpec::make(3);
  const auto f9a = FieldSpec::make(3, 2);
  const auto f9b = FieldSpec::make(3, 2, {2, 2, 1});
  EXPECT_FALSE(f9a == f9b);
  EXPECT_TRUE(f9a == FieldSpec::make(3, 2));
  EXPECT_THROW(ff_add({1, f3}, {1, f9a}), FieldMismatchError);
  EXPECT_THROW(ff_mul({1, f9a}, {1, f9b}), FieldMismatchError);
  EXPECT_EQ(ff_add({1, f3}, {2, f3}).rep, 0u);
}
