#include "error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fcg {
namespace {

using test::random_vector;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

bool same_tensor(const SymTensor& a, const SymTensor& b) {
  if (a.order() != b.order() || a.dim() != b.dim() || a.unique_count() != b.unique_count()) {
    return false;
  }
  for (std::size_t k = 0; k < a.unique_count(); ++k) {
    if (a.unique_value(k) != b.unique_value(k)) return false;
  }
  return true;
}

TEST(Ex1, HardcodedEntries) {
  const SymTensor a = gen_tensor({TensorFamily::Ex1, 0, 0, 0});
  EXPECT_EQ(a.order(), 3);
  EXPECT_EQ(a.dim(), 3);
  EXPECT_EQ(a.unique_count(), 10u);
  EXPECT_DOUBLE_EQ(a.entry(std::vector<int>{0, 1, 2}), -0.1790);
  EXPECT_DOUBLE_EQ(a.entry(std::vector<int>{0, 0, 0}), -0.1281);
  EXPECT_DOUBLE_EQ(a.txm(Vector{{1.0, 0.0, 0.0}}), -0.1281);
  EXPECT_NO_THROW(gen_tensor({TensorFamily::Ex1, 3, 3, 0}));
  EXPECT_EQ(code_of([] { gen_tensor({TensorFamily::Ex1, 4, 3, 0}); }), ErrorCode::InvalidSpec);
}

TEST(Ex6, HardcodedEntries) {
  const SymTensor a = gen_tensor({TensorFamily::Ex6, 0, 0, 0});
  EXPECT_EQ(a.order(), 4);
  EXPECT_EQ(a.unique_count(), 15u);
  EXPECT_DOUBLE_EQ(a.entry(std::vector<int>{0, 0, 0, 0}), 0.2883);
  EXPECT_DOUBLE_EQ(a.entry(std::vector<int>{2, 1, 2, 2}), 0.2727);
  EXPECT_EQ(code_of([] { gen_tensor({TensorFamily::Ex6, 4, 5, 0}); }), ErrorCode::InvalidSpec);
}

TEST(Ex2, SineOfIndexSum) {
  const SymTensor one = gen_tensor({TensorFamily::Ex2, 3, 1, 0});
  ASSERT_EQ(one.unique_count(), 1u);
  EXPECT_DOUBLE_EQ(one.unique_value(0), std::sin(3.0));
  const SymTensor a = gen_tensor({TensorFamily::Ex2, 4, 5, 0});
  EXPECT_DOUBLE_EQ(a.entry(std::vector<int>{4, 0, 2, 1}), std::sin(5.0 + 1.0 + 3.0 + 2.0));
}

TEST(Ex3, UniformEntriesAndDeterminism) {
  const SymTensor a = gen_tensor({TensorFamily::Ex3, 3, 6, 11});
  EXPECT_EQ(a.unique_count(), 56u);  // C(8, 3)
  for (std::size_t k = 0; k < a.unique_count(); ++k) {
    EXPECT_GE(a.unique_value(k), -1.0);
    EXPECT_LT(a.unique_value(k), 1.0);
  }
  EXPECT_TRUE(same_tensor(a, gen_tensor({TensorFamily::Ex3, 3, 6, 11})));
  EXPECT_FALSE(same_tensor(a, gen_tensor({TensorFamily::Ex3, 3, 6, 12})));
  EXPECT_EQ(a.entry(std::vector<int>{5, 0, 3}), a.entry(std::vector<int>{3, 5, 0}));
}

TEST(Ex3, ShapeErrors) {
  EXPECT_EQ(code_of([] { gen_tensor({TensorFamily::Ex3, 1, 4, 0}); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([] { gen_tensor({TensorFamily::Ex3, 3, 0, 0}); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([] { gen_tensor({TensorFamily::Ex3, 10, 1000, 0}); }), ErrorCode::InvalidSpec);
}

TEST(Ex4, ArctanGenerator) {
  const SymTensor a = gen_tensor({TensorFamily::Ex4, 3, 2, 0});
  ASSERT_TRUE(a.is_sum_unary());
  EXPECT_DOUBLE_EQ(a.generator()[0], std::atan(-0.5));
  EXPECT_DOUBLE_EQ(a.generator()[1], std::atan(1.0));
  const SymTensor big = gen_tensor({TensorFamily::Ex4, 3, 7, 0});
  EXPECT_DOUBLE_EQ(big.generator()[4], std::atan(-5.0 / 7.0));
}

TEST(Ex5, UniformGenerator) {
  const SymTensor a = gen_tensor({TensorFamily::Ex5, 6, 50, 3});
  ASSERT_TRUE(a.is_sum_unary());
  EXPECT_LE(a.generator().cwiseAbs().maxCoeff(), 1.0);
  EXPECT_EQ(a.generator(), gen_tensor({TensorFamily::Ex5, 6, 50, 3}).generator());
  EXPECT_NE(a.generator(), gen_tensor({TensorFamily::Ex5, 6, 50, 4}).generator());
}

TEST(StructuredFamilies, AgreeWithDenseExpansion) {
  Rng rng(1);
  for (auto family : {TensorFamily::Ex4, TensorFamily::Ex5}) {
    for (int m = 2; m <= 4; ++m) {
      for (int n = 1; n <= 5; ++n) {
        const SymTensor su = gen_tensor({family, m, n, 9});
        const SymTensor dense = su.expanded();
        // Raw entries follow the sum definition.
        std::vector<int> idx(m, n - 1);
        idx[0] = 0;
        double want = 0.0;
        for (int i : idx) want += su.generator()[i];
        EXPECT_DOUBLE_EQ(dense.entry(idx), want);
        const Vector x = random_vector(rng, n);
        EXPECT_LE(test::rel_err(su.txm(x), dense.txm(x)), 1e-12);
        EXPECT_LE(test::rel_err(su.txm1(x), dense.txm1(x)), 1e-12);
      }
    }
  }
}

TEST(Ex7, SymmetricPositiveDefinite) {
  const Matrix d = ex7_matrix(6, 4);
  EXPECT_EQ(d, d.transpose());
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const Vector x = random_vector(rng, 6);
    EXPECT_GE(x.dot(d * x), 0.1 * x.squaredNorm() * (1.0 - 1e-12));
  }
  EXPECT_EQ(d, ex7_matrix(6, 4));
  const BForm b = gen_bform({BFamily::Ex7, 4, 6, 4});
  EXPECT_EQ(b.kind(), BForm::Kind::QuadFormPower);
  EXPECT_EQ(b.quad_matrix(), d);
}

TEST(Ex8, DiagonallyDominantForm) {
  for (int order : {2, 4}) {
    const int n = 4;
    const BForm b = gen_bform({BFamily::Ex8, order, n, 3});
    ASSERT_EQ(b.kind(), BForm::Kind::Dense);
    const SymTensor& t = *b.tensor();

    // Absolute off-diagonal row sums over every raw index tuple with leading i.
    Vector rows = Vector::Zero(n);
    std::vector<int> idx(order, 0);
    while (true) {
      const bool diagonal = std::all_of(idx.begin(), idx.end(), [&](int v) { return v == idx[0]; });
      if (!diagonal) rows[idx[0]] += std::abs(t.entry(idx));
      int p = order - 1;
      while (p >= 0 && ++idx[p] == n) idx[p--] = 0;
      if (p < 0) break;
    }
    const double s = 1.01 * rows.maxCoeff();
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(t.entry(std::vector<int>(order, i)), s, 1e-12 * s) << order;
    }
    Rng rng(5);
    for (int k = 0; k < 100; ++k) {
      EXPECT_GT(b.phi(random_vector(rng, n).normalized()), 0.0) << order;
    }
  }
}

TEST(BForms, SpecErrors) {
  EXPECT_EQ(code_of([] { gen_bform({BFamily::Ex8, 4, 1, 0}); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([] { gen_bform({BFamily::Ex7, 3, 4, 0}); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([] { gen_bform({BFamily::Identity2, 4, 4, 0}); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([] { gen_bform({BFamily::DiagPower, 2, 0, 0}); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(gen_bform({BFamily::DiagPower, 6, 3, 0}).order(), 6);
  EXPECT_DOUBLE_EQ(gen_bform({BFamily::Identity2, 2, 2, 0}).phi(Vector{{3.0, 4.0}}), 25.0);
}

TEST(Names, RoundTrip) {
  for (auto f : {TensorFamily::Ex1, TensorFamily::Ex2, TensorFamily::Ex3, TensorFamily::Ex4,
                 TensorFamily::Ex5, TensorFamily::Ex6}) {
    EXPECT_EQ(parse_tensor_family(to_string(f)), f);
  }
  for (auto f : {BFamily::Identity2, BFamily::DiagPower, BFamily::Ex7, BFamily::Ex8}) {
    EXPECT_EQ(parse_bfamily(to_string(f)), f);
  }
  EXPECT_FALSE(parse_tensor_family("ex7"));
  EXPECT_FALSE(parse_bfamily("ex1"));
}

TEST(Rng, StreamsAreIndependentAndReproducible) {
  Rng a(42, 0);
  Rng b(42, 0);
  Rng c(42, 1);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    const double va = a.unit();
    EXPECT_EQ(va, b.unit());
    differs |= va != c.unit();
    EXPECT_GE(va, 0.0);
    EXPECT_LT(va, 1.0);
  }
  EXPECT_TRUE(differs);
}

}  // namespace
}  // namespace fcg
