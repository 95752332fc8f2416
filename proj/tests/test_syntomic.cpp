// Syntomic complexes of small chain rings: golden cohomology values, the
// commuting-square identities, window stability and generator-change
// invariance.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "synk/labels.hpp"
#include "synk/syntomic.hpp"

using namespace synk;

namespace {

bool matrix_zero_mod(const Zmod& R, const PadicMatrix& M, int tol) {
  Zmod Rq(R.p, R.N - tol);
  for (const auto& x : M.a)
    if (Rq.reduce(x) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("Z/4: weights 1..3 give (Z/2,-), (Z/8, Z/2), (Z/8, 0)") {
  FieldSpec q2 = spec_from_label("q2");
  auto r1 = syntomic_cohomology(q2, 2, 1);
  CHECK(r1.certified);
  CHECK(r1.h1.exponents == std::vector<int>{1});
  CHECK(r1.h2.trivial());
  auto r2 = syntomic_cohomology(q2, 2, 2);
  CHECK(r2.certified);
  CHECK(r2.h1.exponents == std::vector<int>{3});
  CHECK(r2.h2.exponents == std::vector<int>{1});
  auto r3 = syntomic_cohomology(q2, 2, 3);
  CHECK(r3.certified);
  CHECK(r3.h1.exponents == std::vector<int>{3});
  CHECK(r3.h2.trivial());
}

TEST_CASE("Z/9: weights 1 and 3") {
  FieldSpec q3 = spec_from_label("q3");
  auto r1 = syntomic_cohomology(q3, 2, 1);
  CHECK(r1.certified);
  CHECK(r1.h1.exponents == std::vector<int>{1});
  CHECK(r1.h2.trivial());
  auto r3 = syntomic_cohomology(q3, 2, 3);
  CHECK(r3.certified);
  CHECK(r3.h1.exponents == std::vector<int>{4});
  CHECK(r3.h2.exponents == std::vector<int>{1});
}

TEST_CASE("square commutes and syn1 * syn0 = 0 on computed weights") {
  for (const char* label : {"q2", "2.2.2.1"}) {
    FieldSpec spec = spec_from_label(label);
    for (int i = 1; i <= 3; ++i) {
      auto r = syntomic_cohomology(spec, 2, i);
      REQUIRE(r.certified);
      Zmod R(spec.p, r.precision_used);
      const SyntomicSquare& sq = r.square;
      int tol = r.guard + 4;
      // v1*h0 - h1*v0 = 0 up to accumulated precision loss.
      PadicMatrix lhs = mat_mul(R, sq.v1, sq.h0);
      PadicMatrix rhs = mat_mul(R, sq.h1, sq.v0);
      PadicMatrix diff(lhs.rows, lhs.cols);
      for (size_t k = 0; k < diff.a.size(); ++k)
        diff.a[k] = R.sub(lhs.a[k], rhs.a[k]);
      REQUIRE(matrix_zero_mod(R, diff, tol));
      REQUIRE(matrix_zero_mod(R, mat_mul(R, sq.syn1, sq.syn0), tol));
    }
  }
}

TEST_CASE("window stability: widening b by one does not change the answer") {
  FieldSpec q2 = spec_from_label("q2");
  for (int i = 1; i <= 4; ++i) {
    auto base = syntomic_cohomology(q2, 2, i);
    SyntomicOptions wide;
    wide.bshift = 1;
    auto shifted = syntomic_cohomology(q2, 2, i, wide);
    REQUIRE(base.certified);
    REQUIRE(shifted.certified);
    REQUIRE(base.h1 == shifted.h1);
    REQUIRE(base.h2 == shifted.h2);
  }
}

TEST_CASE("generator-change invariance: a window unit tweak is invisible") {
  FieldSpec s = spec_from_label("2.2.3.3");
  SyntomicOptions tweaked;
  tweaked.tweak = {1, 1};  // replace the generator image by (1 + z) * z
  for (int i = 1; i <= 3; ++i) {
    auto base = syntomic_cohomology(s, 3, i);
    auto alt = syntomic_cohomology(s, 3, i, tweaked);
    REQUIRE(base.certified);
    REQUIRE(alt.certified);
    REQUIRE(base.h1 == alt.h1);
    REQUIRE(base.h2 == alt.h2);
  }
}

TEST_CASE("complex shape: f(in-1) / 2f(in-1) / f(in-1)") {
  FieldSpec s = spec_from_label("q2-sqrt2");
  auto r = syntomic_cohomology(s, 2, 2);
  int b = weight_bound(2, 2);
  CHECK(r.b == b);
  CHECK(r.square.syn0.rows == 2 * b);
  CHECK(r.square.syn0.cols == b);
  CHECK(r.square.syn1.rows == b);
  CHECK(r.square.syn1.cols == 2 * b);
}

TEST_CASE("residue field: no p-torsion at n = 1") {
  FieldSpec q2 = spec_from_label("q2");
  for (int i = 1; i <= 3; ++i) {
    auto r = syntomic_cohomology(q2, 1, i);
    REQUIRE(r.certified);
    REQUIRE(r.h1.trivial());
    REQUIRE(r.h2.trivial());
  }
}

TEST_CASE("f > 1 is rejected") {
  FieldSpec s = spec_from_label("q2");
  s.f = 2;
  CHECK_THROWS_WITH_AS(static_cast<void>(syntomic_cohomology(s, 2, 1)),
                       doctest::Contains("not yet supported"),
                       computation_error);
}
