// K-group assembly: residue-field part, order identities, vanishing bound.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "synk/ktheory.hpp"

using namespace synk;

TEST_CASE("even vanishing bound: 12 for Z/4 and 18 for Z/9") {
  CHECK(even_vanishing_bound(2, 1, 2) == 12);
  CHECK(even_vanishing_bound(3, 1, 2) == 18);
  // Depends on n only through ceil(n/e).
  CHECK(even_vanishing_bound(2, 2, 3) == even_vanishing_bound(2, 1, 2));
  CHECK(even_vanishing_bound(2, 2, 4) == even_vanishing_bound(2, 1, 2));
}

TEST_CASE("residue field K-groups") {
  auto k0 = quillen_k(2, 1, 0);
  CHECK(k0.infinite_cyclic);
  for (int i = 1; i <= 5; ++i) {
    auto odd = quillen_k(2, 1, 2 * i - 1);
    mpz_class want = (mpz_class(1) << i) - 1;  // 2^i - 1
    CHECK(odd.order() == want);
    CHECK(odd.ppart.trivial());
    if (i >= 2) CHECK(quillen_k(2, 1, 2 * i - 2).trivial());
  }
  // q = 9 at f = 2.
  CHECK(quillen_k(3, 2, 3) .order() == 80);
}

TEST_CASE("odd order formula q^{i(n-1)} (q^i - 1)") {
  CHECK(odd_order(2, 1, 2, 2) == 4 * 3);
  CHECK(odd_order(2, 1, 3, 4) == mpz_class(1 << 8) * 15);
  CHECK(odd_order(3, 1, 2, 3) == 27 * 26);
}

TEST_CASE("ratio and weight-1 identities") {
  AbelianPGroup h1{2, {3}}, h2{2, {1}};
  CHECK(ratio_check(2, 2, 1, h1, h2));        // 8 / 2 = 4 = 2^{2*1}
  CHECK_FALSE(ratio_check(3, 2, 1, h1, h2));  // 4 != 8
  AbelianPGroup u{2, {1}}, zero{2, {}};
  CHECK(k1_units_check(2, 1, u, zero));
  CHECK_FALSE(k1_units_check(3, 1, u, zero));  // |H1| must be q^2
  CHECK_FALSE(k1_units_check(2, 1, u, u));     // H2 must vanish
}

TEST_CASE("integral assembly: #K_3(Z/4) = 24 and #K_5(Z/9) = 81 * 26") {
  AbelianPGroup h1_z4{2, {3}};  // H^1 in weight 2 of Z/4
  auto k3 = assemble_integral(2, 1, 3, h1_z4);
  CHECK(k3.order() == 24);
  AbelianPGroup h1_z9{3, {4}};  // H^1 in weight 3 of Z/9
  auto k5 = assemble_integral(3, 1, 5, h1_z9);
  CHECK(k5.order() == 81 * 26);
  // Even degrees carry no residue-field contribution.
  AbelianPGroup h2{2, {1}};
  CHECK(assemble_integral(2, 1, 2, h2).order() == 2);
}
