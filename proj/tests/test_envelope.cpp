// Envelope corners: field-spec validation, ranks per weight, digit-rule
// consistency, homomorphism matrices and the degree-one twist.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "synk/envelope.hpp"
#include "synk/labels.hpp"

using namespace synk;

namespace {

FieldSpec qspec(unsigned long p) { return parse_eisenstein(p, "z-" + std::to_string(p)); }

Elem random_elem(const Ring& rg, std::mt19937& rng, int max_terms) {
  std::uniform_int_distribution<int> pick(0, rg.dim() - 1);
  std::uniform_int_distribution<long> coef(-200, 200);
  Elem a;
  for (int t = 0; t < max_terms; ++t) {
    Elem mono;
    mono.t.emplace(rg.basis[static_cast<size_t>(pick(rng))], mpz_class(1));
    a = rg.add(a, rg.scal(mpz_class(coef(rng)), mono));
  }
  return a;
}

}  // namespace

TEST_CASE("field spec validation") {
  CHECK_NOTHROW(validate_field_spec(parse_eisenstein(2, "z-2")));
  CHECK_NOTHROW(validate_field_spec(parse_eisenstein(2, "z^2+2z+2")));
  CHECK_NOTHROW(validate_field_spec(parse_eisenstein(3, "z^2-3")));
  // Constant term must have valuation exactly 1.
  CHECK_THROWS_AS(validate_field_spec(parse_eisenstein(2, "z^2+4")), computation_error);
  CHECK_THROWS_AS(validate_field_spec(parse_eisenstein(2, "z^2+3")), computation_error);
  // Middle coefficients must be divisible by p.
  CHECK_THROWS_AS(validate_field_spec(parse_eisenstein(2, "z^2+z+2")), computation_error);
  // Garbage input.
  CHECK_THROWS_AS(parse_eisenstein(2, "zz++2"), computation_error);
}

TEST_CASE("eisenstein parsing round trip") {
  FieldSpec s = parse_eisenstein(2, "z^2+2z+2");
  CHECK(s.e == 2);
  CHECK(s.eisenstein == std::vector<mpz_class>{2, 2, 1});
  FieldSpec t = parse_eisenstein(5, "z-5");
  CHECK(t.e == 1);
  CHECK(t.eisenstein == std::vector<mpz_class>{-5, 1});
}

TEST_CASE("bundled labels resolve and validate") {
  for (const auto& L : bundled_labels()) {
    CHECK_NOTHROW(validate_field_spec(L.spec));
    CHECK(spec_from_label(L.label).eisenstein == L.spec.eisenstein);
  }
  CHECK_THROWS_AS(spec_from_label("no-such-label"), computation_error);
}

TEST_CASE("corner ranks per weight: 1 at level 0, w+1 at level 1") {
  Zmod R(2, 40);
  for (int b : {3, 5, 8}) {
    EnvelopeRing E0 = build_envelope(R, qspec(2), 2, b, 0, false);
    REQUIRE(static_cast<int>(E0.ring.rank_per_weight.size()) == b + 1);
    for (int w = 0; w <= b; ++w) REQUIRE(E0.ring.rank_per_weight[w] == 1);
    EnvelopeRing E1 = build_envelope(R, qspec(2), 2, b, 1, false);
    for (int w = 0; w <= b; ++w) REQUIRE(E1.ring.rank_per_weight[w] == w + 1);
    REQUIRE(E1.ring.dim() == (b + 1) * (b + 2) / 2);
  }
}

TEST_CASE("digit rules are delta-consistent in the truncated ring") {
  // phi(a) = a^p + p*delta(a) must keep holding against the installed
  // exponent-cap rules for random elements of a quotient-style corner.
  for (unsigned long p : {2ul, 3ul}) {
    Zmod R(p, 30);
    EnvelopeRing E0 = build_envelope(R, qspec(p), 3, 6, 0, false);
    const Ring& rg = E0.ring;
    std::mt19937 rng(p);
    for (int t = 0; t < 200; ++t) {
      Elem a = random_elem(rg, rng, 3);
      Elem c = random_elem(rg, rng, 3);
      REQUIRE(rg.phi(rg.mul(a, c)) == rg.mul(rg.phi(a), rg.phi(c)));
      REQUIRE(rg.phi(a) ==
              rg.add(rg.pow(a, static_cast<int>(p)), rg.scal(mpz_class(p), rg.delta(a))));
    }
  }
}

TEST_CASE("cap relation: z0^cap0 reduces out of the normal-form basis") {
  Zmod R(2, 30);
  EnvelopeRing E0 = build_envelope(R, qspec(2), 2, 7, 0, false);
  // No basis monomial contains z0^cap0 or any higher power.
  for (const Mono& m : E0.ring.basis)
    REQUIRE(m[static_cast<size_t>(E0.z0)] < E0.cap0);
}

TEST_CASE("mult_matrix represents ring multiplication") {
  Zmod R(3, 24);
  EnvelopeRing E1 = build_envelope(R, qspec(3), 2, 5, 1, false);
  const Ring& rg = E1.ring;
  std::mt19937 rng(11);
  for (int t = 0; t < 30; ++t) {
    Elem a = random_elem(rg, rng, 4);
    Elem v = random_elem(rg, rng, 4);
    PadicMatrix M = mult_matrix(R, rg, a);
    auto got = mat_vec(R, M, rg.to_vec(rg.normalize(v)));
    auto want = rg.to_vec(rg.mul(a, v));
    REQUIRE(got == want);
  }
}

TEST_CASE("hom_matrix represents substitution homomorphisms") {
  Zmod R(2, 24);
  EnvelopeRing E0 = build_envelope(R, qspec(2), 2, 6, 0, false);
  const Ring& rg = E0.ring;
  // Identity images give the identity matrix.
  std::vector<Elem> ids;
  for (size_t g = 0; g < rg.gens.size(); ++g) ids.push_back(rg.gen_elem(static_cast<int>(g)));
  CHECK(hom_matrix(R, rg, ids, rg) == PadicMatrix::identity(rg.dim()));
  // Frobenius as a substitution: images phi(g) reproduce the action of phi.
  std::vector<Elem> phis;
  for (size_t g = 0; g < rg.gens.size(); ++g) phis.push_back(rg.phi_gen(static_cast<int>(g)));
  PadicMatrix F = hom_matrix(R, rg, phis, rg);
  std::mt19937 rng(23);
  for (int t = 0; t < 30; ++t) {
    Elem a = random_elem(rg, rng, 4);
    REQUIRE(mat_vec(R, F, rg.to_vec(rg.normalize(a))) == rg.to_vec(rg.phi(a)));
  }
}

TEST_CASE("eval_window is plain polynomial evaluation") {
  Zmod R(2, 20);
  EnvelopeRing E0 = build_envelope(R, qspec(2), 2, 5, 0, false);
  const Ring& rg = E0.ring;
  std::vector<mpz_class> c{3, 1, 7, 0, 2, 5};
  Elem x = rg.gen_elem(E0.z0);
  Elem want;
  for (int j = 0; j <= 5; ++j)
    want = rg.add(want, rg.scal(c[static_cast<size_t>(j)], rg.pow(x, j)));
  CHECK(eval_window(rg, c, x) == want);
}

TEST_CASE("twist: unit leading coefficient, stable under precision changes") {
  for (const char* eis : {"z-2", "z^2+2z+2", "z^2+2"}) {
    FieldSpec spec = parse_eisenstein(2, eis);
    int b = 7;
    TwistData t1 = compute_twist(2, spec.eisenstein, b, Zmod(2, 40));
    TwistData t2 = compute_twist(2, spec.eisenstein, b, Zmod(2, 60));
    REQUIRE(t1.u.size() == static_cast<size_t>(b + 1));
    CHECK(Zmod(2, 40).is_unit(t1.u[0]));
    Zmod R40(2, 40);
    for (size_t j = 0; j <= static_cast<size_t>(b); ++j) {
      REQUIRE(R40.reduce(t2.u[j]) == t1.u[j]);
      REQUIRE(R40.reduce(t2.C[j]) == t1.C[j]);
    }
  }
}
