// Weight-truncated delta-rings with monomial rewriting.
//
// A Ring models a Z/p^N-algebra generated by weighted generators, truncated in
// weights > b, with confluent rewrite rules of the form gen^k -> element
// (exponent caps).  delta is induced by the Frobenius lift phi(g) per
// generator: phi(a) = a^p + p*delta(a) with exact division by p.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synk/padic.hpp"

namespace synk {

using Mono = std::vector<uint16_t>;  // exponent per generator

struct Elem {
  std::map<Mono, mpz_class> t;  // monomial -> nonzero canonical residue
  bool zero() const { return t.empty(); }
  bool operator==(const Elem&) const = default;
};

struct Generator {
  std::string name;
  int weight = 1;
  // delta(gen): -1 means delta = 0 (z-type), -2 means the next delta-iterate is
  // weight-truncated to 0, otherwise the index of the generator equal to
  // delta(gen).
  int delta_to = -1;
};

struct Rule {
  int power = 0;  // lhs: gen^power
  Elem repl;      // possibly non-normal replacement
};

class Ring {
 public:
  Zmod R;          // coefficient ring Z/p^N
  unsigned long p; // the prime (equals R.p)
  int b;           // weight window: weights 0..b survive

  std::vector<Generator> gens;
  std::vector<std::optional<Rule>> rules;

  Ring(const Zmod& coeffs, int window) : R(coeffs), p(coeffs.p), b(window) {}

  int add_gen(const std::string& name, int weight, int delta_to);
  void set_rule(int g, int power, Elem repl);

  int weight_of(const Mono& m) const;

  // Element constructors.
  Elem zero() const { return Elem{}; }
  Elem constant(const mpz_class& c) const;
  Elem monomial(const std::vector<std::pair<int, int>>& exps, const mpz_class& c) const;
  Elem gen_elem(int g) const { return monomial({{g, 1}}, 1); }

  // Arithmetic (inputs need not be normal; outputs are normalized).
  Elem normalize(const Elem& a) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem scal(const mpz_class& c, const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, int k) const;

  // Frobenius lift and delta.
  Elem phi_gen(int g) const;                 // g^p + p * delta(g)
  Elem phi(const Elem& a) const;             // ring homomorphism
  Elem delta(const Elem& a) const;           // (phi(a) - a^p)/p, exact
  Elem invert(const Elem& a) const;          // requires unit constant term
  Elem weight_truncate(const Elem& a, int lo, int hi) const;
  mpz_class constant_term(const Elem& a) const;

  // Normal-form monomial basis of the window, sorted by (weight, exponents).
  void build_basis();
  std::vector<Mono> basis;
  std::map<Mono, int> basis_index;
  std::vector<int> rank_per_weight;  // size b+1
  int dim() const { return static_cast<int>(basis.size()); }

  std::vector<mpz_class> to_vec(const Elem& a) const;      // coefficients mod R.pN
  Elem from_vec(const std::vector<mpz_class>& v) const;

  // Coordinate form of multiplication operators, available once the basis is
  // built and all rules are installed.  gen_op(g) is the (sparse, per-column)
  // operator of multiplication by generator g; mult_op(a) gives the dense
  // columns of multiplication by a, assembled by walking the basis from each
  // monomial's divisor (one generator lower).  These power the fast paths of
  // mul/pow/phi/delta on dense elements.
  using SparseCol = std::vector<std::pair<int, mpz_class>>;
  const std::vector<SparseCol>& gen_op(int g) const;
  std::vector<std::vector<mpz_class>> mult_op(const Elem& a) const;
  std::vector<mpz_class> mul_vec(const Elem& a, const std::vector<mpz_class>& v) const;
  std::vector<mpz_class> phi_vec(const std::vector<mpz_class>& v) const;
  bool basis_built() const { return basis_built_; }

  // Substitution homomorphism into another ring: images per generator.
  static Elem apply_hom(const Ring& dst, const std::vector<Elem>& images, const Elem& a);

 private:
  // Returns the rule index applicable to m, or -1.
  int reducible_by(const Mono& m) const;
  mutable std::vector<std::optional<Elem>> phi_cache_;
  bool basis_built_ = false;
  mutable std::vector<std::optional<std::vector<SparseCol>>> gen_op_;
  mutable std::optional<std::vector<std::vector<mpz_class>>> phi_op_;
};

}  // namespace synk
