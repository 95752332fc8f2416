#pragma once
#include "synk/syntomic.hpp"

namespace synk {

// Finite abelian group split as p-primary part plus one cyclic factor of
// order prime to p (which is how these K-groups always decompose), with a
// marker for the infinite cyclic K_0.
struct FiniteAbelianGroup {
  unsigned long p = 2;
  AbelianPGroup ppart;
  mpz_class coprime = 1;  // cyclic factor of prime-to-p order
  bool infinite_cyclic = false;

  bool trivial() const { return !infinite_cyclic && ppart.trivial() && coprime == 1; }
  mpz_class order() const;  // throws for the infinite case
  bool operator==(const FiniteAbelianGroup&) const = default;
};

// K-groups of the residue field F_q, q = p^f: K_0 = Z, K_{2i-1} = Z/(q^i - 1),
// K_{2i-2} = 0 for 2i-2 >= 2.
FiniteAbelianGroup quillen_k(unsigned long p, int f, int r);

// Full K-group in degree r from its computed p-primary part: the prime-to-p
// part comes from the residue field.
FiniteAbelianGroup assemble_integral(unsigned long p, int f, int r,
                                     const AbelianPGroup& ppart);

// Smallest weight i0 with K_{2i-2} = 0 for all i >= i0.
int even_vanishing_bound(unsigned long p, int e, int n);

// Known order of K_{2i-1}(O/pi^n): q^{i(n-1)} (q^i - 1).
mpz_class odd_order(unsigned long p, int f, int n, int i);

// Order identity |H^1(i)| / |H^2(i)| = q^{i(n-1)}, valid for i >= 2.
bool ratio_check(int i, int n, int f, const AbelianPGroup& h1, const AbelianPGroup& h2);

// Weight-1 identities: |H^1(1)| = q^{n-1} and H^2(1) = 0.
bool k1_units_check(int n, int f, const AbelianPGroup& h1, const AbelianPGroup& h2);

}  // namespace synk
