#pragma once
#include "synk/envelope.hpp"

#include <memory>

namespace synk {

// The divided Frobenius in weight i on one envelope corner, as the composite
// restrict -> divide by E^i -> multiply by u^i -> extend.  apply() tracks the
// precision loss from the division step.
struct TwistedFrobenius {
  PadicMatrix PH;   // restriction to the source copy
  std::unique_ptr<Solver> ME;  // division by E^i
  PadicMatrix MU;   // multiplication by u^i
  PadicMatrix IO;   // extension back to the target copy
  Zmod R;

  std::vector<mpz_class> apply(const std::vector<mpz_class>& v, int* loss) const;
};

// Basis of the weight-[1,b] part of the i-th divisible lattice for a
// level-0 corner: columns v with Phi(v) divisible by E^i over Z_p.
struct NygaardLattice {
  PadicMatrix basis;  // b x b, full rank
  int guard = 0;
};
NygaardLattice nygaard_lattice(const Zmod& R, const PadicMatrix& PH_window,
                               const Solver& ME);

// The commuting square assembled from the two corners of the envelope
// diagram, with the two horizontal comparison maps and two vertical
// (1 - divided Frobenius) maps; v1*h0 == h1*v0.
struct SyntomicSquare {
  PadicMatrix X00;      // b x b lattice basis, upper-left corner
  PadicMatrix S0, S1;   // saturated image bases for the right-hand corners
  PadicMatrix h0, h1, v0, v1;  // b x b
  PadicMatrix syn0;     // [h0; v0], 2b x b
  PadicMatrix syn1;     // [v1 | -h1], b x 2b
};

struct SyntomicOptions {
  int N0 = 0;       // starting precision; 0 = automatic
  int Ncap = 4096;  // escalation ceiling
  int bshift = 0;   // widen the weight window (stability testing only)
  std::vector<mpz_class> tweak;  // generator-change unit (invariance testing)
};

struct SyntomicResult {
  int i = 0, n = 0, b = 0;
  AbelianPGroup h1, h2;
  bool certified = false;
  int precision_used = 0;
  int guard = 0;
  SyntomicSquare square;
};

// Cohomology of the weight-i syntomic complex of O/pi^n, with automatic
// precision escalation until the result is certified and passes the order
// identities (|H1|/|H2| = q^{i(n-1)} for i >= 2; |H1| = q^{n-1}, H2 = 0 at
// i = 1).
SyntomicResult syntomic_cohomology(const FieldSpec& spec, int n, int i,
                                   const SyntomicOptions& opts = {});

}  // namespace synk
