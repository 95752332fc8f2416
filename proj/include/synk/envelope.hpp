#pragma once
#include "synk/ring.hpp"
#include "synk/linalg.hpp"
#include <string>
#include <vector>

namespace synk {

// Description of the local base: a prime p, residue degree f, ramification e,
// and a distinguished monic polynomial E (coefficients a_0..a_e, constant term
// of valuation exactly 1, middle terms divisible by p).  The quotient studied
// is O/pi^n.
struct FieldSpec {
  unsigned long p = 2;
  int f = 1;
  int e = 1;
  std::vector<mpz_class> eisenstein;  // a_0..a_e with a_e == 1
};

// Throws computation_error if the polynomial fails the distinguishedness
// conditions (monic, v_p(a_j) >= 1 for j < e, v_p(a_0) == 1, degree == e).
void validate_field_spec(const FieldSpec& spec);

// Largest motivic weight that can contribute to cohomology in weight i for
// the length-n quotient.
inline int weight_bound(int i, int n) { return i * n - 1; }

// One corner of the cosimplicial envelope diagram: a weighted quotient ring
// together with bookkeeping for its generators.
struct EnvelopeRing {
  Ring ring;
  int level = 0;        // 0: one-variable corner, 1: two-variable corner
  bool twisted = false; // true for the Frobenius-target copies
  int z0 = -1;
  int z1 = -1;                // level 1 only
  std::vector<int> xg, yg;    // divided-power digit chains
  int cap0 = 0;               // z0 cap exponent
  int cap1 = 0;               // z1 cap exponent (level 1)
  Elem G;      // E evaluated at the capped power source (z0 or z0^p)
  Elem Ez0;    // plain E(z0) in this ring
  Elem z1elem; // normal form of z1 (level 1)

  EnvelopeRing(const Zmod& R, int b) : ring(R, b) {}
};

// Builds one corner ring over coefficients R with weight window [0, b].
// Digit relations x_k^p = ... are derived internally and verified.
EnvelopeRing build_envelope(const Zmod& R, const FieldSpec& spec, int n,
                            int b, int level, bool twisted);

// Window data for the degree-one twist: the unit u(z) with u * phi(t)/t
// trivialized on the window, plus the partial-product series C used to
// transport the same trivialization into the two-variable corner.
struct TwistData {
  std::vector<mpz_class> u;  // u[j] = coefficient of z^j, j = 0..b
  std::vector<mpz_class> C;  // stage-R series on the window
  int R = 0;                 // first r with p^r > b
};

// Computes the twist at coefficient precision Rk.N (internally padded).
// tweak, if nonempty, multiplies the generator by the window unit
// tweak(z); results for the full pipeline must be invariant under this.
TwistData compute_twist(unsigned long p, const std::vector<mpz_class>& eis,
                        int b, const Zmod& Rk,
                        const std::vector<mpz_class>& tweak = {});

// Evaluates a window polynomial c at element x (Horner), in ring rg.
Elem eval_window(const Ring& rg, const std::vector<mpz_class>& c,
                 const Elem& x);

// The correction unit for the second face map, computed in the untwisted
// two-variable corner.
Elem face_correction(const EnvelopeRing& R1, const FieldSpec& spec,
                     const TwistData& tw);

// Dense matrix of a ring homomorphism dst<-src given generator images,
// with entries reduced into Rmat.
PadicMatrix hom_matrix(const Zmod& Rmat, const Ring& dst,
                       const std::vector<Elem>& images, const Ring& src);

// Matrix of multiplication by a (dst == src ring).
PadicMatrix mult_matrix(const Zmod& Rmat, const Ring& rg, const Elem& a);

}  // namespace synk
