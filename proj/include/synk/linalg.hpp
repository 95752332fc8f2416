// Dense exact linear algebra over Z/p^N: Smith normal form with valuation
// pivoting, kernels, solves, image saturation and cokernel structure.
#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "synk/padic.hpp"

namespace synk {

// Exponent value meaning "elementary divisor is 0 at this precision".
inline constexpr int kInfExponent = std::numeric_limits<int>::max();

// Finite abelian p-group, as sorted exponent list: {1,3} means Z/p + Z/p^3.
struct AbelianPGroup {
  unsigned long prime = 2;
  std::vector<int> exponents;  // sorted ascending, all >= 1

  bool operator==(const AbelianPGroup&) const = default;
  bool trivial() const { return exponents.empty(); }
  int order_exponent() const {
    int s = 0;
    for (int e : exponents) s += e;
    return s;
  }
};

struct ElementaryDivisorReport {
  std::vector<int> exponents;  // ascending; kInfExponent for zero divisors
  bool certified = false;      // true only if all exponents finite and < precision
  int precision_used = 0;
};

// Row-major dense matrix of canonical residues mod p^N.
struct PadicMatrix {
  int rows = 0, cols = 0;
  std::vector<mpz_class> a;

  PadicMatrix() = default;
  PadicMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, mpz_class(0)) {}

  mpz_class& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const mpz_class& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static PadicMatrix identity(int n) {
    PadicMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const PadicMatrix&) const = default;
};

PadicMatrix mat_mul(const Zmod& R, const PadicMatrix& A, const PadicMatrix& B);
std::vector<mpz_class> mat_vec(const Zmod& R, const PadicMatrix& A, const std::vector<mpz_class>& v);
PadicMatrix from_columns(int rows, const std::vector<std::vector<mpz_class>>& cols);

// Smith normal form over Z/p^N.
//
// Produces L (rows x rows) and Rt (cols x cols), both invertible with unit
// determinant mod p, such that L * M * Rt = diag(p^e_1, ..., p^e_r) with
// e_1 <= e_2 <= ...  Pivots are chosen with minimal p-valuation, ties broken by
// smallest row index then smallest column index.
struct SmithResult {
  ElementaryDivisorReport report;  // exponents for all min(rows, cols) slots
  PadicMatrix left;                // L
  PadicMatrix right;               // Rt
  PadicMatrix left_inv;            // L^{-1} (handy for image bases)
  int rank() const {               // number of finite divisors
    int r = 0;
    for (int e : report.exponents)
      if (e != kInfExponent) ++r;
    return r;
  }
  int max_finite_exponent() const {
    int m = 0;
    for (int e : report.exponents)
      if (e != kInfExponent && e > m) m = e;
    return m;
  }
};

// Bitmask deciding which transform matrices smith_normal_form maintains;
// skipping unused ones saves most of the elimination cost on large inputs.
// Matrices not requested are left empty (0x0).
enum SnfWant : unsigned {
  kSnfLeft = 1u,
  kSnfRight = 2u,
  kSnfLeftInv = 4u,
  kSnfAll = 7u,
  kSnfNone = 0u,
};

SmithResult smith_normal_form(const Zmod& R, const PadicMatrix& M,
                              unsigned want = kSnfAll);

// Columns spanning the p-saturation of the column span of M (a direct summand);
// the basis columns are unimodular-completable.  Number of columns = rank.
PadicMatrix saturate_image(const Zmod& R, const PadicMatrix& M);

// Structure of Z_p^rows / (column span of M): torsion exponents plus free rank.
struct CokernelStructure {
  AbelianPGroup torsion;
  int free_rank = 0;
  bool certified = false;
  int precision_used = 0;
};
CokernelStructure cokernel_structure(const Zmod& R, const PadicMatrix& M);

// Basis of the Z_p-kernel lattice of M, valid when the finite elementary
// divisors of M are all << N.  Returns the kernel columns together with the
// precision "guard" (max finite divisor exponent): kernel vectors satisfy
// M*k = 0 mod p^(N - guard).
struct KernelBasis {
  PadicMatrix basis;  // cols = kernel rank
  int guard = 0;
};
KernelBasis exact_kernel(const Zmod& R, const PadicMatrix& M);

// Reusable factorization-based solver for M x = rhs.  Solutions are exact mod
// p^(N - loss); divisibility failures throw escalation_needed.
struct Solver {
  Zmod R;
  SmithResult S;
  int rows = 0, cols = 0;
  Solver(const Zmod& R_, const PadicMatrix& M);
  // Returns x and accumulates the precision loss (max divisor exponent used).
  // Residues on zero-divisor rows with valuation >= N - tol are treated as
  // accumulated noise rather than membership failures.
  std::vector<mpz_class> solve(const std::vector<mpz_class>& rhs, int* loss, int tol = 0) const;
  // True if rhs is in the image (all divisibility conditions hold).
  bool solvable(const std::vector<mpz_class>& rhs) const;
};

// Cohomology of a two-step complex  C^0 --d0--> C^1 --d1--> C^2  of free
// modules, assuming rational exactness in degree 0 (H^0 = 0 is asserted).
struct ComplexCohomology {
  AbelianPGroup h0, h1, h2;
  bool certified = false;
  int precision_used = 0;
  int guard = 0;  // accumulated precision loss
};
// guard0: precision loss already incurred while building d0/d1; entries of
// valuation >= N - guard0 - 4 are treated as zero when matching boundaries
// against the kernel.
ComplexCohomology total_complex_cohomology(const Zmod& R, const PadicMatrix& d0,
                                           const PadicMatrix& d1, unsigned long p,
                                           int guard0 = 0);

}  // namespace synk
