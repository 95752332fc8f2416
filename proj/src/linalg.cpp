#include "synk/linalg.hpp"

#include <algorithm>

namespace synk {

PadicMatrix mat_mul(const Zmod& R, const PadicMatrix& A, const PadicMatrix& B) {
  if (A.cols != B.rows) throw computation_error("mat_mul: dimension mismatch");
  PadicMatrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const mpz_class& x = A.at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < B.cols; ++j) {
        if (B.at(k, j) == 0) continue;
        C.at(i, j) += x * B.at(k, j);
      }
    }
  for (auto& v : C.a) v = R.reduce(v);
  return C;
}

std::vector<mpz_class> mat_vec(const Zmod& R, const PadicMatrix& A, const std::vector<mpz_class>& v) {
  if (static_cast<int>(v.size()) != A.cols) throw computation_error("mat_vec: dimension mismatch");
  std::vector<mpz_class> out(A.rows, mpz_class(0));
  for (int i = 0; i < A.rows; ++i) {
    mpz_class s = 0;
    for (int j = 0; j < A.cols; ++j)
      if (A.at(i, j) != 0 && v[j] != 0) s += A.at(i, j) * v[j];
    out[i] = R.reduce(s);
  }
  return out;
}

PadicMatrix from_columns(int rows, const std::vector<std::vector<mpz_class>>& cols) {
  PadicMatrix M(rows, static_cast<int>(cols.size()));
  for (int j = 0; j < M.cols; ++j) {
    if (static_cast<int>(cols[j].size()) != rows)
      throw computation_error("from_columns: column length mismatch");
    for (int i = 0; i < rows; ++i) M.at(i, j) = cols[j][i];
  }
  return M;
}

SmithResult smith_normal_form(const Zmod& R, const PadicMatrix& M,
                              unsigned want) {
  const int r = M.rows, c = M.cols, m = std::min(r, c);
  PadicMatrix A = M;
  for (auto& v : A.a) v = R.reduce(v);
  SmithResult res;
  const bool wl = want & kSnfLeft;
  const bool wr = want & kSnfRight;
  const bool wli = want & kSnfLeftInv;
  if (wl) res.left = PadicMatrix::identity(r);
  if (wli) res.left_inv = PadicMatrix::identity(r);
  if (wr) res.right = PadicMatrix::identity(c);
  res.report.exponents.assign(m, kInfExponent);
  res.report.precision_used = R.N;

  for (int k = 0; k < m; ++k) {
    // Pivot: minimal p-valuation, ties by smallest row index then column
    // index.  A unit pivot is optimal, so stop scanning once one is found.
    int best_i = -1, best_j = -1, best_v = R.N;
    for (int i = k; i < r && best_v > 0; ++i)
      for (int j = k; j < c; ++j) {
        if (A.at(i, j) == 0) continue;
        int v = R.valuation(A.at(i, j));
        if (v < best_v) {
          best_v = v, best_i = i, best_j = j;
          if (v == 0) break;
        }
      }
    if (best_i < 0) break;  // all-zero tail: exponents stay infinite

    if (best_i != k) {
      for (int j = 0; j < c; ++j) std::swap(A.at(k, j), A.at(best_i, j));
      if (wl)
        for (int j = 0; j < r; ++j) std::swap(res.left.at(k, j), res.left.at(best_i, j));
      if (wli)
        for (int i = 0; i < r; ++i) std::swap(res.left_inv.at(i, k), res.left_inv.at(i, best_i));
    }
    if (best_j != k) {
      for (int i = 0; i < r; ++i) std::swap(A.at(i, k), A.at(i, best_j));
      if (wr)
        for (int i = 0; i < c; ++i) std::swap(res.right.at(i, k), res.right.at(i, best_j));
    }

    const int v = best_v;
    res.report.exponents[k] = v;
    mpz_class pv = R.pow_p(v);
    mpz_class u;
    mpz_divexact(u.get_mpz_t(), A.at(k, k).get_mpz_t(), pv.get_mpz_t());
    u = R.reduce(u);
    mpz_class uinv = R.unit_inverse(u);
    for (int j = 0; j < c; ++j) A.at(k, j) = R.mul(A.at(k, j), uinv);
    if (wl)
      for (int j = 0; j < r; ++j) res.left.at(k, j) = R.mul(res.left.at(k, j), uinv);
    if (wli)
      for (int i = 0; i < r; ++i) res.left_inv.at(i, k) = R.mul(res.left_inv.at(i, k), u);

    // Clear column k below the pivot.
    for (int i = k + 1; i < r; ++i) {
      if (A.at(i, k) == 0) continue;
      mpz_class f;
      mpz_divexact(f.get_mpz_t(), A.at(i, k).get_mpz_t(), pv.get_mpz_t());
      f = R.reduce(f);
      for (int j = k; j < c; ++j) A.at(i, j) = R.reduce(A.at(i, j) - f * A.at(k, j));
      if (wl)
        for (int j = 0; j < r; ++j)
          res.left.at(i, j) = R.reduce(res.left.at(i, j) - f * res.left.at(k, j));
      if (wli)
        for (int t = 0; t < r; ++t)
          res.left_inv.at(t, k) = R.reduce(res.left_inv.at(t, k) + f * res.left_inv.at(t, i));
    }
    // Clear row k to the right of the pivot.
    for (int j = k + 1; j < c; ++j) {
      if (A.at(k, j) == 0) continue;
      mpz_class f;
      mpz_divexact(f.get_mpz_t(), A.at(k, j).get_mpz_t(), pv.get_mpz_t());
      f = R.reduce(f);
      for (int i = k; i < r; ++i) A.at(i, j) = R.reduce(A.at(i, j) - f * A.at(i, k));
      if (wr)
        for (int i = 0; i < c; ++i)
          res.right.at(i, j) = R.reduce(res.right.at(i, j) - f * res.right.at(i, k));
    }
  }

  bool cert = true;
  for (int e : res.report.exponents)
    if (e == kInfExponent || e >= R.N) cert = false;
  res.report.certified = cert;
  return res;
}

PadicMatrix saturate_image(const Zmod& R, const PadicMatrix& M) {
  SmithResult S = smith_normal_form(R, M, kSnfLeftInv);
  int rk = S.rank();
  PadicMatrix out(M.rows, rk);
  for (int j = 0; j < rk; ++j)
    for (int i = 0; i < M.rows; ++i) out.at(i, j) = S.left_inv.at(i, j);
  return out;
}

CokernelStructure cokernel_structure(const Zmod& R, const PadicMatrix& M) {
  SmithResult S = smith_normal_form(R, M, kSnfNone);
  CokernelStructure cs;
  cs.torsion.prime = R.p;
  cs.precision_used = R.N;
  int inf_count = 0;
  for (int e : S.report.exponents) {
    if (e == kInfExponent) {
      ++inf_count;
    } else if (e > 0) {
      cs.torsion.exponents.push_back(e);
    }
  }
  std::sort(cs.torsion.exponents.begin(), cs.torsion.exponents.end());
  cs.free_rank = (M.rows - static_cast<int>(S.report.exponents.size())) + inf_count;
  cs.certified = (inf_count == 0) && S.max_finite_exponent() < R.N;
  return cs;
}

KernelBasis exact_kernel(const Zmod& R, const PadicMatrix& M) {
  SmithResult S = smith_normal_form(R, M, kSnfRight);
  KernelBasis kb;
  kb.guard = S.max_finite_exponent();
  std::vector<int> kernel_cols;
  const int m = static_cast<int>(S.report.exponents.size());
  for (int j = 0; j < M.cols; ++j) {
    if (j >= m || S.report.exponents[j] == kInfExponent) kernel_cols.push_back(j);
  }
  kb.basis = PadicMatrix(M.cols, static_cast<int>(kernel_cols.size()));
  for (int t = 0; t < kb.basis.cols; ++t)
    for (int i = 0; i < M.cols; ++i) kb.basis.at(i, t) = S.right.at(i, kernel_cols[t]);
  return kb;
}

Solver::Solver(const Zmod& R_, const PadicMatrix& M)
    : R(R_),
      S(smith_normal_form(R_, M, kSnfLeft | kSnfRight)),
      rows(M.rows),
      cols(M.cols) {}

std::vector<mpz_class> Solver::solve(const std::vector<mpz_class>& rhs, int* loss, int tol) const {
  std::vector<mpz_class> w = mat_vec(R, S.left, rhs);
  const int m = static_cast<int>(S.report.exponents.size());
  std::vector<mpz_class> y(cols, mpz_class(0));
  int used = 0;
  for (int j = 0; j < rows; ++j) {
    int e = (j < m) ? S.report.exponents[j] : kInfExponent;
    if (e == kInfExponent) {
      if (w[j] != 0) {
        if (R.valuation(w[j]) < R.N - tol)
          throw escalation_needed("solve: rhs not in image (zero-divisor row)");
        used = std::max(used, tol);
      }
      continue;
    }
    if (w[j] == 0) continue;
    if (R.valuation(w[j]) < e) throw escalation_needed("solve: divisibility failure");
    if (j < cols) {
      y[j] = R.divide_exact_p(w[j], e);
      used = std::max(used, e);
    }
  }
  if (loss) *loss = std::max(*loss, used);
  return mat_vec(R, S.right, y);
}

bool Solver::solvable(const std::vector<mpz_class>& rhs) const {
  std::vector<mpz_class> w = mat_vec(R, S.left, rhs);
  const int m = static_cast<int>(S.report.exponents.size());
  for (int j = 0; j < rows; ++j) {
    int e = (j < m) ? S.report.exponents[j] : kInfExponent;
    if (w[j] == 0) continue;
    int v = R.valuation(w[j]);
    if (e == kInfExponent) {
      if (v < R.N) return false;
    } else if (v < e) {
      return false;
    }
  }
  return true;
}

ComplexCohomology total_complex_cohomology(const Zmod& R, const PadicMatrix& d0,
                                           const PadicMatrix& d1, unsigned long p,
                                           int guard0) {
  if (d1.cols != d0.rows) throw computation_error("total_complex_cohomology: shape mismatch");
  ComplexCohomology out;
  out.guard = guard0;
  out.precision_used = R.N;
  out.h0.prime = out.h1.prime = out.h2.prime = p;

  // H^0: kernel of d0 must vanish (rational exactness in degree 0).
  SmithResult S0 = smith_normal_form(R, d0, kSnfNone);
  bool h0_zero = (S0.rank() == d0.cols);
  out.guard = std::max(out.guard, S0.max_finite_exponent());

  // H^2 = coker d1.
  SmithResult S1 = smith_normal_form(R, d1, kSnfNone);
  bool h2_finite = true;
  for (int e : S1.report.exponents) {
    if (e == kInfExponent) {
      h2_finite = false;
    } else if (e > 0) {
      out.h2.exponents.push_back(e);
    }
  }
  h2_finite = h2_finite && (S1.rank() == d1.rows);
  out.guard = std::max(out.guard, S1.max_finite_exponent());
  std::sort(out.h2.exponents.begin(), out.h2.exponents.end());

  // H^1 = ker d1 / im d0.
  KernelBasis K = exact_kernel(R, d1);
  out.guard = std::max(out.guard, K.guard);
  Solver ksolve(R, K.basis);
  std::vector<std::vector<mpz_class>> coords;
  coords.reserve(d0.cols);
  int loss = 0;
  const int tol = std::min(out.guard + 4, R.N / 2);
  for (int j = 0; j < d0.cols; ++j) {
    std::vector<mpz_class> col(d0.rows);
    for (int i = 0; i < d0.rows; ++i) col[i] = d0.at(i, j);
    coords.push_back(ksolve.solve(col, &loss, tol));
  }
  out.guard = std::max(out.guard, loss);
  PadicMatrix C = from_columns(K.basis.cols, coords);
  CokernelStructure h1 = cokernel_structure(R, C);
  out.h1.exponents = h1.torsion.exponents;
  bool h1_finite = (h1.free_rank == 0);

  bool big_enough = true;
  for (int e : out.h1.exponents) big_enough = big_enough && (e < R.N - out.guard);
  for (int e : out.h2.exponents) big_enough = big_enough && (e < R.N - out.guard);
  out.certified = h0_zero && h1_finite && h2_finite && big_enough;
  return out;
}

}  // namespace synk
