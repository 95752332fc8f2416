#include "synk/syntomic.hpp"

#include <algorithm>
#include <string>

namespace synk {

std::vector<mpz_class> TwistedFrobenius::apply(const std::vector<mpz_class>& v,
                                               int* loss) const {
  std::vector<mpz_class> w = mat_vec(R, PH, v);
  w = ME->solve(w, loss);
  w = mat_vec(R, MU, w);
  return mat_vec(R, IO, w);
}

NygaardLattice nygaard_lattice(const Zmod& R, const PadicMatrix& PH_window,
                               const Solver& ME) {
  const int d = ME.rows;
  const int bw = PH_window.cols;
  const auto& exps = ME.S.report.exponents;
  for (int e : exps)
    if (e == kInfExponent)
      throw escalation_needed("nygaard: division operator not injective at this precision");

  // v is in the lattice iff L * Phi(v) is divisible slotwise by the divisors
  // of E^i; encode divisibility with auxiliary columns.  Rows with divisor
  // exponent 0 impose no condition and are dropped.
  PadicMatrix LP = mat_mul(R, ME.S.left, PH_window);
  std::vector<int> keep;
  for (int r = 0; r < d; ++r)
    if (exps[r] > 0) keep.push_back(r);
  const int dk = static_cast<int>(keep.size());
  PadicMatrix A(dk, bw + dk);
  for (int r = 0; r < dk; ++r) {
    for (int j = 0; j < bw; ++j) A.at(r, j) = LP.at(keep[r], j);
    A.at(r, bw + r) = R.reduce(-R.pow_p(exps[keep[r]]));
  }
  KernelBasis kb = exact_kernel(R, A);
  if (kb.basis.cols != bw) throw escalation_needed("nygaard: unexpected kernel rank");

  NygaardLattice out;
  out.guard = kb.guard;
  out.basis = PadicMatrix(bw, bw);
  for (int r = 0; r < bw; ++r)
    for (int j = 0; j < bw; ++j) out.basis.at(r, j) = kb.basis.at(r, j);
  SmithResult S = smith_normal_form(R, out.basis, kSnfNone);
  if (S.rank() != bw) throw escalation_needed("nygaard: lattice projection not full rank");
  out.guard = std::max(out.guard, S.max_finite_exponent());
  return out;
}

namespace {

std::vector<mpz_class> column(const PadicMatrix& M, int j) {
  std::vector<mpz_class> v(M.rows);
  for (int r = 0; r < M.rows; ++r) v[r] = M.at(r, j);
  return v;
}

void check_small(const Zmod& R, const mpz_class& x, int tol, const char* what) {
  if (x != 0 && R.valuation(x) < R.N - tol) throw escalation_needed(what);
}

// Builds the weight-i syntomic complex at matrix precision N and computes its
// cohomology.  Throws escalation_needed when N is insufficient.
SyntomicResult attempt(const FieldSpec& spec, int n, int i, int b, int N,
                       const std::vector<mpz_class>& tweak) {
  const unsigned long p = spec.p;
  SyntomicResult res;
  res.i = i;
  res.n = n;
  res.b = b;
  res.precision_used = N;
  res.h1.prime = res.h2.prime = p;

  Zmod Rm(p, N);
  int logp = 0;
  for (long long t = 1; t <= b; t *= static_cast<long long>(p)) ++logp;
  Zmod Renv(p, N + 4 * (logp + 2) + 8);

  EnvelopeRing R0 = build_envelope(Renv, spec, n, b, 0, false);
  EnvelopeRing R0t = build_envelope(Renv, spec, n, b, 0, true);
  EnvelopeRing R1 = build_envelope(Renv, spec, n, b, 1, false);
  EnvelopeRing R1t = build_envelope(Renv, spec, n, b, 1, true);
  const Ring& r0 = R0.ring;
  const Ring& r0t = R0t.ring;
  const Ring& r1 = R1.ring;
  const Ring& r1t = R1t.ring;
  const int D1 = r1t.dim();

  TwistData tw = compute_twist(p, spec.eisenstein, b, Renv, tweak);

  int guard = 0;

  // Divided Frobenius, level 0.
  TwistedFrobenius F0;
  F0.R = Rm;
  {
    std::vector<Elem> im(r0t.gens.size());
    im[R0t.z0] = r0.gen_elem(R0.z0);
    for (size_t k = 0; k < R0t.xg.size(); ++k)
      im[R0t.xg[k]] = r0.phi(r0.gen_elem(R0.xg[k]));
    F0.PH = hom_matrix(Rm, r0, im, r0t);
  }
  F0.ME = std::make_unique<Solver>(
      Rm, mult_matrix(Rm, r0, r0.pow(r0.normalize(R0.Ez0), i)));
  F0.MU = mult_matrix(
      Rm, r0, r0.pow(eval_window(r0, tw.u, r0.gen_elem(R0.z0)), i));
  {
    std::vector<Elem> im(r0.gens.size());
    im[R0.z0] = r0t.pow(r0t.gen_elem(R0t.z0), static_cast<int>(p));
    for (size_t k = 0; k < R0.xg.size(); ++k)
      im[R0.xg[k]] = k < R0t.xg.size() ? r0t.gen_elem(R0t.xg[k]) : r0t.zero();
    F0.IO = hom_matrix(Rm, r0t, im, r0);
  }

  // Divided Frobenius, level 1.
  TwistedFrobenius F1;
  F1.R = Rm;
  {
    std::vector<Elem> im(r1t.gens.size());
    im[R1t.z0] = r1.gen_elem(R1.z0);
    im[R1t.z1] = R1.z1elem;
    for (size_t k = 0; k < R1t.xg.size(); ++k)
      im[R1t.xg[k]] = r1.phi(r1.gen_elem(R1.xg[k]));
    for (size_t k = 0; k < R1t.yg.size(); ++k)
      im[R1t.yg[k]] = r1.phi(r1.gen_elem(R1.yg[k]));
    F1.PH = hom_matrix(Rm, r1, im, r1t);
  }
  F1.ME = std::make_unique<Solver>(
      Rm, mult_matrix(Rm, r1, r1.pow(r1.normalize(R1.Ez0), i)));
  F1.MU = mult_matrix(
      Rm, r1, r1.pow(eval_window(r1, tw.u, r1.gen_elem(R1.z0)), i));
  std::vector<Elem> io1im(r1.gens.size());
  {
    io1im[R1.z0] = r1t.pow(r1t.gen_elem(R1t.z0), static_cast<int>(p));
    io1im[R1.z1] = r1t.pow(r1t.gen_elem(R1t.z1), static_cast<int>(p));
    for (size_t k = 0; k < R1.xg.size(); ++k)
      io1im[R1.xg[k]] = k < R1t.xg.size() ? r1t.gen_elem(R1t.xg[k]) : r1t.zero();
    for (size_t k = 0; k < R1.yg.size(); ++k)
      io1im[R1.yg[k]] = k < R1t.yg.size() ? r1t.gen_elem(R1t.yg[k]) : r1t.zero();
    F1.IO = hom_matrix(Rm, r1t, io1im, r1);
  }

  // Face maps on the twisted corners.
  PadicMatrix F0m, F1m;
  {
    std::vector<Elem> im(r0t.gens.size());
    im[R0t.z0] = r1t.gen_elem(R1t.z0);
    for (size_t k = 0; k < R0t.xg.size(); ++k)
      im[R0t.xg[k]] = r1t.gen_elem(R1t.xg[k]);
    F0m = hom_matrix(Rm, r1t, im, r0t);
  }
  {
    std::vector<Elem> im(r0t.gens.size());
    im[R0t.z0] = r1t.gen_elem(R1t.z1);
    if (!R0t.xg.empty()) {
      Elem Gt = r1t.normalize(R1t.G);
      Elem Y0 = r1t.gen_elem(R1t.yg[0]);
      Elem wp = r1t.zero();
      Elem Vt = r1t.constant(1);
      for (int j = 1; j <= n; ++j) {
        mpz_class bin;
        mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(n),
                     static_cast<unsigned long>(j));
        Elem term = r1t.monomial({{R1t.z0, static_cast<int>(p) * (n - j)}}, bin);
        term = r1t.mul(term, r1t.pow(Gt, j - 1));
        term = r1t.mul(term, r1t.pow(Y0, j));
        wp = r1t.add(wp, term);
      }
      for (int j = 1; j <= spec.e; ++j) {
        Elem Bj = r1t.zero();
        for (int t = j; t <= spec.e; ++t) {
          mpz_class bin;
          mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(t),
                       static_cast<unsigned long>(j));
          Bj = r1t.add(Bj, r1t.monomial({{R1t.z0, static_cast<int>(p) * (t - j)}},
                                        spec.eisenstein[t] * bin));
        }
        if (Bj.zero()) continue;
        Elem term = r1t.mul(Bj, r1t.pow(Gt, j - 1));
        term = r1t.mul(term, r1t.pow(Y0, j));
        Vt = r1t.add(Vt, term);
      }
      im[R0t.xg[0]] = r1t.mul(r1t.invert(r1t.normalize(Vt)),
                              r1t.add(r1t.gen_elem(R1t.xg[0]), wp));
      for (size_t k = 1; k < R0t.xg.size(); ++k)
        im[R0t.xg[k]] = r1t.delta(im[R0t.xg[k - 1]]);
    }
    F1m = hom_matrix(Rm, r1t, im, r0t);
  }
  Elem rho = face_correction(R1, spec, tw);
  Elem rhot = Ring::apply_hom(r1t, io1im, rho);
  PadicMatrix H = F0m;
  {
    PadicMatrix corr = mat_mul(Rm, mult_matrix(Rm, r1t, r1t.pow(rhot, i)), F1m);
    for (size_t k = 0; k < H.a.size(); ++k) H.a[k] = Rm.sub(H.a[k], corr.a[k]);
  }

  // Upper-left corner: the divisible lattice in weights [1, b] of the level-0
  // twisted copy (coordinate w corresponds to weight w).
  PadicMatrix PH0w(F0.PH.rows, b);
  for (int r = 0; r < F0.PH.rows; ++r)
    for (int w = 1; w <= b; ++w) PH0w.at(r, w - 1) = F0.PH.at(r, w);
  NygaardLattice NL = nygaard_lattice(Rm, PH0w, *F0.ME);
  guard = std::max(guard, NL.guard);
  res.square.X00 = NL.basis;

  // v0 = 1 - divided Frobenius on the lattice.
  PadicMatrix v0(b, b);
  for (int j = 0; j < b; ++j) {
    std::vector<mpz_class> vhat(r0t.dim(), mpz_class(0));
    for (int w = 1; w <= b; ++w) vhat[w] = NL.basis.at(w - 1, j);
    int loss = 0;
    std::vector<mpz_class> w4;
    try {
      w4 = F0.apply(vhat, &loss);
    } catch (const escalation_needed& e) {
      throw escalation_needed(std::string("v0 frobenius: ") + e.what());
    }
    guard = std::max(guard, loss);
    check_small(Rm, w4[0], guard + 4, "v0: weight-0 leakage");
    for (int w = 1; w <= b; ++w) v0.at(w - 1, j) = Rm.sub(vhat[w], w4[w]);
  }

  // Right-hand corners: saturated images of the horizontal map, with the
  // weight-0 coordinate projected away.
  PadicMatrix C0(D1 - 1, b), C1(D1 - 1, b);
  for (int j = 0; j < b; ++j) {
    std::vector<mpz_class> himg(D1, mpz_class(0));
    for (int w = 1; w <= b; ++w)
      for (int r = 0; r < D1; ++r)
        himg[r] = Rm.add(himg[r], Rm.mul(H.at(r, w), NL.basis.at(w - 1, j)));
    check_small(Rm, himg[0], guard + 4, "h0: weight-0 leakage");
    for (int r = 1; r < D1; ++r) C0.at(r - 1, j) = himg[r];
    check_small(Rm, H.at(0, j + 1), guard + 4, "h1: weight-0 leakage");
    for (int r = 1; r < D1; ++r) C1.at(r - 1, j) = H.at(r, j + 1);
  }
  // The upper-right ambient is the divisible lattice of the level-1 twisted
  // window, not the plain window: saturate there so the divided Frobenius
  // stays integral on the saturated columns.
  PadicMatrix PH1w(F1.PH.rows, D1 - 1);
  for (int r = 0; r < F1.PH.rows; ++r)
    for (int c = 1; c < D1; ++c) PH1w.at(r, c - 1) = F1.PH.at(r, c);
  NygaardLattice NL1 = nygaard_lattice(Rm, PH1w, *F1.ME);
  guard = std::max(guard, NL1.guard);
  PadicMatrix S0;
  {
    Solver SolNL1(Rm, NL1.basis);
    PadicMatrix C0n(D1 - 1, b);
    for (int j = 0; j < b; ++j) {
      int loss = 0;
      std::vector<mpz_class> c;
      try {
        c = SolNL1.solve(column(C0, j), &loss, guard + 4);
      } catch (const escalation_needed& e) {
        throw escalation_needed(std::string("h image lattice coordinates: ") +
                                e.what());
      }
      guard = std::max(guard, loss);
      for (int r = 0; r < D1 - 1; ++r) C0n.at(r, j) = c[r];
    }
    S0 = mat_mul(Rm, NL1.basis, saturate_image(Rm, C0n));
  }
  PadicMatrix S1 = saturate_image(Rm, C1);
  if (S0.cols != b) throw escalation_needed("upper-right corner rank deficient");
  if (S1.cols != b) throw escalation_needed("lower-right corner rank deficient");
  res.square.S0 = S0;
  res.square.S1 = S1;
  Solver SolS0(Rm, S0), SolS1(Rm, S1);

  PadicMatrix h0(b, b), h1m(b, b);
  for (int j = 0; j < b; ++j) {
    int loss = 0;
    try {
      std::vector<mpz_class> c = SolS0.solve(column(C0, j), &loss, guard + 4);
      for (int r = 0; r < b; ++r) h0.at(r, j) = c[r];
      c = SolS1.solve(column(C1, j), &loss, guard + 4);
      for (int r = 0; r < b; ++r) h1m.at(r, j) = c[r];
    } catch (const escalation_needed& e) {
      throw escalation_needed(std::string("h corestriction: ") + e.what());
    }
    guard = std::max(guard, loss);
  }

  // v1 = 1 - divided Frobenius on the upper-right corner, expressed in the
  // lower-right corner basis.  The weight-0-free window lift of each basis
  // column is the canonical one.
  PadicMatrix v1(b, b);
  for (int j = 0; j < b; ++j) {
    std::vector<mpz_class> shat(D1, mpz_class(0));
    for (int r = 1; r < D1; ++r) shat[r] = S0.at(r - 1, j);
    // Saturation may divide image columns by p-powers, which can leave the
    // divisible lattice; recover the divided Frobenius via phi_i(s) =
    // phi_i(p^k s) / p^k for the smallest workable k.
    int loss = 0;
    std::vector<mpz_class> w4;
    bool done = false;
    std::string last_err;
    const int kmax = std::min(Rm.N / 2, guard + 16);
    for (int k = 0; k <= kmax && !done; ++k) {
      std::vector<mpz_class> scaled(shat.size());
      mpz_class pk = Rm.pow_p(k);
      for (size_t r = 0; r < shat.size(); ++r)
        scaled[r] = Rm.mul(shat[r], pk);
      int l2 = 0;
      try {
        w4 = F1.apply(scaled, &l2);
      } catch (const escalation_needed& e) {
        last_err = e.what();
        continue;
      }
      for (auto& x : w4) {
        mpz_class q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t(),
                    pk.get_mpz_t());
        if (rem != 0)
          throw escalation_needed(
              "v1 frobenius: inexact p-power division (k=" +
              std::to_string(k) + ", val=" + std::to_string(Rm.valuation(x)) +
              ", N=" + std::to_string(Rm.N) + ", l2=" + std::to_string(l2) +
              ")");
        x = Rm.reduce(q);
      }
      loss = l2 + k;
      done = true;
    }
    if (!done)
      throw escalation_needed(std::string("v1 frobenius: ") + last_err);
    guard = std::max(guard, loss);
    check_small(Rm, w4[0], guard + 4, "v1: weight-0 leakage");
    std::vector<mpz_class> amb(D1 - 1);
    for (int r = 1; r < D1; ++r) amb[r - 1] = Rm.sub(shat[r], w4[r]);
    std::vector<mpz_class> c;
    try {
      c = SolS1.solve(amb, &loss, guard + 4);
    } catch (const escalation_needed& e) {
      throw escalation_needed(std::string("v1 corner coordinates: ") + e.what());
    }
    guard = std::max(guard, loss);
    for (int r = 0; r < b; ++r) v1.at(r, j) = c[r];
  }

  res.square.h0 = h0;
  res.square.h1 = h1m;
  res.square.v0 = v0;
  res.square.v1 = v1;
  PadicMatrix syn0(2 * b, b), syn1(b, 2 * b);
  for (int r = 0; r < b; ++r)
    for (int j = 0; j < b; ++j) {
      syn0.at(r, j) = h0.at(r, j);
      syn0.at(b + r, j) = v0.at(r, j);
      syn1.at(r, j) = v1.at(r, j);
      syn1.at(r, b + j) = Rm.reduce(-h1m.at(r, j));
    }
  res.square.syn0 = syn0;
  res.square.syn1 = syn1;

  PadicMatrix Z = mat_mul(Rm, syn1, syn0);
  for (const mpz_class& x : Z.a)
    check_small(Rm, x, guard + 4, "square does not commute at this precision");

  ComplexCohomology coh;
  try {
    coh = total_complex_cohomology(Rm, syn0, syn1, p, guard);
  } catch (const escalation_needed& e) {
    throw escalation_needed(std::string("cohomology: ") + e.what());
  }
  guard = std::max(guard, coh.guard);
  res.guard = guard;
  res.h1 = coh.h1;
  res.h2 = coh.h2;
  bool big_enough = true;
  for (int e : res.h1.exponents) big_enough = big_enough && (e < N - guard);
  for (int e : res.h2.exponents) big_enough = big_enough && (e < N - guard);
  res.certified = coh.certified && big_enough;
  return res;
}

}  // namespace

SyntomicResult syntomic_cohomology(const FieldSpec& spec, int n, int i,
                                   const SyntomicOptions& opts) {
  validate_field_spec(spec);
  if (spec.f > 1)
    throw computation_error("residue degree f > 1 is not yet supported");
  if (n < 1 || i < 1) throw computation_error("syntomic_cohomology: need n >= 1, i >= 1");
  const int b = weight_bound(i, n) + opts.bshift;
  if (b <= 0) {
    SyntomicResult res;
    res.i = i;
    res.n = n;
    res.b = b;
    res.h1.prime = res.h2.prime = spec.p;
    res.certified = true;
    res.precision_used = 1;
    return res;
  }
  // The accumulated guard scales roughly with i*n (divisor exponents of the
  // E^i division operator), so start well above it; a completed-but-
  // uncertified attempt reports its guard, which pins the next precision.
  int N = opts.N0 > 0 ? opts.N0 : std::max(32, 5 * i * n + 32);
  std::string last = "initial";
  while (N <= opts.Ncap) {
    bool ok = true;
    SyntomicResult res;
    try {
      res = attempt(spec, n, i, b, N, opts.tweak);
    } catch (const escalation_needed& e) {
      ok = false;
      last = e.what();
    }
    int next = 2 * N;
    if (ok) {
      bool pass = res.certified;
      if (i >= 2) {
        pass = pass && (res.h1.order_exponent() - res.h2.order_exponent() ==
                        i * (n - 1) * spec.f);
      } else {
        pass = pass && (res.h1.order_exponent() == spec.f * (n - 1)) &&
               res.h2.trivial();
      }
      if (pass) return res;
      last = "certification or order identity failed at N=" + std::to_string(N);
      next = std::max(next, res.guard + i * n + 32);
    }
    N = next;
  }
  throw computation_error("syntomic cohomology: precision ceiling reached (" + last + ")");
}

}  // namespace synk
