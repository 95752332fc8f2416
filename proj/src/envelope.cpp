#include "synk/envelope.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>

namespace synk {

void validate_field_spec(const FieldSpec& spec) {
  if (spec.p < 2) throw computation_error("field spec: p must be a prime >= 2");
  mpz_class pz(static_cast<unsigned long>(spec.p));
  if (mpz_probab_prime_p(pz.get_mpz_t(), 40) == 0)
    throw computation_error("field spec: p is not prime");
  if (spec.f < 1) throw computation_error("field spec: f must be >= 1");
  if (spec.e < 1) throw computation_error("field spec: e must be >= 1");
  if (static_cast<int>(spec.eisenstein.size()) != spec.e + 1)
    throw computation_error("field spec: polynomial must have degree e");
  if (spec.eisenstein[spec.e] != 1)
    throw computation_error("field spec: polynomial must be monic");
  Zmod probe(spec.p, 2);
  for (int j = 0; j < spec.e; ++j) {
    if (!mpz_divisible_ui_p(spec.eisenstein[j].get_mpz_t(), spec.p))
      throw computation_error("field spec: coefficient a_" + std::to_string(j) +
                              " must be divisible by p");
  }
  mpz_class a0p = spec.eisenstein[0] / static_cast<long>(spec.p);
  if (mpz_divisible_ui_p(a0p.get_mpz_t(), spec.p))
    throw computation_error("field spec: constant term must have valuation exactly 1");
}

namespace {

// Solves the rule g^p -> X from the derived relation r, which must have the
// form U1 * g^p + (heavier or divisible terms) with U1 a unit.  Installs the
// rule on rg after checking the contraction property.
void solve_rule(Ring& rg, const Elem& r, int g) {
  const unsigned long p = rg.p;
  Elem U1;
  for (auto& [m, c] : r.t) {
    uint16_t e = m[g];
    if (e >= p && e < 2 * p) {
      Mono mm = m;
      mm[g] = static_cast<uint16_t>(e - p);
      U1.t.emplace(std::move(mm), c);
    }
  }
  if (!rg.R.is_unit(rg.constant_term(U1)))
    throw computation_error("digit rule: leading coefficient is not a unit");
  Elem U1i = rg.invert(rg.normalize(U1));
  Elem X = rg.zero();
  bool done = false;
  for (int it = 0; it <= rg.b + 3; ++it) {
    rg.rules[g] = Rule{static_cast<int>(p), X};
    Elem s = rg.normalize(r);
    rg.rules[g].reset();
    if (s.zero()) {
      done = true;
      break;
    }
    // Reduce the update with the provisional rule in place: U1i and the
    // product can reintroduce powers of g beyond p.
    rg.rules[g] = Rule{static_cast<int>(p), X};
    Elem Xn = rg.normalize(rg.sub(X, rg.mul(U1i, s)));
    rg.rules[g].reset();
    X = std::move(Xn);
    for (auto& [m, c] : X.t)
      if (m[g] >= p)
        throw computation_error("digit rule: replacement is not reduced in its own generator");
  }
  if (!done) throw computation_error("digit rule: fixpoint iteration did not converge");
  const int lw = static_cast<int>(p) * rg.gens[g].weight;
  for (auto& [m, c] : X.t) {
    int w = rg.weight_of(m);
    if (w < lw || (w == lw && rg.R.is_unit(c)))
      throw computation_error("digit rule: replacement does not contract");
  }
  rg.set_rule(g, static_cast<int>(p), std::move(X));
}

// Derives the rule chain gen^p -> ... for chain[0], chain[1], ... from the raw
// relation rel (which normalizes to zero), by iterating delta.
void derive_chain(Ring& rg, const Elem& rel, const std::vector<int>& chain) {
  // The top chain generator's p-th power is weight-truncated, so it needs no
  // rule; the final delta of the relation must then vanish identically.
  Elem r = rel;
  for (size_t k = 0; k + 1 < chain.size(); ++k) {
    r = rg.delta(r);
    solve_rule(rg, r, chain[k]);
  }
  r = rg.delta(r);
  if (!r.zero())
    throw computation_error("digit rules: residual relation after final delta");
}

}  // namespace

EnvelopeRing build_envelope(const Zmod& R, const FieldSpec& spec, int n,
                            int b, int level, bool twisted) {
  EnvelopeRing E(R, b);
  E.level = level;
  E.twisted = twisted;
  Ring& rg = E.ring;
  const long s = twisted ? static_cast<long>(spec.p) : 1;
  E.cap0 = static_cast<int>(n * s);

  E.z0 = rg.add_gen("z0", 1, -1);
  if (level == 1) {
    E.cap1 = static_cast<int>(s);
    E.z1 = rg.add_gen("z1", 1, -1);
  }
  for (long w = n * s; w <= b; w *= static_cast<long>(spec.p))
    E.xg.push_back(rg.add_gen((twisted ? "X" : "x") + std::to_string(E.xg.size()),
                              static_cast<int>(w), -1));
  if (level == 1)
    for (long w = s; w <= b; w *= static_cast<long>(spec.p))
      E.yg.push_back(rg.add_gen((twisted ? "Y" : "y") + std::to_string(E.yg.size()),
                                static_cast<int>(w), -1));
  for (size_t k = 0; k < E.xg.size(); ++k)
    rg.gens[E.xg[k]].delta_to = k + 1 < E.xg.size() ? E.xg[k + 1] : -2;
  for (size_t k = 0; k < E.yg.size(); ++k)
    rg.gens[E.yg[k]].delta_to = k + 1 < E.yg.size() ? E.yg[k + 1] : -2;

  const size_t ng = rg.gens.size();
  // E evaluated at the cap source (z0 when untwisted, z0^p when twisted) and
  // at plain z0, both as raw term maps.
  auto raw_poly_in_z0 = [&](long stretch) {
    Elem out;
    for (int j = 0; j <= spec.e; ++j) {
      long deg = j * stretch;
      if (deg > b) continue;
      mpz_class c = R.reduce(spec.eisenstein[j]);
      if (c == 0) continue;
      Mono m(ng, 0);
      m[E.z0] = static_cast<uint16_t>(deg);
      out.t.emplace(std::move(m), std::move(c));
    }
    return out;
  };
  E.G = raw_poly_in_z0(s);
  E.Ez0 = raw_poly_in_z0(1);

  // Cap rules.  Replacements may reference digit generators that fall outside
  // the window; those terms are weight-truncated away, matching the quotient.
  auto times_gen = [&](const Elem& a, int g) {
    Elem out;
    for (auto& [m, c] : a.t) {
      Mono mm = m;
      mm[g] = static_cast<uint16_t>(mm[g] + 1);
      if (rg.weight_of(mm) > b) continue;
      out.t.emplace(std::move(mm), c);
    }
    return out;
  };
  Elem repl0 = E.xg.empty() ? rg.zero() : times_gen(E.G, E.xg[0]);
  rg.set_rule(E.z0, E.cap0, repl0);
  if (level == 1) {
    Elem repl1 = E.yg.empty() ? rg.zero() : times_gen(E.G, E.yg[0]);
    if (E.cap1 <= b) {
      Mono m(ng, 0);
      m[E.z0] = static_cast<uint16_t>(E.cap1);
      auto [it, fresh] = repl1.t.emplace(std::move(m), mpz_class(1));
      if (!fresh) it->second = R.add(it->second, 1);
    }
    rg.set_rule(E.z1, E.cap1, repl1);
  }

  // Digit rules, derived from the raw defining relations.
  if (!E.xg.empty()) {
    Elem rel = times_gen(E.G, E.xg[0]);
    Mono m(ng, 0);
    m[E.z0] = static_cast<uint16_t>(E.cap0);
    rel.t.emplace(std::move(m), R.reduce(-1));
    derive_chain(rg, rel, E.xg);
  }
  if (level == 1 && !E.yg.empty()) {
    Elem rel = times_gen(E.G, E.yg[0]);
    Mono mz1(ng, 0);
    mz1[E.z1] = static_cast<uint16_t>(E.cap1);
    rel.t.emplace(std::move(mz1), R.reduce(-1));
    Mono mz0(ng, 0);
    mz0[E.z0] = static_cast<uint16_t>(E.cap1);
    auto [it, fresh] = rel.t.emplace(std::move(mz0), mpz_class(1));
    if (!fresh) {
      it->second = R.add(it->second, 1);
      if (it->second == 0) rel.t.erase(it);
    }
    derive_chain(rg, rel, E.yg);
  }

  rg.build_basis();
  for (int w = 0; w <= b; ++w) {
    int want = level == 0 ? 1 : w + 1;
    if (rg.rank_per_weight[w] != want)
      throw computation_error("envelope basis: rank " +
                              std::to_string(rg.rank_per_weight[w]) + " at weight " +
                              std::to_string(w) + ", expected " + std::to_string(want));
  }

  if (level == 1) E.z1elem = rg.normalize(rg.gen_elem(E.z1));
  return E;
}

// ---------------------------------------------------------------------------
// Twist computation: window polynomials over Z/p^Nu.

namespace {

using Poly = std::vector<mpz_class>;

int pdeg(const Poly& a) {
  for (int d = static_cast<int>(a.size()) - 1; d >= 0; --d)
    if (a[d] != 0) return d;
  return -1;
}

Poly pmul(const Zmod& R, const Poly& a, const Poly& b, int maxdeg = -1) {
  int da = pdeg(a), db = pdeg(b);
  if (da < 0 || db < 0) return {};
  int dc = da + db;
  if (maxdeg >= 0) dc = std::min(dc, maxdeg);
  Poly c(dc + 1, mpz_class(0));
  for (int i = 0; i <= da; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j <= db && i + j <= dc; ++j) c[i + j] += a[i] * b[j];
  }
  for (auto& x : c) x = R.reduce(x);
  return c;
}

// Remainder of a modulo monic g.
Poly pmod(const Zmod& R, Poly a, const Poly& g) {
  int dg = pdeg(g);
  if (dg < 0 || g[dg] != 1) throw computation_error("pmod: divisor must be monic");
  for (int d = pdeg(a); d >= dg; d = pdeg(a)) {
    mpz_class c = a[d];
    for (int j = 0; j <= dg; ++j) a[d - dg + j] = R.sub(a[d - dg + j], R.mul(c, g[j]));
  }
  a.resize(dg, mpz_class(0));
  return a;
}

// Multiplicative inverse of a truncated power series (unit constant term).
Poly series_inv(const Zmod& R, const Poly& a, int deg) {
  if (a.empty() || !R.is_unit(a[0]))
    throw computation_error("series_inv: constant term is not a unit");
  mpz_class c0i = R.unit_inverse(a[0]);
  Poly inv(deg + 1, mpz_class(0));
  inv[0] = c0i;
  for (int k = 1; k <= deg; ++k) {
    mpz_class s = 0;
    for (int j = 1; j <= k && j < static_cast<int>(a.size()); ++j) s += a[j] * inv[k - j];
    inv[k] = R.reduce(-c0i * R.reduce(s));
  }
  return inv;
}

// Inverse of w modulo (monic g, p^N), for w invertible.  Seed: since g reduces
// to a power of z mod p, the inverse mod (p, g) is a series inverse; Newton
// lifting doubles the p-adic accuracy per step.
Poly inv_mod(const Zmod& R, const Poly& w, const Poly& g) {
  int dg = pdeg(g);
  Zmod Fp(R.p, 1);
  Poly v = series_inv(Fp, w, dg - 1);
  v.resize(dg, mpz_class(0));
  int acc = 1;
  while (acc < R.N) {
    // v <- v * (2 - w * v) mod (g, p^N)
    Poly wv = pmod(R, pmul(R, w, v), g);
    Poly t(std::max<size_t>(wv.size(), 1), mpz_class(0));
    for (size_t i = 0; i < wv.size(); ++i) t[i] = R.reduce(-wv[i]);
    t[0] = R.add(t[0], 2);
    v = pmod(R, pmul(R, v, t), g);
    acc *= 2;
  }
  Poly check = pmod(R, pmul(R, w, v), g);
  check[0] = R.sub(check[0], 1);
  if (pdeg(check) >= 0) throw computation_error("inv_mod: verification failed");
  return v;
}

}  // namespace

TwistData compute_twist(unsigned long p, const std::vector<mpz_class>& eis,
                        int b, const Zmod& Rk,
                        const std::vector<mpz_class>& tweak) {
  const int e = static_cast<int>(eis.size()) - 1;
  // Count tower stages to size the internal precision (one digit lost per
  // stage to the division by p).
  int stages = 0;
  {
    long long pr = static_cast<long long>(p);
    long long D = e;
    while (!(static_cast<long long>(e) * pr > b && D >= b + 1)) {
      ++stages;
      D += static_cast<long long>(e) * pr;
      pr *= static_cast<long long>(p);
    }
  }
  Zmod R(p, Rk.N + stages + 8);

  Poly C{mpz_class(1)};
  Poly Gr(eis.size());
  for (size_t j = 0; j < eis.size(); ++j) Gr[j] = R.reduce(eis[j]);
  long long pr = static_cast<long long>(p);
  int r = 1;
  while (!(static_cast<long long>(e) * pr > b && pdeg(Gr) >= b + 1)) {
    // F = E(z^{p^r}) mod Gr; W = F/p is a unit in Z/p^N[z]/(Gr).
    Poly F(static_cast<size_t>(e) * pr + 1, mpz_class(0));
    for (int j = 0; j <= e; ++j) F[static_cast<size_t>(j) * pr] = R.reduce(eis[j]);
    F = pmod(R, F, Gr);
    Poly W(F.size());
    for (size_t k = 0; k < F.size(); ++k) {
      if (!mpz_divisible_ui_p(F[k].get_mpz_t(), p))
        throw computation_error("twist tower: non-exact division by p");
      mpz_divexact_ui(W[k].get_mpz_t(), F[k].get_mpz_t(), p);
      W[k] = R.reduce(W[k]);
    }
    if (W.empty() || !R.is_unit(W[0]))
      throw computation_error("twist tower: quotient is not a unit");
    Poly V = inv_mod(R, W, Gr);
    C = pmod(R, pmul(R, V, C), Gr);
    // Advance the modulus: Gr *= E(z^{p^r}).
    Poly Er(static_cast<size_t>(e) * pr + 1, mpz_class(0));
    for (int j = 0; j <= e; ++j) Er[static_cast<size_t>(j) * pr] = R.reduce(eis[j]);
    Gr = pmul(R, Gr, Er);
    pr *= static_cast<long long>(p);
    ++r;
  }

  // Window phase: remaining tower factors restrict to window units.
  C.resize(b + 1, mpz_class(0));
  mpz_class beta = eis[0] / static_cast<long>(p);  // a_0 / p, a unit
  mpz_class betainv = R.unit_inverse(R.reduce(beta));
  for (; pr <= b; pr *= static_cast<long long>(p), ++r) {
    Poly S(b + 1, mpz_class(0));
    S[0] = 1;
    for (int j = 1; j < e; ++j) {
      long long d = static_cast<long long>(j) * pr;
      if (d > b) break;
      mpz_class ajp = eis[j] / static_cast<long>(p);
      S[d] = R.add(S[d], R.mul(R.reduce(ajp), betainv));
    }
    C = pmul(R, pmul(R, C, series_inv(R, S, b), b), Poly{betainv}, b);
    C.resize(b + 1, mpz_class(0));
  }

  if (!tweak.empty()) {
    Poly w(tweak.size());
    for (size_t k = 0; k < tweak.size(); ++k) w[k] = R.reduce(tweak[k]);
    if (!R.is_unit(w[0])) throw computation_error("twist tweak: not a window unit");
    C = pmul(R, C, w, b);
    C.resize(b + 1, mpz_class(0));
  }

  Poly phiC(b + 1, mpz_class(0));
  for (int j = 0; static_cast<long long>(j) * p <= b; ++j)
    phiC[static_cast<size_t>(j) * p] = C[j];
  Poly u = pmul(R, pmul(R, phiC, series_inv(R, C, b), b), Poly{betainv}, b);
  u.resize(b + 1, mpz_class(0));

  TwistData out;
  out.R = r;
  out.u.resize(b + 1);
  out.C.resize(b + 1);
  for (int k = 0; k <= b; ++k) {
    out.u[k] = Rk.reduce(u[k]);
    out.C[k] = Rk.reduce(C[k]);
  }
  return out;
}

Elem eval_window(const Ring& rg, const std::vector<mpz_class>& c, const Elem& x) {
  Elem acc = rg.zero();
  for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j)
    acc = rg.add(rg.mul(acc, x), rg.constant(c[j]));
  return acc;
}

Elem face_correction(const EnvelopeRing& R1, const FieldSpec& spec,
                     const TwistData& tw) {
  const Ring& rg = R1.ring;
  Elem rho = rg.mul(eval_window(rg, tw.C, R1.z1elem),
                    rg.invert(eval_window(rg, tw.C, rg.gen_elem(R1.z0))));
  Elem V = rg.constant(1);
  if (!R1.yg.empty()) {
    Elem Ez = rg.normalize(R1.Ez0);
    Elem y0 = rg.gen_elem(R1.yg[0]);
    for (int j = 1; j <= spec.e; ++j) {
      Elem Bj = rg.zero();
      for (int t = j; t <= spec.e; ++t) {
        mpz_class bin;
        mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(t),
                     static_cast<unsigned long>(j));
        Bj = rg.add(Bj, rg.monomial({{R1.z0, t - j}}, spec.eisenstein[t] * bin));
      }
      if (Bj.zero()) continue;
      Elem term = rg.mul(Bj, rg.pow(Ez, j - 1));
      term = rg.mul(term, rg.pow(y0, j));
      V = rg.add(V, term);
    }
    V = rg.normalize(V);
  }
  Elem W = V;
  for (int k = 0; k < tw.R; ++k) {
    rho = rg.mul(rho, W);
    if (k + 1 < tw.R) W = rg.phi(W);
  }
  return rho;
}

PadicMatrix hom_matrix(const Zmod& Rmat, const Ring& dst,
                       const std::vector<Elem>& images, const Ring& src) {
  const int dd = dst.dim();
  PadicMatrix M(dd, src.dim());
  // The image of a basis monomial is the image of its divisor (one generator
  // exponent lower, hence earlier in the weight-major basis order) times the
  // generator image; with the generator-image multiplication operators
  // precomputed, each column is a single matrix-vector product.
  std::vector<std::optional<PadicMatrix>> mg(images.size());
  for (int j = 0; j < src.dim(); ++j) {
    const Mono& m = src.basis[j];
    int g = -1;
    for (size_t k = 0; k < m.size(); ++k)
      if (m[k] > 0) {
        g = static_cast<int>(k);
        break;
      }
    if (g < 0) {
      std::vector<mpz_class> v = dst.to_vec(dst.constant(1));
      for (int i = 0; i < dd; ++i) M.at(i, j) = Rmat.reduce(v[i]);
      continue;
    }
    Mono par = m;
    par[g] = static_cast<uint16_t>(par[g] - 1);
    auto it = src.basis_index.find(par);
    if (it == src.basis_index.end())
      throw computation_error("hom_matrix: basis is not divisor-closed");
    if (!mg[g]) mg[g] = mult_matrix(Rmat, dst, images[g]);
    const PadicMatrix& MG = *mg[g];
    const int pj = it->second;
    for (int i = 0; i < dd; ++i) {
      mpz_class s = 0;
      for (int k = 0; k < dd; ++k) {
        const mpz_class& x = MG.at(i, k);
        const mpz_class& y = M.at(k, pj);
        if (x != 0 && y != 0) s += x * y;
      }
      M.at(i, j) = Rmat.reduce(s);
    }
  }
  return M;
}

PadicMatrix mult_matrix(const Zmod& Rmat, const Ring& rg, const Elem& a) {
  std::vector<std::vector<mpz_class>> cols = rg.mult_op(a);
  PadicMatrix M(rg.dim(), rg.dim());
  for (int j = 0; j < rg.dim(); ++j)
    for (int i = 0; i < rg.dim(); ++i) M.at(i, j) = Rmat.reduce(cols[j][i]);
  return M;
}

}  // namespace synk
