#include "synk/ring.hpp"

#include <algorithm>

namespace synk {

namespace {
// (weight, lex) monomial order used for deterministic worklists and bases.
struct MonoLess {
  const Ring* ring;
  bool operator()(const Mono& a, const Mono& b) const {
    int wa = ring->weight_of(a), wb = ring->weight_of(b);
    if (wa != wb) return wa < wb;
    return a < b;
  }
};
}  // namespace

int Ring::add_gen(const std::string& name, int weight, int delta_to) {
  gens.push_back(Generator{name, weight, delta_to});
  rules.emplace_back(std::nullopt);
  phi_cache_.emplace_back(std::nullopt);
  return static_cast<int>(gens.size()) - 1;
}

void Ring::set_rule(int g, int power, Elem repl) {
  rules[g] = Rule{power, std::move(repl)};
}

int Ring::weight_of(const Mono& m) const {
  int w = 0;
  for (size_t g = 0; g < m.size(); ++g) w += static_cast<int>(m[g]) * gens[g].weight;
  return w;
}

Elem Ring::constant(const mpz_class& c) const {
  Elem e;
  mpz_class r = R.reduce(c);
  if (r != 0) e.t.emplace(Mono(gens.size(), 0), r);
  return e;
}

Elem Ring::monomial(const std::vector<std::pair<int, int>>& exps, const mpz_class& c) const {
  Mono m(gens.size(), 0);
  for (auto& [g, e] : exps) m[g] = static_cast<uint16_t>(m[g] + e);
  Elem out;
  mpz_class r = R.reduce(c);
  if (r != 0 && weight_of(m) <= b) out.t.emplace(std::move(m), r);
  return out;
}

int Ring::reducible_by(const Mono& m) const {
  for (size_t g = 0; g < gens.size(); ++g)
    if (rules[g] && m[g] >= rules[g]->power) return static_cast<int>(g);
  return -1;
}

Elem Ring::normalize(const Elem& a) const {
  // Worklist rewriting; termination is guaranteed because every rule step
  // either raises the weight, lowers the z1-degree at equal weight, or raises
  // the coefficient valuation at equal weight (checked when rules are built).
  std::map<Mono, mpz_class> work;
  for (auto& [m, c] : a.t) {
    mpz_class r = R.reduce(c);
    if (r == 0) continue;
    Mono mm = m;
    mm.resize(gens.size(), 0);
    if (weight_of(mm) > b) continue;
    auto [it, fresh] = work.emplace(std::move(mm), r);
    if (!fresh) {
      it->second = R.add(it->second, r);
      if (it->second == 0) work.erase(it);
    }
  }
  Elem out;
  long long budget = 400000000;
  while (!work.empty()) {
    auto it = work.begin();
    Mono m = it->first;
    mpz_class c = it->second;
    work.erase(it);
    if (c == 0) continue;
    int g = reducible_by(m);
    if (g < 0) {
      auto [oit, fresh] = out.t.emplace(std::move(m), c);
      if (!fresh) {
        oit->second = R.add(oit->second, c);
        if (oit->second == 0) out.t.erase(oit);
      }
      continue;
    }
    const Rule& rule = *rules[g];
    Mono base = m;
    base[g] = static_cast<uint16_t>(base[g] - rule.power);
    for (auto& [rm, rc] : rule.repl.t) {
      Mono nm = base;
      for (size_t k = 0; k < nm.size(); ++k) nm[k] = static_cast<uint16_t>(nm[k] + rm[k]);
      if (weight_of(nm) > b) continue;
      mpz_class nc = R.mul(c, rc);
      if (nc == 0) continue;
      auto [wit, fresh] = work.emplace(std::move(nm), nc);
      if (!fresh) {
        wit->second = R.add(wit->second, nc);
        if (wit->second == 0) work.erase(wit);
      }
      if (--budget < 0) throw computation_error("normalize: rewrite budget exceeded");
    }
    if (--budget < 0) throw computation_error("normalize: rewrite budget exceeded");
  }
  return out;
}

Elem Ring::add(const Elem& a, const Elem& b) const {
  Elem out = a;
  for (auto& [m, c] : b.t) {
    auto [it, fresh] = out.t.emplace(m, c);
    if (!fresh) {
      it->second = R.add(it->second, c);
      if (it->second == 0) out.t.erase(it);
    }
  }
  return out;
}

Elem Ring::sub(const Elem& a, const Elem& b) const {
  Elem nb;
  for (auto& [m, c] : b.t) nb.t.emplace(m, R.reduce(-c));
  return add(a, nb);
}

Elem Ring::scal(const mpz_class& c, const Elem& a) const {
  Elem out;
  mpz_class cr = R.reduce(c);
  if (cr == 0) return out;
  for (auto& [m, x] : a.t) {
    mpz_class v = R.mul(cr, x);
    if (v != 0) out.t.emplace(m, v);
  }
  return out;
}

Elem Ring::mul(const Elem& a, const Elem& rhs) const {
  // Dense products go through basis coordinates: assembling the
  // multiplication operator by generators is far cheaper than the
  // term-by-term rewrite of a dense-by-dense symbolic product.
  if (basis_built_ && a.t.size() >= 24 && rhs.t.size() >= 24)
    return from_vec(mul_vec(a, to_vec(normalize(rhs))));
  Elem raw;
  for (auto& [ma, ca] : a.t)
    for (auto& [mb, cb] : rhs.t) {
      Mono m(std::max(ma.size(), mb.size()), 0);
      for (size_t k = 0; k < m.size(); ++k) {
        int e = (k < ma.size() ? ma[k] : 0) + (k < mb.size() ? mb[k] : 0);
        m[k] = static_cast<uint16_t>(e);
      }
      if (weight_of(m) > b) continue;
      auto [it, fresh] = raw.t.try_emplace(std::move(m), mpz_class(0));
      it->second += ca * cb;
    }
  return normalize(raw);
}

Elem Ring::pow(const Elem& a, int k) const {
  if (k == 0) return constant(1);
  if (a.t.size() == 1) {  // fast path: power of a single term
    auto& [m, c] = *a.t.begin();
    Mono nm(m.size(), 0);
    for (size_t g = 0; g < m.size(); ++g) nm[g] = static_cast<uint16_t>(m[g] * k);
    mpz_class nc;
    mpz_powm_ui(nc.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(k), R.pN.get_mpz_t());
    Elem raw;
    if (nc != 0 && weight_of(nm) <= b) raw.t.emplace(std::move(nm), std::move(nc));
    return normalize(raw);
  }
  Elem acc = constant(1);
  Elem base = a;
  int e = k;
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return acc;
}

Elem Ring::phi_gen(int g) const {
  if (phi_cache_[g]) return *phi_cache_[g];
  Elem out = monomial({{g, static_cast<int>(p)}}, 1);
  if (gens[g].delta_to >= 0)
    out = add(out, monomial({{gens[g].delta_to, 1}}, mpz_class(static_cast<unsigned long>(p))));
  out = normalize(out);
  phi_cache_[g] = out;
  return out;
}

Elem Ring::phi(const Elem& a) const {
  if (basis_built_ && a.t.size() >= 24)
    return from_vec(phi_vec(to_vec(normalize(a))));
  Elem out;
  for (auto& [m, c] : a.t) {
    Elem term = constant(c);
    for (size_t g = 0; g < m.size() && !term.zero(); ++g)
      if (m[g] > 0) term = mul(term, pow(phi_gen(static_cast<int>(g)), m[g]));
    out = add(out, term);
  }
  return normalize(out);
}

Elem Ring::delta(const Elem& a) const {
  Elem d = sub(phi(a), pow(a, static_cast<int>(p)));
  Elem out;
  for (auto& [m, c] : d.t) {
    if (!mpz_divisible_ui_p(c.get_mpz_t(), p))
      throw computation_error("delta: non-exact division by p");
    mpz_class q;
    mpz_divexact_ui(q.get_mpz_t(), c.get_mpz_t(), p);
    out.t.emplace(m, R.reduce(q));
  }
  return out;
}

mpz_class Ring::constant_term(const Elem& a) const {
  Mono unit(gens.size(), 0);
  auto it = a.t.find(unit);
  return it == a.t.end() ? mpz_class(0) : it->second;
}

Elem Ring::invert(const Elem& a) const {
  mpz_class c0 = constant_term(a);
  if (!R.is_unit(c0)) throw computation_error("invert: constant term is not a unit");
  mpz_class c0i = R.unit_inverse(c0);
  Elem n = a;
  n.t.erase(Mono(gens.size(), 0));
  Elem cur = constant(c0i);
  Elem acc = cur;
  for (int j = 1; j <= b; ++j) {
    cur = scal(R.reduce(-c0i), mul(cur, n));
    if (cur.zero()) break;
    acc = add(acc, cur);
  }
  return acc;
}

Elem Ring::weight_truncate(const Elem& a, int lo, int hi) const {
  Elem out;
  for (auto& [m, c] : a.t) {
    int w = weight_of(m);
    if (w >= lo && w <= hi) out.t.emplace(m, c);
  }
  return out;
}

void Ring::build_basis() {
  basis.clear();
  basis_index.clear();
  rank_per_weight.assign(b + 1, 0);
  Mono cur(gens.size(), 0);
  std::vector<Mono> all;
  // Depth-first enumeration of exponent vectors below caps and window weight.
  auto rec = [&](auto&& self, size_t g, int wt) -> void {
    if (g == gens.size()) {
      all.push_back(cur);
      return;
    }
    int cap_exp = rules[g] ? rules[g]->power - 1 : b;  // no rule: weight-bounded
    int max_by_weight = (b - wt) / gens[g].weight;
    int hi = std::min(cap_exp, max_by_weight);
    for (int e = 0; e <= hi; ++e) {
      cur[g] = static_cast<uint16_t>(e);
      self(self, g + 1, wt + e * gens[g].weight);
    }
    cur[g] = 0;
  };
  rec(rec, 0, 0);
  std::sort(all.begin(), all.end(), MonoLess{this});
  basis = std::move(all);
  for (size_t i = 0; i < basis.size(); ++i) {
    basis_index.emplace(basis[i], static_cast<int>(i));
    rank_per_weight[weight_of(basis[i])]++;
  }
  basis_built_ = true;
  gen_op_.assign(gens.size(), std::nullopt);
  phi_op_.reset();
}

const std::vector<Ring::SparseCol>& Ring::gen_op(int g) const {
  if (!gen_op_[g]) {
    std::vector<SparseCol> cols(basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
      Elem raw;
      Mono m = basis[j];
      m[g] = static_cast<uint16_t>(m[g] + 1);
      if (weight_of(m) <= b) raw.t.emplace(std::move(m), mpz_class(1));
      std::vector<mpz_class> v = to_vec(normalize(raw));
      for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) cols[j].emplace_back(static_cast<int>(i), v[i]);
    }
    gen_op_[g] = std::move(cols);
  }
  return *gen_op_[g];
}

std::vector<std::vector<mpz_class>> Ring::mult_op(const Elem& a) const {
  const size_t d = basis.size();
  std::vector<std::vector<mpz_class>> cols(d);
  cols[0] = to_vec(normalize(a));  // basis[0] is the unit monomial
  for (size_t j = 1; j < d; ++j) {
    const Mono& m = basis[j];
    size_t g = 0;
    while (m[g] == 0) ++g;
    Mono par = m;
    par[g] = static_cast<uint16_t>(par[g] - 1);
    const std::vector<mpz_class>& pc = cols[basis_index.at(par)];
    const std::vector<SparseCol>& M = gen_op(static_cast<int>(g));
    std::vector<mpz_class> out(d, mpz_class(0));
    for (size_t k = 0; k < d; ++k) {
      if (pc[k] == 0) continue;
      for (const auto& [i, c] : M[k]) out[i] += c * pc[k];
    }
    for (auto& x : out) x = R.reduce(x);
    cols[j] = std::move(out);
  }
  return cols;
}

std::vector<mpz_class> Ring::mul_vec(const Elem& a,
                                     const std::vector<mpz_class>& v) const {
  std::vector<std::vector<mpz_class>> op = mult_op(a);
  const size_t d = basis.size();
  std::vector<mpz_class> out(d, mpz_class(0));
  for (size_t j = 0; j < d; ++j) {
    if (v[j] == 0) continue;
    const std::vector<mpz_class>& col = op[j];
    for (size_t i = 0; i < d; ++i)
      if (col[i] != 0) out[i] += col[i] * v[j];
  }
  for (auto& x : out) x = R.reduce(x);
  return out;
}

std::vector<mpz_class> Ring::phi_vec(const std::vector<mpz_class>& v) const {
  if (!phi_op_) {
    const size_t d = basis.size();
    // Dense multiplication operators of the generator Frobenius images;
    // phi(basis monomial) then follows its divisor as in mult_op.
    std::vector<std::vector<std::vector<mpz_class>>> gph(gens.size());
    std::vector<std::vector<mpz_class>> cols(d);
    cols[0] = to_vec(constant(1));
    for (size_t j = 1; j < d; ++j) {
      const Mono& m = basis[j];
      size_t g = 0;
      while (m[g] == 0) ++g;
      Mono par = m;
      par[g] = static_cast<uint16_t>(par[g] - 1);
      const std::vector<mpz_class>& pc = cols[basis_index.at(par)];
      if (gph[g].empty()) gph[g] = mult_op(phi_gen(static_cast<int>(g)));
      std::vector<mpz_class> out(d, mpz_class(0));
      for (size_t k = 0; k < d; ++k) {
        if (pc[k] == 0) continue;
        const std::vector<mpz_class>& col = gph[g][k];
        for (size_t i = 0; i < d; ++i)
          if (col[i] != 0) out[i] += col[i] * pc[k];
      }
      for (auto& x : out) x = R.reduce(x);
      cols[j] = std::move(out);
    }
    phi_op_ = std::move(cols);
  }
  const auto& op = *phi_op_;
  const size_t d = basis.size();
  std::vector<mpz_class> out(d, mpz_class(0));
  for (size_t j = 0; j < d; ++j) {
    if (v[j] == 0) continue;
    const std::vector<mpz_class>& col = op[j];
    for (size_t i = 0; i < d; ++i)
      if (col[i] != 0) out[i] += col[i] * v[j];
  }
  for (auto& x : out) x = R.reduce(x);
  return out;
}

std::vector<mpz_class> Ring::to_vec(const Elem& a) const {
  std::vector<mpz_class> v(basis.size(), mpz_class(0));
  for (auto& [m, c] : a.t) {
    auto it = basis_index.find(m);
    if (it == basis_index.end())
      throw computation_error("to_vec: non-normal monomial survived normalization");
    v[it->second] = c;
  }
  return v;
}

Elem Ring::from_vec(const std::vector<mpz_class>& v) const {
  Elem out;
  for (size_t i = 0; i < v.size(); ++i) {
    mpz_class c = R.reduce(v[i]);
    if (c != 0) out.t.emplace(basis[i], c);
  }
  return out;
}

Elem Ring::apply_hom(const Ring& dst, const std::vector<Elem>& images, const Elem& a) {
  Elem out;
  for (auto& [m, c] : a.t) {
    Elem term = dst.constant(c);
    for (size_t g = 0; g < m.size() && !term.zero(); ++g)
      if (m[g] > 0) term = dst.mul(term, dst.pow(images[g], m[g]));
    out = dst.add(out, term);
  }
  return dst.normalize(out);
}

}  // namespace synk
