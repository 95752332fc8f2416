#include "synk/ktheory.hpp"

namespace synk {

mpz_class FiniteAbelianGroup::order() const {
  if (infinite_cyclic) throw computation_error("order(): group is infinite");
  mpz_class o = coprime;
  for (int e : ppart.exponents) {
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(e));
    o *= pe;
  }
  return o;
}

FiniteAbelianGroup quillen_k(unsigned long p, int f, int r) {
  if (r < 0) throw computation_error("quillen_k: negative degree");
  FiniteAbelianGroup g;
  g.p = p;
  g.ppart.prime = p;
  if (r == 0) {
    g.infinite_cyclic = true;
    return g;
  }
  if (r % 2 == 0) return g;  // trivial in positive even degrees
  int i = (r + 1) / 2;
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(f));
  mpz_class qi;
  mpz_pow_ui(qi.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(i));
  g.coprime = qi - 1;
  return g;
}

FiniteAbelianGroup assemble_integral(unsigned long p, int f, int r,
                                     const AbelianPGroup& ppart) {
  FiniteAbelianGroup g = quillen_k(p, f, r);
  if (r == 0) return g;
  g.ppart = ppart;
  g.ppart.prime = p;
  return g;
}

int even_vanishing_bound(unsigned long p, int e, int n) {
  int m = (n + e - 1) / e;  // ceil(n / e)
  mpz_class pm;
  mpz_ui_pow_ui(pm.get_mpz_t(), p, static_cast<unsigned long>(m));
  mpz_class num = mpz_class(static_cast<unsigned long>(p)) *
                  mpz_class(static_cast<unsigned long>(p)) * (pm - 1);
  mpz_class den = mpz_class(static_cast<unsigned long>(p - 1)) *
                  mpz_class(static_cast<unsigned long>(p - 1));
  mpz_class q, rem;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (rem != 0) q += 1;
  return static_cast<int>(q.get_si());
}

mpz_class odd_order(unsigned long p, int f, int n, int i) {
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(f));
  mpz_class qi;
  mpz_pow_ui(qi.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(i));
  mpz_class qpow;
  mpz_pow_ui(qpow.get_mpz_t(), q.get_mpz_t(),
             static_cast<unsigned long>(static_cast<long>(i) * (n - 1)));
  return qpow * (qi - 1);
}

bool ratio_check(int i, int n, int f, const AbelianPGroup& h1, const AbelianPGroup& h2) {
  if (i < 2) throw computation_error("ratio_check: only valid for i >= 2");
  return h1.order_exponent() - h2.order_exponent() == i * (n - 1) * f;
}

bool k1_units_check(int n, int f, const AbelianPGroup& h1, const AbelianPGroup& h2) {
  return h1.order_exponent() == f * (n - 1) && h2.trivial();
}

}  // namespace synk
