// Exact arithmetic in Z/p^N viewed as p-adic integers known to N digits.
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace synk {

// A fatal internal-consistency failure (rank mismatch, non-exact division, ...).
struct computation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Signals that the current working precision is insufficient; the orchestrator
// reacts by doubling N and re-running.
struct escalation_needed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Context for arithmetic mod p^N.  Residues are kept in canonical form [0, p^N).
struct Zmod {
  unsigned long p = 2;
  int N = 1;
  mpz_class pN;  // p^N

  Zmod() { pN = 2; }
  Zmod(unsigned long p_, int N_) : p(p_), N(N_) {
    if (N_ < 1) throw computation_error("Zmod: N must be >= 1");
    mpz_ui_pow_ui(pN.get_mpz_t(), p, static_cast<unsigned long>(N));
  }

  mpz_class reduce(const mpz_class& a) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), pN.get_mpz_t());
    return r;
  }

  mpz_class pow_p(int k) const {  // p^k for 0 <= k <= N
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(k));
    return r;
  }

  // p-adic valuation of a residue, capped at N (v(0 mod p^N) = N).
  int valuation(const mpz_class& a) const {
    if (a == 0) return N;
    if (p == 2)
      return std::min<int>(N, static_cast<int>(mpz_scan1(a.get_mpz_t(), 0)));
    if (!mpz_divisible_ui_p(a.get_mpz_t(), p)) return 0;
    mpz_class t, pz(static_cast<unsigned long>(p));
    int v = static_cast<int>(
        mpz_remove(t.get_mpz_t(), a.get_mpz_t(), pz.get_mpz_t()));
    return std::min(v, N);
  }

  bool is_unit(const mpz_class& a) const { return !mpz_divisible_ui_p(a.get_mpz_t(), p); }

  mpz_class unit_inverse(const mpz_class& a) const {
    if (!is_unit(a)) throw computation_error("unit_inverse: argument is not a unit");
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), pN.get_mpz_t()))
      throw computation_error("unit_inverse: inversion failed");
    return r;
  }

  // Exact division by p^k; throws if the residue is not divisible.
  mpz_class divide_exact_p(const mpz_class& a, int k) const {
    mpz_class q = pow_p(k);
    if (!mpz_divisible_p(a.get_mpz_t(), q.get_mpz_t()))
      throw computation_error("divide_exact_p: not divisible by p^" + std::to_string(k));
    mpz_class r;
    mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
    return reduce(r);
  }

  mpz_class mul(const mpz_class& a, const mpz_class& b) const { return reduce(a * b); }
  mpz_class add(const mpz_class& a, const mpz_class& b) const { return reduce(a + b); }
  mpz_class sub(const mpz_class& a, const mpz_class& b) const { return reduce(a - b); }
};

}  // namespace synk
