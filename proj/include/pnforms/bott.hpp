#pragma once

// Cohomology dimensions of twisted differential forms on projective space.
//
//   h^0(P^n, Omega^p(d)) = C(d+n-p, d) C(d-1, p)      for d > p
//   h^p(P^n, Omega^p)    = 1                          for d = 0
//   h^n(P^n, Omega^p(d)) = C(p-d, -d) C(-d-1, n-p)    for d < p-n
//
// and zero otherwise. The top-degree branch must read C(p-d, -d): with
// C(-d-p, -d) it would vanish at (n,p,d) = (2,1,-2), where Serre duality
// requires h^2(Omega^1(-2)) = h^0(Omega^1(2)) = 3.

#include <gmpxx.h>

#include <vector>

namespace pnforms::bott {

/// C(a, b) for a >= 0, zero when b < 0 or b > a. Throws std::invalid_argument
/// for negative a.
mpz_class binom(long long a, long long b);

/// h^i(P^n, Omega^p(d)). Requires 0 <= p <= n and 0 <= i <= n.
mpz_class h_omega(int n, int p, int d, int i);

/// h^i(P^n, O(d)). Requires 0 <= i <= n.
mpz_class h_O(int n, int d, int i);

/// h^n(Omega^p(d)) == h^0(Omega^{n-p}(-d)).
bool duality_consistency(int n, int p, int d);

struct CohomDims {
  int n = 0;
  int p = 0;
  int d = 0;
  std::vector<mpz_class> dims;  // dims[i] = h^i

  bool operator==(const CohomDims&) const = default;
};

CohomDims cohomology(int n, int p, int d);

/// Convenience for ledgers that need machine integers; throws std::overflow_error
/// if the value does not fit.
long long to_ll(const mpz_class& v);

}  // namespace pnforms::bott
