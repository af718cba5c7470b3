#include "pnforms/bott.hpp"

#include <stdexcept>
#include <string>

namespace pnforms::bott {

namespace {

void check_range(int n, int p, int i) {
  if (n < 0) throw std::invalid_argument("negative ambient dimension " + std::to_string(n));
  if (p < 0 || p > n) throw std::invalid_argument("form degree " + std::to_string(p) + " outside [0, n]");
  if (i < 0 || i > n) throw std::invalid_argument("cohomology index " + std::to_string(i) + " outside [0, n]");
}

}  // namespace

mpz_class binom(long long a, long long b) {
  if (a < 0) throw std::invalid_argument("binom: negative upper argument " + std::to_string(a));
  if (b < 0 || b > a) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
  return r;
}

mpz_class h_omega(int n, int p, int d, int i) {
  check_range(n, p, i);
  const long long N = n, P = p, D = d;
  if (i == 0 && D > P) return binom(D + N - P, D) * binom(D - 1, P);
  if (D == 0 && i == p) return 1;
  if (i == n && D < P - N) return binom(P - D, -D) * binom(-D - 1, N - P);
  return 0;
}

mpz_class h_O(int n, int d, int i) {
  check_range(n, 0, i);
  const long long N = n, D = d;
  if (i == 0 && D >= 0) return binom(D + N, D);
  if (i == n && D <= -N - 1) return binom(-D - 1, -D - 1 - N);
  return 0;
}

bool duality_consistency(int n, int p, int d) { return h_omega(n, p, d, n) == h_omega(n, n - p, -d, 0); }

CohomDims cohomology(int n, int p, int d) {
  CohomDims c{n, p, d, {}};
  c.dims.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) c.dims.push_back(h_omega(n, p, d, i));
  return c;
}

long long to_ll(const mpz_class& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("dimension does not fit a machine integer: " + v.get_str());
  return v.get_si();
}

}  // namespace pnforms::bott
