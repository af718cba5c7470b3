#include "pnforms/field.hpp"

#include <climits>

namespace pnforms {

namespace {

mpz_class to_mpz(long long v) {
  if (v >= LONG_MIN && v <= LONG_MAX) return mpz_class(static_cast<long>(v));
  return mpz_class(std::to_string(v));
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (q >= kMaxModulus) throw std::invalid_argument("modulus must be below 2^31");
  if (!is_prime(q)) throw std::invalid_argument("modulus " + std::to_string(q) + " is not prime");
}

PrimeField::value_type PrimeField::from_int(long long v) const {
  long long r = v % static_cast<long long>(q_);
  if (r < 0) r += q_;
  return static_cast<value_type>(r);
}

PrimeField::value_type PrimeField::from_mpz(const mpz_class& v) const {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), q_);
  return static_cast<value_type>(r.get_ui());
}

PrimeField::value_type PrimeField::from_mpq(const mpq_class& v) const {
  value_type den = from_mpz(v.get_den());
  if (den == 0) throw std::domain_error("denominator divisible by the field characteristic");
  return mul(from_mpz(v.get_num()), inv(den));
}

PrimeField::value_type PrimeField::inv(value_type a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  // Fermat: a^(q-2).
  std::uint64_t result = 1;
  std::uint64_t base = a;
  std::uint32_t e = q_ - 2;
  while (e != 0) {
    if (e & 1u) result = result * base % q_;
    base = base * base % q_;
    e >>= 1;
  }
  return static_cast<value_type>(result);
}

RationalField::value_type RationalField::from_int(long long v) const { return mpq_class(to_mpz(v)); }

std::string FieldSpec::name() const {
  return kind == Kind::prime ? "GF(" + std::to_string(modulus) + ")" : "QQ";
}

}  // namespace pnforms
