#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pnforms {

bool is_prime(std::uint64_t n);

/// Prime field GF(q) with elements stored as reduced residues in [0, q).
class PrimeField {
 public:
  using value_type = std::uint32_t;

  /// Moduli up to 2^31 are accepted; the vectorized row kernels cover q < 2^26.
  static constexpr std::uint32_t kMaxModulus = 1u << 31;

  explicit PrimeField(std::uint32_t q);

  std::uint32_t modulus() const { return q_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const;
  value_type from_mpz(const mpz_class& v) const;
  value_type from_mpq(const mpq_class& v) const;

  value_type add(value_type a, value_type b) const {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + q_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : q_ - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % q_);
  }
  value_type inv(value_type a) const;
  bool is_zero(value_type a) const { return a == 0; }

  /// Signed representative in (-q/2, q/2], used for readable output.
  long long to_signed(value_type a) const {
    return a > q_ / 2 ? static_cast<long long>(a) - q_ : static_cast<long long>(a);
  }
  std::string to_string(value_type a) const { return std::to_string(a); }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t q_;
};

/// The rationals with GMP arbitrary-precision numerators and denominators.
class RationalField {
 public:
  using value_type = mpq_class;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const;
  value_type from_mpz(const mpz_class& v) const { return mpq_class(v); }
  value_type from_mpq(const mpq_class& v) const { return v; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
  bool is_zero(const value_type& a) const { return a == 0; }
  std::string to_string(const value_type& a) const { return a.get_str(); }

  bool operator==(const RationalField&) const = default;
};

/// Runtime description of a working field, as it appears on the command line
/// and in certificates.
struct FieldSpec {
  enum class Kind { prime, rational };

  Kind kind = Kind::prime;
  std::uint32_t modulus = 101;

  static FieldSpec prime(std::uint32_t q) { return {Kind::prime, q}; }
  static FieldSpec rational() { return {Kind::rational, 0}; }

  /// Characteristic: q for GF(q), 0 for the rationals.
  std::uint32_t characteristic() const { return kind == Kind::prime ? modulus : 0; }
  std::string name() const;

  bool operator==(const FieldSpec&) const = default;
};

/// Calls fn(PrimeField) or fn(RationalField) according to spec.
template <class Fn>
decltype(auto) visit_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.kind == FieldSpec::Kind::prime) return fn(PrimeField(spec.modulus));
  return fn(RationalField{});
}

template <class F>
FieldSpec field_spec(const F& field) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    return FieldSpec::prime(field.modulus());
  } else {
    return FieldSpec::rational();
  }
}

}  // namespace pnforms
