#pragma once

// Evaluation of twisted forms at points of P^n and maximal-rank certificates.
//
// Problem (n, p, d, s): the map H^0(Omega^{p+1}(d+p+1)) -> sum over s points of
// the fiber, which has rank C(n, p+1). p = -1 is the plain O(d) interpolation
// problem.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "pnforms/field.hpp"
#include "pnforms/forms.hpp"

namespace pnforms::maxrank {

class FieldTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
struct ProjPoint {
  std::vector<typename F::value_type> coords;  // last nonzero coordinate is 1

  bool operator==(const ProjPoint&) const = default;
};

template <class F>
struct PointSet {
  int n = 0;
  std::vector<ProjPoint<F>> points;
  std::optional<std::uint64_t> seed;
};

/// Scales coords so the last nonzero entry is 1. Throws for the zero vector.
template <class F>
ProjPoint<F> normalize(const F& field, std::vector<typename F::value_type> coords);

/// Stream `index` of the seeded generator family.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// Number of points of P^n over GF(q).
mpz_class projective_point_count(std::uint32_t q, int n);

/// s distinct points from a generator seeded with `seed`. Coordinates are uniform
/// in GF(q), or integers in [-50, 50] over the rationals. For s <= n+2 every
/// min(s, n+1) of them are linearly independent. Throws FieldTooSmall when the
/// field cannot hold s such points or resampling gives up.
template <class F>
PointSet<F> random_points(const F& field, int n, int s, std::uint64_t seed);

/// Fiber of a (p)-form at a point, trivialized on the affine chart of `pivot`
/// (default: last nonzero coordinate): the point is scaled so x_pivot = 1 and
/// the form is pulled back along x_pivot = 1, which keeps the dx_I with
/// pivot not in I. Returns C(n, p) values, I in lexicographic order.
template <class F>
std::vector<typename F::value_type> fiber_eval(const F& field, const forms::PForm<F>& form, const ProjPoint<F>& pt,
                                               std::optional<int> pivot = std::nullopt);

/// s * C(n, p+1) rows (fibers stacked by point) by h^0(Omega^{p+1}(d+p+1)) columns.
/// `pivot_choice` picks the chart per point (test hook; default canonical).
template <class F>
Matrix<F> eval_matrix(const F& field, int n, int p, int d, const PointSet<F>& pts,
                      std::optional<int> (*pivot_choice)(const ProjPoint<F>&) = nullptr);

/// Fiber rank C(n, p+1) and section count h^0(Omega^{p+1}(d+p+1)).
long long fiber_rank(int n, int p);
long long section_count(int n, int p, int d);

struct RankCertificate {
  int n = 0, p = 0, d = 0, s = 0;
  FieldSpec field;
  std::uint64_t seed = 0;
  std::size_t trials = 0;  // trials used
  std::size_t rows = 0, cols = 0;
  std::size_t rank = 0;
  bool maximal = false;
  std::vector<std::vector<std::string>> points;  // replay list, decimal or "a/b"

  bool operator==(const RankCertificate&) const = default;
};

/// Up to `trials` seeded point sets; stops at the first maximal one. When none
/// is maximal the certificate keeps the best rank seen and its points.
template <class F>
RankCertificate maxrank_test(const F& field, int n, int p, int d, int s, std::size_t trials, std::uint64_t seed);

RankCertificate maxrank_test(const FieldSpec& field, int n, int p, int d, int s, std::size_t trials,
                             std::uint64_t seed);

struct BettiLedger {
  std::size_t kernel = 0;    // h^0 - rank
  std::size_t cokernel = 0;  // s * fiber rank - rank
  std::string verdict;       // "expected resolution shape" or "not witnessed"
};

BettiLedger betti_ledger(const RankCertificate& cert);

nlohmann::ordered_json to_json(const RankCertificate& cert);
/// Throws CertificateError on missing or malformed fields.
RankCertificate certificate_from_json(const nlohmann::json& j);

struct ReplayResult {
  std::size_t rank = 0;
  bool maximal = false;
  bool matches = false;
  std::string message;
};

/// Re-evaluates the stored points and compares rank, shape and verdict.
ReplayResult replay(const RankCertificate& cert);

/// Points of a replay list, parsed and checked against the certificate's field.
template <class F>
PointSet<F> points_from_strings(const F& field, int n, const std::vector<std::vector<std::string>>& pts);

template <class F>
std::vector<std::vector<std::string>> points_to_strings(const F& field, const PointSet<F>& pts);

}  // namespace pnforms::maxrank
