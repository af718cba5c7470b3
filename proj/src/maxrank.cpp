#include "pnforms/maxrank.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "pnforms/bott.hpp"
#include "pnforms/exactalg.hpp"

namespace pnforms::maxrank {

namespace {

constexpr int kRationalBound = 50;
constexpr int kDrawsPerPoint = 1000;
constexpr int kRestarts = 200;

// Uniform in [0, bound) by rejection, identical on every platform.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

template <class F>
typename F::value_type draw(const F& field, std::mt19937_64& rng) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    return static_cast<typename F::value_type>(bounded(rng, field.modulus()));
  } else {
    return field.from_int(static_cast<long long>(bounded(rng, 2 * kRationalBound + 1)) - kRationalBound);
  }
}

template <class F>
std::string point_key(const F& field, const ProjPoint<F>& pt) {
  std::string key;
  for (const auto& c : pt.coords) key += field.to_string(c) + ",";
  return key;
}

// Every min(s, n+1)-subset of the points is linearly independent.
template <class F>
bool in_general_position(const F& field, int n, const std::vector<ProjPoint<F>>& pts) {
  const std::size_t s = pts.size();
  const std::size_t m = std::min<std::size_t>(s, static_cast<std::size_t>(n + 1));
  if (m == 0) return true;
  std::vector<bool> pick(s, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
  do {
    Matrix<F> rows(field, m, static_cast<std::size_t>(n + 1));
    std::size_t r = 0;
    for (std::size_t k = 0; k < s; ++k) {
      if (!pick[k]) continue;
      for (int j = 0; j <= n; ++j) rows(r, static_cast<std::size_t>(j)) = pts[k].coords[static_cast<std::size_t>(j)];
      ++r;
    }
    if (rank(rows) < m) return false;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return true;
}

int last_nonzero(const auto& field, const auto& coords) {
  for (int j = static_cast<int>(coords.size()) - 1; j >= 0; --j) {
    if (!field.is_zero(coords[static_cast<std::size_t>(j)])) return j;
  }
  return -1;
}

template <class F>
typename F::value_type power(const F& field, typename F::value_type base, int e) {
  typename F::value_type r = field.one();
  for (int k = 0; k < e; ++k) r = field.mul(r, base);
  return r;
}

// Values of the coefficient monomials at the point scaled to x_pivot = 1.
template <class F>
std::vector<typename F::value_type> monomial_values(const F& field, const forms::FormCoords& coords,
                                                    const ProjPoint<F>& pt, int pivot) {
  const auto scale = field.inv(pt.coords[static_cast<std::size_t>(pivot)]);
  std::vector<typename F::value_type> y;
  for (const auto& c : pt.coords) y.push_back(field.mul(c, scale));
  std::vector<typename F::value_type> values;
  values.reserve(coords.monomials().size());
  for (const auto& m : coords.monomials()) {
    typename F::value_type v = field.one();
    for (std::size_t i = 0; i < m.exponents.size(); ++i) v = field.mul(v, power(field, y[i], m.exponents[i]));
    values.push_back(std::move(v));
  }
  return values;
}

template <class F>
int resolve_pivot(const F& field, const ProjPoint<F>& pt, std::optional<int> pivot) {
  const int k = pivot ? *pivot : last_nonzero(field, pt.coords);
  if (k < 0 || k >= static_cast<int>(pt.coords.size()) || field.is_zero(pt.coords[static_cast<std::size_t>(k)])) {
    throw std::invalid_argument("chart pivot must be a nonzero coordinate");
  }
  return k;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

mpz_class projective_point_count(std::uint32_t q, int n) {
  mpz_class qn;
  mpz_ui_pow_ui(qn.get_mpz_t(), q, static_cast<unsigned long>(n + 1));
  return (qn - 1) / (q - 1);
}

template <class F>
ProjPoint<F> normalize(const F& field, std::vector<typename F::value_type> coords) {
  const int k = last_nonzero(field, coords);
  if (k < 0) throw std::invalid_argument("the zero vector is not a projective point");
  const auto inv = field.inv(coords[static_cast<std::size_t>(k)]);
  for (auto& c : coords) c = field.mul(c, inv);
  return {std::move(coords)};
}

template <class F>
PointSet<F> random_points(const F& field, int n, int s, std::uint64_t seed) {
  if (n < 0 || s < 0) throw std::invalid_argument("random_points needs n >= 0 and s >= 0");
  if constexpr (std::is_same_v<F, PrimeField>) {
    const mpz_class available = projective_point_count(field.modulus(), n);
    if (available < s) {
      throw FieldTooSmall("P^" + std::to_string(n) + " over GF(" + std::to_string(field.modulus()) + ") has only " +
                          available.get_str() + " points, " + std::to_string(s) + " requested");
    }
  }
  std::mt19937_64 rng(seed);
  const bool check_position = s <= n + 2;
  for (int restart = 0; restart < kRestarts; ++restart) {
    PointSet<F> out{n, {}, seed};
    std::set<std::string> seen;
    for (int k = 0; k < s; ++k) {
      bool placed = false;
      for (int tries = 0; tries < kDrawsPerPoint && !placed; ++tries) {
        std::vector<typename F::value_type> coords;
        for (int j = 0; j <= n; ++j) coords.push_back(draw(field, rng));
        if (last_nonzero(field, coords) < 0) continue;
        auto pt = normalize(field, std::move(coords));
        if (!seen.insert(point_key(field, pt)).second) continue;
        out.points.push_back(std::move(pt));
        placed = true;
      }
      if (!placed) throw FieldTooSmall("could not draw " + std::to_string(s) + " distinct points");
    }
    if (!check_position || in_general_position(field, n, out.points)) return out;
  }
  throw FieldTooSmall("no point set in general position after " + std::to_string(kRestarts) + " attempts");
}

template <class F>
std::vector<typename F::value_type> fiber_eval(const F& field, const forms::PForm<F>& form, const ProjPoint<F>& pt,
                                               std::optional<int> pivot) {
  const auto coords = form.coords();
  if (form.coeffs.size() != coords.size()) throw std::invalid_argument("form coefficients do not match its degree");
  if (pt.coords.size() != static_cast<std::size_t>(form.n + 1)) throw std::invalid_argument("point is not in P^n");
  const int k = resolve_pivot(field, pt, pivot);
  const auto values = monomial_values(field, coords, pt, k);
  std::vector<typename F::value_type> out;
  for (std::size_t a = 0; a < coords.sets().size(); ++a) {
    if (coords.sets()[a] >> k & 1u) continue;
    typename F::value_type v = field.zero();
    for (std::size_t m = 0; m < values.size(); ++m) {
      v = field.add(v, field.mul(form.coeffs[coords.index(a, m)], values[m]));
    }
    out.push_back(std::move(v));
  }
  return out;
}

template <class F>
Matrix<F> eval_matrix(const F& field, int n, int p, int d, const PointSet<F>& pts,
                      std::optional<int> (*pivot_choice)(const ProjPoint<F>&)) {
  if (n < 1 || p < -1 || p + 1 > n) throw std::invalid_argument("evaluation problem needs n >= 1, -1 <= p <= n-1");
  const int forms_degree = p + 1;
  const auto space = forms::h0_basis(field, n, forms_degree, d + forms_degree);
  const forms::FormCoords coords(n + 1, n + 1, forms_degree, d);
  const std::size_t fiber = static_cast<std::size_t>(fiber_rank(n, p));
  const std::size_t cols = space.dim();
  Matrix<F> out(field, pts.points.size() * fiber, cols);
  if (cols == 0) return out;
  for (std::size_t i = 0; i < pts.points.size(); ++i) {
    const auto& pt = pts.points[i];
    if (pt.coords.size() != static_cast<std::size_t>(n + 1)) throw std::invalid_argument("point is not in P^n");
    const int k = resolve_pivot(field, pt, pivot_choice ? pivot_choice(pt) : std::nullopt);
    const auto values = monomial_values(field, coords, pt, k);
    std::size_t row = i * fiber;
    for (std::size_t a = 0; a < coords.sets().size(); ++a) {
      if (coords.sets()[a] >> k & 1u) continue;
      auto dst = out.row(row++);
      for (std::size_t m = 0; m < values.size(); ++m) {
        if (field.is_zero(values[m])) continue;
        const auto src = space.basis.row(coords.index(a, m));
        for (std::size_t j = 0; j < cols; ++j) {
          if (!field.is_zero(src[j])) dst[j] = field.add(dst[j], field.mul(src[j], values[m]));
        }
      }
    }
  }
  return out;
}

long long fiber_rank(int n, int p) { return bott::to_ll(bott::binom(n, p + 1)); }

long long section_count(int n, int p, int d) {
  if (p + 1 > n) return 0;
  return bott::to_ll(bott::h_omega(n, p + 1, d + p + 1, 0));
}

template <class F>
std::vector<std::vector<std::string>> points_to_strings(const F& field, const PointSet<F>& pts) {
  std::vector<std::vector<std::string>> out;
  for (const auto& pt : pts.points) {
    std::vector<std::string> row;
    for (const auto& c : pt.coords) row.push_back(field.to_string(c));
    out.push_back(std::move(row));
  }
  return out;
}

template <class F>
PointSet<F> points_from_strings(const F& field, int n, const std::vector<std::vector<std::string>>& pts) {
  PointSet<F> out{n, {}, std::nullopt};
  std::set<std::string> seen;
  for (const auto& row : pts) {
    if (row.size() != static_cast<std::size_t>(n + 1)) throw CertificateError("point has the wrong number of coordinates");
    std::vector<typename F::value_type> coords;
    for (const auto& text : row) {
      mpq_class v;
      if (v.set_str(text, 10) != 0) throw CertificateError("bad coordinate '" + text + "'");
      v.canonicalize();
      if constexpr (std::is_same_v<F, PrimeField>) {
        if (v.get_den() != 1 || v < 0 || v >= field.modulus()) {
          throw CertificateError("coordinate '" + text + "' is not a reduced residue");
        }
      }
      coords.push_back(field.from_mpq(v));
    }
    ProjPoint<F> pt{coords};
    if (last_nonzero(field, pt.coords) < 0 || !(normalize(field, coords) == pt)) {
      throw CertificateError("point is not normalized");
    }
    if (!seen.insert(point_key(field, pt)).second) throw CertificateError("repeated point");
    out.points.push_back(std::move(pt));
  }
  return out;
}

template <class F>
RankCertificate maxrank_test(const F& field, int n, int p, int d, int s, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("maxrank_test needs at least one trial");
  if (s < 0) throw std::invalid_argument("maxrank_test needs s >= 0");
  RankCertificate best;
  best.n = n;
  best.p = p;
  best.d = d;
  best.s = s;
  best.field = field_spec(field);
  best.seed = seed;
  bool have = false;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto pts = random_points(field, n, s, mix_seed(seed, trial));
    const auto m = eval_matrix(field, n, p, d, pts);
    const std::size_t r = rank(m);
    if (!have || r > best.rank) {
      have = true;
      best.rows = m.rows();
      best.cols = m.cols();
      best.rank = r;
      best.points = points_to_strings(field, pts);
    }
    best.trials = trial + 1;
    best.maximal = best.rank == std::min(best.rows, best.cols);
    if (best.maximal) break;
  }
  return best;
}

RankCertificate maxrank_test(const FieldSpec& field, int n, int p, int d, int s, std::size_t trials,
                             std::uint64_t seed) {
  return visit_field(field, [&](const auto& f) { return maxrank_test(f, n, p, d, s, trials, seed); });
}

BettiLedger betti_ledger(const RankCertificate& cert) {
  if (cert.rank > std::min(cert.rows, cert.cols)) throw std::invalid_argument("rank exceeds the matrix shape");
  BettiLedger l;
  l.kernel = cert.cols - cert.rank;
  l.cokernel = cert.rows - cert.rank;
  l.verdict = std::min(l.kernel, l.cokernel) == 0 ? "expected resolution shape" : "not witnessed";
  return l;
}

nlohmann::ordered_json to_json(const RankCertificate& c) {
  using json = nlohmann::ordered_json;
  json field = {{"kind", c.field.kind == FieldSpec::Kind::prime ? "prime" : "rational"}};
  if (c.field.kind == FieldSpec::Kind::prime) field["modulus"] = c.field.modulus;
  json points = json::array();
  for (const auto& row : c.points) {
    json coords = json::array();
    for (const auto& v : row) {
      if (c.field.kind == FieldSpec::Kind::prime) {
        coords.push_back(std::stoull(v));
      } else {
        coords.push_back(v);
      }
    }
    points.push_back(std::move(coords));
  }
  return {{"problem", {{"n", c.n}, {"p", c.p}, {"d", c.d}, {"s", c.s}}},
          {"field", field},
          {"seed", c.seed},
          {"trials", c.trials},
          {"shape", {c.rows, c.cols}},
          {"rank", c.rank},
          {"maximal", c.maximal},
          {"points", points}};
}

RankCertificate certificate_from_json(const nlohmann::json& j) {
  try {
    RankCertificate c;
    const auto& problem = j.at("problem");
    c.n = problem.at("n").get<int>();
    c.p = problem.at("p").get<int>();
    c.d = problem.at("d").get<int>();
    c.s = problem.at("s").get<int>();
    const auto kind = j.at("field").at("kind").get<std::string>();
    if (kind == "prime") {
      c.field = FieldSpec::prime(j.at("field").at("modulus").get<std::uint32_t>());
      if (c.field.modulus >= PrimeField::kMaxModulus || !is_prime(c.field.modulus)) {
        throw CertificateError("modulus is not a supported prime");
      }
    } else if (kind == "rational") {
      c.field = FieldSpec::rational();
    } else {
      throw CertificateError("unknown field kind '" + kind + "'");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
    c.trials = j.at("trials").get<std::size_t>();
    const auto& shape = j.at("shape");
    if (!shape.is_array() || shape.size() != 2) throw CertificateError("shape must be [rows, cols]");
    c.rows = shape[0].get<std::size_t>();
    c.cols = shape[1].get<std::size_t>();
    c.rank = j.at("rank").get<std::size_t>();
    c.maximal = j.at("maximal").get<bool>();
    if (j.contains("points")) {
      for (const auto& row : j.at("points")) {
        std::vector<std::string> coords;
        for (const auto& v : row) coords.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        c.points.push_back(std::move(coords));
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw CertificateError(std::string("malformed certificate: ") + e.what());
  }
}

ReplayResult replay(const RankCertificate& cert) {
  ReplayResult out;
  if (cert.points.size() != static_cast<std::size_t>(cert.s)) {
    out.message = "replay list has " + std::to_string(cert.points.size()) + " points, problem has " +
                  std::to_string(cert.s);
    return out;
  }
  visit_field(cert.field, [&](const auto& f) {
    const auto pts = points_from_strings(f, cert.n, cert.points);
    const auto m = eval_matrix(f, cert.n, cert.p, cert.d, pts);
    out.rank = rank(m);
    out.maximal = out.rank == std::min(m.rows(), m.cols());
    if (m.rows() != cert.rows || m.cols() != cert.cols) {
      out.message = "shape " + m.shape_string() + " differs from the recorded " + std::to_string(cert.rows) + "x" +
                    std::to_string(cert.cols);
    } else if (out.rank != cert.rank) {
      out.message = "rank " + std::to_string(out.rank) + " differs from the recorded " + std::to_string(cert.rank);
    } else if (out.maximal != cert.maximal) {
      out.message = "verdict differs from the recorded one";
    } else {
      out.matches = true;
      out.message = "ok";
    }
    return 0;
  });
  return out;
}

#define PNFORMS_INSTANTIATE(F)                                                                                    \
  template ProjPoint<F> normalize(const F&, std::vector<typename F::value_type>);                                 \
  template PointSet<F> random_points(const F&, int, int, std::uint64_t);                                          \
  template std::vector<typename F::value_type> fiber_eval(const F&, const forms::PForm<F>&, const ProjPoint<F>&, \
                                                          std::optional<int>);                                    \
  template Matrix<F> eval_matrix(const F&, int, int, int, const PointSet<F>&,                                     \
                                 std::optional<int> (*)(const ProjPoint<F>&));                                    \
  template RankCertificate maxrank_test(const F&, int, int, int, int, std::size_t, std::uint64_t);               \
  template PointSet<F> points_from_strings(const F&, int, const std::vector<std::vector<std::string>>&);          \
  template std::vector<std::vector<std::string>> points_to_strings(const F&, const PointSet<F>&);

PNFORMS_INSTANTIATE(PrimeField)
PNFORMS_INSTANTIATE(RationalField)

#undef PNFORMS_INSTANTIATE

}  // namespace pnforms::maxrank
