#include "doctest.h"
#include "pnforms/exactalg.hpp"
#include "pnforms/maxrank.hpp"

using namespace pnforms;
using namespace pnforms::maxrank;

namespace {

const PrimeField kF101(101);
const RationalField kQQ;

template <class F>
PointSet<F> fixed_points(const F& field, int n, std::initializer_list<std::initializer_list<long long>> rows) {
  PointSet<F> out{n, {}, std::nullopt};
  for (const auto& r : rows) {
    std::vector<typename F::value_type> coords;
    for (long long v : r) coords.push_back(field.from_int(v));
    out.points.push_back(normalize(field, coords));
  }
  return out;
}

std::optional<int> first_nonzero_pivot(const ProjPoint<PrimeField>& pt) {
  for (std::size_t j = 0; j < pt.coords.size(); ++j) {
    if (pt.coords[j] != 0) return static_cast<int>(j);
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("normalization") {
  const auto pt = normalize(kQQ, {mpq_class(2), mpq_class(4), mpq_class(0)});
  CHECK(pt.coords == std::vector<mpq_class>{mpq_class(1, 2), 1, 0});
  CHECK(normalize(kF101, {3, 6}) == normalize(kF101, {1, 2}));
  CHECK_THROWS_AS(normalize(kF101, {0, 0}), std::invalid_argument);
}

TEST_CASE("random points") {
  const auto two = random_points(kF101, 1, 2, 7);
  REQUIRE(two.points.size() == 2);
  CHECK_FALSE(two.points[0] == two.points[1]);
  CHECK(two.seed == 7u);

  const PrimeField f5(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto three = random_points(f5, 2, 3, seed);
    Matrix<PrimeField> m(f5, 3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = three.points[i].coords[j];
    }
    CHECK(rank(m) == 3);
  }
  const auto four = random_points(f5, 2, 4, 3);
  for (std::size_t skip = 0; skip < 4; ++skip) {
    Matrix<PrimeField> m(f5, 3, 3);
    std::size_t r = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (i == skip) continue;
      for (std::size_t j = 0; j < 3; ++j) m(r, j) = four.points[i].coords[j];
      ++r;
    }
    CHECK(rank(m) == 3);
  }

  CHECK(projective_point_count(101, 1) == 102);
  CHECK_THROWS_AS(random_points(kF101, 1, 200, 0), FieldTooSmall);
  CHECK(random_points(PrimeField(3), 1, 4, 0).points.size() == 4);
  CHECK_THROWS_AS(random_points(PrimeField(3), 1, 5, 0), FieldTooSmall);

  const auto a = random_points(kQQ, 3, 6, 42);
  const auto b = random_points(kQQ, 3, 6, 42);
  CHECK(points_to_strings(kQQ, a) == points_to_strings(kQQ, b));
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
}

TEST_CASE("fiber evaluation on the projective line") {
  // x1 dx0 - x0 dx1 in the key x0 dx0, x1 dx0, x0 dx1, x1 dx1
  forms::PForm<RationalField> form{1, 1, 2, {0, 1, -1, 0}};
  const auto pt = normalize(kQQ, {1, 1});
  CHECK(fiber_eval(kQQ, form, pt) == std::vector<mpq_class>{1});
  CHECK(fiber_eval(kQQ, form, normalize(kQQ, {1, 0})) == std::vector<mpq_class>{-1});
  const auto zero = fiber_eval(kQQ, forms::PForm<RationalField>{1, 1, 2, {0, 0, 0, 0}}, pt);
  CHECK(zero == std::vector<mpq_class>{0});
  CHECK_THROWS_AS(fiber_eval(kQQ, form, normalize(kQQ, {1, 0}), 1), std::invalid_argument);
}

TEST_CASE("form vanishing at a point evaluates to zero") {
  // x1 * (x1 dx0 - x0 dx1) vanishes at (1:0)
  const auto space = forms::h0_basis(kQQ, 1, 1, 3);
  const auto pt = normalize(kQQ, {1, 0});
  for (std::size_t j = 0; j < space.dim(); ++j) {
    const auto form = forms::section_form(space, j);
    const auto v = fiber_eval(kQQ, form, pt);
    REQUIRE(v.size() == 1);
  }
  forms::PForm<RationalField> f{1, 1, 3, {}};
  // key: x0^2 dx0, x0x1 dx0, x1^2 dx0, x0^2 dx1, x0x1 dx1, x1^2 dx1
  f.coeffs = {0, 0, 1, 0, -1, 0};
  CHECK(fiber_eval(kQQ, f, pt) == std::vector<mpq_class>{0});
}

TEST_CASE("change of chart is invertible") {
  for (int n = 1; n <= 3; ++n) {
    for (int p = -1; p + 1 <= n; ++p) {
      for (int d = 1; d <= 2; ++d) {
        const auto pts = random_points(kF101, n, 4, 11 + static_cast<std::uint64_t>(n));
        for (const auto& pt : pts.points) {
          PointSet<PrimeField> single{n, {pt}, std::nullopt};
          const auto canonical = eval_matrix(kF101, n, p, d, single);
          const auto other = eval_matrix(kF101, n, p, d, single, first_nonzero_pivot);
          CAPTURE(n);
          CAPTURE(p);
          CAPTURE(d);
          // The fiber is globally generated, so both fiber maps are onto and
          // other = T * canonical for an invertible T.
          REQUIRE(rank(canonical) == canonical.rows());
          const auto tt = solve(canonical.transpose(), other.transpose());
          REQUIRE(tt.has_value());
          const auto t = tt->transpose();
          CHECK(t * canonical == other);
          CHECK(rank(t) == t.rows());
        }
        const auto v = eval_matrix(kF101, n, p, d, pts);
        const auto w = eval_matrix(kF101, n, p, d, pts, first_nonzero_pivot);
        CHECK(rank(v) == rank(w));
        CHECK(rank(vcat(v, w)) == rank(v));
      }
    }
  }
}

TEST_CASE("evaluation matrices") {
  const auto line = eval_matrix(kQQ, 1, 0, 2, fixed_points(kQQ, 1, {{1, 2}, {3, 1}}));
  CHECK(line.rows() == 2);
  CHECK(line.cols() == 2);
  CHECK(rank(line) == 2);

  const auto plane = fixed_points(kQQ, 2, {{1, 2, 3}, {2, -1, 5}, {3, 4, 1}, {1, 5, 7}});
  const auto m = eval_matrix(kQQ, 2, 0, 2, plane);
  CHECK(m.rows() == 8);
  CHECK(m.cols() == 8);
  CHECK(rank(m) == 8);

  const auto coordinate = fixed_points(kQQ, 2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
  CHECK(rank(eval_matrix(kQQ, 2, 0, 2, coordinate)) == 8);
  PointSet<RationalField> three{2, {coordinate.points.begin(), coordinate.points.begin() + 3}, std::nullopt};
  const auto m3 = eval_matrix(kQQ, 2, 0, 2, three);
  CHECK(m3.rows() == 6);
  CHECK(rank(m3) == 6);

  CHECK(eval_matrix(kF101, 2, 0, 2, PointSet<PrimeField>{2, {}, std::nullopt}).rows() == 0);
  CHECK(eval_matrix(kF101, 2, -1, 2, random_points(kF101, 2, 6, 5)).cols() == 6);
  CHECK(section_count(2, 0, 2) == 8);
  CHECK(fiber_rank(2, 0) == 2);
  CHECK(fiber_rank(3, -1) == 1);
}

TEST_CASE("adding a point never lowers the rank") {
  const auto pts = random_points(kF101, 2, 10, 99);
  std::size_t previous = 0;
  for (std::size_t k = 0; k <= pts.points.size(); ++k) {
    PointSet<PrimeField> prefix{2, {pts.points.begin(), pts.points.begin() + static_cast<std::ptrdiff_t>(k)},
                                std::nullopt};
    const auto r = rank(eval_matrix(kF101, 2, 1, 2, prefix));
    CHECK(r >= previous);
    previous = r;
  }
}

TEST_CASE("maximal rank on the line") {
  for (int d = 0; d <= 6; ++d) {
    for (int s = 0; s <= 8; ++s) {
      CAPTURE(d);
      CAPTURE(s);
      CHECK(maxrank_test(kF101, 1, 0, d, s, 1, 5).maximal);
      CHECK(maxrank_test(kF101, 1, -1, d, s, 1, 5).maximal);
    }
  }
}

TEST_CASE("maximal rank certificates") {
  const auto c = maxrank_test(kF101, 2, 0, 2, 4, 5, 1);
  CHECK(c.maximal);
  CHECK(c.rows == 8);
  CHECK(c.cols == 8);
  CHECK(c.rank == 8);
  CHECK(c.trials >= 1);
  CHECK(c.trials <= 5);
  CHECK(c.points.size() == 4);

  const auto empty = maxrank_test(kF101, 2, 1, 3, 0, 3, 9);
  CHECK(empty.maximal);
  CHECK(empty.rows == 0);
  CHECK(empty.trials == 1);

  const auto rational = maxrank_test(FieldSpec::rational(), 2, 0, 2, 4, 2, 1);
  CHECK(rational.maximal);
  CHECK(rational.field == FieldSpec::rational());
  CHECK_THROWS_AS(maxrank_test(kF101, 2, 0, 2, 4, 0, 1), std::invalid_argument);
}

TEST_CASE("betti ledger") {
  auto c = maxrank_test(kF101, 2, 0, 2, 4, 5, 1);
  auto l = betti_ledger(c);
  CHECK(l.kernel == 0);
  CHECK(l.cokernel == 0);
  CHECK(l.verdict == "expected resolution shape");

  const auto three = maxrank_test(kF101, 2, 0, 2, 3, 5, 1);
  CHECK(three.rows == 6);
  l = betti_ledger(three);
  CHECK(l.kernel == 2);
  CHECK(l.cokernel == 0);

  c.rank = 5;
  c.maximal = false;
  l = betti_ledger(c);
  CHECK(l.kernel == 3);
  CHECK(l.cokernel == 3);
  CHECK(l.verdict == "not witnessed");
}

TEST_CASE("certificate JSON round trip and replay") {
  const auto c = maxrank_test(kF101, 2, 1, 2, 3, 5, 17);
  const auto j = to_json(c);
  const std::string text = j.dump(2);
  CHECK(text == to_json(maxrank_test(kF101, 2, 1, 2, 3, 5, 17)).dump(2));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"problem", "field", "seed", "trials", "shape", "rank", "maximal", "points"});
  CHECK(j["field"]["modulus"] == 101);
  CHECK(j["points"][0][0].is_number());

  const auto back = certificate_from_json(nlohmann::json::parse(text));
  CHECK(back == c);
  const auto r = replay(back);
  CHECK(r.matches);
  CHECK(r.rank == c.rank);

  auto tampered = back;
  tampered.rank += 1;
  CHECK_FALSE(replay(tampered).matches);
  tampered = back;
  tampered.points[0].back() = "2";
  CHECK_THROWS_AS(replay(tampered), CertificateError);
  CHECK_THROWS_AS(certificate_from_json(nlohmann::json::parse("{\"problem\": {}}")), CertificateError);

  const auto q = maxrank_test(FieldSpec::rational(), 2, 0, 1, 2, 1, 4);
  const auto qj = to_json(q);
  CHECK(qj["field"].size() == 1);
  CHECK(qj["points"][0][0].is_string());
  CHECK(replay(certificate_from_json(nlohmann::json::parse(qj.dump()))).matches);
}
