#include <random>

#include "doctest.h"
#include "pnforms/exactalg.hpp"
#include "pnforms/forms.hpp"
#include "pnforms/row_kernels.hpp"

using namespace pnforms;

namespace {

const PrimeField kF101(101);

// Independent reference: plain Gauss-Jordan over mpq with the same pivot rule.
Matrix<RationalField> naive_rref(Matrix<RationalField> m, std::size_t& rank_out) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    const mpq_class p = m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) /= p;
    for (std::size_t k = 0; k < m.rows(); ++k) {
      if (k == r || m(k, c) == 0) continue;
      const mpq_class f = m(k, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(k, j) -= f * m(r, j);
    }
    ++r;
  }
  rank_out = r;
  return m;
}

Matrix<RationalField> random_int_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int bound,
                                        int zero_percent) {
  Matrix<RationalField> m(RationalField{}, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (static_cast<int>(rng() % 100) < zero_percent) continue;
      m(i, j) = static_cast<long>(rng() % (2 * bound + 1)) - bound;
    }
  }
  return m;
}

// Low rank by construction: product of thin random factors.
Matrix<RationalField> low_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t r) {
  return random_int_matrix(rng, rows, r, 3, 20) * random_int_matrix(rng, r, cols, 3, 20);
}

template <class F>
Matrix<F> reduce(const F& f, const Matrix<RationalField>& m) {
  Matrix<F> out(f, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = f.from_mpq(m(i, j));
  }
  return out;
}

}  // namespace

TEST_CASE("rank of simple matrices") {
  CHECK(rank(Matrix<PrimeField>::identity(kF101, 2)) == 2);
  CHECK(rank(Matrix<PrimeField>(kF101, 3, 5)) == 0);
  CHECK(rank(Matrix<RationalField>(RationalField{}, 3, 5)) == 0);
  CHECK(rank(Matrix<PrimeField>(kF101, 0, 4)) == 0);
  CHECK(rank(forms::contraction_matrix(kF101, 1, 1, 2)) == 3);
  CHECK(rank(forms::contraction_matrix(RationalField{}, 1, 1, 2)) == 3);
}

TEST_CASE("kernel basis of simple matrices") {
  CHECK(kernel_basis(Matrix<PrimeField>::identity(kF101, 3)).cols() == 0);
  const auto k = kernel_basis(Matrix<PrimeField>(kF101, 2, 3));
  CHECK(k.rows() == 3);
  CHECK(k.cols() == 3);
  CHECK(rank(k) == 3);

  // Contraction on 1-forms of twist 2 on P^1; domain key: x0 dx0, x1 dx0, x0 dx1, x1 dx1.
  const auto c = forms::contraction_matrix(RationalField{}, 1, 1, 2);
  const auto kq = kernel_basis(c);
  REQUIRE(kq.cols() == 1);
  // x1 dx0 - x0 dx1 up to sign
  CHECK(kq(0, 0) == 0);
  CHECK(kq(3, 0) == 0);
  CHECK(kq(1, 0) == -kq(2, 0));
  CHECK(kq(1, 0) != 0);
  CHECK(abs(kq(1, 0)) == 1);
}

TEST_CASE("fraction-free Gauss-Jordan agrees with naive rational elimination") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t rows = 1 + rng() % 9, cols = 1 + rng() % 9;
    auto m = rep % 2 == 0 ? random_int_matrix(rng, rows, cols, 9, 40) : low_rank(rng, rows, cols, 1 + rng() % 3);
    if (rep % 5 == 0) {
      for (std::size_t i = 0; i < rows; ++i) m(i, 0) /= static_cast<long>(1 + i % 4);  // fractional entries
    }
    std::size_t naive_rank = 0;
    const auto expected = naive_rref(m, naive_rank);
    const auto e = rref(m);
    REQUIRE(e.rank() == naive_rank);
    CHECK(rank(m) == naive_rank);
    for (std::size_t i = 0; i < naive_rank; ++i) {
      for (std::size_t j = 0; j < cols; ++j) CHECK(e.reduced(i, j) == expected(i, j));
    }
  }
}

TEST_CASE("rank properties") {
  std::mt19937_64 rng(99);
  const PrimeField f7(7), f32003(32003);
  for (int rep = 0; rep < 80; ++rep) {
    const std::size_t rows = 1 + rng() % 12, cols = 1 + rng() % 12;
    const auto m = rep % 3 == 0 ? low_rank(rng, rows, cols, 1 + rng() % 4) : random_int_matrix(rng, rows, cols, 5, 50);
    const auto rq = rank(m);
    CHECK(rq == rank(m.transpose()));
    for (const PrimeField& f : {kF101, f7, f32003}) {
      const auto mf = reduce(f, m);
      CHECK(rank(mf) <= rq);
      CHECK(rank(mf) == rank(mf.transpose()));
    }
  }
}

TEST_CASE("kernel basis is independent and annihilated") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 10;
    const auto m = low_rank(rng, rows, cols, 1 + rng() % 3);
    const auto k = kernel_basis(m);
    CHECK(k.cols() == cols - rank(m));
    CHECK((m * k).is_zero());
    CHECK(rank(k) == k.cols());
    const auto mf = reduce(kF101, m);
    const auto kf = kernel_basis(mf);
    CHECK((mf * kf).is_zero());
    CHECK(rank(kf) == kf.cols());
    CHECK(kf.cols() == cols - rank(mf));
  }
}

TEST_CASE("elimination is independent of the active row kernels") {
  std::mt19937_64 rng(11);
  const auto m = reduce(PrimeField(32003), low_rank(rng, 40, 37, 23));
  kernels::force_isa(kernels::Isa::scalar);
  const auto slow = rref(m);
  kernels::force_isa(std::nullopt);
  const auto fast = rref(m);
  CHECK(slow.reduced == fast.reduced);
  CHECK(slow.pivots == fast.pivots);
}

TEST_CASE("solve") {
  const auto a = Matrix<RationalField>::from_ints(RationalField{}, 3, 2, {1, 0, 0, 1, 1, 1});
  const auto b = Matrix<RationalField>::from_ints(RationalField{}, 3, 1, {2, 3, 5});
  const auto x = solve(a, b);
  REQUIRE(x.has_value());
  CHECK(*x == Matrix<RationalField>::from_ints(RationalField{}, 2, 1, {2, 3}));
  const auto bad = Matrix<RationalField>::from_ints(RationalField{}, 3, 1, {2, 3, 4});
  CHECK_FALSE(solve(a, bad).has_value());
  const auto af = reduce(kF101, a);
  CHECK(solve(af, reduce(kF101, b)).has_value());
}

TEST_CASE("snake lemma: isomorphism case") {
  const auto i = Matrix<PrimeField>::from_ints(kF101, 2, 1, {1, 0});
  const auto q = Matrix<PrimeField>::from_ints(kF101, 1, 2, {0, 1});
  const auto id1 = Matrix<PrimeField>::identity(kF101, 1);
  const auto id2 = Matrix<PrimeField>::identity(kF101, 2);
  const auto ledger = snake_check(i, q, i, q, id1, id2, id1);
  CHECK(ledger == SnakeLedger{0, 0, 0, 0, 0, 0, true});
}

TEST_CASE("snake lemma: worked example") {
  const RationalField qq;
  const auto i = Matrix<RationalField>::from_ints(qq, 2, 1, {1, 0});
  const auto q = Matrix<RationalField>::from_ints(qq, 1, 2, {0, 1});
  const auto f1 = Matrix<RationalField>::from_ints(qq, 1, 1, {0});
  const auto f2 = Matrix<RationalField>::from_ints(qq, 2, 2, {0, 0, 0, 1});
  const auto f3 = Matrix<RationalField>::from_ints(qq, 1, 1, {1});
  const auto ledger = snake_check(i, q, i, q, f1, f2, f3);
  CHECK(ledger == SnakeLedger{1, 1, 0, 1, 1, 0, true});
  CHECK(ledger.alternating_sum() == 0);

  const auto f2_bad = Matrix<RationalField>::identity(qq, 2);
  CHECK_THROWS_WITH_AS(snake_check(i, q, i, q, f1, f2_bad, f3), "left square does not commute", SnakeInputError);
}

TEST_CASE("snake lemma: nontrivial connecting map") {
  // Top row 0 -> k -> k^2 -> k -> 0, bottom row the same; f2 = [[0,1],[0,0]]
  // sends the top-right generator onto the bottom-left one. ker f3 = k maps
  // isomorphically onto coker f1 through the connecting map.
  const auto i = Matrix<PrimeField>::from_ints(kF101, 2, 1, {1, 0});
  const auto q = Matrix<PrimeField>::from_ints(kF101, 1, 2, {0, 1});
  const auto f1 = Matrix<PrimeField>::from_ints(kF101, 1, 1, {0});
  const auto f2 = Matrix<PrimeField>::from_ints(kF101, 2, 2, {0, 1, 0, 0});
  const auto f3 = Matrix<PrimeField>::from_ints(kF101, 1, 1, {0});
  const auto ledger = snake_check(i, q, i, q, f1, f2, f3);
  CHECK(ledger == SnakeLedger{1, 1, 1, 1, 1, 1, true});
}

TEST_CASE("snake lemma rejects non-exact rows") {
  const auto i = Matrix<PrimeField>::from_ints(kF101, 2, 1, {1, 0});
  const auto q_bad = Matrix<PrimeField>::from_ints(kF101, 1, 2, {1, 1});
  const auto q = Matrix<PrimeField>::from_ints(kF101, 1, 2, {0, 1});
  const auto id1 = Matrix<PrimeField>::identity(kF101, 1);
  const auto id2 = Matrix<PrimeField>::identity(kF101, 2);
  CHECK_THROWS_WITH_AS(snake_check(i, q_bad, i, q, id1, id2, id1), "top row: composite is not zero", SnakeInputError);
  const auto zero_q = Matrix<PrimeField>(kF101, 1, 2);
  CHECK_THROWS_AS(snake_check(i, zero_q, i, q, id1, id2, id1), SnakeInputError);
}
