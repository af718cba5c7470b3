#include "pnforms/exactalg.hpp"

#include <algorithm>
#include <utility>

#include "pnforms/row_kernels.hpp"

namespace pnforms {

namespace {

// ---------------------------------------------------------------------------
// GF(q)
// ---------------------------------------------------------------------------

// In-place elimination on a copy; returns the pivot columns. With `jordan`
// set the pivot rows are normalized and every other row is cleared.
std::vector<std::size_t> eliminate_mod(Matrix<PrimeField>& m, bool jordan) {
  const auto& ops = kernels::row_ops();
  const PrimeField& f = m.field();
  const std::uint32_t q = f.modulus();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) std::swap_ranges(m.row(piv).begin(), m.row(piv).end(), m.row(r).begin());
    auto pivot_row = m.row(r);
    if (jordan) {
      ops.scale(pivot_row.data() + c, cols - c, f.inv(pivot_row[c]), q);
    }
    const std::uint32_t inv_p = jordan ? 1 : f.inv(pivot_row[c]);
    const std::size_t first = jordan ? 0 : r + 1;
    for (std::size_t k = first; k < rows; ++k) {
      if (k == r) continue;
      auto row = m.row(k);
      if (row[c] == 0) continue;
      const std::uint32_t factor = f.mul(row[c], inv_p);
      ops.submul(row.data() + c, pivot_row.data() + c, cols - c, factor, q);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// ---------------------------------------------------------------------------
// QQ via fraction-free elimination on integer rows
// ---------------------------------------------------------------------------

using IntRows = std::vector<std::vector<mpz_class>>;

// Scale each row by the lcm of its denominators; the row space is unchanged.
IntRows integer_rows(const Matrix<RationalField>& m) {
  IntRows out(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const mpq_class& v = m(r, c);
      out[r][c] = v.get_num() * (l / v.get_den());
    }
  }
  return out;
}

struct FractionFree {
  IntRows rows;                     // first pivots.size() rows are the reduced rows
  std::vector<std::size_t> pivots;  // pivot columns
  mpz_class denominator = 1;        // common value of every pivot entry (jordan only)
};

// Bareiss elimination. Every intermediate entry is a minor of the input, so
// the division by the previous pivot is exact. In Gauss-Jordan mode rows above
// the pivot are updated by the same rule and all pivots end equal.
FractionFree eliminate_fraction_free(IntRows a, std::size_t cols, bool jordan) {
  FractionFree out;
  const std::size_t rows = a.size();
  mpz_class prev = 1;
  mpz_class t;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const mpz_class p = a[r][c];
    const std::size_t first = jordan ? 0 : r + 1;
    for (std::size_t k = first; k < rows; ++k) {
      if (k == r) continue;
      auto& row = a[k];
      const mpz_class lead = row[c];
      for (std::size_t j = 0; j < cols; ++j) {
        if (j == c) continue;
        if (lead == 0 && row[j] == 0) continue;
        // row[j] = (p * row[j] - lead * a[r][j]) / prev
        mpz_mul(t.get_mpz_t(), p.get_mpz_t(), row[j].get_mpz_t());
        mpz_submul(t.get_mpz_t(), lead.get_mpz_t(), a[r][j].get_mpz_t());
        mpz_divexact(row[j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      row[c] = 0;
    }
    prev = p;
    out.pivots.push_back(c);
    ++r;
  }
  out.denominator = prev;
  a.resize(r);
  out.rows = std::move(a);
  return out;
}

Echelon<RationalField> to_echelon(const FractionFree& ff, std::size_t cols) {
  Echelon<RationalField> e{Matrix<RationalField>(RationalField{}, ff.pivots.size(), cols), ff.pivots};
  for (std::size_t i = 0; i < ff.pivots.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (ff.rows[i][j] == 0) continue;
      mpq_class v(ff.rows[i][j], ff.denominator);
      v.canonicalize();
      e.reduced(i, j) = v;
    }
  }
  return e;
}

std::vector<std::size_t> free_columns(const std::vector<std::size_t>& pivots, std::size_t cols) {
  std::vector<std::size_t> free;
  std::size_t next = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (next < pivots.size() && pivots[next] == c) {
      ++next;
    } else {
      free.push_back(c);
    }
  }
  return free;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t rank(const Matrix<PrimeField>& m) {
  Matrix<PrimeField> work(m);
  return eliminate_mod(work, false).size();
}

std::size_t rank(const Matrix<RationalField>& m) {
  return eliminate_fraction_free(integer_rows(m), m.cols(), false).pivots.size();
}

Echelon<PrimeField> rref(const Matrix<PrimeField>& m) {
  Matrix<PrimeField> work(m);
  auto pivots = eliminate_mod(work, true);
  Matrix<PrimeField> top(m.field(), pivots.size(), m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) std::copy(work.row(i).begin(), work.row(i).end(), top.row(i).begin());
  return {std::move(top), std::move(pivots)};
}

Echelon<RationalField> rref(const Matrix<RationalField>& m) {
  return to_echelon(eliminate_fraction_free(integer_rows(m), m.cols(), true), m.cols());
}

Matrix<PrimeField> kernel_basis(const Matrix<PrimeField>& m) {
  const auto e = rref(m);
  const auto free = free_columns(e.pivots, m.cols());
  const PrimeField& f = m.field();
  Matrix<PrimeField> k(f, m.cols(), free.size());
  for (std::size_t j = 0; j < free.size(); ++j) {
    k(free[j], j) = f.one();
    for (std::size_t i = 0; i < e.pivots.size(); ++i) k(e.pivots[i], j) = f.neg(e.reduced(i, free[j]));
  }
  return k;
}

Matrix<RationalField> kernel_basis(const Matrix<RationalField>& m) {
  const auto ff = eliminate_fraction_free(integer_rows(m), m.cols(), true);
  const auto free = free_columns(ff.pivots, m.cols());
  Matrix<RationalField> k(RationalField{}, m.cols(), free.size());
  std::vector<mpz_class> v(m.cols());
  for (std::size_t j = 0; j < free.size(); ++j) {
    std::fill(v.begin(), v.end(), mpz_class(0));
    v[free[j]] = ff.denominator;
    for (std::size_t i = 0; i < ff.pivots.size(); ++i) v[ff.pivots[i]] = -ff.rows[i][free[j]];
    mpz_class g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (ff.denominator < 0) g = -g;
    for (std::size_t i = 0; i < v.size(); ++i) k(i, j) = mpq_class(v[i] / g);
  }
  return k;
}

template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch " + a.shape_string() + " vs " + b.shape_string());
  const auto e = rref(hcat(a, b));
  Matrix<F> x(a.field(), a.cols(), b.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    const std::size_t pc = e.pivots[i];
    if (pc >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(pc, j) = e.reduced(i, a.cols() + j);
  }
  return x;
}

template <class F>
SnakeLedger snake_check(const Matrix<F>& i_x, const Matrix<F>& q_x, const Matrix<F>& i_y, const Matrix<F>& q_y,
                        const Matrix<F>& f1, const Matrix<F>& f2, const Matrix<F>& f3) {
  const std::size_t a = i_x.cols(), b = i_x.rows(), c = q_x.rows();
  const std::size_t a2 = i_y.cols(), b2 = i_y.rows(), c2 = q_y.rows();
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw SnakeInputError(what);
  };
  require(q_x.cols() == b && q_y.cols() == b2, "row maps have incompatible shapes");
  require(f1.rows() == a2 && f1.cols() == a, "f1 shape does not match A -> A'");
  require(f2.rows() == b2 && f2.cols() == b, "f2 shape does not match B -> B'");
  require(f3.rows() == c2 && f3.cols() == c, "f3 shape does not match C -> C'");

  auto check_row = [&](const Matrix<F>& i, const Matrix<F>& q, const std::string& name) {
    const std::size_t ri = rank(i), rq = rank(q);
    require(ri == i.cols(), name + " row: left map is not injective");
    require(rq == q.rows(), name + " row: right map is not surjective");
    require((q * i).is_zero(), name + " row: composite is not zero");
    require(ri + rq == i.rows(), name + " row: not exact in the middle");
  };
  check_row(i_x, q_x, "top");
  check_row(i_y, q_y, "bottom");
  require(f2 * i_x == i_y * f1, "left square does not commute");
  require(f3 * q_x == q_y * f2, "right square does not commute");

  SnakeLedger ledger;
  const Matrix<F> k1 = kernel_basis(f1), k2 = kernel_basis(f2), k3 = kernel_basis(f3);
  const std::size_t r1 = rank(f1), r2 = rank(f2), r3 = rank(f3);
  ledger.ker1 = k1.cols();
  ledger.ker2 = k2.cols();
  ledger.ker3 = k3.cols();
  ledger.coker1 = a2 - r1;
  ledger.coker2 = b2 - r2;
  ledger.coker3 = c2 - r3;

  // ker f1 -> ker f2 -> ker f3
  const std::size_t rank_a = rank(i_x * k1);
  const std::size_t rank_b = rank(q_x * k2);

  // delta: lift through q_x, push by f2, pull back through i_y.
  std::size_t rank_delta = 0;
  if (k3.cols() > 0) {
    auto lift = solve(q_x, k3);
    require(lift.has_value(), "kernel of f3 does not lift through the top row");
    auto back = solve(i_y, f2 * *lift);
    require(back.has_value(), "lifted kernel vectors do not land in the image of the bottom-left map");
    rank_delta = rank(hcat(*back, f1)) - r1;
  }
  // coker f1 -> coker f2 -> coker f3
  const std::size_t rank_g = rank(hcat(i_y, f2)) - r2;
  const std::size_t rank_h = rank(hcat(q_y, f3)) - r3;

  ledger.exact = rank_a == ledger.ker1 &&                        // at ker f1
                 ledger.ker2 - rank_b == rank_a &&                // at ker f2
                 ledger.ker3 - rank_delta == rank_b &&            // at ker f3
                 ledger.coker1 - rank_g == rank_delta &&          // at coker f1
                 ledger.coker2 - rank_h == rank_g &&              // at coker f2
                 rank_h == ledger.coker3;                         // at coker f3
  return ledger;
}

template std::optional<Matrix<PrimeField>> solve(const Matrix<PrimeField>&, const Matrix<PrimeField>&);
template std::optional<Matrix<RationalField>> solve(const Matrix<RationalField>&, const Matrix<RationalField>&);
template SnakeLedger snake_check(const Matrix<PrimeField>&, const Matrix<PrimeField>&, const Matrix<PrimeField>&,
                                 const Matrix<PrimeField>&, const Matrix<PrimeField>&, const Matrix<PrimeField>&,
                                 const Matrix<PrimeField>&);
template SnakeLedger snake_check(const Matrix<RationalField>&, const Matrix<RationalField>&,
                                 const Matrix<RationalField>&, const Matrix<RationalField>&,
                                 const Matrix<RationalField>&, const Matrix<RationalField>&,
                                 const Matrix<RationalField>&);

}  // namespace pnforms
