#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnforms/matrix.hpp"

namespace pnforms {

/// Reduced row echelon form. `reduced` holds only the nonzero rows.
template <class F>
struct Echelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each row of `reduced`

  std::size_t rank() const { return pivots.size(); }
};

/// Rank over the matrix's field. GF(q): modular elimination on the selected
/// row kernels. QQ: fraction-free (Bareiss) elimination on integer rows.
std::size_t rank(const Matrix<PrimeField>& m);
std::size_t rank(const Matrix<RationalField>& m);

/// Gauss-Jordan form. Pivot choice: leftmost column first, first nonzero row
/// from the top.
Echelon<PrimeField> rref(const Matrix<PrimeField>& m);
Echelon<RationalField> rref(const Matrix<RationalField>& m);

/// Columns form a basis of the right kernel, one per non-pivot column in
/// increasing order. Over QQ the columns are primitive integer vectors.
Matrix<PrimeField> kernel_basis(const Matrix<PrimeField>& m);
Matrix<RationalField> kernel_basis(const Matrix<RationalField>& m);

/// Some X with a * X == b, or nullopt when the system is inconsistent. Free
/// variables are set to zero, so the answer is unique when a has full column rank.
template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b);

/// Raised by snake_check when its inputs do not form a morphism of short exact rows.
class SnakeInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimensions of the six outer terms of the snake sequence
///   0 -> ker f1 -> ker f2 -> ker f3 -> coker f1 -> coker f2 -> coker f3 -> 0
/// and whether it is exact at every term.
struct SnakeLedger {
  std::size_t ker1 = 0, ker2 = 0, ker3 = 0;
  std::size_t coker1 = 0, coker2 = 0, coker3 = 0;
  bool exact = false;

  long long alternating_sum() const {
    return static_cast<long long>(ker1) - static_cast<long long>(ker2) + static_cast<long long>(ker3) -
           static_cast<long long>(coker1) + static_cast<long long>(coker2) - static_cast<long long>(coker3);
  }
  bool operator==(const SnakeLedger&) const = default;
};

/// Rows 0 -> A -i_x-> B -q_x-> C -> 0 and 0 -> A' -i_y-> B' -q_y-> C' -> 0 with
/// vertical maps f1, f2, f3 (matrices act on column vectors). The connecting map
/// is realized by lifting kernel vectors of f3 through q_x and i_y; exactness is
/// decided by rank identities in the cokernels.
template <class F>
SnakeLedger snake_check(const Matrix<F>& i_x, const Matrix<F>& q_x, const Matrix<F>& i_y, const Matrix<F>& q_y,
                        const Matrix<F>& f1, const Matrix<F>& f2, const Matrix<F>& f3);

extern template std::optional<Matrix<PrimeField>> solve(const Matrix<PrimeField>&, const Matrix<PrimeField>&);
extern template std::optional<Matrix<RationalField>> solve(const Matrix<RationalField>&,
                                                            const Matrix<RationalField>&);
extern template SnakeLedger snake_check(const Matrix<PrimeField>&, const Matrix<PrimeField>&,
                                        const Matrix<PrimeField>&, const Matrix<PrimeField>&,
                                        const Matrix<PrimeField>&, const Matrix<PrimeField>&,
                                        const Matrix<PrimeField>&);
extern template SnakeLedger snake_check(const Matrix<RationalField>&, const Matrix<RationalField>&,
                                        const Matrix<RationalField>&, const Matrix<RationalField>&,
                                        const Matrix<RationalField>&, const Matrix<RationalField>&,
                                        const Matrix<RationalField>&);

}  // namespace pnforms
