#pragma once

// Global sections of twisted differential forms on P^n, realized as polynomial
// forms killed by contraction with the Euler field E = sum x_i d/dx_i:
//
//   H^0(Omega^p(d)) = ker( Lambda^p <dx_0..dx_n> (x) S_{d-p}  --i_E-->  Lambda^{p-1} (x) S_{d-p+1} )
//
// The hyperplane is always x_n = 0. Coordinates are pairs (I, m) with I a
// p-subset of differentials (lexicographic) and m a coefficient monomial
// (graded lex, x_0 > x_1 > ...), I-major.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pnforms/exactalg.hpp"
#include "pnforms/matrix.hpp"

namespace pnforms::forms {

/// Bitmask over differentials dx_0, dx_1, ...
using IndexSet = std::uint32_t;

struct Monomial {
  std::vector<int> exponents;

  int degree() const;
  std::string label() const;
  auto operator<=>(const Monomial&) const = default;
};

/// All `size`-subsets of {0..count-1} in lexicographic order.
std::vector<IndexSet> index_sets(int count, int size);

/// Degree-`degree` monomials in `nvars` variables, x_0 > x_1 > ... lex order.
std::vector<Monomial> monomials(int nvars, int degree);

std::string index_set_label(IndexSet set);

/// Coordinate system of p-forms in dx_0..dx_{diffs-1} whose coefficients are
/// degree-`coeff_degree` monomials in x_0..x_{coeff_vars-1}.
class FormCoords {
 public:
  FormCoords(int diffs, int coeff_vars, int p, int coeff_degree);

  int diffs() const { return diffs_; }
  int coeff_vars() const { return coeff_vars_; }
  int p() const { return p_; }
  int coeff_degree() const { return coeff_degree_; }

  const std::vector<IndexSet>& sets() const { return sets_; }
  const std::vector<Monomial>& monomials() const { return monos_; }
  std::size_t size() const { return sets_.size() * monos_.size(); }

  std::size_t index(std::size_t set_pos, std::size_t mono_pos) const { return set_pos * monos_.size() + mono_pos; }
  std::optional<std::size_t> find(IndexSet set, const Monomial& m) const;

  std::string label(std::size_t k) const;
  std::vector<std::string> labels() const;

 private:
  int diffs_, coeff_vars_, p_, coeff_degree_;
  std::vector<IndexSet> sets_;
  std::vector<Monomial> monos_;
  std::map<IndexSet, std::size_t> set_pos_;
  std::map<Monomial, std::size_t> mono_pos_;
};

/// Symbolic sheaf on P^n.
struct SheafDesc {
  enum class Kind { omega, free_sum, restricted_omega };

  Kind kind = Kind::omega;
  int n = 0;
  int p = 0;  // form degree (0 for free sums)
  int d = 0;  // twist
  int r = 1;  // multiplicity of a free sum

  static SheafDesc omega(int n, int p, int d) { return {Kind::omega, n, p, d, 1}; }
  static SheafDesc free_sum(int n, int d, int r) { return {Kind::free_sum, n, 0, d, r}; }
  /// Omega^p_{P^n}(d) restricted to the hyperplane x_n = 0.
  static SheafDesc restricted_omega(int n, int p, int d) { return {Kind::restricted_omega, n, p, d, 1}; }

  std::string name() const;
  bool operator==(const SheafDesc&) const = default;
};

/// Basis of global sections, as coordinate columns in an ambient key.
template <class F>
struct SectionSpace {
  SheafDesc desc;
  std::vector<std::string> key;  // label of each ambient coordinate
  Matrix<F> basis;               // key.size() x dim

  std::size_t dim() const { return basis.cols(); }
  std::size_t ambient_dim() const { return basis.rows(); }
};

/// A p-form of twist d on P^n by its coordinates in FormCoords(n+1, n+1, p, d-p).
template <class F>
struct PForm {
  int n = 0;
  int p = 0;
  int d = 0;
  std::vector<typename F::value_type> coeffs;

  FormCoords coords() const { return FormCoords(n + 1, n + 1, p, d - p); }
};

/// Column j of a section space of Omega^p(d) on P^n as a PForm.
template <class F>
PForm<F> section_form(const SectionSpace<F>& space, std::size_t j);

// --- ambient (coordinate-level) maps --------------------------------------

/// Contraction with sum_{i < euler_vars} x_i d/dx_i from `domain` to p-1 forms.
template <class F>
Matrix<F> contraction(const F& field, const FormCoords& domain, int euler_vars);

/// Matrix of i_E from p-forms of twist d on P^n to (p-1)-forms of twist d.
/// Requires 1 <= p; returns a 0x0 matrix when d < p.
template <class F>
Matrix<F> contraction_matrix(const F& field, int n, int p, int d);

// --- section spaces ---------------------------------------------------------

/// H^0(P^n, Omega^p(d)); p = 0 gives all degree-d monomials. p > n yields the
/// zero space.
template <class F>
SectionSpace<F> h0_basis(const F& field, int n, int p, int d);

/// H^0(P^n, O(d)^{+r}) with the identity basis.
template <class F>
SectionSpace<F> free_sum_basis(const F& field, int n, int d, int r);

/// H^0 of Omega^p_{P^n}(d) restricted to x_n = 0: forms in dx_0..dx_n with
/// coefficients in x_0..x_{n-1}, killed by sum_{i<n} x_i d/dx_i.
template <class F>
SectionSpace<F> restricted_sections(const F& field, int n, int p, int d);

/// Coordinates of ambient column vectors in the basis of `space`. Throws
/// std::logic_error if some column is outside the span.
template <class F>
Matrix<F> coordinates_in(const SectionSpace<F>& space, const Matrix<F>& ambient, const std::string& what);

/// H^0(Omega^p_{P^n}(d)) -> H^0(Omega^p_{P^{n-1}}(d)): set x_n = 0 and drop
/// terms containing dx_n. Requires n >= 1, 0 <= p <= n.
template <class F>
Matrix<F> restriction_of_forms(const F& field, int n, int p, int d);

/// H^0(Omega^p_{P^n}(d)) -> H^0(Omega^p_{P^n}(d)|_{P^{n-1}}): set x_n = 0.
template <class F>
Matrix<F> restrict_to_hyperplane(const F& field, int n, int p, int d);

/// H^0(Omega^p_{P^n}(d)|_{P^{n-1}}) -> H^0(Omega^p_{P^{n-1}}(d)): drop dx_n terms.
template <class F>
Matrix<F> drop_last_differential(const F& field, int n, int p, int d);

/// H^0(Omega^p_{P^{n-1}}(d-1)) -> H^0(Omega^{p+1}_{P^n}(d)|_{P^{n-1}}), w -> dx_n ^ w.
template <class F>
Matrix<F> conormal_wedge(const F& field, int n, int p, int d);

/// H^0(Omega^p_{P^n}(d)) -> H^0(Omega^p_{P^n}(d+1)), multiplication by x_n.
template <class F>
Matrix<F> multiply_by_last(const F& field, int n, int p, int d);

/// Sections sigma_K = i_E(dx_K ^ dx_n), K a (p+1)-subset of {0..n-1}, spanning
/// the kernel of restriction_of_forms at twist p+2. Returned as the map
/// H^0(O(t)^{C(n,p+1)}) -> H^0(Omega^{p+1}_{P^n}(p+2+t)), (f_K) -> sum f_K sigma_K.
template <class F>
Matrix<F> kernel_inclusion(const F& field, int n, int p, int t);

/// dim ker restriction_of_forms(n, p+1, d) == C(n, p+1) * h^0(O(d-p-2)).
/// Requires p >= 0 and p + 1 <= n.
template <class F>
bool claim_i_kernel_test(const F& field, int n, int p, int d);

}  // namespace pnforms::forms
