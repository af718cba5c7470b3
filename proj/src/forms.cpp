#include "pnforms/forms.hpp"

#include <bit>
#include <stdexcept>

#include "pnforms/bott.hpp"

namespace pnforms::forms {

// ---------------------------------------------------------------------------
// combinatorics
// ---------------------------------------------------------------------------

int Monomial::degree() const {
  int d = 0;
  for (int e : exponents) d += e;
  return d;
}

std::string Monomial::label() const {
  std::string s;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += 'x' + std::to_string(i);
    if (exponents[i] > 1) s += '^' + std::to_string(exponents[i]);
  }
  return s.empty() ? "1" : s;
}

namespace {

void collect_sets(int count, int size, int start, IndexSet acc, std::vector<IndexSet>& out) {
  if (size == 0) {
    out.push_back(acc);
    return;
  }
  for (int i = start; i <= count - size; ++i) collect_sets(count, size - 1, i + 1, acc | (1u << i), out);
}

void collect_monomials(int nvars, int var, int remaining, std::vector<int>& exps, std::vector<Monomial>& out) {
  if (var == nvars - 1) {
    exps[var] = remaining;
    out.push_back(Monomial{exps});
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    exps[var] = e;
    collect_monomials(nvars, var + 1, remaining - e, exps, out);
  }
  exps[var] = 0;
}

// Number of elements of `set` preceding j.
int position(IndexSet set, int j) { return std::popcount(set & ((1u << j) - 1u)); }

}  // namespace

std::vector<IndexSet> index_sets(int count, int size) {
  std::vector<IndexSet> out;
  if (size < 0 || size > count) return out;
  if (count > 31) throw std::invalid_argument("too many differentials");
  collect_sets(count, size, 0, 0, out);
  return out;
}

std::vector<Monomial> monomials(int nvars, int degree) {
  std::vector<Monomial> out;
  if (degree < 0 || nvars < 0) return out;
  if (nvars == 0) {
    if (degree == 0) out.push_back(Monomial{});
    return out;
  }
  std::vector<int> exps(static_cast<std::size_t>(nvars), 0);
  collect_monomials(nvars, 0, degree, exps, out);
  return out;
}

std::string index_set_label(IndexSet set) {
  std::string s;
  for (int j = 0; j < 32; ++j) {
    if ((set >> j & 1u) == 0) continue;
    if (!s.empty()) s += '^';
    s += "dx" + std::to_string(j);
  }
  return s;
}

FormCoords::FormCoords(int diffs, int coeff_vars, int p, int coeff_degree)
    : diffs_(diffs),
      coeff_vars_(coeff_vars),
      p_(p),
      coeff_degree_(coeff_degree),
      sets_(index_sets(diffs, p)),
      monos_(forms::monomials(coeff_vars, coeff_degree)) {
  for (std::size_t i = 0; i < sets_.size(); ++i) set_pos_.emplace(sets_[i], i);
  for (std::size_t i = 0; i < monos_.size(); ++i) mono_pos_.emplace(monos_[i], i);
}

std::optional<std::size_t> FormCoords::find(IndexSet set, const Monomial& m) const {
  auto s = set_pos_.find(set);
  auto t = mono_pos_.find(m);
  if (s == set_pos_.end() || t == mono_pos_.end()) return std::nullopt;
  return index(s->second, t->second);
}

std::string FormCoords::label(std::size_t k) const {
  const auto& set = sets_[k / monos_.size()];
  const auto& mono = monos_[k % monos_.size()];
  return set == 0 ? mono.label() : mono.label() + " " + index_set_label(set);
}

std::vector<std::string> FormCoords::labels() const {
  std::vector<std::string> out;
  out.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) out.push_back(label(k));
  return out;
}

std::string SheafDesc::name() const {
  const std::string space = "P" + std::to_string(n);
  switch (kind) {
    case Kind::omega:
      return "Omega^" + std::to_string(p) + "_" + space + "(" + std::to_string(d) + ")";
    case Kind::free_sum:
      return "O_" + space + "(" + std::to_string(d) + ")^" + std::to_string(r);
    case Kind::restricted_omega:
      return "Omega^" + std::to_string(p) + "_" + space + "(" + std::to_string(d) + ")|P" + std::to_string(n - 1);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ambient maps
// ---------------------------------------------------------------------------

namespace {

// Generic coordinate transfer: each source basis element (I, m) maps to at most
// one target element with a sign, as decided by `rule`.
template <class F, class Rule>
Matrix<F> transfer(const F& field, const FormCoords& src, const FormCoords& dst, Rule rule) {
  Matrix<F> m(field, dst.size(), src.size());
  for (std::size_t a = 0; a < src.sets().size(); ++a) {
    for (std::size_t b = 0; b < src.monomials().size(); ++b) {
      IndexSet set = src.sets()[a];
      Monomial mono = src.monomials()[b];
      int sign = 1;
      if (!rule(set, mono, sign)) continue;
      auto k = dst.find(set, mono);
      if (!k) throw std::logic_error("coordinate transfer left the target key");
      m(*k, src.index(a, b)) = field.from_int(sign);
    }
  }
  return m;
}

template <class F>
Matrix<F> basis_or_empty(const F& field, const Matrix<F>& kernel, std::size_t ambient) {
  if (kernel.rows() == ambient) return kernel;
  return Matrix<F>(field, ambient, 0);
}

Monomial truncate(const Monomial& m, int nvars) {
  return Monomial{std::vector<int>(m.exponents.begin(), m.exponents.begin() + nvars)};
}

}  // namespace

template <class F>
Matrix<F> contraction(const F& field, const FormCoords& domain, int euler_vars) {
  if (domain.p() < 1) throw std::invalid_argument("contraction needs form degree >= 1");
  if (euler_vars > domain.coeff_vars()) throw std::invalid_argument("Euler field uses unknown variables");
  const FormCoords target(domain.diffs(), domain.coeff_vars(), domain.p() - 1, domain.coeff_degree() + 1);
  Matrix<F> m(field, target.size(), domain.size());
  for (std::size_t a = 0; a < domain.sets().size(); ++a) {
    const IndexSet set = domain.sets()[a];
    for (std::size_t b = 0; b < domain.monomials().size(); ++b) {
      const Monomial& mono = domain.monomials()[b];
      for (int j = 0; j < euler_vars; ++j) {
        if ((set >> j & 1u) == 0) continue;
        Monomial shifted = mono;
        ++shifted.exponents[static_cast<std::size_t>(j)];
        const auto k = target.find(set & ~(1u << j), shifted);
        if (!k) throw std::logic_error("contraction left the target key");
        m(*k, domain.index(a, b)) = field.from_int(position(set, j) % 2 == 0 ? 1 : -1);
      }
    }
  }
  return m;
}

template <class F>
Matrix<F> contraction_matrix(const F& field, int n, int p, int d) {
  if (n < 0 || p < 1) throw std::invalid_argument("contraction_matrix needs n >= 0 and p >= 1");
  if (d < p) return Matrix<F>(field, 0, 0);
  return contraction(field, FormCoords(n + 1, n + 1, p, d - p), n + 1);
}

template <class F>
SectionSpace<F> h0_basis(const F& field, int n, int p, int d) {
  if (n < 0 || p < 0) throw std::invalid_argument("h0_basis needs n >= 0 and p >= 0");
  const FormCoords coords(n + 1, n + 1, p, d - p);
  SectionSpace<F> s{SheafDesc::omega(n, p, d), coords.labels(), Matrix<F>(field, coords.size(), 0)};
  if (coords.size() == 0) return s;
  if (p == 0) {
    s.basis = Matrix<F>::identity(field, coords.size());
  } else {
    s.basis = basis_or_empty(field, kernel_basis(contraction(field, coords, n + 1)), coords.size());
  }
  return s;
}

template <class F>
SectionSpace<F> free_sum_basis(const F& field, int n, int d, int r) {
  const auto monos = monomials(n + 1, d);
  std::vector<std::string> key;
  for (int k = 0; k < r; ++k) {
    for (const auto& m : monos) key.push_back("e" + std::to_string(k) + "*" + m.label());
  }
  return {SheafDesc::free_sum(n, d, r), key, Matrix<F>::identity(field, key.size())};
}

template <class F>
SectionSpace<F> restricted_sections(const F& field, int n, int p, int d) {
  if (n < 1 || p < 0) throw std::invalid_argument("restricted_sections needs n >= 1 and p >= 0");
  const FormCoords coords(n + 1, n, p, d - p);
  SectionSpace<F> s{SheafDesc::restricted_omega(n, p, d), coords.labels(), Matrix<F>(field, coords.size(), 0)};
  if (coords.size() == 0) return s;
  if (p == 0) {
    s.basis = Matrix<F>::identity(field, coords.size());
  } else {
    s.basis = basis_or_empty(field, kernel_basis(contraction(field, coords, n)), coords.size());
  }
  return s;
}

template <class F>
Matrix<F> coordinates_in(const SectionSpace<F>& space, const Matrix<F>& ambient, const std::string& what) {
  if (ambient.cols() == 0) return Matrix<F>(ambient.field(), space.dim(), 0);
  auto x = solve(space.basis, ambient);
  if (!x) throw std::logic_error(what + ": image does not lie in " + space.desc.name());
  return *x;
}

template <class F>
Matrix<F> restriction_of_forms(const F& field, int n, int p, int d) {
  if (n < 1 || p < 0 || p > n) throw std::invalid_argument("restriction_of_forms needs n >= 1, 0 <= p <= n");
  const auto src = h0_basis(field, n, p, d);
  const auto dst = h0_basis(field, n - 1, p, d);
  const FormCoords a(n + 1, n + 1, p, d - p), b(n, n, p, d - p);
  const auto ambient = transfer(field, a, b, [n](IndexSet& set, Monomial& m, int&) {
    if (set >> n & 1u) return false;
    if (m.exponents[static_cast<std::size_t>(n)] != 0) return false;
    m = truncate(m, n);
    return true;
  });
  return coordinates_in(dst, ambient * src.basis, "restriction of forms");
}

template <class F>
Matrix<F> restrict_to_hyperplane(const F& field, int n, int p, int d) {
  const auto src = h0_basis(field, n, p, d);
  const auto dst = restricted_sections(field, n, p, d);
  const FormCoords a(n + 1, n + 1, p, d - p), b(n + 1, n, p, d - p);
  const auto ambient = transfer(field, a, b, [n](IndexSet&, Monomial& m, int&) {
    if (m.exponents[static_cast<std::size_t>(n)] != 0) return false;
    m = truncate(m, n);
    return true;
  });
  return coordinates_in(dst, ambient * src.basis, "restriction to the hyperplane");
}

template <class F>
Matrix<F> drop_last_differential(const F& field, int n, int p, int d) {
  const auto src = restricted_sections(field, n, p, d);
  const auto dst = h0_basis(field, n - 1, p, d);
  const FormCoords a(n + 1, n, p, d - p), b(n, n, p, d - p);
  const auto ambient = transfer(field, a, b, [n](IndexSet& set, Monomial&, int&) { return (set >> n & 1u) == 0; });
  return coordinates_in(dst, ambient * src.basis, "dropping dx_n");
}

template <class F>
Matrix<F> conormal_wedge(const F& field, int n, int p, int d) {
  if (n < 1 || p < 0) throw std::invalid_argument("conormal_wedge needs n >= 1 and p >= 0");
  const auto src = h0_basis(field, n - 1, p, d - 1);
  const auto dst = restricted_sections(field, n, p + 1, d);
  const FormCoords a(n, n, p, d - 1 - p), b(n + 1, n, p + 1, d - 1 - p);
  const auto ambient = transfer(field, a, b, [n, p](IndexSet& set, Monomial&, int& sign) {
    // dx_n ^ dx_I = (-1)^p dx_{I + n}
    set |= 1u << n;
    sign = p % 2 == 0 ? 1 : -1;
    return true;
  });
  return coordinates_in(dst, ambient * src.basis, "conormal wedge");
}

template <class F>
Matrix<F> multiply_by_last(const F& field, int n, int p, int d) {
  const auto src = h0_basis(field, n, p, d);
  const auto dst = h0_basis(field, n, p, d + 1);
  const FormCoords a(n + 1, n + 1, p, d - p), b(n + 1, n + 1, p, d + 1 - p);
  const auto ambient = transfer(field, a, b, [n](IndexSet&, Monomial& m, int&) {
    ++m.exponents[static_cast<std::size_t>(n)];
    return true;
  });
  return coordinates_in(dst, ambient * src.basis, "multiplication by x_n");
}

template <class F>
Matrix<F> kernel_inclusion(const F& field, int n, int p, int t) {
  if (n < 1 || p < 0 || p + 1 > n) throw std::invalid_argument("kernel_inclusion needs 0 <= p, p + 1 <= n");
  const auto dst = h0_basis(field, n, p + 1, p + 2 + t);
  const auto frees = index_sets(n, p + 1);
  const auto coeffs = monomials(n + 1, t);
  const FormCoords target(n + 1, n + 1, p + 1, t + 1);
  Matrix<F> ambient(field, target.size(), frees.size() * coeffs.size());
  for (std::size_t k = 0; k < frees.size(); ++k) {
    const IndexSet full = frees[k] | (1u << n);
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
      const std::size_t col = k * coeffs.size() + c;
      for (int j = 0; j <= n; ++j) {
        if ((full >> j & 1u) == 0) continue;
        Monomial m = coeffs[c];
        ++m.exponents[static_cast<std::size_t>(j)];
        const auto row = target.find(full & ~(1u << j), m);
        if (!row) throw std::logic_error("kernel generator left the target key");
        ambient(*row, col) = field.from_int(position(full, j) % 2 == 0 ? 1 : -1);
      }
    }
  }
  return coordinates_in(dst, ambient, "kernel inclusion");
}

template <class F>
bool claim_i_kernel_test(const F& field, int n, int p, int d) {
  if (p < 0 || p + 1 > n) throw std::invalid_argument("claim_i_kernel_test needs 0 <= p, p + 1 <= n");
  const auto r = restriction_of_forms(field, n, p + 1, d);
  const long long kernel = static_cast<long long>(r.cols()) - static_cast<long long>(rank(r));
  const mpz_class expected = bott::binom(n, p + 1) * bott::h_O(n, d - p - 2, 0);
  return expected == static_cast<long>(kernel);
}

template <class F>
PForm<F> section_form(const SectionSpace<F>& space, std::size_t j) {
  if (space.desc.kind != SheafDesc::Kind::omega) throw std::invalid_argument("section_form needs an Omega space");
  PForm<F> form{space.desc.n, space.desc.p, space.desc.d, {}};
  form.coeffs.reserve(space.ambient_dim());
  for (std::size_t i = 0; i < space.ambient_dim(); ++i) form.coeffs.push_back(space.basis(i, j));
  return form;
}

#define PNFORMS_INSTANTIATE(F)                                                                    \
  template Matrix<F> contraction(const F&, const FormCoords&, int);                               \
  template Matrix<F> contraction_matrix(const F&, int, int, int);                                 \
  template SectionSpace<F> h0_basis(const F&, int, int, int);                                     \
  template SectionSpace<F> free_sum_basis(const F&, int, int, int);                               \
  template SectionSpace<F> restricted_sections(const F&, int, int, int);                          \
  template Matrix<F> coordinates_in(const SectionSpace<F>&, const Matrix<F>&, const std::string&); \
  template Matrix<F> restriction_of_forms(const F&, int, int, int);                               \
  template Matrix<F> restrict_to_hyperplane(const F&, int, int, int);                             \
  template Matrix<F> drop_last_differential(const F&, int, int, int);                             \
  template Matrix<F> conormal_wedge(const F&, int, int, int);                                     \
  template Matrix<F> multiply_by_last(const F&, int, int, int);                                   \
  template Matrix<F> kernel_inclusion(const F&, int, int, int);                                   \
  template bool claim_i_kernel_test(const F&, int, int, int);                                     \
  template PForm<F> section_form(const SectionSpace<F>&, std::size_t);

PNFORMS_INSTANTIATE(PrimeField)
PNFORMS_INSTANTIATE(RationalField)

#undef PNFORMS_INSTANTIATE

}  // namespace pnforms::forms
