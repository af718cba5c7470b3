#include "pnforms/display.hpp"

#include <iomanip>
#include <sstream>

#include "pnforms/bott.hpp"
#include "pnforms/parallel.hpp"

namespace pnforms::display {

std::string node_name(std::size_t node) {
  static const char* names[] = {"top", "free", "middle", "right", "bottom-left", "bottom-middle"};
  return node < node_count ? names[node] : "?";
}

std::string square_name(Square s) {
  switch (s) {
    case Square::top_left:
      return "top-left";
    case Square::bottom_left:
      return "bottom-left";
    case Square::bottom_right:
      return "bottom-right";
  }
  return "?";
}

std::optional<Square> parse_square(const std::string& s) {
  for (Square sq : {Square::top_left, Square::bottom_left, Square::bottom_right}) {
    if (square_name(sq) == s) return sq;
  }
  return std::nullopt;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::exact_at_sections:
      return "exact-at-sections";
    case Verdict::exact_with_h1_obstruction:
      return "exact-with-known-h1-obstruction";
    case Verdict::failed:
      return "failed";
  }
  return "?";
}

template <class F>
const Matrix<F>& DisplayInstance<F>::map(char name) const {
  for (const auto& m : maps) {
    if (m.name.size() == 1 && m.name[0] == name) return m.matrix;
  }
  throw std::out_of_range(std::string("no display map named ") + name);
}

namespace {

long long binom_ll(int a, int b) { return bott::to_ll(bott::binom(a, b)); }

long long h1_omega(int n, int p, int d) {
  if (n < 1 || p < 0 || p > n) return 0;
  return bott::to_ll(bott::h_omega(n, p, d, 1));
}

// Adds one to the first entry of the matrix (or does nothing for an empty one).
template <class F>
void perturb(Matrix<F>& m) {
  if (m.rows() == 0 || m.cols() == 0) return;
  m(0, 0) = m.field().add(m(0, 0), m.field().one());
}

}  // namespace

template <class F>
DisplayInstance<F> build_display(const F& field, int n, int p, int t, std::optional<Square> fault) {
  if (p < 0 || p + 1 > n) throw std::invalid_argument("display needs 0 <= p and p + 1 <= n");
  const int rk = static_cast<int>(binom_ll(n, p + 1));

  DisplayInstance<F> inst;
  inst.n = n;
  inst.p = p;
  inst.t = t;
  inst.nodes = {
      forms::h0_basis(field, n, p + 1, p + 1 + t),
      forms::free_sum_basis(field, n, t, rk),
      forms::h0_basis(field, n, p + 1, p + 2 + t),
      forms::h0_basis(field, n - 1, p + 1, p + 2 + t),
      forms::h0_basis(field, n - 1, p, p + 1 + t),
      forms::restricted_sections(field, n, p + 1, p + 2 + t),
  };

  Matrix<F> a = forms::multiply_by_last(field, n, p + 1, p + 1 + t);
  Matrix<F> c = forms::kernel_inclusion(field, n, p, t);
  Matrix<F> d = forms::restriction_of_forms(field, n, p + 1, p + 2 + t);
  Matrix<F> e = forms::restrict_to_hyperplane(field, n, p + 1, p + 2 + t);
  Matrix<F> f = forms::conormal_wedge(field, n, p, p + 2 + t);
  Matrix<F> g = forms::drop_last_differential(field, n, p + 1, p + 2 + t);

  auto b = solve(c, a);
  if (!b) throw DisplayError("top-left: x_n-multiples do not factor through the kernel inclusion");
  auto h = solve(f, e * c);
  if (!h) throw DisplayError("bottom-left: restricted kernel sections do not factor through dx_n ^ -");

  if (fault == Square::top_left) perturb(*b);
  if (fault == Square::bottom_left) perturb(*h);
  if (fault == Square::bottom_right) perturb(d);

  inst.maps = {
      {"a", top, middle, std::move(a)},          {"b", top, free_node, std::move(*b)},
      {"c", free_node, middle, std::move(c)},    {"d", middle, right, std::move(d)},
      {"e", middle, bottom_middle, std::move(e)}, {"f", bottom_left, bottom_middle, std::move(f)},
      {"g", bottom_middle, right, std::move(g)}, {"h", free_node, bottom_left, std::move(*h)},
  };
  return inst;
}

namespace {

template <class F>
ExactnessLedger sequence(const std::string& name, const std::string& maps, const Matrix<F>& i, const Matrix<F>& q,
                         std::size_t a, std::size_t b, std::size_t c, long long h1_left) {
  ExactnessLedger l;
  l.name = name;
  l.maps = maps;
  l.dims[0] = a;
  l.dims[1] = b;
  l.dims[2] = c;
  l.rank_in = rank(i);
  l.rank_out = rank(q);
  l.composite_zero = (q * i).is_zero();
  l.obstruction = c - l.rank_out;
  l.h1_left = h1_left;
  const bool left_exact = l.composite_zero && l.rank_in == a && l.rank_in + l.rank_out == b;
  if (!left_exact) {
    l.verdict = Verdict::failed;
  } else if (l.obstruction == 0) {
    l.verdict = Verdict::exact_at_sections;
  } else if (static_cast<long long>(l.obstruction) <= h1_left) {
    l.verdict = Verdict::exact_with_h1_obstruction;
  } else {
    l.verdict = Verdict::failed;
  }
  return l;
}

}  // namespace

template <class F>
DisplayReport check_display(const DisplayInstance<F>& inst) {
  const int n = inst.n, p = inst.p, t = inst.t;
  DisplayReport r;
  r.n = n;
  r.p = p;
  r.t = t;
  for (std::size_t k = 0; k < node_count; ++k) r.dims.push_back(inst.dim(k));

  const auto &a = inst.map('a'), &b = inst.map('b'), &c = inst.map('c'), &d = inst.map('d');
  const auto &e = inst.map('e'), &f = inst.map('f'), &g = inst.map('g'), &h = inst.map('h');

  r.squares = {{Square::top_left, c * b == a}, {Square::bottom_left, e * c == f * h}, {Square::bottom_right, d == g * e}};
  for (const auto& s : r.squares) {
    if (!s.commutes) r.failures.push_back("square " + square_name(s.square) + " does not commute");
  }

  const long long rk = binom_ll(n, p + 1);
  const long long h1_free = rk * bott::to_ll(bott::h_O(n, t, n >= 1 ? 1 : 0));
  const long long h1_top = h1_omega(n, p + 1, p + 1 + t);
  r.sequences = {
      sequence("row2", "c,d", c, d, inst.dim(free_node), inst.dim(middle), inst.dim(right), h1_free),
      sequence("row3", "f,g", f, g, inst.dim(bottom_left), inst.dim(bottom_middle), inst.dim(right),
               h1_omega(n - 1, p, p + 1 + t)),
      sequence("col1", "b,h", b, h, inst.dim(top), inst.dim(free_node), inst.dim(bottom_left), h1_top),
      sequence("col2", "a,e", a, e, inst.dim(top), inst.dim(middle), inst.dim(bottom_middle), h1_top),
  };
  for (const auto& s : r.sequences) {
    if (s.verdict == Verdict::failed) r.failures.push_back(s.name + " (" + s.maps + ") is not exact");
  }

  const std::size_t ker_h = inst.dim(free_node) - rank(h);
  r.kernel_image_identity = (h * b).is_zero() && ker_h == rank(b);
  if (!r.kernel_image_identity) r.failures.push_back("kernel of h differs from the image of b");

  if (r.sequences[0].verdict == Verdict::exact_at_sections && r.sequences[1].verdict == Verdict::exact_at_sections) {
    try {
      r.snake = snake_check(c, d, f, g, h, e, Matrix<F>::identity(c.field(), inst.dim(right)));
      if (!r.snake->exact) r.failures.push_back("snake sequence of the lower rows is not exact");
    } catch (const SnakeInputError& err) {
      r.failures.push_back(std::string("snake check rejected the lower rows: ") + err.what());
    }
  }
  return r;
}

template <class F>
std::vector<DisplayReport> verify_display(const F& field, int n, int p, int t_min, int t_max,
                                          std::optional<Square> fault, std::size_t threads) {
  if (t_max < t_min) return {};
  std::vector<DisplayReport> out(static_cast<std::size_t>(t_max - t_min + 1));
  parallel_for(
      out.size(), [&](std::size_t k) { out[k] = check_display(build_display(field, n, p, t_min + static_cast<int>(k), fault)); },
      threads);
  return out;
}

std::string render_text(const DisplayReport& r) {
  std::ostringstream os;
  os << "display n=" << r.n << " p=" << r.p << " t=" << r.t << ": " << (r.ok() ? "ok" : "FAILED") << '\n';
  os << "  nodes:";
  for (std::size_t k = 0; k < r.dims.size(); ++k) os << ' ' << node_name(k) << '=' << r.dims[k];
  os << '\n';
  os << "  squares:";
  for (const auto& s : r.squares) os << ' ' << square_name(s.square) << '=' << (s.commutes ? "commutes" : "FAILS");
  os << '\n';
  for (const auto& s : r.sequences) {
    os << "  " << std::left << std::setw(5) << s.name << std::setw(4) << s.maps << " dims " << s.dims[0] << ' '
       << s.dims[1] << ' ' << s.dims[2] << "  ranks " << s.rank_in << ' ' << s.rank_out << "  obstruction "
       << s.obstruction << "  h1 " << s.h1_left << "  " << verdict_name(s.verdict) << '\n';
  }
  os << "  ker h = im b: " << (r.kernel_image_identity ? "yes" : "no") << '\n';
  if (r.snake) {
    const auto& l = *r.snake;
    os << "  snake: ker " << l.ker1 << ' ' << l.ker2 << ' ' << l.ker3 << "  coker " << l.coker1 << ' ' << l.coker2
       << ' ' << l.coker3 << "  " << (l.exact ? "exact" : "NOT exact") << '\n';
  } else {
    os << "  snake: skipped\n";
  }
  for (const auto& f : r.failures) os << "  failure: " << f << '\n';
  return os.str();
}

nlohmann::ordered_json to_json(const DisplayReport& r) {
  using json = nlohmann::ordered_json;
  json nodes = json::array();
  for (std::size_t k = 0; k < r.dims.size(); ++k) nodes.push_back({{"node", node_name(k)}, {"dim", r.dims[k]}});
  json squares = json::array();
  for (const auto& s : r.squares) squares.push_back({{"square", square_name(s.square)}, {"commutes", s.commutes}});
  json seqs = json::array();
  for (const auto& s : r.sequences) {
    seqs.push_back({{"name", s.name},
                    {"maps", s.maps},
                    {"dims", {s.dims[0], s.dims[1], s.dims[2]}},
                    {"ranks", {s.rank_in, s.rank_out}},
                    {"composite_zero", s.composite_zero},
                    {"obstruction", s.obstruction},
                    {"h1_left", s.h1_left},
                    {"verdict", verdict_name(s.verdict)}});
  }
  json snake = nullptr;
  if (r.snake) {
    const auto& l = *r.snake;
    snake = {{"ker", {l.ker1, l.ker2, l.ker3}}, {"coker", {l.coker1, l.coker2, l.coker3}}, {"exact", l.exact}};
  }
  return {{"n", r.n},
          {"p", r.p},
          {"t", r.t},
          {"nodes", nodes},
          {"squares", squares},
          {"sequences", seqs},
          {"kernel_image_identity", r.kernel_image_identity},
          {"snake", snake},
          {"failures", r.failures},
          {"ok", r.ok()}};
}

#define PNFORMS_INSTANTIATE(F)                                                                                   \
  template struct DisplayInstance<F>;                                                                            \
  template DisplayInstance<F> build_display(const F&, int, int, int, std::optional<Square>);                    \
  template DisplayReport check_display(const DisplayInstance<F>&);                                               \
  template std::vector<DisplayReport> verify_display(const F&, int, int, int, int, std::optional<Square>, std::size_t);

PNFORMS_INSTANTIATE(PrimeField)
PNFORMS_INSTANTIATE(RationalField)

#undef PNFORMS_INSTANTIATE

}  // namespace pnforms::display
