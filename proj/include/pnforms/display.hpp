#pragma once

// Section-level model of the elementary transformation of Omega^{p+1} along the
// hyperplane H = {x_n = 0}, twisted by t:
//
//                 0                       0
//                 |                       |
//   0 -> Omega^{p+1}(p+1+t)  ==  Omega^{p+1}(p+1+t)
//                 |b                      |a
//   0 ->  O(t)^{C(n,p+1)}  -c->  Omega^{p+1}(p+2+t)  -d->  Omega^{p+1}_H(p+2+t) -> 0
//                 |h                      |e                     ||
//   0 -> Omega^p_H(p+1+t)  -f->  Omega^{p+1}(p+2+t)|_H  -g->  Omega^{p+1}_H(p+2+t) -> 0
//                 |                       |
//                 0                       0

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "pnforms/exactalg.hpp"
#include "pnforms/forms.hpp"

namespace pnforms::display {

enum Node : std::size_t { top, free_node, middle, right, bottom_left, bottom_middle, node_count };

/// Human-readable node name ("top", "free", ...).
std::string node_name(std::size_t node);

/// The three commuting squares of the diagram.
enum class Square { top_left, bottom_left, bottom_right };

std::string square_name(Square s);
/// Parses "top-left" / "bottom-left" / "bottom-right".
std::optional<Square> parse_square(const std::string& s);

/// Raised when a map of the diagram cannot be realized at the matrix level.
class DisplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
struct DisplayMap {
  std::string name;
  std::size_t from, to;
  Matrix<F> matrix;  // dim(to) x dim(from)
};

template <class F>
struct DisplayInstance {
  int n = 0, p = 0, t = 0;
  std::vector<forms::SectionSpace<F>> nodes;  // indexed by Node
  std::vector<DisplayMap<F>> maps;            // a b c d e f g h

  const Matrix<F>& map(char name) const;
  std::size_t dim(std::size_t node) const { return nodes[node].dim(); }
};

/// Builds every node and map. `fault` perturbs one entry of a map so the named
/// square no longer commutes (test hook).
template <class F>
DisplayInstance<F> build_display(const F& field, int n, int p, int t, std::optional<Square> fault = std::nullopt);

enum class Verdict { exact_at_sections, exact_with_h1_obstruction, failed };

std::string verdict_name(Verdict v);

/// One short sequence 0 -> A -i-> B -q-> C -> 0 of the diagram, checked on sections.
struct ExactnessLedger {
  std::string name;
  std::string maps;  // e.g. "c,d"
  std::size_t dims[3] = {0, 0, 0};
  std::size_t rank_in = 0, rank_out = 0;
  bool composite_zero = false;
  std::size_t obstruction = 0;  // dim C - rank q
  long long h1_left = 0;        // h^1 of the sheaf A
  Verdict verdict = Verdict::failed;
};

struct SquareCheck {
  Square square;
  bool commutes = false;
};

struct DisplayReport {
  int n = 0, p = 0, t = 0;
  std::vector<std::size_t> dims;  // indexed by Node
  std::vector<SquareCheck> squares;
  std::vector<ExactnessLedger> sequences;  // row2, row3, col1, col2
  bool kernel_image_identity = false;      // dim ker h == rank b and h b = 0
  std::optional<SnakeLedger> snake;        // lower two rows, when both are exact
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

template <class F>
DisplayReport check_display(const DisplayInstance<F>& inst);

/// check_display for every t in [t_min, t_max], in order of t.
template <class F>
std::vector<DisplayReport> verify_display(const F& field, int n, int p, int t_min, int t_max,
                                          std::optional<Square> fault = std::nullopt, std::size_t threads = 0);

/// Aligned text block for one report.
std::string render_text(const DisplayReport& r);
nlohmann::ordered_json to_json(const DisplayReport& r);

}  // namespace pnforms::display
