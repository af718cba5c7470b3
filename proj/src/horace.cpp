#include "pnforms/horace.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "pnforms/bott.hpp"
#include "pnforms/exactalg.hpp"
#include "pnforms/forms.hpp"
#include "pnforms/maxrank.hpp"
#include "pnforms/parallel.hpp"

namespace pnforms::horace {

std::string role_name(Role r) {
  switch (r) {
    case Role::root:
      return "root";
    case Role::alpha3_hyperplane:
      return "alpha3-hyperplane";
    case Role::alpha1_interior:
      return "alpha1-interior";
    case Role::alpha1prime_degree_lowered:
      return "alpha1prime-degree-lowered";
    case Role::leaf_base_case:
      return "leaf-base-case";
  }
  return "?";
}

std::string status_name(Status s) {
  switch (s) {
    case Status::unverified:
      return "unverified";
    case Status::witnessed_maximal:
      return "witnessed-maximal";
    case Status::not_witnessed:
      return "not-witnessed";
  }
  return "?";
}

namespace {

long long binom_ll(int a, int b) { return a < 0 ? 0 : bott::to_ll(bott::binom(a, b)); }

long long free_sections(int n, int d) { return bott::to_ll(bott::h_O(n, d, 0)); }

HoraceNode build(int n, int p, int d, int s, int d_base, Role via);

HoraceNode build_interior(int n, int p, int d, int s, int s_h, int d_base) {
  HoraceNode node;
  node.n = n;
  node.p = p;
  node.d = d;
  node.s = s;
  node.role = node.via = Role::alpha1_interior;
  node.interior = true;
  node.s_hyperplane = s_h;
  const long long rk = maxrank::fiber_rank(n, p);
  node.ledger.source = rk * free_sections(n, d - 1);
  node.ledger.target = (s - s_h) * rk + s_h * binom_ll(n - 1, p);
  if (node.ledger.source == 0 || node.ledger.target == 0) {
    node.role = Role::leaf_base_case;
    return node;
  }
  node.children.push_back(build(n, p, d - 1, s - s_h, d_base, Role::alpha1prime_degree_lowered));
  if (p >= 0) node.children.push_back(build(n - 1, p - 1, d, s_h, d_base, Role::alpha3_hyperplane));
  return node;
}

HoraceNode build(int n, int p, int d, int s, int d_base, Role via) {
  HoraceNode node;
  node.n = n;
  node.p = p;
  node.d = d;
  node.s = s;
  node.role = node.via = via;
  node.ledger.source = maxrank::section_count(n, p, d);
  node.ledger.target = s * maxrank::fiber_rank(n, p);
  if (n == 1 || d == d_base || s == 0 || node.ledger.source == 0 || node.ledger.target == 0) {
    node.role = Role::leaf_base_case;
    return node;
  }
  const long long rk = maxrank::fiber_rank(n, p);
  const long long rk_h = maxrank::fiber_rank(n - 1, p);
  const long long h0_h = maxrank::section_count(n - 1, p, d);
  const int s_h = rk_h == 0 ? 0 : static_cast<int>(std::min<long long>(s, h0_h / rk_h));
  node.s_hyperplane = s_h;
  const long long ker = h0_h - std::min(h0_h, s_h * rk_h);
  node.ledger.ker_lambda = ker;
  if (rk - ker >= 0) node.ledger.residual = rk - ker;
  if (rk_h > 0) node.children.push_back(build(n - 1, p, d, s_h, d_base, Role::alpha3_hyperplane));
  node.children.push_back(build_interior(n, p, d, s, s_h, d_base));
  return node;
}

void collect(HoraceNode& node, std::vector<HoraceNode*>& out) {
  out.push_back(&node);
  for (auto& c : node.children) collect(c, out);
}

struct Check {
  std::size_t rank = 0;
  std::size_t trials = 0;
  bool maximal = false;
};

// Points for the interior check: s_h general points of H followed by s - s_h
// points off H.
template <class F>
maxrank::PointSet<F> interior_points(const F& field, int n, int s, int s_h, std::uint64_t seed) {
  maxrank::PointSet<F> out{n, {}, seed};
  for (auto pt : maxrank::random_points(field, n - 1, s_h, maxrank::mix_seed(seed, 0)).points) {
    pt.coords.push_back(field.zero());
    out.points.push_back(std::move(pt));
  }
  for (std::uint64_t stream = 1; stream <= 100; ++stream) {
    auto off = maxrank::random_points(field, n, s - s_h, maxrank::mix_seed(seed, stream));
    const bool all_off = std::all_of(off.points.begin(), off.points.end(),
                                     [&](const auto& pt) { return !field.is_zero(pt.coords.back()); });
    if (!all_off) continue;
    for (auto& pt : off.points) out.points.push_back(std::move(pt));
    return out;
  }
  throw maxrank::FieldTooSmall("could not place points off the hyperplane");
}

template <class F>
Check check_interior(const F& field, const HoraceNode& node, std::size_t trials, std::uint64_t seed) {
  const int n = node.n, p = node.p, d = node.d;
  // sections of F vanishing on H, as columns in the basis of H^0(F)
  const Matrix<F> sub = p >= 0 ? forms::kernel_inclusion(field, n, p, d - 1) : forms::multiply_by_last(field, n, 0, d - 1);
  const std::size_t bound = static_cast<std::size_t>(std::min(node.ledger.source, node.ledger.target));
  Check best;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto pts = interior_points(field, n, node.s, node.s_hyperplane, maxrank::mix_seed(seed, trial));
    const std::size_t r = rank(maxrank::eval_matrix(field, n, p, d, pts) * sub);
    best.rank = std::max(best.rank, r);
    best.trials = trial + 1;
    if (best.rank == bound) {
      best.maximal = true;
      break;
    }
  }
  return best;
}

Check check_node(const FieldSpec& field, const HoraceNode& node, std::size_t trials, std::uint64_t seed) {
  if (node.interior) {
    return visit_field(field, [&](const auto& f) { return check_interior(f, node, trials, seed); });
  }
  const auto cert = maxrank::maxrank_test(field, node.n, node.p, node.d, node.s, trials, seed);
  return {cert.rank, cert.trials, cert.maximal};
}

void ledger_pass(HoraceNode& node) {
  for (auto& c : node.children) ledger_pass(c);
  if (node.is_leaf() || node.interior || !node.ledger.ker_lambda) return;
  const long long rk = maxrank::fiber_rank(node.n, node.p);
  long long ker = 0;
  if (node.children.front().via == Role::alpha3_hyperplane) {
    const auto& h = node.children.front();
    ker = h.ledger.source - static_cast<long long>(h.rank);
  }
  std::optional<long long> residual;
  if (rk - ker >= 0) residual = rk - ker;
  node.ledger_mismatch = ker != *node.ledger.ker_lambda || residual != node.ledger.residual;
}

void render(const HoraceNode& node, const std::string& prefix, bool last, bool top, std::ostringstream& os) {
  const char* glyph = node.status == Status::witnessed_maximal ? "✓" : node.status == Status::not_witnessed ? "✗" : "?";
  os << prefix;
  if (!top) os << (last ? "└─ " : "├─ ");
  os << glyph << ' ' << role_name(node.role);
  if (node.role != node.via) os << " (" << role_name(node.via) << ')';
  os << " n=" << node.n << " p=" << node.p << " d=" << node.d << " s=" << node.s;
  os << "  source " << node.ledger.source << " target " << node.ledger.target;
  if (!node.is_leaf() || node.interior) os << " s_H " << node.s_hyperplane;
  if (node.ledger.ker_lambda) {
    os << " ker " << *node.ledger.ker_lambda << " D ";
    if (node.ledger.residual) {
      os << *node.ledger.residual;
    } else {
      os << '-';
    }
  }
  if (node.status != Status::unverified) os << "  rank " << node.rank;
  if (node.implication_failure) os << "  IMPLICATION FAILURE";
  if (node.ledger_mismatch) os << "  LEDGER MISMATCH";
  os << '\n';
  const std::string next = top ? prefix : prefix + (last ? "   " : "│  ");
  for (std::size_t k = 0; k < node.children.size(); ++k) {
    render(node.children[k], next, k + 1 == node.children.size(), false, os);
  }
}

}  // namespace

HoraceNode plan(int n, int p, int d, int s, int d_base) {
  if (n < 1 || p < -1 || p + 1 > n) throw std::invalid_argument("plan needs n >= 1 and -1 <= p <= n-1");
  if (s < 0) throw std::invalid_argument("plan needs s >= 0");
  if (d_base < 0 || d < d_base) throw std::invalid_argument("plan needs d >= d_base >= 0");
  return build(n, p, d, s, d_base, Role::root);
}

void implication_pass(HoraceNode& node) {
  for (auto& c : node.children) implication_pass(c);
  if (node.is_leaf()) return;
  const bool children_ok = std::all_of(node.children.begin(), node.children.end(),
                                       [](const HoraceNode& c) { return c.status == Status::witnessed_maximal; });
  node.implication_failure = children_ok && node.status != Status::witnessed_maximal;
}

std::size_t node_count(const HoraceNode& tree) {
  std::size_t count = 1;
  for (const auto& c : tree.children) count += node_count(c);
  return count;
}

HoraceNode verify_tree(const HoraceNode& tree, const FieldSpec& field, const VerifyOptions& options) {
  HoraceNode out = tree;
  std::vector<HoraceNode*> nodes;
  collect(out, nodes);
  std::vector<Check> checks(nodes.size());
  parallel_for(
      nodes.size(),
      [&](std::size_t k) { checks[k] = check_node(field, *nodes[k], options.trials, maxrank::mix_seed(options.seed, k)); },
      options.threads);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    nodes[k]->rank = checks[k].rank;
    nodes[k]->trials_used = checks[k].trials;
    nodes[k]->status = checks[k].maximal ? Status::witnessed_maximal : Status::not_witnessed;
  }
  implication_pass(out);
  ledger_pass(out);
  return out;
}

TreeSummary summarize(const HoraceNode& tree) {
  TreeSummary s;
  s.nodes = 1;
  if (tree.status == Status::witnessed_maximal) ++s.witnessed;
  if (tree.status == Status::not_witnessed) ++s.not_witnessed;
  if (tree.implication_failure) ++s.implication_failures;
  if (tree.ledger_mismatch) ++s.ledger_mismatches;
  for (const auto& c : tree.children) {
    const auto t = summarize(c);
    s.nodes += t.nodes;
    s.witnessed += t.witnessed;
    s.not_witnessed += t.not_witnessed;
    s.implication_failures += t.implication_failures;
    s.ledger_mismatches += t.ledger_mismatches;
  }
  return s;
}

std::string render_tree(const HoraceNode& tree) {
  std::ostringstream os;
  render(tree, "", true, true, os);
  return os.str();
}

nlohmann::ordered_json to_json(const HoraceNode& node) {
  using json = nlohmann::ordered_json;
  json ledger = {{"source", node.ledger.source}, {"target", node.ledger.target}};
  ledger["ker_lambda"] = node.ledger.ker_lambda ? json(*node.ledger.ker_lambda) : json(nullptr);
  ledger["residual"] = node.ledger.residual ? json(*node.ledger.residual) : json(nullptr);
  json children = json::array();
  for (const auto& c : node.children) children.push_back(to_json(c));
  return {{"problem", {{"n", node.n}, {"p", node.p}, {"d", node.d}, {"s", node.s}}},
          {"role", role_name(node.role)},
          {"via", role_name(node.via)},
          {"interior", node.interior},
          {"s_H", node.s_hyperplane},
          {"ledger", ledger},
          {"status", status_name(node.status)},
          {"rank", node.rank},
          {"trials", node.trials_used},
          {"implication_failure", node.implication_failure},
          {"ledger_mismatch", node.ledger_mismatch},
          {"children", children}};
}

}  // namespace pnforms::horace
