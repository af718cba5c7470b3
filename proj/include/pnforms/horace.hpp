#pragma once

// Recursion tree for hyperplane specialization of the evaluation problems in
// maxrank.hpp, with dimension ledgers and direct rank checks at every node.
//
// A split node (n, p, d, s) puts s_H of its points on H = {x_n = 0}:
//   alpha3          (n-1, p, d, s_H)       the problem restricted to H
//   alpha1 interior sections vanishing on H, that is O(d-1)^{C(n,p+1)}, checked
//                   at s - s_H general points and s_H points of H; its children are
//     alpha1'       (n, p, d-1, s - s_H)   the degree-lowered problem
//     alpha3'       (n-1, p-1, d, s_H)     the dx_n-part at the points of H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pnforms/field.hpp"

namespace pnforms::horace {

enum class Role { root, alpha3_hyperplane, alpha1_interior, alpha1prime_degree_lowered, leaf_base_case };
enum class Status { unverified, witnessed_maximal, not_witnessed };

std::string role_name(Role r);
std::string status_name(Status s);

struct Ledger {
  long long source = 0;  // sections
  long long target = 0;  // conditions imposed by the points
  // Split nodes only.
  std::optional<long long> ker_lambda;  // predicted dim ker of H^0(F') -> fibers at the s_H points
  std::optional<long long> residual;    // D(lambda) = C(n,p+1) - ker_lambda, unset when negative
};

struct HoraceNode {
  int n = 0, p = 0, d = 0, s = 0;
  Role role = Role::root;
  Role via = Role::root;  // position in the tree; differs from role only for leaves
  bool interior = false;  // alpha1 node: checks the sections vanishing on H
  int s_hyperplane = 0;   // points on H (split and interior nodes)
  Ledger ledger;
  std::vector<HoraceNode> children;

  // filled in by verify_tree
  Status status = Status::unverified;
  std::size_t rank = 0;
  std::size_t trials_used = 0;
  bool implication_failure = false;
  bool ledger_mismatch = false;  // recomputed D(lambda) differs from the planned one

  bool is_leaf() const { return children.empty(); }
};

/// Throws std::invalid_argument unless n >= 1, -1 <= p <= n-1, s >= 0 and
/// d >= d_base >= 0.
HoraceNode plan(int n, int p, int d, int s, int d_base);

/// Number of nodes in the subtree.
std::size_t node_count(const HoraceNode& tree);

struct VerifyOptions {
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

/// Direct check of every node (seeded by the preorder index) followed by the
/// implication pass: a node whose children are all witnessed-maximal must be
/// witnessed-maximal itself.
HoraceNode verify_tree(const HoraceNode& tree, const FieldSpec& field, const VerifyOptions& options);

/// Recomputes implication_failure from the node statuses (part of verify_tree).
void implication_pass(HoraceNode& tree);

struct TreeSummary {
  std::size_t nodes = 0;
  std::size_t witnessed = 0;
  std::size_t not_witnessed = 0;
  std::size_t implication_failures = 0;
  std::size_t ledger_mismatches = 0;

  bool ok() const { return not_witnessed == 0 && implication_failures == 0 && ledger_mismatches == 0; }
};

TreeSummary summarize(const HoraceNode& tree);

/// Indented tree with status glyphs.
std::string render_tree(const HoraceNode& tree);
nlohmann::ordered_json to_json(const HoraceNode& tree);

}  // namespace pnforms::horace
