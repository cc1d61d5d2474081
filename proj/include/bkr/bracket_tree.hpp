#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bkr {

// ---------------------------------------------------------------------------
// BracketTree: a full binary tree whose leaves carry event indices. Encodes
// one way to associate a chained binary product. Immutable; copies share
// structure.
// ---------------------------------------------------------------------------
class BracketTree {
 public:
  static BracketTree leaf(int event_index) {
    BracketTree t;
    t.node_ = std::make_shared<const Node>(Node{event_index, nullptr, nullptr, 1});
    return t;
  }

  static BracketTree combine(const BracketTree& left, const BracketTree& right) {
    BracketTree t;
    t.node_ = std::make_shared<const Node>(
        Node{-1, left.node_, right.node_, left.leaf_count() + right.leaf_count()});
    return t;
  }

  bool is_leaf() const { return node_->leaf >= 0; }
  int leaf_index() const { return node_->leaf; }
  int leaf_count() const { return node_->leaves; }

  BracketTree left() const { return BracketTree(node_->left); }
  BracketTree right() const { return BracketTree(node_->right); }

  /// "((1 2) 3)" with 1-based leaf labels; "A" for every leaf when unlabeled.
  std::string to_string(bool labeled = true) const {
    if (is_leaf()) return labeled ? std::to_string(node_->leaf + 1) : "A";
    return "(" + left().to_string(labeled) + " " + right().to_string(labeled) + ")";
  }

  friend bool operator==(const BracketTree& a, const BracketTree& b) {
    return structurally_equal(a.node_.get(), b.node_.get());
  }

  /// Total order used for canonicalization: leaf count first, then shape.
  friend bool tree_less(const BracketTree& a, const BracketTree& b) {
    if (a.leaf_count() != b.leaf_count()) return a.leaf_count() < b.leaf_count();
    return a.to_string(false) < b.to_string(false);
  }

 private:
  struct Node {
    int leaf;  // >= 0 for leaves, -1 for internal nodes
    std::shared_ptr<const Node> left, right;
    int leaves;
  };

  BracketTree() = default;
  explicit BracketTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static bool structurally_equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->leaf != b->leaf || a->leaves != b->leaves) return false;
    if (a->leaf >= 0) return true;
    return structurally_equal(a->left.get(), b->left.get()) &&
           structurally_equal(a->right.get(), b->right.get());
  }

  std::shared_ptr<const Node> node_;
};

/// The left comb ( ...((A_1 A_2) A_3)... A_r ).
inline BracketTree left_comb(int r) {
  if (r < 1) throw std::invalid_argument("left comb needs at least one leaf");
  BracketTree t = BracketTree::leaf(0);
  for (int i = 1; i < r; ++i) t = BracketTree::combine(t, BracketTree::leaf(i));
  return t;
}

namespace detail {

inline void enumerate_trees(int first, int count, std::vector<BracketTree>& out) {
  out.clear();
  if (count == 1) {
    out.push_back(BracketTree::leaf(first));
    return;
  }
  for (int left_count = 1; left_count < count; ++left_count) {
    std::vector<BracketTree> lhs, rhs;
    enumerate_trees(first, left_count, lhs);
    enumerate_trees(first + left_count, count - left_count, rhs);
    for (const auto& l : lhs) {
      for (const auto& r : rhs) out.push_back(BracketTree::combine(l, r));
    }
  }
}

}  // namespace detail

/// All ordered full binary trees with r leaves labeled 0..r-1 left to right,
/// in canonical (split-position, then recursive) order. Count is the Catalan
/// number C_{r-1}.
inline std::vector<BracketTree> enumerate_parenthesizations(int r) {
  if (r < 2 || r > 10) {
    throw std::invalid_argument("parenthesization enumeration supports 2 <= r <= 10");
  }
  std::vector<BracketTree> out;
  detail::enumerate_trees(0, r, out);
  return out;
}

/// Canonical representative of a tree's class under child swaps at every
/// node. Idempotent; two trees are in one class iff their canonical forms
/// are equal.
inline BracketTree canonical_commutative(const BracketTree& tree) {
  if (tree.is_leaf()) return tree;
  BracketTree l = canonical_commutative(tree.left());
  BracketTree r = canonical_commutative(tree.right());
  if (tree_less(r, l)) std::swap(l, r);
  return BracketTree::combine(l, r);
}

/// Equivalence classes of unlabeled full binary trees with r leaves modulo
/// commutativity, one canonical representative each (every leaf carries
/// index 0). Counts are the Wedderburn-Etherington numbers.
inline std::vector<BracketTree> enumerate_commutative_shapes(int r) {
  if (r < 1 || r > 10) {
    throw std::invalid_argument("shape enumeration supports 1 <= r <= 10");
  }
  // Build canonical forms bottom-up by leaf count: a canonical tree with n
  // leaves is combine(l, r) with l <= r and |l| + |r| = n.
  std::vector<std::vector<BracketTree>> by_count(r + 1);
  by_count[1].push_back(BracketTree::leaf(0));
  for (int n = 2; n <= r; ++n) {
    for (int k = 1; 2 * k <= n; ++k) {
      for (const auto& l : by_count[k]) {
        for (const auto& m : by_count[n - k]) {
          if (k == n - k && tree_less(m, l)) continue;
          by_count[n].push_back(BracketTree::combine(l, m));
        }
      }
    }
  }
  return by_count[r];
}

/// Parses "((1 2) 3)"; leaf labels are 1-based event indices, 'A' means
/// index 1. Whitespace between tokens is optional.
inline BracketTree parse_bracket_tree(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto fail = [&]() -> BracketTree {
    throw std::invalid_argument("malformed bracket tree: '" + std::string(text) + "'");
  };
  auto parse = [&](auto&& self) -> BracketTree {
    skip_ws();
    if (pos >= text.size()) return fail();
    if (text[pos] == '(') {
      ++pos;
      BracketTree l = self(self);
      BracketTree r = self(self);
      skip_ws();
      if (pos >= text.size() || text[pos] != ')') return fail();
      ++pos;
      return BracketTree::combine(l, r);
    }
    if (text[pos] == 'A' || text[pos] == 'a') {
      ++pos;
      return BracketTree::leaf(0);
    }
    if (text[pos] < '0' || text[pos] > '9') return fail();
    int value = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      value = value * 10 + (text[pos] - '0');
      ++pos;
    }
    if (value < 1) return fail();
    return BracketTree::leaf(value - 1);
  };
  BracketTree t = parse(parse);
  skip_ws();
  if (pos != text.size()) fail();
  return t;
}

}  // namespace bkr
