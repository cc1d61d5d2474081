#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bkr/bracket_tree.hpp"
#include "bkr/space.hpp"

namespace bkr {

/// Enumerates the submasks of `mask` (including mask and 0) in decreasing
/// order, calling fn(sub) for each.
template <class Fn>
inline void for_each_submask(std::uint32_t mask, Fn&& fn) {
  std::uint32_t sub = mask;
  for (;;) {
    fn(sub);
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
}

// ---------------------------------------------------------------------------
// Maximal cylinders.
// ---------------------------------------------------------------------------

/// { w : every coordinate-i translate of w lies in A } -- the kernel step
/// for maximal cylinders: one coordinate freed at a time.
inline Event all_over_coordinate(const Event& a, int coord) {
  const SpaceShape& shape = a.shape();
  if (coord < 0 || coord >= shape.dimension()) {
    throw std::invalid_argument("coordinate index out of range");
  }
  const std::uint64_t t = shape.stride(coord);
  const std::uint32_t s = shape.size(coord);
  const std::uint64_t block = t * s;
  const std::uint64_t n = shape.num_points();
  Event out(shape);
  for (std::uint64_t base = 0; base < n; base += block) {
    for (std::uint64_t lo = 0; lo < t; ++lo) {
      bool all = true;
      for (std::uint32_t v = 0; v < s && all; ++v) {
        all = a.test(base + v * t + lo);
      }
      if (all) {
        for (std::uint32_t v = 0; v < s; ++v) out.set(base + v * t + lo);
      }
    }
  }
  return out;
}

/// [A]_K, the largest cylinder contained in A that is free outside K.
/// Folds all_over_coordinate over every free coordinate (ascending; the
/// result is fold-order independent).
inline Event cylinder_closure(const Event& a, CoordSet coords) {
  Event out = a;
  for (int i = 0; i < a.shape().dimension(); ++i) {
    if (!coords.contains(i)) out = all_over_coordinate(out, i);
  }
  return out;
}

/// [A]_K straight from the definition: enumerate every thin cylinder
/// Cyl(K, w) and keep those contained in A. Reference oracle; used by the
/// naive operators and never by the fast path.
inline Event cylinder_closure_definition(const Event& a, CoordSet coords) {
  const SpaceShape& shape = a.shape();
  const int d = shape.dimension();
  std::vector<int> fixed, free_coords;
  for (int i = 0; i < d; ++i) {
    (coords.contains(i) ? fixed : free_coords).push_back(i);
  }
  Event out(shape);
  std::vector<std::uint32_t> fixed_digits(fixed.size(), 0);
  for (;;) {  // odometer over the fixed coordinates: one thin cylinder each
    std::uint64_t anchor = 0;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      anchor += static_cast<std::uint64_t>(fixed_digits[i]) * shape.stride(fixed[i]);
    }
    bool contained = true;
    std::vector<std::uint32_t> free_digits(free_coords.size(), 0);
    std::uint64_t index = anchor;
    for (;;) {  // walk the cylinder
      if (!a.test(index)) {
        contained = false;
        break;
      }
      std::size_t i = 0;
      for (; i < free_coords.size(); ++i) {
        const int c = free_coords[i];
        if (++free_digits[i] < shape.size(c)) {
          index += shape.stride(c);
          break;
        }
        index -= static_cast<std::uint64_t>(free_digits[i] - 1) * shape.stride(c);
        free_digits[i] = 0;
      }
      if (i == free_coords.size()) break;
    }
    if (contained) {
      std::fill(free_digits.begin(), free_digits.end(), 0);
      index = anchor;
      for (;;) {
        out.set(index);
        std::size_t i = 0;
        for (; i < free_coords.size(); ++i) {
          const int c = free_coords[i];
          if (++free_digits[i] < shape.size(c)) {
            index += shape.stride(c);
            break;
          }
          index -= static_cast<std::uint64_t>(free_digits[i] - 1) * shape.stride(c);
          free_digits[i] = 0;
        }
        if (i == free_coords.size()) break;
      }
    }
    std::size_t i = 0;
    for (; i < fixed.size(); ++i) {
      if (++fixed_digits[i] < shape.size(fixed[i])) break;
      fixed_digits[i] = 0;
    }
    if (i == fixed.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// CylinderTable: [A]_K for every K, via the subset-lattice walk
// entries[K] = all_over_coordinate(entries[K + {j}], j), j smallest missing.
// ---------------------------------------------------------------------------
class CylinderTable {
 public:
  explicit CylinderTable(const Event& source,
                         std::uint64_t budget_bytes = kDefaultMemoryBudget) {
    const SpaceShape& shape = source.shape();
    dimension_ = shape.dimension();
    const std::uint64_t entry_bytes = ((shape.num_points() + 63) / 64) * 8;
    const std::uint64_t table_entries = std::uint64_t{1} << dimension_;
    if (entry_bytes != 0 && table_entries > budget_bytes / entry_bytes) {
      throw ResourceError("cylinder table of " + std::to_string(table_entries) +
                          " events exceeds the memory budget");
    }
    entries_.reserve(table_entries);
    for (std::uint64_t i = 0; i < table_entries; ++i) entries_.emplace_back(shape);
    entries_.back() = source;  // K = [d]
    for (std::uint32_t mask = static_cast<std::uint32_t>(table_entries) - 1;
         mask-- > 0;) {
      const int j = CoordSet(mask).smallest_missing();
      entries_[mask] = all_over_coordinate(entries_[mask | (1u << j)], j);
    }
  }

  int dimension() const { return dimension_; }
  const Event& operator[](CoordSet coords) const { return entries_[coords.bits()]; }

 private:
  int dimension_;
  std::vector<Event> entries_;
};

// ---------------------------------------------------------------------------
// The binary BKR product.
// ---------------------------------------------------------------------------

/// A bkr B = union over K of [A]_K intersect [B]_{K^c}; closures recomputed
/// from the definition each time. Reference oracle.
inline Event bkr2_naive(const Event& a, const Event& b) {
  a.check_same_shape(b);
  const int d = a.shape().dimension();
  Event out(a.shape());
  const std::uint64_t masks = std::uint64_t{1} << d;
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    const CoordSet k(static_cast<std::uint32_t>(mask));
    out |= cylinder_closure_definition(a, k) &
           cylinder_closure_definition(b, k.complement_in(d));
  }
  return out;
}

/// Same output as bkr2_naive, from two cylinder tables in O(2^d) bit-array
/// intersections.
inline Event bkr2(const Event& a, const Event& b,
                  std::uint64_t budget_bytes = kDefaultMemoryBudget) {
  a.check_same_shape(b);
  const int d = a.shape().dimension();
  const CylinderTable ta(a, budget_bytes);
  const CylinderTable tb(b, budget_bytes);
  Event out(a.shape());
  const std::uint64_t masks = std::uint64_t{1} << d;
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    const CoordSet k(static_cast<std::uint32_t>(mask));
    out |= ta[k] & tb[k.complement_in(d)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// The simultaneous r-fold product.
// ---------------------------------------------------------------------------

/// Union over all (r+1)^d coordinate assignments (0 = unassigned) of the
/// intersection of definitional closures. Reference oracle. r = 1 yields
/// the event itself.
inline Event bkr_r_naive(std::span<const Event> events) {
  if (events.empty()) throw std::invalid_argument("need at least one event");
  const SpaceShape& shape = events.front().shape();
  for (const Event& e : events) events.front().check_same_shape(e);
  const int d = shape.dimension();
  const std::size_t r = events.size();
  Event out(shape);
  std::vector<std::uint32_t> owner(d, 0);  // 0 = unassigned, else event index + 1
  for (;;) {
    std::vector<std::uint32_t> masks(r, 0);
    for (int i = 0; i < d; ++i) {
      if (owner[i] > 0) masks[owner[i] - 1] |= 1u << i;
    }
    Event term = cylinder_closure_definition(events[0], CoordSet(masks[0]));
    for (std::size_t k = 1; k < r && !term.is_empty(); ++k) {
      term &= cylinder_closure_definition(events[k], CoordSet(masks[k]));
    }
    out |= term;
    int i = 0;
    for (; i < d; ++i) {
      if (++owner[i] <= r) break;
      owner[i] = 0;
    }
    if (i == d) break;
  }
  return out;
}

/// Same output as bkr_r_naive via the sum-over-submasks dynamic program
/// h_1[M] = T_1[M]; h_k[M] = union over J <= M of h_{k-1}[M\J] & T_k[J].
/// O(r 3^d) bit-array operations, two h-layers live at a time.
inline Event bkr_r(std::span<const Event> events,
                   std::uint64_t budget_bytes = kDefaultMemoryBudget) {
  if (events.empty()) throw std::invalid_argument("need at least one event");
  const SpaceShape& shape = events.front().shape();
  for (const Event& e : events) events.front().check_same_shape(e);
  const int d = shape.dimension();
  const std::size_t r = events.size();
  const std::uint64_t entry_bytes = ((shape.num_points() + 63) / 64) * 8;
  const std::uint64_t live_events = (std::uint64_t{1} << d) * (r + 2);
  if (entry_bytes != 0 && live_events > budget_bytes / entry_bytes) {
    throw ResourceError("r-fold product needs " + std::to_string(live_events) +
                        " table entries, over the memory budget");
  }
  std::vector<CylinderTable> tables;
  tables.reserve(r);
  for (const Event& e : events) tables.emplace_back(e, budget_bytes);

  const std::uint64_t masks = std::uint64_t{1} << d;
  std::vector<Event> prev, cur;
  prev.reserve(masks);
  for (std::uint64_t m = 0; m < masks; ++m) {
    prev.push_back(tables[0][CoordSet(static_cast<std::uint32_t>(m))]);
  }
  for (std::size_t k = 1; k < r; ++k) {
    cur.clear();
    cur.reserve(masks);
    for (std::uint64_t m = 0; m < masks; ++m) {
      Event acc(shape);
      for_each_submask(static_cast<std::uint32_t>(m), [&](std::uint32_t j) {
        acc |= prev[m ^ j] & tables[k][CoordSet(j)];
      });
      cur.push_back(std::move(acc));
    }
    std::swap(prev, cur);
  }
  return prev[masks - 1];
}

// ---------------------------------------------------------------------------
// Chained binary products along a bracket tree.
// ---------------------------------------------------------------------------

inline Event chained_product(const BracketTree& tree, std::span<const Event> events,
                             std::uint64_t budget_bytes = kDefaultMemoryBudget) {
  if (tree.is_leaf()) {
    const int i = tree.leaf_index();
    if (i < 0 || static_cast<std::size_t>(i) >= events.size()) {
      throw std::invalid_argument("bracket tree references event " +
                                  std::to_string(i + 1) + " but only " +
                                  std::to_string(events.size()) + " were given");
    }
    return events[i];
  }
  return bkr2(chained_product(tree.left(), events, budget_bytes),
              chained_product(tree.right(), events, budget_bytes), budget_bytes);
}

/// Chained product evaluated entirely through the naive oracle.
inline Event chained_product_naive(const BracketTree& tree,
                                   std::span<const Event> events) {
  if (tree.is_leaf()) {
    const int i = tree.leaf_index();
    if (i < 0 || static_cast<std::size_t>(i) >= events.size()) {
      throw std::invalid_argument("bracket tree references a missing event");
    }
    return events[i];
  }
  return bkr2_naive(chained_product_naive(tree.left(), events),
                    chained_product_naive(tree.right(), events));
}

}  // namespace bkr
