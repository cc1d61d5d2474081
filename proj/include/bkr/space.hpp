#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bkr {

/// Raised when an operation would exceed a configured memory budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hard caps for space construction. Operations refuse larger inputs
/// rather than degrade; override per call site when you know better.
struct Limits {
  int max_coords = 24;
  std::uint64_t max_points = std::uint64_t{1} << 26;
};

inline constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{1} << 30;

// ---------------------------------------------------------------------------
// CoordSet: a subset of the coordinate indices {0,...,d-1} as a bit mask.
// ---------------------------------------------------------------------------
class CoordSet {
 public:
  constexpr CoordSet() = default;
  constexpr explicit CoordSet(std::uint32_t mask) : mask_(mask) {}

  static constexpr CoordSet all(int dimension) {
    return CoordSet(dimension >= 32 ? ~std::uint32_t{0}
                                    : (std::uint32_t{1} << dimension) - 1);
  }
  static constexpr CoordSet single(int coord) {
    return CoordSet(std::uint32_t{1} << coord);
  }
  static CoordSet of(std::initializer_list<int> coords) {
    std::uint32_t mask = 0;
    for (int c : coords) mask |= std::uint32_t{1} << c;
    return CoordSet(mask);
  }

  constexpr std::uint32_t bits() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int count() const { return std::popcount(mask_); }
  constexpr bool contains(int coord) const { return mask_ >> coord & 1u; }
  constexpr bool is_subset_of(CoordSet other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr CoordSet complement_in(int dimension) const {
    return CoordSet(all(dimension).mask_ & ~mask_);
  }
  constexpr CoordSet operator&(CoordSet o) const { return CoordSet(mask_ & o.mask_); }
  constexpr CoordSet operator|(CoordSet o) const { return CoordSet(mask_ | o.mask_); }
  constexpr CoordSet with(int coord) const {
    return CoordSet(mask_ | std::uint32_t{1} << coord);
  }
  /// Smallest coordinate index not in the set (the lattice-walk pivot).
  constexpr int smallest_missing() const { return std::countr_one(mask_); }

  friend constexpr bool operator==(CoordSet, CoordSet) = default;

 private:
  std::uint32_t mask_ = 0;
};

// ---------------------------------------------------------------------------
// SpaceShape: the product space S_1 x ... x S_d as per-coordinate alphabet
// sizes, with mixed-radix point indexing. Coordinate 0 is the least
// significant digit, which pins the file format bit-exactly.
// ---------------------------------------------------------------------------
class SpaceShape {
 public:
  /// The empty product: zero coordinates, exactly one point.
  SpaceShape() : num_points_(1) {}

  explicit SpaceShape(std::vector<std::uint32_t> sizes, const Limits& limits = {})
      : sizes_(std::move(sizes)) {
    if (static_cast<int>(sizes_.size()) > limits.max_coords) {
      throw ResourceError("shape exceeds coordinate cap of " +
                          std::to_string(limits.max_coords));
    }
    strides_.reserve(sizes_.size());
    std::uint64_t n = 1;
    for (std::uint32_t s : sizes_) {
      if (s < 1) throw std::invalid_argument("coordinate alphabet must be nonempty");
      strides_.push_back(n);
      if (s > limits.max_points / n) {
        throw ResourceError("shape exceeds point cap of " +
                            std::to_string(limits.max_points));
      }
      n *= s;
    }
    num_points_ = n;
  }

  static SpaceShape uniform(int dimension, std::uint32_t alphabet,
                            const Limits& limits = {}) {
    return SpaceShape(std::vector<std::uint32_t>(dimension, alphabet), limits);
  }

  int dimension() const { return static_cast<int>(sizes_.size()); }
  std::uint32_t size(int coord) const { return sizes_[coord]; }
  const std::vector<std::uint32_t>& sizes() const { return sizes_; }
  std::uint64_t stride(int coord) const { return strides_[coord]; }
  std::uint64_t num_points() const { return num_points_; }

  std::uint64_t rank(std::span<const std::uint32_t> point) const {
    if (point.size() != sizes_.size()) {
      throw std::invalid_argument("point has wrong number of coordinates");
    }
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      if (point[i] >= sizes_[i]) {
        throw std::invalid_argument("coordinate value out of range");
      }
      index += point[i] * strides_[i];
    }
    return index;
  }

  void unrank(std::uint64_t index, std::span<std::uint32_t> point) const {
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      point[i] = static_cast<std::uint32_t>(index % sizes_[i]);
      index /= sizes_[i];
    }
  }

  std::vector<std::uint32_t> point_at(std::uint64_t index) const {
    std::vector<std::uint32_t> point(sizes_.size());
    unrank(index, point);
    return point;
  }

  /// Shape (s_i)_{i in K}, coordinate order preserved.
  SpaceShape sub_shape(CoordSet coords) const {
    std::vector<std::uint32_t> sub;
    for (int i = 0; i < dimension(); ++i) {
      if (coords.contains(i)) sub.push_back(sizes_[i]);
    }
    return SpaceShape(std::move(sub));
  }

  friend bool operator==(const SpaceShape& a, const SpaceShape& b) {
    return a.sizes_ == b.sizes_;
  }

 private:
  std::vector<std::uint32_t> sizes_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t num_points_;
};

// ---------------------------------------------------------------------------
// Event: a subset of the indexed point set as a dense bit array.
// Immutable by convention after construction; all algebra returns new values.
// ---------------------------------------------------------------------------
class Event {
 public:
  explicit Event(SpaceShape shape)
      : shape_(std::move(shape)),
        words_((shape_.num_points() + 63) / 64, 0) {}

  static Event empty_set(const SpaceShape& shape) { return Event(shape); }

  static Event full(const SpaceShape& shape) {
    Event e(shape);
    std::fill(e.words_.begin(), e.words_.end(), ~std::uint64_t{0});
    e.clear_padding();
    return e;
  }

  const SpaceShape& shape() const { return shape_; }
  std::uint64_t num_points() const { return shape_.num_points(); }
  std::span<const std::uint64_t> words() const { return words_; }

  bool test(std::uint64_t index) const {
    return words_[index >> 6] >> (index & 63) & 1u;
  }
  void set(std::uint64_t index) { words_[index >> 6] |= std::uint64_t{1} << (index & 63); }
  void reset(std::uint64_t index) { words_[index >> 6] &= ~(std::uint64_t{1} << (index & 63)); }

  bool contains_point(std::span<const std::uint32_t> point) const {
    return test(shape_.rank(point));
  }

  std::uint64_t cardinality() const {
    std::uint64_t count = 0;
    for (std::uint64_t w : words_) count += std::popcount(w);
    return count;
  }

  bool is_empty() const {
    return std::all_of(words_.begin(), words_.end(),
                       [](std::uint64_t w) { return w == 0; });
  }
  bool is_full() const { return cardinality() == num_points(); }

  Event& operator|=(const Event& other) {
    check_same_shape(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  Event& operator&=(const Event& other) {
    check_same_shape(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }
  Event& operator^=(const Event& other) {
    check_same_shape(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
  }

  friend Event operator|(Event a, const Event& b) { return a |= b; }
  friend Event operator&(Event a, const Event& b) { return a &= b; }
  friend Event operator^(Event a, const Event& b) { return a ^= b; }

  Event complement() const {
    Event out(shape_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    out.clear_padding();
    return out;
  }
  friend Event operator~(const Event& a) { return a.complement(); }

  /// A \ B.
  friend Event set_difference(Event a, const Event& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] &= ~b.words_[i];
    return a;
  }

  bool is_subset_of(const Event& other) const {
    check_same_shape(other);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  friend bool operator==(const Event& a, const Event& b) {
    return a.shape_ == b.shape_ && a.words_ == b.words_;
  }

  /// Calls fn(index) for every member point, in increasing rank order.
  template <class Fn>
  void for_each_member(Fn&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        const int bit = std::countr_zero(w);
        fn(static_cast<std::uint64_t>(wi) * 64 + bit);
        w &= w - 1;
      }
    }
  }

  /// FNV-1a over the shape and payload bytes; stable across platforms.
  std::uint64_t content_hash() const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto mix = [&h](std::uint64_t byte) {
      h ^= byte & 0xFF;
      h *= 0x100000001B3ull;
    };
    for (std::uint32_t s : shape_.sizes()) {
      for (int k = 0; k < 4; ++k) mix(s >> (8 * k));
    }
    const std::uint64_t payload_bytes = (num_points() + 7) / 8;
    for (std::uint64_t b = 0; b < payload_bytes; ++b) {
      mix(words_[b >> 3] >> ((b & 7) * 8));
    }
    return h;
  }

  void check_same_shape(const Event& other) const {
    if (!(shape_ == other.shape_)) {
      throw std::invalid_argument("events have mismatched shapes");
    }
  }

 private:
  void clear_padding() {
    const std::uint64_t n = num_points();
    if (n & 63) words_.back() &= (std::uint64_t{1} << (n & 63)) - 1;
  }

  SpaceShape shape_;
  std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Pattern strings: character i is a digit < s_i or '*'. Digits require
// s_i <= 10; larger alphabets must use explicit point lists.
// ---------------------------------------------------------------------------
inline Event event_from_pattern(const SpaceShape& shape, std::string_view pattern) {
  const int d = shape.dimension();
  if (static_cast<int>(pattern.size()) != d) {
    throw std::invalid_argument("pattern length " + std::to_string(pattern.size()) +
                                " does not match dimension " + std::to_string(d));
  }
  std::uint64_t base = 0;
  std::vector<int> free_coords;
  for (int i = 0; i < d; ++i) {
    const char c = pattern[i];
    if (c == '*') {
      free_coords.push_back(i);
    } else if (c >= '0' && c <= '9') {
      const std::uint32_t v = static_cast<std::uint32_t>(c - '0');
      if (v >= shape.size(i)) {
        throw std::invalid_argument("pattern digit out of range at coordinate " +
                                    std::to_string(i + 1));
      }
      base += v * shape.stride(i);
    } else {
      throw std::invalid_argument("pattern character must be a digit or '*'");
    }
  }
  Event out(shape);
  // odometer over the free coordinates
  std::vector<std::uint32_t> digits(free_coords.size(), 0);
  std::uint64_t index = base;
  for (;;) {
    out.set(index);
    std::size_t i = 0;
    for (; i < free_coords.size(); ++i) {
      const int coord = free_coords[i];
      if (++digits[i] < shape.size(coord)) {
        index += shape.stride(coord);
        break;
      }
      index -= static_cast<std::uint64_t>(digits[i] - 1) * shape.stride(coord);
      digits[i] = 0;
    }
    if (i == free_coords.size()) break;
  }
  return out;
}

inline Event event_from_patterns(const SpaceShape& shape,
                                 std::span<const std::string> patterns) {
  Event out(shape);
  for (const auto& p : patterns) out |= event_from_pattern(shape, p);
  return out;
}

inline Event event_from_points(
    const SpaceShape& shape,
    std::initializer_list<std::initializer_list<std::uint32_t>> points) {
  Event out(shape);
  for (const auto& p : points) {
    out.set(shape.rank(std::vector<std::uint32_t>(p)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Projection and extension between the full space and sub-spaces indexed by
// a coordinate set, order preserved.
// ---------------------------------------------------------------------------

/// { f restricted to K : f in A }, over the shape (s_i)_{i in K}.
inline Event project_base(const Event& a, CoordSet coords) {
  const SpaceShape& shape = a.shape();
  const int d = shape.dimension();
  if (!coords.is_subset_of(CoordSet::all(d))) {
    throw std::invalid_argument("coordinate set outside the shape's dimension");
  }
  SpaceShape sub = shape.sub_shape(coords);
  Event out(sub);
  std::vector<std::uint64_t> sub_stride_by_coord(d, 0);
  {
    std::uint64_t s = 1;
    for (int i = 0; i < d; ++i) {
      if (coords.contains(i)) {
        sub_stride_by_coord[i] = s;
        s *= shape.size(i);
      }
    }
  }
  std::vector<std::uint32_t> point(d);
  a.for_each_member([&](std::uint64_t index) {
    shape.unrank(index, point);
    std::uint64_t sub_index = 0;
    for (int i = 0; i < d; ++i) {
      if (coords.contains(i)) sub_index += point[i] * sub_stride_by_coord[i];
    }
    out.set(sub_index);
  });
  return out;
}

/// { f : f restricted to K lies in base }; the full-space cylinder over base.
inline Event extend_base(const Event& base, CoordSet coords,
                         const SpaceShape& full_shape) {
  const int d = full_shape.dimension();
  if (!(base.shape() == full_shape.sub_shape(coords))) {
    throw std::invalid_argument("base shape does not match the selected coordinates");
  }
  std::vector<int> kept, free_coords;
  for (int i = 0; i < d; ++i) {
    (coords.contains(i) ? kept : free_coords).push_back(i);
  }
  Event out(full_shape);
  std::vector<std::uint32_t> sub_point(kept.size());
  base.for_each_member([&](std::uint64_t sub_index) {
    base.shape().unrank(sub_index, sub_point);
    std::uint64_t anchor = 0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      anchor += static_cast<std::uint64_t>(sub_point[i]) * full_shape.stride(kept[i]);
    }
    // odometer over the free coordinates
    std::vector<std::uint32_t> digits(free_coords.size(), 0);
    std::uint64_t index = anchor;
    for (;;) {
      out.set(index);
      std::size_t i = 0;
      for (; i < free_coords.size(); ++i) {
        const int coord = free_coords[i];
        if (++digits[i] < full_shape.size(coord)) {
          index += full_shape.stride(coord);
          break;
        }
        index -= static_cast<std::uint64_t>(digits[i] - 1) * full_shape.stride(coord);
        digits[i] = 0;
      }
      if (i == free_coords.size()) break;
    }
  });
  return out;
}

}  // namespace bkr
