#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dppmix {

/// Subset of a ground set {0, ..., n-1}, n <= 64, stored as a bitmask.
/// Bit i set <=> element i is in the subset; the mask read as an integer is
/// also the canonical subset index, so index <-> subset conversion is the
/// identity on bits.
class Subset {
 public:
  constexpr Subset() = default;

  static constexpr Subset from_bits(std::uint64_t bits) { return Subset(bits); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr std::uint64_t index() const { return bits_; }

  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  int cardinality() const { return std::popcount(bits_); }

  constexpr Subset with(int i) const { return Subset(bits_ | (std::uint64_t{1} << i)); }
  constexpr Subset without(int i) const { return Subset(bits_ & ~(std::uint64_t{1} << i)); }
  constexpr Subset flipped(int i) const { return Subset(bits_ ^ (std::uint64_t{1} << i)); }

  constexpr bool is_subset_of(Subset other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr Subset intersect(Subset other) const { return Subset(bits_ & other.bits_); }
  constexpr Subset unite(Subset other) const { return Subset(bits_ | other.bits_); }

  friend constexpr bool operator==(Subset a, Subset b) { return a.bits_ == b.bits_; }

  /// Elements in ascending order.
  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(cardinality()));
    for (std::uint64_t m = bits_; m != 0; m &= m - 1)
      out.push_back(std::countr_zero(m));
    return out;
  }

 private:
  explicit constexpr Subset(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

/// All-ones mask over n elements (handles n == 64 without shifting by 64).
constexpr std::uint64_t full_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

/// Ground set V = {0, ..., n-1} with optional display labels.
class GroundSet {
 public:
  explicit GroundSet(int n) : n_(n) { validate_size(); }

  GroundSet(int n, std::vector<std::string> labels) : n_(n), labels_(std::move(labels)) {
    validate_size();
    if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("GroundSet: label count must equal n");
  }

  int size() const { return n_; }
  std::uint64_t mask() const { return full_mask(n_); }
  Subset full() const { return Subset::from_bits(mask()); }

  bool has_labels() const { return !labels_.empty(); }

  std::string label(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("GroundSet::label: element out of range");
    return labels_.empty() ? std::to_string(i) : labels_[static_cast<std::size_t>(i)];
  }

 private:
  void validate_size() const {
    if (n_ < 1 || n_ > 64)
      throw std::invalid_argument("GroundSet: n must be in [1, 64]");
  }
  int n_ = 0;
  std::vector<std::string> labels_;
};

/// Checked index -> subset conversion (the bit pattern of `index`).
inline Subset subset_from_index(std::uint64_t index, int n) {
  if (index & ~full_mask(n))
    throw std::out_of_range("subset_from_index: index exceeds 2^n - 1");
  return Subset::from_bits(index);
}

/// Visits every subset of {0,...,n-1}; intended for exhaustive checks, n <= 25.
template <class Fn>
void for_each_subset(int n, Fn&& fn) {
  if (n > 25) throw std::invalid_argument("for_each_subset: n too large for enumeration");
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < end; ++x) fn(Subset::from_bits(x));
}

/// Visits every subset of {0,...,n-1} \ excluded.
template <class Fn>
void for_each_subset_excluding(int n, Subset excluded, Fn&& fn) {
  std::vector<int> free_pos;
  for (int i = 0; i < n; ++i)
    if (!excluded.contains(i)) free_pos.push_back(i);
  const int k = static_cast<int>(free_pos.size());
  if (k > 25) throw std::invalid_argument("for_each_subset_excluding: n too large for enumeration");
  const std::uint64_t end = std::uint64_t{1} << k;
  for (std::uint64_t m = 0; m < end; ++m) {
    std::uint64_t bits = 0;
    for (int b = 0; b < k; ++b)
      if ((m >> b) & 1u) bits |= std::uint64_t{1} << free_pos[static_cast<std::size_t>(b)];
    fn(Subset::from_bits(bits));
  }
}

}  // namespace dppmix
