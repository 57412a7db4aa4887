#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace mixint {

/// An exposure subset stored as a bitmask. Supports up to 128 exposures.
class Subset {
 public:
  static constexpr int kMaxExposures = 128;

  Subset() : w_{0, 0} {}

  static Subset single(int j) { return Subset().with(j); }

  static Subset from_indices(const std::vector<int>& idx) {
    Subset s;
    for (int j : idx) s = s.with(j);
    return s;
  }

  bool contains(int j) const { return (w_[j >> 6] >> (j & 63)) & 1u; }

  Subset with(int j) const {
    Subset s = *this;
    s.w_[j >> 6] |= std::uint64_t{1} << (j & 63);
    return s;
  }

  Subset without(int j) const {
    Subset s = *this;
    s.w_[j >> 6] &= ~(std::uint64_t{1} << (j & 63));
    return s;
  }

  bool empty() const { return w_[0] == 0 && w_[1] == 0; }

  int count() const {
    return __builtin_popcountll(w_[0]) + __builtin_popcountll(w_[1]);
  }

  /// True when *this is contained in `o` (equality counts).
  bool subset_of(const Subset& o) const {
    return (w_[0] & ~o.w_[0]) == 0 && (w_[1] & ~o.w_[1]) == 0;
  }

  bool proper_subset_of(const Subset& o) const {
    return subset_of(o) && !(*this == o);
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (int w = 0; w < 2; ++w) {
      std::uint64_t bits = w_[w];
      while (bits) {
        int b = __builtin_ctzll(bits);
        out.push_back(64 * w + b);
        bits &= bits - 1;
      }
    }
    return out;
  }

  bool operator==(const Subset&) const = default;

  /// Order by cardinality first, then lexicographically on the sorted
  /// index lists. This is the canonical block order used everywhere.
  static bool size_lex_less(const Subset& a, const Subset& b) {
    int ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    auto ia = a.indices(), ib = b.indices();
    return ia < ib;
  }

  struct Hash {
    std::size_t operator()(const Subset& s) const {
      std::uint64_t h = s.w_[0] * 0x9e3779b97f4a7c15ull;
      h ^= s.w_[1] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

 private:
  std::array<std::uint64_t, 2> w_;
};

/// All nonempty subsets of `a`, in size-lex order.
std::vector<Subset> nonempty_subsets(const Subset& a);

/// All proper subsets of `a` (empty set included, `a` itself excluded),
/// in size-lex order.
std::vector<Subset> proper_subsets(const Subset& a);

}  // namespace mixint
