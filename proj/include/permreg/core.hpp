#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace permreg {

// A bijection of {0..n-1} in one-line form: images()[i] is sigma(i).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int n);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }
  Permutation inverse() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> images_;
};

// Half-open [lo, hi).
struct Interval {
  int lo = 0;
  int hi = 0;

  int length() const { return hi - lo; }
  bool empty() const { return hi <= lo; }
  bool contains(int x) const { return lo <= x && x < hi; }
  bool operator==(const Interval&) const = default;
};

// Sorted, duplicate-free subset of {0..n-1}.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<int> members);
  static IndexSet of(Interval iv);

  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  const std::vector<int>& members() const { return members_; }
  bool contains(int x) const;

  bool operator==(const IndexSet&) const = default;

 private:
  std::vector<int> members_;
};

void check_interval(Interval iv, int n);
void check_index_set(const IndexSet& s, int n);

enum class GenKind { identity, reverse, interleave, random };

GenKind parse_gen_kind(std::string_view name);
std::string to_string(GenKind kind);

Permutation parse_permutation(std::string_view text);
// Space separated images, no trailing newline.
std::string format_permutation(const Permutation& sigma);

Permutation generate(GenKind kind, int n, std::uint64_t seed);

// Unbiased draw from [0, bound) using rejection on the raw 64-bit output.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// sigma restricted to the members of s, relabelled to a permutation of
// {0..|s|-1} that preserves relative order.
Permutation restrict_to(const Permutation& sigma, const IndexSet& s);

// Dense dominance counts N(x,y) = #{s < x : sigma(s) < y} plus the column
// prefix sums needed for O(1) pair counts over interval pairs.
class DominanceTable {
 public:
  static constexpr int default_cap = 1 << 14;

  explicit DominanceTable(const Permutation& sigma, int cap = default_cap);

  static std::size_t required_bytes(int n);

  int size() const { return n_; }
  std::uint32_t count(int x, int y) const { return counts_[idx(x, y)]; }
  // #{s in [x0,x1) : sigma(s) in [y0,y1)}
  std::int64_t rect(int x0, int x1, int y0, int y1) const;
  // p(S,T) for intervals: #{(s,t) in S x T : sigma(s) < t}
  std::int64_t pair_count(Interval s, Interval t) const;

 private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(y);
  }
  int n_ = 0;
  std::vector<std::uint32_t> counts_;
  // cum_[x][y] = sum_{t<y} N(x,t)
  std::vector<std::uint32_t> cum_;
};

DominanceTable build_dominance(const Permutation& sigma, int cap = DominanceTable::default_cap);

// n choose r as an exact integer; throws resource_error if it overflows.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

}  // namespace permreg
