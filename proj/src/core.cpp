#include "permreg/core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>

#include "permreg/error.hpp"

namespace permreg {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = size();
  if (n < 1) throw parameter_error("permutation must have n >= 1");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : images_) {
    if (v < 0 || v >= n)
      throw parameter_error("image " + std::to_string(v) + " out of range [0," + std::to_string(n) + ")");
    if (seen[static_cast<std::size_t>(v)])
      throw parameter_error("duplicate image " + std::to_string(v));
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(images_[static_cast<std::size_t>(i)])] = i;
  return Permutation(std::move(inv));
}

IndexSet::IndexSet(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw parameter_error("index set has repeated members");
}

IndexSet IndexSet::of(Interval iv) {
  std::vector<int> m;
  for (int x = iv.lo; x < iv.hi; ++x) m.push_back(x);
  IndexSet s;
  s.members_ = std::move(m);
  return s;
}

bool IndexSet::contains(int x) const { return std::binary_search(members_.begin(), members_.end(), x); }

void check_interval(Interval iv, int n) {
  if (iv.lo < 0 || iv.lo > iv.hi || iv.hi > n)
    throw parameter_error("interval [" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) +
                          ") not within [0," + std::to_string(n) + "]");
}

void check_index_set(const IndexSet& s, int n) {
  if (!s.empty() && (s.members().front() < 0 || s.members().back() >= n))
    throw parameter_error("index set member out of range");
}

GenKind parse_gen_kind(std::string_view name) {
  if (name == "identity") return GenKind::identity;
  if (name == "reverse") return GenKind::reverse;
  if (name == "interleave") return GenKind::interleave;
  if (name == "random") return GenKind::random;
  throw parameter_error("unknown generator '" + std::string(name) + "'");
}

std::string to_string(GenKind kind) {
  switch (kind) {
    case GenKind::identity: return "identity";
    case GenKind::reverse: return "reverse";
    case GenKind::interleave: return "interleave";
    case GenKind::random: return "random";
  }
  return "?";
}

Permutation parse_permutation(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) tokens.push_back(text.substr(i, j - i));
    i = j;
  }
  if (tokens.empty()) throw parse_error("empty permutation");
  const long long n = static_cast<long long>(tokens.size());
  std::vector<int> images;
  images.reserve(tokens.size());
  std::vector<char> seen(tokens.size(), 0);
  for (auto tok : tokens) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw parse_error("token '" + std::string(tok) + "' is not an integer");
    if (v < 0 || v >= n)
      throw parse_error("value " + std::string(tok) + " out of range [0," + std::to_string(n) + ")");
    if (seen[static_cast<std::size_t>(v)]) throw parse_error("duplicate value " + std::string(tok));
    seen[static_cast<std::size_t>(v)] = 1;
    images.push_back(static_cast<int>(v));
  }
  return Permutation(std::move(images));
}

std::string format_permutation(const Permutation& sigma) {
  std::string out;
  for (int i = 0; i < sigma.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(sigma(i));
  }
  return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw parameter_error("uniform_below: empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

Permutation generate(GenKind kind, int n, std::uint64_t seed) {
  if (n < 1) throw parameter_error("generate: n must be >= 1");
  std::vector<int> v(static_cast<std::size_t>(n));
  switch (kind) {
    case GenKind::identity:
      std::iota(v.begin(), v.end(), 0);
      break;
    case GenKind::reverse:
      for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n - 1 - i;
      break;
    case GenKind::interleave:
      if (n % 2 != 0) throw parameter_error("interleave requires even n, got " + std::to_string(n));
      for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i ^ 1;
      break;
    case GenKind::random: {
      std::iota(v.begin(), v.end(), 0);
      std::mt19937_64 rng(seed);
      for (int i = n - 1; i > 0; --i) {
        auto j = static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
        std::swap(v[static_cast<std::size_t>(i)], v[j]);
      }
      break;
    }
  }
  return Permutation(std::move(v));
}

Permutation restrict_to(const Permutation& sigma, const IndexSet& s) {
  check_index_set(s, sigma.size());
  if (s.empty()) throw parameter_error("restriction to an empty set");
  std::vector<int> vals;
  vals.reserve(static_cast<std::size_t>(s.size()));
  for (int x : s.members()) vals.push_back(sigma(x));
  std::vector<int> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)]; });
  std::vector<int> ranked(vals.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranked[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
  return Permutation(std::move(ranked));
}

std::size_t DominanceTable::required_bytes(int n) {
  const auto side = static_cast<std::size_t>(n) + 1;
  return 2 * sizeof(std::uint32_t) * side * side;
}

DominanceTable::DominanceTable(const Permutation& sigma, int cap) : n_(sigma.size()) {
  // cum_ entries reach n^2, which must fit in 32 bits
  constexpr int hard_cap = 65535;
  if (n_ > cap || n_ > hard_cap) {
    throw resource_error("dominance table for n=" + std::to_string(n_) + " exceeds cap " +
                             std::to_string(std::min(cap, hard_cap)) + " (needs " +
                             std::to_string(required_bytes(n_)) + " bytes)",
                         required_bytes(n_));
  }
  const auto side = static_cast<std::size_t>(n_) + 1;
  counts_.assign(side * side, 0);
  cum_.assign(side * side, 0);
  for (int x = 0; x < n_; ++x) {
    const int v = sigma(x);
    const std::uint32_t* prev = &counts_[idx(x, 0)];
    std::uint32_t* row = &counts_[idx(x + 1, 0)];
    for (int y = 0; y <= n_; ++y) row[y] = prev[y] + (v < y ? 1u : 0u);
  }
  for (int x = 0; x <= n_; ++x) {
    const std::uint32_t* row = &counts_[idx(x, 0)];
    std::uint32_t* c = &cum_[idx(x, 0)];
    c[0] = 0;
    for (int y = 0; y < n_; ++y) c[y + 1] = c[y] + row[y];
  }
}

std::int64_t DominanceTable::rect(int x0, int x1, int y0, int y1) const {
  return static_cast<std::int64_t>(count(x1, y1)) - count(x0, y1) - count(x1, y0) + count(x0, y0);
}

std::int64_t DominanceTable::pair_count(Interval s, Interval t) const {
  auto c = [&](int x, int y) { return static_cast<std::int64_t>(cum_[idx(x, y)]); };
  return c(s.hi, t.hi) - c(s.lo, t.hi) - c(s.hi, t.lo) + c(s.lo, t.lo);
}

DominanceTable build_dominance(const Permutation& sigma, int cap) { return DominanceTable(sigma, cap); }

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max())
      throw resource_error("binomial coefficient overflows 64 bits", 0);
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace permreg
