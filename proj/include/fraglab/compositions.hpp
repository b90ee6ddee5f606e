#pragma once

#include <cstdint>
#include <vector>

namespace fraglab::stick {

/// Exponent vector (k_1..k_m) of non-negative integers summing to N.
class Composition {
 public:
  explicit Composition(std::vector<int> k);
  int N() const { return n_; }
  int m() const { return static_cast<int>(k_.size()); }
  int operator[](int i) const { return k_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& parts() const { return k_; }
  bool operator==(const Composition&) const = default;

 private:
  friend class CompositionCursor;
  std::vector<int> k_;
  int n_;
};

/// C(n, k) as an unsigned 64-bit integer; throws CapacityError on overflow.
std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k);

/// Number of compositions of N into m parts, C(N+m-1, m-1).
std::uint64_t composition_count(int N, int m);

/// Colexicographic rank, i.e. ordering by (k_m, ..., k_1) ascending.
std::uint64_t composition_rank(const Composition& c);
Composition unrank_composition(int N, int m, std::uint64_t rank);

/// Walks compositions in colex order starting from (N, 0, ..., 0).
///
/// Each step rewrites at most three entries, so the loop body dominates.
class CompositionCursor {
 public:
  CompositionCursor(int N, int m);
  /// Resumes at a given rank.
  CompositionCursor(int N, int m, std::uint64_t rank);
  const Composition& current() const { return c_; }
  bool done() const { return done_; }
  void next();

 private:
  Composition c_;
  bool done_ = false;
};

/// Materialised enumeration; small inputs only.
std::vector<Composition> compositions(int N, int m);

}  // namespace fraglab::stick
