#include "fraglab/compositions.hpp"

#include <numeric>
#include <string>

#include "fraglab/errors.hpp"

namespace fraglab::stick {

namespace {
int checked_sum(const std::vector<int>& k) {
  if (k.empty()) throw DomainError("composition needs at least one part");
  long long s = 0;
  for (int v : k) {
    if (v < 0) throw DomainError("composition parts must be non-negative");
    s += v;
  }
  return static_cast<int>(s);
}

std::vector<int> first_parts(int N, int m) {
  if (N < 0 || m < 1) throw DomainError("compositions need N >= 0 and m >= 1");
  std::vector<int> k(static_cast<std::size_t>(m), 0);
  k[0] = N;
  return k;
}
}  // namespace

Composition::Composition(std::vector<int> k) : k_(std::move(k)), n_(checked_sum(k_)) {}

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 c = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    c = c * (n - k + j) / j;
    if (c > UINT64_MAX) throw CapacityError("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

std::uint64_t composition_count(int N, int m) {
  if (N < 0 || m < 1) throw DomainError("compositions need N >= 0 and m >= 1");
  return binomial_u64(static_cast<std::uint64_t>(N) + m - 1, static_cast<std::uint64_t>(m) - 1);
}

std::uint64_t composition_rank(const Composition& c) {
  // Compositions before c that agree on k_m..k_{i+1} but have smaller k_i
  // number C(R+i, i) - C(R-k_i+i, i), with R the mass left for k_1..k_i.
  std::uint64_t rank = 0;
  std::uint64_t R = static_cast<std::uint64_t>(c.N());
  for (int i = c.m() - 1; i >= 1; --i) {
    const auto ki = static_cast<std::uint64_t>(c[i]);
    const auto ii = static_cast<std::uint64_t>(i);
    rank += binomial_u64(R + ii, ii) - binomial_u64(R - ki + ii, ii);
    R -= ki;
  }
  return rank;
}

Composition unrank_composition(int N, int m, std::uint64_t rank) {
  if (rank >= composition_count(N, m)) throw DomainError("composition rank out of range");
  std::vector<int> k(static_cast<std::size_t>(m), 0);
  std::uint64_t R = static_cast<std::uint64_t>(N);
  for (int i = m - 1; i >= 1; --i) {
    const auto ii = static_cast<std::uint64_t>(i);
    // Number of completions with k_i = t is C(R - t + i - 1, i - 1).
    std::uint64_t t = 0;
    for (;;) {
      const std::uint64_t block = binomial_u64(R - t + ii - 1, ii - 1);
      if (rank < block) break;
      rank -= block;
      ++t;
    }
    k[static_cast<std::size_t>(i)] = static_cast<int>(t);
    R -= t;
  }
  k[0] = static_cast<int>(R);
  return Composition(std::move(k));
}

CompositionCursor::CompositionCursor(int N, int m) : c_(first_parts(N, m)) {}

CompositionCursor::CompositionCursor(int N, int m, std::uint64_t rank)
    : c_(unrank_composition(N, m, rank)) {}

void CompositionCursor::next() {
  if (done_) return;
  auto& k = c_.k_;
  const int m = static_cast<int>(k.size());
  int j = 0;
  while (j < m - 1 && k[static_cast<std::size_t>(j)] == 0) ++j;
  if (j >= m - 1) {
    done_ = true;
    return;
  }
  const int v = k[static_cast<std::size_t>(j)];
  k[static_cast<std::size_t>(j)] = 0;
  ++k[static_cast<std::size_t>(j) + 1];
  k[0] = v - 1;
}

std::vector<Composition> compositions(int N, int m) {
  std::vector<Composition> out;
  out.reserve(static_cast<std::size_t>(composition_count(N, m)));
  for (CompositionCursor cur(N, m); !cur.done(); cur.next()) out.push_back(cur.current());
  return out;
}

}  // namespace fraglab::stick
