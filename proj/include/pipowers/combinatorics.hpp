#pragma once

// Faa di Bruno multi-indices: tuples (m_1..m_k) with sum_j j*m_j = k, and
// their exact coefficients k! / prod_j (m_j! (j!)^m_j).

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "pipowers/bigreal.hpp"
#include "pipowers/errors.hpp"

namespace pipowers {

inline constexpr unsigned default_k_max = 64;

/// Multiplicities (m_1, ..., m_k) of the parts 1..k of an integer partition of k.
/// The empty index is the unique multi-index of order 0.
class MultiIndex {
 public:
  MultiIndex() = default;

  /// Throws ParameterError unless sum_j j*m_j equals the tuple length.
  explicit MultiIndex(std::vector<unsigned> multiplicities) : m_(std::move(multiplicities)) {
    std::uint64_t weighted = 0;
    for (std::size_t j = 0; j < m_.size(); ++j) weighted += (j + 1) * std::uint64_t{m_[j]};
    if (weighted != m_.size())
      throw ParameterError("multi-index weighted sum " + std::to_string(weighted) +
                           " differs from its order " + std::to_string(m_.size()));
  }

  unsigned order() const { return static_cast<unsigned>(m_.size()); }
  /// m_j for 1 <= j <= order().
  unsigned multiplicity(unsigned j) const { return m_.at(j - 1); }
  std::span<const unsigned> multiplicities() const { return m_; }

  std::string to_string() const {
    std::string s;
    for (std::size_t j = 0; j < m_.size(); ++j) {
      if (j) s += ',';
      s += std::to_string(m_[j]);
    }
    return s;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  friend class MultiIndexGenerator;
  struct Unchecked {};
  MultiIndex(std::vector<unsigned> m, Unchecked) : m_(std::move(m)) {}

  std::vector<unsigned> m_;
};

/// S = sum_j m_j, the number of inner-derivative factors in a term.
inline unsigned weight_sum(const MultiIndex& mi) {
  auto m = mi.multiplicities();
  return std::accumulate(m.begin(), m.end(), 0u);
}

/// Streams the multi-indices of order k in lexicographically descending order
/// of (m_1, ..., m_k), holding only the current index.
class MultiIndexGenerator {
 public:
  explicit MultiIndexGenerator(unsigned k, unsigned k_max = default_k_max) : k_(k), m_(k, 0) {
    if (k > k_max)
      throw BoundsError("order " + std::to_string(k) + " exceeds K_max = " + std::to_string(k_max));
    fill_from(1, k);
  }

  bool done() const { return done_; }
  MultiIndex current() const { return MultiIndex(m_, MultiIndex::Unchecked{}); }
  std::span<const unsigned> multiplicities() const { return m_; }

  /// Advances to the next index; sets done() after the last one.
  void advance() {
    if (done_) return;
    // Rightmost position j (< k) whose multiplicity can drop by the smallest
    // amount d such that parts > j absorb the freed weight tail + d*j, which
    // requires tail + d*j >= j + 1.
    unsigned tail = 0;  // sum_{i>j} i*m_i
    for (unsigned j = k_ > 0 ? k_ - 1 : 0; j >= 1; --j) {
      tail += (j + 1) * m_[j];
      unsigned drop = tail >= 1 ? 1 : 2;
      if (m_[j - 1] >= drop) {
        m_[j - 1] -= drop;
        for (unsigned i = j; i < k_; ++i) m_[i] = 0;
        fill_from(j + 1, tail + drop * j);
        return;
      }
    }
    done_ = true;
  }

 private:
  // Lexicographically largest assignment of parts >= start summing to rest.
  // Invariant on entry to each step: rest == 0 or rest >= i.
  void fill_from(unsigned start, unsigned rest) {
    for (unsigned i = start; i <= k_ && rest > 0; ++i) {
      unsigned mult = rest / i;
      unsigned left = rest - mult * i;
      if (left != 0) {  // 1 <= left < i cannot be covered by parts > i
        --mult;
        left += i;
      }
      m_[i - 1] = mult;
      rest = left;
    }
    PIPOWERS_INVARIANT(rest == 0, "partition fill left a remainder");
  }

  unsigned k_;
  std::vector<unsigned> m_;
  bool done_ = false;
};

/// Calls f(const MultiIndex&) for every index of order k, in generator order.
template <class F>
void for_each_multi_index(unsigned k, F&& f, unsigned k_max = default_k_max) {
  for (MultiIndexGenerator gen(k, k_max); !gen.done(); gen.advance()) f(gen.current());
}

/// All multi-indices of order k; the list length is the partition number p(k).
inline std::vector<MultiIndex> enumerate_multi_indices(unsigned k, unsigned k_max = default_k_max) {
  std::vector<MultiIndex> out;
  for_each_multi_index(k, [&](const MultiIndex& mi) { out.push_back(mi); }, k_max);
  return out;
}

inline Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// C(k, m) = k! / prod_j (m_j! (j!)^m_j). Aborts if the division is inexact.
inline Integer fdb_coefficient(const MultiIndex& mi) {
  const unsigned k = mi.order();
  Integer denominator = 1;
  for (unsigned j = 1; j <= k; ++j) {
    unsigned m = mi.multiplicity(j);
    if (m == 0) continue;
    Integer jf;
    mpz_pow_ui(jf.get_mpz_t(), factorial(j).get_mpz_t(), m);
    denominator *= factorial(m) * jf;
  }
  Integer numerator = factorial(k);
  PIPOWERS_INVARIANT(mpz_divisible_p(numerator.get_mpz_t(), denominator.get_mpz_t()) != 0,
                     "Faa di Bruno coefficient is not an integer for (" + mi.to_string() + ")");
  Integer q;
  mpz_divexact(q.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
  return q;
}

struct CoefficientEntry {
  MultiIndex index;
  unsigned weight;  // S = sum m_j
  Integer coefficient;
};

/// All (index, S, C) rows of one order, in enumeration order.
struct CoefficientTable {
  unsigned k = 0;
  std::vector<CoefficientEntry> entries;

  const Integer& coefficient(const MultiIndex& mi) const {
    auto it = position.find(mi);
    if (it == position.end()) throw ParameterError("multi-index (" + mi.to_string() + ") is not of order " + std::to_string(k));
    return entries[it->second].coefficient;
  }

  std::map<MultiIndex, std::size_t> position;
};

/// Per-order coefficient tables, built once and shared read-only.
inline std::shared_ptr<const CoefficientTable> coefficient_table(unsigned k,
                                                                 unsigned k_max = default_k_max) {
  static std::mutex mutex;
  static std::map<unsigned, std::shared_ptr<const CoefficientTable>> cache;
  if (k > k_max)
    throw BoundsError("order " + std::to_string(k) + " exceeds K_max = " + std::to_string(k_max));
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
  }
  auto table = std::make_shared<CoefficientTable>();
  table->k = k;
  for_each_multi_index(k, [&](const MultiIndex& mi) {
    table->position.emplace(mi, table->entries.size());
    table->entries.push_back({mi, weight_sum(mi), fdb_coefficient(mi)});
  }, k_max);
  std::lock_guard lock(mutex);
  return cache.emplace(k, std::move(table)).first->second;
}

/// Checks, in exact integers, that every C(k+1, n) with n_{k+1} = 0 equals
///   C(k, n_1-1, n_2, ..) + sum_i (n_i+1) C(k, .., n_i+1, n_{i+1}-1, ..)
/// (terms with a negative multiplicity dropped), and that the single-part
/// indices (0,..,0,1) of orders k and k+1 have coefficient 1.
inline bool coefficient_recurrence_check(unsigned k, unsigned k_max = default_k_max) {
  if (k < 1 || k + 1 > k_max)
    throw BoundsError("recurrence check needs 1 <= k <= K_max - 1, got k = " + std::to_string(k));
  auto lower = coefficient_table(k, k_max);
  auto upper = coefficient_table(k + 1, k_max);
  auto lookup = [&](const std::vector<long>& m) -> Integer {
    std::vector<unsigned> mu;
    mu.reserve(m.size());
    for (long v : m) {
      if (v < 0) return 0;
      mu.push_back(static_cast<unsigned>(v));
    }
    return lower->coefficient(MultiIndex(std::move(mu)));
  };

  bool ok = true;
  for (const auto& entry : upper->entries) {
    auto n = entry.index.multiplicities();
    if (n[k] != 0) {  // the single-part index (0,..,0,1)
      ok = ok && entry.coefficient == 1;
      continue;
    }
    std::vector<long> base(n.begin(), n.begin() + k);
    std::vector<long> m = base;
    m[0] -= 1;
    Integer expected = lookup(m);
    for (unsigned i = 1; i + 1 <= k; ++i) {  // shift one part i+1 down to i
      m = base;
      m[i - 1] += 1;
      m[i] -= 1;
      expected += Integer(base[i - 1] + 1) * lookup(m);
    }
    ok = ok && expected == entry.coefficient;
  }
  std::vector<unsigned> top(k, 0);
  top[k - 1] = 1;
  ok = ok && lower->coefficient(MultiIndex(std::move(top))) == 1;
  return ok;
}

}  // namespace pipowers
