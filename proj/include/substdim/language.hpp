#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "substdim/types.hpp"

namespace substdim {

/// Set of all length-n factors of X_θ.
struct LanguageSet {
  std::size_t n = 0;
  std::set<Word> words;
};

/// Seed data for a two-sided θ-periodic point built from a pair (b|a):
/// a is a first letter of θ^p(a), b is a last letter of θ^p(b), and the
/// word ba appears in X_θ.
struct PeriodicSeed {
  unsigned p = 1;
  Symbol right = 0;  // a
  Symbol left = 0;   // b
};

/// Exact length-n factor set of X_θ, by iterating θ on a letter and
/// collecting factors until the set stabilizes.
LanguageSet language(const Substitution& theta, std::size_t n);

/// p(n) = #L^n(X_θ) for n = 1..n_max.
std::vector<std::size_t> factor_complexity(const Substitution& theta,
                                           std::size_t n_max);

/// Smallest valid (p, a, b) seed, ties broken by alphabet order.
PeriodicSeed periodic_seed(const Substitution& theta);

/// Right half x_{[0,n)} of the θ-periodic point grown from the seed.
Word periodic_right_prefix(const Substitution& theta, std::size_t n);

/// Central window x_{[−n,n)} (length 2n) of a two-sided θ-periodic point.
/// Windows are nested: a longer window extends a shorter one.
Word periodic_point_prefix(const Substitution& theta, std::size_t n);

struct FinitenessVerdict {
  bool certified_finite = false;
  std::size_t period = 0;          // q, when certified
  std::size_t witness_n = 0;       // n with p(n) ≤ n, when certified
  std::size_t cutoff = 0;          // N used
  std::vector<std::size_t> complexity_profile;  // p(1..len(profile))
};

/// Morse–Hedlund test: CertifiedFinite(q) iff p(n) ≤ n for some n ≤ N,
/// otherwise PresumedInfinite(N). The finite side is a certificate (the
/// generated prefix is literally q-periodic); the infinite side is not.
/// cutoff 0 selects the default N = 4·|A|²·|θ|².
FinitenessVerdict is_finite_subshift(const Substitution& theta,
                                     std::size_t cutoff = 0);

/// Minimal period of w (smallest q with w[i] == w[i+q] throughout).
std::size_t minimal_period(const Word& w);

}  // namespace substdim
