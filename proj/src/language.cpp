#include "substdim/language.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string_view>

#include "substdim/errors.hpp"

namespace substdim {

namespace {

std::string_view window_view(const Word& buf, std::size_t pos, std::size_t n) {
  return {reinterpret_cast<const char*>(buf.data() + pos), n * sizeof(Symbol)};
}

/// Distinct n-grams of buf, stopping early once the count exceeds `limit`.
std::size_t count_distinct_ngrams(const Word& buf, std::size_t n,
                                  std::size_t limit) {
  if (buf.size() < n) return 0;
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i + n <= buf.size(); ++i) {
    seen.insert(window_view(buf, i, n));
    if (seen.size() > limit) return seen.size();
  }
  return seen.size();
}

}  // namespace

LanguageSet language(const Substitution& theta, std::size_t n) {
  if (n == 0) throw PreconditionError("language requires n >= 1");
  const std::size_t stop_length = 2 * n * theta.alphabet_size();

  LanguageSet lang;
  lang.n = n;
  Word iterate{0};
  bool past_threshold = false;
  while (true) {
    iterate = substdim::apply(theta, iterate);
    std::size_t before = lang.words.size();
    for (std::size_t i = 0; i + n <= iterate.size(); ++i)
      lang.words.insert(Word(iterate.begin() + i, iterate.begin() + i + n));
    const bool changed = lang.words.size() != before;
    if (past_threshold && !changed) break;
    if (iterate.size() > stop_length) past_threshold = true;
    // Cap iterate growth; new factors of length n keep appearing in the
    // (moving) prefix until the set saturates.
    if (iterate.size() > 64 * stop_length + 64)
      iterate.resize(64 * stop_length + 64);
  }
  return lang;
}

std::vector<std::size_t> factor_complexity(const Substitution& theta,
                                           std::size_t n_max) {
  std::vector<std::size_t> p;
  p.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n)
    p.push_back(language(theta, n).words.size());
  return p;
}

PeriodicSeed periodic_seed(const Substitution& theta) {
  const std::size_t a_count = theta.alphabet_size();
  const auto lang2 = language(theta, 2).words;
  // First- and last-letter maps; their iterates cycle with small period.
  std::vector<Symbol> first(a_count), last(a_count);
  for (std::size_t a = 0; a < a_count; ++a) {
    first[a] = theta.images[a].front();
    last[a] = theta.images[a].back();
  }
  std::uint64_t cap = a_count;
  for (std::uint64_t i = 2; i <= a_count; ++i) cap *= i;  // |A|!·|A|
  cap = std::min<std::uint64_t>(cap * a_count, 100000);

  std::vector<Symbol> fp(a_count), gp(a_count);
  std::iota(fp.begin(), fp.end(), 0);
  std::iota(gp.begin(), gp.end(), 0);
  for (unsigned p = 1; p <= cap; ++p) {
    for (std::size_t a = 0; a < a_count; ++a) {
      fp[a] = first[fp[a]];
      gp[a] = last[gp[a]];
    }
    for (Symbol a = 0; a < a_count; ++a) {
      if (fp[a] != a) continue;
      for (Symbol b = 0; b < a_count; ++b) {
        if (gp[b] != b) continue;
        if (lang2.count(Word{b, a})) return {p, a, b};
      }
    }
  }
  throw PreconditionError("no periodic-point seed found (is θ primitive?)");
}

Word periodic_right_prefix(const Substitution& theta, std::size_t n) {
  const auto seed = periodic_seed(theta);
  const std::size_t len = theta.length();
  std::uint64_t step = 1;
  for (unsigned i = 0; i < seed.p; ++i) step *= len;

  Word w{seed.right};
  while (w.size() < n) {
    const std::size_t needed = (n + step - 1) / step;
    if (w.size() > needed) w.resize(needed);
    w = apply_power(theta, std::move(w), seed.p);
  }
  w.resize(n);
  return w;
}

namespace {

Word periodic_left_suffix(const Substitution& theta, std::size_t n) {
  const auto seed = periodic_seed(theta);
  const std::size_t len = theta.length();
  std::uint64_t step = 1;
  for (unsigned i = 0; i < seed.p; ++i) step *= len;

  Word w{seed.left};
  while (w.size() < n) {
    const std::size_t needed = (n + step - 1) / step;
    if (w.size() > needed) w.erase(w.begin(), w.end() - needed);
    w = apply_power(theta, std::move(w), seed.p);
  }
  w.erase(w.begin(), w.end() - static_cast<std::ptrdiff_t>(n));
  return w;
}

}  // namespace

Word periodic_point_prefix(const Substitution& theta, std::size_t n) {
  Word out = periodic_left_suffix(theta, n);
  const Word right = periodic_right_prefix(theta, n);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

std::size_t minimal_period(const Word& w) {
  // Smallest period equals length minus the longest proper border.
  const std::size_t n = w.size();
  std::vector<std::size_t> fail(n + 1, 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i) {
    while (k > 0 && w[i] != w[k]) k = fail[k];
    if (w[i] == w[k]) ++k;
    fail[i + 1] = k;
  }
  return n - fail[n];
}

FinitenessVerdict is_finite_subshift(const Substitution& theta,
                                     std::size_t cutoff) {
  const std::size_t a_count = theta.alphabet_size();
  const std::size_t len = theta.length();
  const std::size_t N = cutoff ? cutoff : 4 * a_count * a_count * len * len;

  FinitenessVerdict verdict;
  verdict.cutoff = N;

  // Prefix window counts only ever undercount p, so p_prefix(N) > N already
  // proves p(n) > n for every n ≤ N (p is non-decreasing, and p(n0) ≤ n0
  // would force p(N) ≤ n0 < N). The finite side is re-certified below.
  std::size_t prefix_len = std::max<std::size_t>(4 * N, 512);
  while (true) {
    const Word prefix = periodic_right_prefix(theta, prefix_len);
    if (count_distinct_ngrams(prefix, N, N) > N) {
      verdict.certified_finite = false;
      const std::size_t profile_len = std::min<std::size_t>(N, 64);
      for (std::size_t n = 1; n <= profile_len; ++n)
        verdict.complexity_profile.push_back(
            count_distinct_ngrams(prefix, n, prefix.size()));
      return verdict;
    }

    const std::size_t q = minimal_period(prefix);
    if (q <= N && 2 * q <= prefix.size()) {
      // Candidate witness: smallest n with p(n) ≤ n, confirmed by the exact
      // language computation.
      for (std::size_t n = 1; n <= q; ++n) {
        const std::size_t p_n = language(theta, n).words.size();
        verdict.complexity_profile.push_back(p_n);
        if (p_n <= n) {
          verdict.certified_finite = true;
          verdict.period = q;
          verdict.witness_n = n;
          return verdict;
        }
      }
      verdict.complexity_profile.clear();
    }
    prefix_len *= 2;
    if (prefix_len > (std::size_t{1} << 24))
      throw UndecidedError("finiteness test did not stabilize");
  }
}

}  // namespace substdim
