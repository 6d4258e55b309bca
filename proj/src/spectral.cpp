#include "substdim/spectral.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string_view>

#include "substdim/errors.hpp"
#include "substdim/language.hpp"

namespace substdim {

IncidenceMatrix incidence_matrix(const Substitution& theta) {
  const auto n = static_cast<Eigen::Index>(theta.alphabet_size());
  IncidenceMatrix m = IncidenceMatrix::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Symbol a : theta.images[static_cast<std::size_t>(b)])
      m(static_cast<Eigen::Index>(a), b) += 1;
  return m;
}

PrimitivityResult is_primitive(const Substitution& theta) {
  const IncidenceMatrix m = incidence_matrix(theta);
  const auto n = m.rows();
  const unsigned bound = static_cast<unsigned>((n - 1) * (n - 1) + 1);
  IncidenceMatrix p = m;
  for (unsigned t = 1; t <= bound; ++t) {
    if ((p.array() > 0).all()) return {true, t};
    p = (p * m).cwiseMin(std::int64_t{1} << 30);
  }
  return {false, 0};
}

std::vector<ColumnMap> column_maps(const Substitution& theta) {
  const std::size_t len = theta.length();
  std::vector<ColumnMap> maps(len, ColumnMap(theta.alphabet_size()));
  for (std::size_t j = 0; j < len; ++j)
    for (std::size_t a = 0; a < theta.alphabet_size(); ++a)
      maps[j][a] = theta.images[a][j];
  return maps;
}

CoincidenceResult find_coincidence(const Substitution& theta) {
  const std::size_t a_count = theta.alphabet_size();
  if (a_count > 63)
    throw PreconditionError("alphabet too large for subset search");
  const auto taus = column_maps(theta);
  const std::size_t len = taus.size();

  const std::uint64_t full = (a_count == 63) ? ~std::uint64_t{0} >> 1
                                             : (std::uint64_t{1} << a_count) - 1;
  auto image_mask = [&](std::uint64_t mask, std::size_t j) {
    std::uint64_t out = 0;
    for (std::size_t a = 0; a < a_count; ++a)
      if (mask >> a & 1) out |= std::uint64_t{1} << taus[j][a];
    return out;
  };

  // parent edge: mask came from parent via τ_digit
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint32_t>> parent;
  std::deque<std::uint64_t> queue{full};
  parent[full] = {full, 0};
  std::optional<std::uint64_t> singleton;
  while (!queue.empty() && !singleton) {
    const std::uint64_t mask = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < len; ++j) {
      const std::uint64_t next = image_mask(mask, j);
      if (parent.count(next)) continue;
      parent[next] = {mask, static_cast<std::uint32_t>(j)};
      if ((next & (next - 1)) == 0) {
        singleton = next;
        break;
      }
      queue.push_back(next);
    }
  }

  CoincidenceResult result;
  if (!singleton) {
    ExhaustionProof proof;
    for (const auto& [mask, _] : parent) proof.reachable_masks.push_back(mask);
    result.exhaustion = std::move(proof);
    return result;
  }

  CoincidenceCertificate cert;
  cert.constant_value = static_cast<Symbol>(std::countr_zero(*singleton));
  std::vector<std::uint32_t> path;  // digits from singleton back to full
  for (std::uint64_t mask = *singleton; mask != full;) {
    const auto& [prev, digit] = parent.at(mask);
    path.push_back(digit);
    mask = prev;
  }
  // First edge out of the full set is the innermost column map, i.e. the most
  // significant digit of j.
  cert.k = static_cast<unsigned>(path.size());
  cert.digits.assign(path.rbegin(), path.rend());
  unsigned __int128 j = 0;
  for (std::uint32_t d : cert.digits) j = j * len + d;
  if (j > static_cast<unsigned __int128>(~std::uint64_t{0}))
    throw InternalError("coincidence position exceeds 64 bits");
  cert.j = static_cast<std::uint64_t>(j);
  result.certificate = std::move(cert);
  return result;
}

AgreementStats agreement_stats(const Substitution& theta, unsigned k) {
  if (k < 1) throw PreconditionError("agreement_stats requires k >= 1");
  const std::size_t a_count = theta.alphabet_size();
  const std::uint64_t len = theta.length();
  std::uint64_t power_length = 1;
  for (unsigned t = 0; t < k; ++t) {
    if (power_length > (std::uint64_t{1} << 62) / len)
      throw PreconditionError("|θ|^k exceeds the supported range");
    power_length *= len;
  }
  const auto taus = column_maps(theta);

  // g[x][y] = number of length-t column compositions sending (x,y) to the
  // diagonal; equal pairs are absorbing with |θ| branches per level.
  std::vector<std::vector<std::uint64_t>> g(a_count,
                                            std::vector<std::uint64_t>(a_count, 0));
  for (std::size_t x = 0; x < a_count; ++x) g[x][x] = 1;
  for (unsigned t = 0; t < k; ++t) {
    std::vector<std::vector<std::uint64_t>> next(
        a_count, std::vector<std::uint64_t>(a_count, 0));
    for (std::size_t x = 0; x < a_count; ++x)
      for (std::size_t y = 0; y < a_count; ++y)
        for (std::size_t j = 0; j < len; ++j)
          next[x][y] += g[taus[j][x]][taus[j][y]];
    g = std::move(next);
  }

  AgreementStats stats;
  stats.k = k;
  stats.power_length = power_length;
  stats.c = power_length;
  stats.C = 0;
  for (Symbol a = 0; a < a_count; ++a)
    for (Symbol b = a + 1; b < a_count; ++b) {
      const std::uint64_t v = g[a][b];
      stats.pairwise[{a, b}] = v;
      stats.c = std::min(stats.c, v);
      stats.C = std::max(stats.C, v);
    }
  if (stats.pairwise.empty()) stats.C = stats.c = power_length;  // |A| = 1
  return stats;
}

namespace {

std::string_view block_view(const Word& buf, std::size_t pos, std::size_t n) {
  return {reinterpret_cast<const char*>(buf.data() + pos), n * sizeof(Symbol)};
}

}  // namespace

std::size_t gamma(const Substitution& theta, std::size_t n, GammaConfig config) {
  if (n < 1) throw PreconditionError("gamma requires n >= 1");
  if (n == 1) return 1;
  const std::size_t len = theta.length();
  const std::size_t horizon = config.horizon ? config.horizon : 64 * n * len;
  const Word x = periodic_right_prefix(theta, horizon);

  // Residues merge iff their n-decimated block recodings share factor sets;
  // distinct minimal subshifts separate at some finite factor length.
  auto partition_at = [&](std::size_t L) -> std::optional<std::vector<std::size_t>> {
    std::map<std::set<std::string_view>, std::size_t> classes;
    std::vector<std::size_t> assignment(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::set<std::string_view> factors;
      std::size_t windows = 0;
      for (std::size_t t = 0; i + t * n + L * n <= x.size(); ++t, ++windows)
        factors.insert(block_view(x, i + t * n, L * n));
      if (windows < config.min_windows) return std::nullopt;
      assignment[i] = classes.emplace(std::move(factors), classes.size()).first->second;
    }
    return assignment;
  };

  std::optional<std::vector<std::size_t>> previous;
  for (std::size_t L = 1;; L *= 2) {
    auto current = partition_at(L);
    if (!current)
      throw UndecidedError("gamma horizon exhausted before stabilization");
    if (previous && *previous == *current)
      return 1 + *std::max_element(current->begin(), current->end());
    previous = std::move(current);
  }
}

HeightInfo height(const Substitution& theta, HeightConfig config) {
  const std::size_t len = theta.length();

  std::size_t g = 0;
  for (std::size_t m = 256;; m *= 2) {
    const Word x = periodic_right_prefix(theta, m);
    std::size_t acc = 0;
    for (std::size_t t = 1; t < x.size(); ++t)
      if (x[t] == x[0]) acc = std::gcd(acc, t);
    if (acc == 0) {
      if (m > (std::size_t{1} << 22))
        throw UndecidedError("no return of the first letter found");
      continue;
    }
    if (acc == g || acc == 1) {
      g = acc;
      break;
    }
    g = acc;
  }

  HeightInfo info;
  info.return_time_gcd = g;
  info.h = g;
  while (std::gcd(info.h, len) > 1) info.h /= std::gcd(info.h, len);
  if (config.verify_gamma) {
    info.gamma_h = gamma(theta, info.h, config.gamma_config);
    if (info.gamma_h != info.h)
      throw InternalError("height verification failed: gamma(h) != h for " +
                          format_rules(theta));
  } else {
    info.gamma_h = info.h;
  }
  return info;
}

PureBase pure_base(const Substitution& theta, HeightConfig config) {
  return pure_base(theta, height(theta, config), config);
}

PureBase pure_base(const Substitution& theta, const HeightInfo& hi,
                   HeightConfig config) {
  PureBase result;
  result.h = hi.h;
  if (hi.h == 1) {
    result.eta = theta;
    result.identity = true;
    for (Symbol a = 0; a < theta.alphabet_size(); ++a)
      result.block_decoding.push_back(Word{a});
    return result;
  }

  const std::size_t h = hi.h;
  const std::size_t len = theta.length();
  const std::size_t scan = std::max<std::size_t>(64 * h * len * theta.alphabet_size(), 1024);
  const Word x = periodic_right_prefix(theta, scan);

  // Block alphabet: h-blocks on the grid of the fixed point, closed under
  // taking the ℓ consecutive h-blocks of θ(block). gcd(h,ℓ)=1 keeps the
  // grid aligned.
  std::map<Word, Symbol> block_index;
  std::vector<Word> blocks;
  auto intern = [&](const Word& b) {
    auto [it, inserted] = block_index.emplace(b, static_cast<Symbol>(blocks.size()));
    if (inserted) blocks.push_back(b);
    return it->second;
  };
  for (std::size_t t = 0; (t + 1) * h <= x.size(); ++t)
    intern(Word(x.begin() + t * h, x.begin() + (t + 1) * h));

  std::vector<Word> eta_images;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Word image = substdim::apply(theta, blocks[b]);  // length h·ℓ
    Word eta_image;
    for (std::size_t t = 0; t < len; ++t)
      eta_image.push_back(intern(Word(image.begin() + t * h, image.begin() + (t + 1) * h)));
    eta_images.push_back(std::move(eta_image));
  }

  std::vector<std::string> names;
  for (const auto& b : blocks)
    names.push_back("[" + format_word(theta.alphabet, b) + "]");
  result.eta.alphabet = Alphabet{names};
  result.eta.images = std::move(eta_images);
  result.block_decoding = blocks;
  result.identity = false;

  if (!is_primitive(result.eta).primitive)
    throw InternalError("pure base is not primitive for " + format_rules(theta));
  const HeightInfo eta_height = height(result.eta, config);
  if (eta_height.h != 1)
    throw InternalError("pure base is not pure for " + format_rules(theta));
  return result;
}

InjectiveReduction injective_reduction(const Substitution& theta) {
  const std::size_t a_count = theta.alphabet_size();
  // class id per letter; representative is the smallest member.
  std::vector<Symbol> cls(a_count);
  std::iota(cls.begin(), cls.end(), 0);

  bool changed_any = false;
  for (;;) {
    std::map<Word, Symbol> by_image;
    std::vector<Symbol> next(a_count);
    bool changed = false;
    for (Symbol a = 0; a < a_count; ++a) {
      if (cls[a] != a) continue;  // only representatives
      Word key;
      for (Symbol s : theta.images[a]) key.push_back(cls[s]);
      auto [it, inserted] = by_image.emplace(std::move(key), a);
      next[a] = it->second;
      if (!inserted) changed = true;
    }
    for (Symbol a = 0; a < a_count; ++a)
      if (cls[a] != a) next[a] = next[cls[a]];
    if (!changed) break;
    // Re-canonicalize: representative of each class is its smallest member.
    cls = next;
    changed_any = true;
  }

  std::vector<Symbol> reps;
  for (Symbol a = 0; a < a_count; ++a)
    if (cls[a] == a) reps.push_back(a);
  if (reps.size() == 1 && a_count > 1)
    throw PreconditionError(
        "injective reduction collapsed to one letter (finite subshift)");

  InjectiveReduction result;
  result.changed = changed_any;
  result.merge_map.resize(a_count);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < reps.size(); ++i)
    names.push_back(theta.alphabet.name(reps[i]));
  std::vector<Symbol> rep_to_new(a_count, 0);
  for (std::size_t i = 0; i < reps.size(); ++i)
    rep_to_new[reps[i]] = static_cast<Symbol>(i);
  for (Symbol a = 0; a < a_count; ++a) result.merge_map[a] = rep_to_new[cls[a]];

  result.reduced.alphabet = Alphabet{names};
  for (Symbol r : reps) {
    Word image;
    for (Symbol s : theta.images[r]) image.push_back(rep_to_new[cls[s]]);
    result.reduced.images.push_back(std::move(image));
  }
  return result;
}

}  // namespace substdim
