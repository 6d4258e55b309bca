#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "substdim/types.hpp"

namespace substdim {

using IncidenceMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Entry (a,b) counts occurrences of letter a in θ(b); column sums are |θ|.
IncidenceMatrix incidence_matrix(const Substitution& theta);

struct PrimitivityResult {
  bool primitive = false;
  unsigned witness_exponent = 0;  // smallest t with M^t > 0, when primitive
};

/// Wielandt-bounded test: M^t > 0 entrywise for some t ≤ (|A|−1)² + 1.
PrimitivityResult is_primitive(const Substitution& theta);

/// τ_j(a) = θ(a)_j for a fixed position j.
using ColumnMap = std::vector<Symbol>;

std::vector<ColumnMap> column_maps(const Substitution& theta);

/// A position j in θᵏ where every letter's image shows the same symbol.
/// digits holds j's base-|θ| digits, most significant first; replaying the
/// column maps in that order sends every letter to constant_value.
struct CoincidenceCertificate {
  unsigned k = 0;
  std::uint64_t j = 0;
  std::vector<std::uint32_t> digits;
  Symbol constant_value = 0;
};

/// Closure of the subset-BFS with no singleton reachable: a certificate that
/// no coincidence exists at any order.
struct ExhaustionProof {
  std::vector<std::uint64_t> reachable_masks;  // sorted, includes the full set
};

struct CoincidenceResult {
  std::optional<CoincidenceCertificate> certificate;
  std::optional<ExhaustionProof> exhaustion;
  bool has_coincidence() const { return certificate.has_value(); }
};

/// BFS on nonempty subsets S ⊆ A with edges S → τ_j(S), from the full set.
/// A shortest path to a singleton is a minimal-order certificate.
CoincidenceResult find_coincidence(const Substitution& theta);

struct AgreementStats {
  unsigned k = 1;
  std::uint64_t power_length = 0;  // |θ|ᵏ
  std::map<std::pair<Symbol, Symbol>, std::uint64_t> pairwise;  // a < b
  std::uint64_t c = 0;
  std::uint64_t C = 0;

  std::uint64_t pair(Symbol a, Symbol b) const {
    return pairwise.at(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  }
};

/// c_{a,b}(θᵏ) for all pairs via the column-composition DP; cost is
/// polynomial in |A| and k, never |θ|ᵏ.
AgreementStats agreement_stats(const Substitution& theta, unsigned k);

struct GammaConfig {
  std::size_t horizon = 0;        // prefix length; 0 selects 64·n·|θ|
  std::size_t min_windows = 8;    // factor windows required per residue
};

/// γ(n): number of elements of the cyclic σⁿ-minimal partition, computed by
/// merging residues mod n whose n-decimated block recodings share factor
/// sets, with the factor length doubled until the partition stabilizes.
/// Throws UndecidedError when the horizon is exhausted first.
std::size_t gamma(const Substitution& theta, std::size_t n,
                  GammaConfig config = {});

struct HeightInfo {
  std::size_t h = 1;
  std::size_t return_time_gcd = 1;
  std::size_t gamma_h = 1;  // γ(h) from the verification pass
};

struct HeightConfig {
  bool verify_gamma = true;
  GammaConfig gamma_config = {};
};

/// h(θ): largest divisor of the return-time gcd of the periodic point that is
/// coprime to |θ|; cross-checked by γ(h) = h when verification is enabled.
HeightInfo height(const Substitution& theta, HeightConfig config = {});

struct PureBase {
  Substitution eta;
  std::size_t h = 1;
  std::vector<Word> block_decoding;  // eta letter → length-h word over A
  bool identity = true;              // h = 1, eta is θ itself
};

/// Pure base η over the h-block alphabet; θ itself (identity decoding) when
/// h = 1. Asserts that the constructed η is primitive and pure.
PureBase pure_base(const Substitution& theta, HeightConfig config = {});
PureBase pure_base(const Substitution& theta, const HeightInfo& hi,
                   HeightConfig config = {});

struct InjectiveReduction {
  Substitution reduced;
  std::vector<Symbol> merge_map;  // original letter → reduced letter
  bool changed = false;
};

/// Iteratively merges letters with equal images over the current quotient
/// until the substitution is one-to-one. Throws when everything collapses to
/// a single letter (the subshift was finite).
InjectiveReduction injective_reduction(const Substitution& theta);

}  // namespace substdim
