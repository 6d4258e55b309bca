#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "substdim/errors.hpp"
#include "substdim/language.hpp"
#include "substdim/spectral.hpp"
#include "substdim/types.hpp"

using namespace substdim;

namespace {

Substitution period_doubling() { return parse_substitution("0 -> 01; 1 -> 00"); }
Substitution thue_morse() { return parse_substitution("0 -> 01; 1 -> 10"); }
Substitution constant_image() { return parse_substitution("0 -> 01; 1 -> 01"); }
Substitution ternary() { return parse_substitution("a -> ab; b -> cb; c -> ac"); }
Substitution height_two() { return parse_substitution("a -> aba; b -> bac; c -> cab"); }

Substitution random_substitution(std::mt19937& rng, std::size_t letters,
                                 std::size_t len) {
  Substitution theta;
  std::vector<std::string> names;
  for (std::size_t a = 0; a < letters; ++a)
    names.push_back(std::string(1, char('a' + a)));
  theta.alphabet = Alphabet{names};
  std::uniform_int_distribution<Symbol> pick(0, static_cast<Symbol>(letters - 1));
  for (std::size_t a = 0; a < letters; ++a) {
    Word w;
    for (std::size_t j = 0; j < len; ++j) w.push_back(pick(rng));
    theta.images.push_back(w);
  }
  return theta;
}

Substitution random_primitive(std::mt19937& rng, std::size_t letters,
                              std::size_t len) {
  for (;;) {
    Substitution theta = random_substitution(rng, letters, len);
    if (is_primitive(theta).primitive) return theta;
  }
}

// Agreement counts by literally materializing the power images.
std::map<std::pair<Symbol, Symbol>, std::uint64_t> brute_agreements(
    const Substitution& theta, unsigned k) {
  std::vector<Word> powers;
  for (Symbol a = 0; a < theta.alphabet_size(); ++a)
    powers.push_back(apply_power(theta, Word{a}, k));
  std::map<std::pair<Symbol, Symbol>, std::uint64_t> out;
  for (Symbol a = 0; a < theta.alphabet_size(); ++a)
    for (Symbol b = a + 1; b < theta.alphabet_size(); ++b) {
      std::uint64_t agree = 0;
      for (std::size_t j = 0; j < powers[a].size(); ++j)
        agree += powers[a][j] == powers[b][j];
      out[{a, b}] = agree;
    }
  return out;
}

}  // namespace

TEST_CASE("incidence matrix entries") {
  const IncidenceMatrix m = incidence_matrix(period_doubling());
  CHECK(m(0, 0) == 1);
  CHECK(m(1, 0) == 1);
  CHECK(m(0, 1) == 2);
  CHECK(m(1, 1) == 0);

  const IncidenceMatrix t = incidence_matrix(ternary());
  // Column b holds the letter counts of theta(b); all columns sum to 2.
  for (int b = 0; b < 3; ++b) CHECK(t.col(b).sum() == 2);
  CHECK(t(0, 0) == 1);
  CHECK(t(1, 0) == 1);
  CHECK(t(2, 1) == 1);
  CHECK(t(1, 1) == 1);
  CHECK(t(0, 2) == 1);
  CHECK(t(2, 2) == 1);
}

TEST_CASE("primitivity: positive and negative cases") {
  CHECK(is_primitive(period_doubling()).primitive);
  CHECK(is_primitive(period_doubling()).witness_exponent <= 2);
  CHECK(is_primitive(thue_morse()).primitive);
  CHECK(is_primitive(thue_morse()).witness_exponent == 1);
  CHECK(is_primitive(ternary()).primitive);
  CHECK(is_primitive(height_two()).primitive);
  CHECK_FALSE(is_primitive(parse_substitution("0 -> 00; 1 -> 11")).primitive);
  CHECK_FALSE(is_primitive(parse_substitution("0 -> 01; 1 -> 11")).primitive);
}

TEST_CASE("primitivity witness is minimal") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Substitution theta = random_primitive(rng, 2 + trial % 3, 2);
    const PrimitivityResult r = is_primitive(theta);
    IncidenceMatrix p = incidence_matrix(theta);
    IncidenceMatrix m = p;
    for (unsigned t = 1; t < r.witness_exponent; ++t) {
      REQUIRE((p.array() > 0).all() == false);
      p = (p * m).cwiseMin(std::int64_t{1} << 30);
    }
    REQUIRE((p.array() > 0).all());
  }
}

TEST_CASE("column maps") {
  const auto maps = column_maps(period_doubling());
  REQUIRE(maps.size() == 2);
  CHECK(maps[0] == ColumnMap{0, 0});
  CHECK(maps[1] == ColumnMap{1, 0});
}

TEST_CASE("coincidence: order 1 for period doubling") {
  const CoincidenceResult r = find_coincidence(period_doubling());
  REQUIRE(r.has_coincidence());
  CHECK(r.certificate->k == 1);
  CHECK(r.certificate->j == 0);
  CHECK(r.certificate->constant_value == 0);
}

TEST_CASE("coincidence: exhaustion for the self-complementary case") {
  const CoincidenceResult r = find_coincidence(thue_morse());
  REQUIRE_FALSE(r.has_coincidence());
  REQUIRE(r.exhaustion.has_value());
  // Only the full subset {0,1} is reachable.
  CHECK(r.exhaustion->reachable_masks == std::vector<std::uint64_t>{0b11});
}

TEST_CASE("coincidence: ternary example needs order exactly 2") {
  const Substitution theta = ternary();
  const CoincidenceResult r = find_coincidence(theta);
  REQUIRE(r.has_coincidence());
  CHECK(r.certificate->k == 2);

  // Brute force: no single column map is constant, some 2-composition is.
  const auto maps = column_maps(theta);
  for (const ColumnMap& m : maps)
    CHECK_FALSE(std::set<Symbol>(m.begin(), m.end()).size() == 1);
  bool some_constant = false;
  for (const ColumnMap& outer : maps)
    for (const ColumnMap& inner : maps) {
      std::set<Symbol> values;
      for (Symbol a = 0; a < theta.alphabet_size(); ++a)
        values.insert(inner[outer[a]]);
      some_constant |= values.size() == 1;
    }
  CHECK(some_constant);
}

TEST_CASE("coincidence certificate replays through power_column") {
  for (const Substitution& theta :
       {period_doubling(), ternary(),
        parse_substitution("0 -> 0011; 1 -> 0101")}) {
    const CoincidenceResult r = find_coincidence(theta);
    REQUIRE(r.has_coincidence());
    const CoincidenceCertificate& cert = *r.certificate;
    REQUIRE(cert.digits.size() == cert.k);
    // Digits really are the base-length expansion of j, most significant first.
    std::uint64_t j = 0;
    for (std::uint32_t d : cert.digits) j = j * theta.length() + d;
    CHECK(j == cert.j);
    for (Symbol a = 0; a < theta.alphabet_size(); ++a)
      CHECK(power_column(theta, a, cert.k, cert.j) == cert.constant_value);
  }
}

TEST_CASE("agreement DP matches materialized counts") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const Substitution theta = random_primitive(rng, 2 + trial % 3, 2 + trial % 3);
    unsigned k = 1 + trial % 3;
    while (std::pow(double(theta.length()), k) > 200000.0) --k;
    const AgreementStats stats = agreement_stats(theta, k);
    const auto brute = brute_agreements(theta, k);
    REQUIRE(stats.pairwise == brute);
    std::uint64_t c = stats.power_length, C = 0;
    for (const auto& [pair, v] : brute) {
      c = std::min(c, v);
      C = std::max(C, v);
    }
    REQUIRE(stats.c == c);
    REQUIRE(stats.C == C);
  }
}

TEST_CASE("disagreement counts: sub/supermultiplicative across powers") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const Substitution theta = random_primitive(rng, 2 + trial % 2, 2);
    const auto s1 = agreement_stats(theta, 1);
    const auto s2 = agreement_stats(theta, 2);
    const auto s3 = agreement_stats(theta, 3);
    auto dis_min = [](const AgreementStats& s) { return s.power_length - s.c; };
    auto dis_max = [](const AgreementStats& s) { return s.power_length - s.C; };
    // min-disagreement is submultiplicative, max-disagreement supermultiplicative
    CHECK(dis_min(s2) <= dis_min(s1) * dis_min(s1));
    CHECK(dis_min(s3) <= dis_min(s1) * dis_min(s2));
    CHECK(dis_max(s2) >= dis_max(s1) * dis_max(s1));
    CHECK(dis_max(s3) >= dis_max(s1) * dis_max(s2));
  }
}

TEST_CASE("gamma: known values") {
  CHECK(gamma(period_doubling(), 1) == 1);
  CHECK(gamma(period_doubling(), 2) == 2);
  CHECK(gamma(thue_morse(), 2) == 2);
  CHECK(gamma(constant_image(), 2) == 2);
  // The two-cycle 0101... is minimal under the cube of the shift.
  CHECK(gamma(constant_image(), 3) == 1);
}

TEST_CASE("height: trivial and nontrivial") {
  CHECK(height(period_doubling()).h == 1);
  CHECK(height(thue_morse()).h == 1);
  CHECK(height(ternary()).h == 1);
  const HeightInfo hi = height(height_two());
  CHECK(hi.h == 2);
  CHECK(hi.gamma_h == 2);
}

TEST_CASE("pure base: identity when height is trivial") {
  const PureBase pb = pure_base(period_doubling());
  CHECK(pb.identity);
  CHECK(pb.h == 1);
  CHECK(pb.eta.images == period_doubling().images);
}

TEST_CASE("pure base: height-two construction") {
  const Substitution theta = height_two();
  const PureBase pb = pure_base(theta);
  REQUIRE_FALSE(pb.identity);
  CHECK(pb.h == 2);
  CHECK(pb.eta.length() == theta.length());
  CHECK(is_primitive(pb.eta).primitive);
  CHECK(height(pb.eta).h == 1);

  // Every block letter decodes to a length-2 factor of the original system.
  const LanguageSet two = language(theta, 2);
  REQUIRE(pb.block_decoding.size() == pb.eta.alphabet_size());
  for (const Word& w : pb.block_decoding) {
    REQUIRE(w.size() == 2);
    CHECK(two.words.count(w) == 1);
  }

  // The decoded eta-periodic prefix is a factor of the original system.
  const Word eta_prefix = periodic_right_prefix(pb.eta, 128);
  Word decoded;
  for (Symbol s : eta_prefix) {
    decoded.insert(decoded.end(), pb.block_decoding[s].begin(),
                   pb.block_decoding[s].end());
  }
  const Word host = periodic_point_prefix(theta, 4096);
  auto it = std::search(host.begin(), host.end(), decoded.begin(), decoded.end());
  CHECK(it != host.end());
}

TEST_CASE("injective reduction: no-op on already one-to-one rules") {
  const InjectiveReduction r = injective_reduction(period_doubling());
  CHECK_FALSE(r.changed);
  CHECK(r.reduced.images == period_doubling().images);
  CHECK(r.merge_map == std::vector<Symbol>{0, 1});
}

TEST_CASE("injective reduction: merges equal-image letters") {
  const Substitution theta = parse_substitution("a -> ab; b -> ab; c -> ca");
  const InjectiveReduction r = injective_reduction(theta);
  CHECK(r.changed);
  REQUIRE(r.reduced.alphabet_size() == 2);
  CHECK(r.merge_map == std::vector<Symbol>{0, 0, 1});
  CHECK(r.reduced.images[0] == Word{0, 0});
  CHECK(r.reduced.images[1] == Word{1, 0});
}

TEST_CASE("injective reduction: total collapse throws") {
  CHECK_THROWS_AS(injective_reduction(constant_image()), PreconditionError);
}
