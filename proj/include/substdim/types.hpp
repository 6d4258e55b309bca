#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace substdim {

using Symbol = std::uint32_t;

/// A finite word over an alphabet, stored as indices.
using Word = std::vector<Symbol>;

/// Ordered finite set of letters. Ordering is the input order and is canonical
/// for all derived output (reports, reductions, block alphabets).
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  std::optional<Symbol> index_of(std::string_view name) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
};

/// A substitution over a finite alphabet: one non-empty image word per letter.
struct Substitution {
  Alphabet alphabet;
  std::vector<Word> images;

  bool constant_length() const;
  /// Shared image length |θ|; requires constant_length().
  std::size_t length() const;
  std::size_t alphabet_size() const { return alphabet.size(); }
};

/// Parses the rule grammar: `<letter> -> <word>` clauses separated by `;` or
/// newlines; letters are single non-whitespace symbols; `#` starts a comment
/// line. Throws ParseError on empty images, unknown right-hand symbols,
/// duplicate left-hand sides, and (when required) non-constant lengths.
Substitution parse_substitution(std::string_view text,
                                bool require_constant_length = true);

/// θ extended to words by concatenation.
Word apply(const Substitution& theta, const Word& w);

/// θᵏ(w) by repeated application.
Word apply_power(const Substitution& theta, Word w, unsigned k);

/// θᵏ(a)_j without materializing θᵏ(a). j is expanded in base |θ| as
/// j = j_{k−1}|θ|^{k−1} + … + j_0 and the column maps are composed as
/// τ_{j_0}(τ_{j_1}(…τ_{j_{k−1}}(a)…)), matching θᵏ(a) = θ^{k−1}(θ(a)).
Symbol power_column(const Substitution& theta, Symbol a, unsigned k,
                    std::uint64_t j);

std::string format_word(const Alphabet& alphabet, const Word& w);
std::string format_rules(const Substitution& theta);

}  // namespace substdim
