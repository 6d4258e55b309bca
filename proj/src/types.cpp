#include "substdim/types.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "substdim/errors.hpp"

namespace substdim {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j])
        throw ParseError("duplicate letter '" + names_[i] + "' in alphabet");
}

std::optional<Symbol> Alphabet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Symbol>(i);
  return std::nullopt;
}

bool Substitution::constant_length() const {
  if (images.empty()) return false;
  const std::size_t len = images.front().size();
  return std::all_of(images.begin(), images.end(),
                     [len](const Word& w) { return w.size() == len; });
}

std::size_t Substitution::length() const {
  if (!constant_length())
    throw PreconditionError("substitution is not of constant length");
  return images.front().size();
}

namespace {

struct RawClause {
  std::string lhs;
  std::string rhs;
};

std::vector<RawClause> split_clauses(std::string_view text) {
  // Strip comment lines first, then cut on ';' and newlines.
  std::string cleaned;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') continue;
    cleaned += line;
    cleaned += ';';
  }
  std::vector<RawClause> clauses;
  std::string clause;
  std::istringstream parts{cleaned};
  while (std::getline(parts, clause, ';')) {
    const auto arrow = clause.find("->");
    if (arrow == std::string::npos) {
      // Blank segments between separators are fine; anything else is not.
      if (clause.find_first_not_of(" \t\r") != std::string::npos)
        throw ParseError("clause without '->': '" + clause + "'");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    clauses.push_back({trim(clause.substr(0, arrow)), trim(clause.substr(arrow + 2))});
  }
  return clauses;
}

}  // namespace

Substitution parse_substitution(std::string_view text,
                                bool require_constant_length) {
  const auto clauses = split_clauses(text);
  if (clauses.empty()) throw ParseError("no rules found");

  std::vector<std::string> letters;
  for (const auto& c : clauses) {
    if (c.lhs.size() != 1)
      throw ParseError("left-hand side must be a single symbol: '" + c.lhs + "'");
    if (std::find(letters.begin(), letters.end(), c.lhs) != letters.end())
      throw ParseError("duplicate left-hand side '" + c.lhs + "'");
    letters.push_back(c.lhs);
  }
  Alphabet alphabet{letters};

  Substitution theta;
  theta.alphabet = alphabet;
  for (const auto& c : clauses) {
    Word image;
    for (char ch : c.rhs) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      const auto idx = alphabet.index_of(std::string_view(&ch, 1));
      if (!idx)
        throw ParseError(std::string("unknown symbol '") + ch +
                         "' in image of '" + c.lhs + "'");
      image.push_back(*idx);
    }
    if (image.empty()) throw ParseError("empty image for '" + c.lhs + "'");
    theta.images.push_back(std::move(image));
  }
  if (require_constant_length && !theta.constant_length())
    throw ParseError("images do not all have the same length");
  return theta;
}

Word apply(const Substitution& theta, const Word& w) {
  Word out;
  std::size_t total = 0;
  for (Symbol s : w) {
    if (s >= theta.images.size())
      throw PreconditionError("symbol outside alphabet");
    total += theta.images[s].size();
  }
  out.reserve(total);
  for (Symbol s : w)
    out.insert(out.end(), theta.images[s].begin(), theta.images[s].end());
  return out;
}

Word apply_power(const Substitution& theta, Word w, unsigned k) {
  for (unsigned i = 0; i < k; ++i) w = substdim::apply(theta, w);
  return w;
}

Symbol power_column(const Substitution& theta, Symbol a, unsigned k,
                    std::uint64_t j) {
  const std::uint64_t len = theta.length();
  if (a >= theta.alphabet_size())
    throw PreconditionError("symbol outside alphabet");
  // Digits of j in base |θ|, least significant first.
  std::vector<std::uint32_t> digits(k);
  std::uint64_t rest = j;
  for (unsigned t = 0; t < k; ++t) {
    digits[t] = static_cast<std::uint32_t>(rest % len);
    rest /= len;
  }
  if (rest != 0) throw PreconditionError("column index out of range");
  Symbol x = a;
  for (unsigned t = k; t-- > 0;) x = theta.images[x][digits[t]];
  return x;
}

std::string format_word(const Alphabet& alphabet, const Word& w) {
  std::string out;
  for (Symbol s : w) out += alphabet.name(s);
  return out;
}

std::string format_rules(const Substitution& theta) {
  std::string out;
  for (std::size_t a = 0; a < theta.images.size(); ++a) {
    if (a) out += " ; ";
    out += theta.alphabet.name(static_cast<Symbol>(a)) + " -> " +
           format_word(theta.alphabet, theta.images[a]);
  }
  return out;
}

}  // namespace substdim
