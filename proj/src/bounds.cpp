#include "substdim/bounds.hpp"

#include <cmath>

#include "substdim/errors.hpp"

namespace substdim {

namespace {

// Integer t-th root of v, or 0 when v has none.
std::uint64_t exact_root(std::uint64_t v, unsigned t) {
  const double guess = std::pow(static_cast<double>(v), 1.0 / t);
  for (std::int64_t m = std::llround(guess) - 1; m <= std::llround(guess) + 1; ++m) {
    if (m < 1) continue;
    std::uint64_t p = 1;
    bool overflow = false;
    for (unsigned i = 0; i < t; ++i) {
      if (p > v / static_cast<std::uint64_t>(m)) {
        overflow = true;
        break;
      }
      p *= static_cast<std::uint64_t>(m);
    }
    if (!overflow && p == v) return static_cast<std::uint64_t>(m);
  }
  return 0;
}

}  // namespace

double log_dimension_value(std::uint64_t len, std::uint64_t den) {
  if (den < 1 || den >= len)
    throw PreconditionError("log_dimension_value requires 1 <= den < len");
  if (den == 1) return 1.0;
  // Reduce (len, den) by common integer roots so that (ℓᵏ, dᵏ) collapses to
  // (ℓ, d) and equal values agree bitwise across powers.
  bool reduced = true;
  while (reduced) {
    reduced = false;
    for (unsigned t = 40; t >= 2; --t) {
      const std::uint64_t m = exact_root(len, t);
      if (!m || m < 2) continue;
      const std::uint64_t e = exact_root(den, t);
      if (!e) continue;
      len = m;
      den = e;
      reduced = true;
      break;
    }
  }
  return std::log(static_cast<double>(len)) /
         (std::log(static_cast<double>(len)) - std::log(static_cast<double>(den)));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite:
      return "Finite";
    case Verdict::DiscreteInfinite:
      return "DiscreteInfinite";
    case Verdict::PartlyContinuous:
      return "PartlyContinuous";
  }
  return "?";
}

AcBounds binary_formula(const Substitution& theta) {
  if (theta.alphabet_size() != 2)
    throw PreconditionError("binary_formula requires a two-letter alphabet");
  const std::size_t len = theta.length();
  std::uint64_t agree = 0;
  for (std::size_t j = 0; j < len; ++j)
    if (theta.images[0][j] == theta.images[1][j]) ++agree;
  const std::uint64_t differing = len - agree;  // |θ|_*
  if (differing == 0)
    throw PreconditionError("|θ|_* = 0: images are equal (finite subshift)");
  if (differing == len)
    throw PreconditionError(
        "|θ|_* = |θ|: no order-1 coincidence (partly continuous spectrum)");

  AcBounds bounds;
  const double value = log_dimension_value(len, differing);
  bounds.lower = bounds.upper = value;
  bounds.exact = value;
  BoundProvenance prov{"binary closed formula", 1, len, agree};
  bounds.lower_provenance = prov;
  bounds.upper_provenance = prov;
  return bounds;
}

AcBounds general_bounds(const AgreementStats& stats) {
  const std::uint64_t len = stats.power_length;
  if (stats.C >= len)
    throw PreconditionError("C(Θ) = |Θ|: substitution is not one-to-one");
  if (stats.c == 0)
    throw PreconditionError("c(Θ) = 0: Θ is not a contraction");

  AcBounds bounds;
  bounds.lower = log_dimension_value(len, len - stats.C);
  bounds.upper = log_dimension_value(len, len - stats.c);
  bounds.lower_provenance =
      BoundProvenance{"general estimates (lower, from C)", stats.k, len, stats.C};
  bounds.upper_provenance =
      BoundProvenance{"general estimates (upper, from c)", stats.k, len, stats.c};
  if (stats.c == stats.C) bounds.exact = bounds.lower;
  return bounds;
}

AcBounds refine_bounds(const Substitution& theta_injective, unsigned k0,
                       std::uint64_t budget) {
  if (budget == 0) budget = std::uint64_t{1} << 48;
  const std::uint64_t len = theta_injective.length();
  if (k0 < 1) throw PreconditionError("coincidence order must be >= 1");

  std::uint64_t power_len_k0 = 1;
  for (unsigned i = 0; i < k0; ++i) {
    if (power_len_k0 > budget / len)
      throw PreconditionError("budget below the minimal coincidence order");
    power_len_k0 *= len;
  }

  AcBounds best;
  best.lower = 0.0;
  std::uint64_t power_len = 1;
  for (unsigned m = 1;; ++m) {
    // |θ|^{m·k0} ≤ budget?
    if (power_len > budget / power_len_k0) break;
    power_len *= power_len_k0;
    const auto stats = agreement_stats(theta_injective, m * k0);
    const AcBounds step = general_bounds(stats);
    if (step.lower > best.lower) {
      best.lower = step.lower;
      best.lower_provenance = step.lower_provenance;
    }
    if (step.upper < best.upper) {
      best.upper = step.upper;
      best.upper_provenance = step.upper_provenance;
    }
    if (stats.c == stats.C) {
      // Exactness decided on integers, never on float equality.
      best.lower = best.upper = *step.exact;
      best.exact = step.exact;
      best.lower_provenance = step.lower_provenance;
      best.upper_provenance = step.upper_provenance;
      break;
    }
  }
  if (!best.lower_provenance)
    throw PreconditionError("refinement budget admits no power");
  return best;
}

}  // namespace substdim
