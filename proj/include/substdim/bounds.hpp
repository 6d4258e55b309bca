#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "substdim/classify_types.hpp"
#include "substdim/spectral.hpp"
#include "substdim/types.hpp"

namespace substdim {

/// log(len) / (log(len) − log(den)) with the pair (len, den) first reduced to
/// its smallest common integer root, so that algebraically equal values from
/// different powers compute to bit-identical doubles. Requires 1 ≤ den < len,
/// or den == 0 for the value 1.
double log_dimension_value(std::uint64_t len, std::uint64_t den);

/// Exact ac for an infinite binary substitution with an order-1 coincidence:
/// ac = log|θ| / (log|θ| − log|θ|_*), |θ|_* the number of differing positions.
AcBounds binary_formula(const Substitution& theta);

/// The general estimates for a one-to-one Θ with coincidence:
/// lower from C(Θ), upper from c(Θ), exact when c = C.
AcBounds general_bounds(const AgreementStats& stats);

/// Evaluates general_bounds at Θ = θ'^{m·k0} for m = 1, 2, … while
/// |θ'|^{m·k0} stays within the budget, and keeps the componentwise best.
/// budget is the cap on |θ'|^power; 0 selects the default 2^48.
AcBounds refine_bounds(const Substitution& theta_injective, unsigned k0,
                       std::uint64_t budget = 0);

}  // namespace substdim
