#pragma once

#include "substdim/bounds.hpp"
#include "substdim/classify_types.hpp"
#include "substdim/types.hpp"

namespace substdim {

/// The full trichotomy pipeline: finiteness test, pure base, injective
/// reduction, coincidence search, bound refinement. Throws PreconditionError
/// for non-primitive or non-constant-length input.
ClassificationReport classify(const Substitution& theta,
                              const ClassifyConfig& config = {});

}  // namespace substdim
