#include "substdim/classify.hpp"

#include <cmath>
#include <limits>

#include "substdim/errors.hpp"

namespace substdim {

ClassificationReport classify(const Substitution& theta,
                              const ClassifyConfig& config) {
  if (!theta.constant_length())
    throw PreconditionError("classify requires a constant-length substitution");
  if (!is_primitive(theta).primitive)
    throw PreconditionError("classify requires a primitive substitution");

  ClassificationReport report;
  report.trace.finiteness = is_finite_subshift(theta, config.finiteness_cutoff);
  if (report.trace.finiteness.certified_finite) {
    report.verdict = Verdict::Finite;
    report.bounds.lower = report.bounds.upper = 0.0;
    report.bounds.exact = 0.0;
    report.finiteness_certificate = report.trace.finiteness;
    return report;
  }
  report.trace.infinite_presumed = true;

  const bool binary = theta.alphabet_size() == 2;
  Substitution reduced;
  if (binary) {
    // Binary infinite substitutions are pure and one-to-one, so the purity
    // analysis is skipped and the subset search runs on θ directly.
    const auto red = injective_reduction(theta);
    reduced = red.reduced;
    report.trace.reduction_changed = red.changed;
    report.trace.reduced_alphabet = reduced.alphabet_size();
  } else {
    const HeightInfo hi = height(theta, config.height_config);
    report.trace.height = hi;
    const PureBase pb = pure_base(theta, hi, config.height_config);
    report.trace.pure_base_alphabet = pb.eta.alphabet_size();
    report.trace.pure_base_identity = pb.identity;
    const auto red = injective_reduction(pb.eta);
    reduced = red.reduced;
    report.trace.reduction_changed = red.changed;
    report.trace.reduced_alphabet = reduced.alphabet_size();
  }
  report.reduced_substitution = reduced;

  const CoincidenceResult co = find_coincidence(reduced);
  if (!co.has_coincidence()) {
    report.verdict = Verdict::PartlyContinuous;
    report.bounds.lower = report.bounds.upper =
        std::numeric_limits<double>::infinity();
    report.bounds.exact = report.bounds.upper;
    report.exhaustion_proof = co.exhaustion;
  } else {
    report.verdict = Verdict::DiscreteInfinite;
    report.trace.coincidence_order = co.certificate->k;
    report.coincidence_certificate = co.certificate;
    report.bounds =
        refine_bounds(reduced, co.certificate->k, config.power_budget);
  }

  if (binary) {
    std::uint64_t agree = 0;
    for (std::size_t j = 0; j < theta.length(); ++j)
      if (theta.images[0][j] == theta.images[1][j]) ++agree;
    if (agree > 0) {
      const AcBounds bf = binary_formula(theta);
      report.trace.binary_formula_value = bf.exact;
      if (report.verdict != Verdict::DiscreteInfinite ||
          std::abs(*bf.exact - *report.bounds.exact) > 1e-12)
        throw InternalError("binary formula disagrees with refined bounds for " +
                            format_rules(theta));
    } else if (report.verdict != Verdict::PartlyContinuous) {
      throw InternalError("binary substitution without order-1 coincidence "
                          "should be partly continuous: " +
                          format_rules(theta));
    }
  }
  return report;
}

}  // namespace substdim
