#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "substdim/language.hpp"
#include "substdim/spectral.hpp"

namespace substdim {

struct BoundProvenance {
  std::string theorem;
  unsigned power = 0;          // the power of the reduced substitution used
  std::uint64_t power_length = 0;
  std::uint64_t agreement = 0;  // c or C at that power
};

struct AcBounds {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::optional<double> exact;
  std::optional<BoundProvenance> lower_provenance;
  std::optional<BoundProvenance> upper_provenance;
};

enum class Verdict { Finite, DiscreteInfinite, PartlyContinuous };

std::string to_string(Verdict v);

struct ClassifyConfig {
  std::size_t finiteness_cutoff = 0;   // 0: default 4·|A|²·|θ|²
  std::uint64_t power_budget = 0;      // cap on |θ'|^k; 0: default 2^48
  HeightConfig height_config = {};
};

struct PipelineTrace {
  FinitenessVerdict finiteness;
  bool infinite_presumed = false;  // finiteness was only presumed, not certified
  std::optional<HeightInfo> height;
  std::optional<std::size_t> pure_base_alphabet;   // |B|
  bool pure_base_identity = true;
  std::optional<std::size_t> reduced_alphabet;     // |A'|
  bool reduction_changed = false;
  std::optional<unsigned> coincidence_order;       // chosen k
  std::optional<double> binary_formula_value;      // binary shortcut cross-check
};

struct ClassificationReport {
  Verdict verdict = Verdict::Finite;
  AcBounds bounds;  // exact 0 for Finite, +inf for PartlyContinuous
  std::optional<FinitenessVerdict> finiteness_certificate;
  std::optional<CoincidenceCertificate> coincidence_certificate;
  std::optional<ExhaustionProof> exhaustion_proof;
  // The substitution the coincidence search ran on (pure base after
  // injective reduction); needed to replay certificates.
  std::optional<Substitution> reduced_substitution;
  PipelineTrace trace;
};

}  // namespace substdim
