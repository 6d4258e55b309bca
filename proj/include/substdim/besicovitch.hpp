#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "substdim/types.hpp"

namespace substdim {

struct EmpiricalConfig {
  std::size_t window_radius = std::size_t{1} << 16;  // n
  std::size_t sample_count = 512;
  double nu_max = 0.5;
  double nu_min = 1.0 / 512;          // 2⁻⁹
  double nu_ratio = 0.70710678118654752440;  // 2^(−1/2)
  double delta = 1.0;
  double beta = 2.0;                  // Cantor metric base for δ < 1 kernels
  double stability_threshold = 0.05;  // max D₁ drift under radius doubling
  unsigned threads = 0;               // 0: SUBSTDIM_THREADS or hardware
};

/// Windows x_{[−n,n)} of distinct shifts of the θ-periodic point. The track
/// holds x_{[−n,2n)} once; each sample is the window at shift offset t.
struct OrbitSample {
  std::vector<std::uint8_t> track;  // symbols of x_{[−n, 2n)}
  std::size_t radius = 0;           // n; track[radius + i] = x_i
  std::vector<std::size_t> offsets;  // shift offsets t ∈ [0, n)
  bool truncated = false;  // fewer distinct shifts than requested (finite X)

  std::size_t count() const { return offsets.size(); }
  const std::uint8_t* forward(std::size_t i) const {
    return track.data() + radius + offsets[i];
  }
};

/// `count` distinct shifts with Halton-style low-discrepancy offsets.
OrbitSample sample_orbit(const Substitution& theta, std::size_t count,
                         std::size_t radius);

struct DisagreementEstimate {
  double value = 0.0;          // plain finite-n average
  double suffix_max = 0.0;     // max over trailing half-windows (limsup proxy)
  std::size_t window = 0;
  double delta = 1.0;
};

/// Finite-n estimate of D_δ between two sample windows. For δ = 1 this is the
/// Hamming disagreement density of the forward windows; for δ < 1 a position
/// counts iff its Cantor-metric neighborhood disagrees, with edge positions
/// dropped from numerator and denominator alike.
DisagreementEstimate d_delta_estimate(const OrbitSample& sample, std::size_t i,
                                      std::size_t j, double delta,
                                      double beta = 2.0);

/// Finite-n Birkhoff average of d_β(σᵏx, σᵏy) over the forward window.
double d_B_estimate(const OrbitSample& sample, std::size_t i, std::size_t j,
                    double beta = 2.0);

/// Pairwise D₁ estimates at full radius and at half radius (for stability
/// diagnostics), row-major count×count, computed in parallel but
/// deterministically.
struct DistanceMatrix {
  std::size_t count = 0;
  std::vector<double> full;
  std::vector<double> half;
  double at(std::size_t i, std::size_t j) const { return full[i * count + j]; }
  double half_at(std::size_t i, std::size_t j) const { return half[i * count + j]; }
  double max_drift() const;  // max |full − half| over pairs
};

DistanceMatrix pairwise_d1(const OrbitSample& sample, unsigned threads = 0);

struct SeparationTable {
  double delta = 1.0;
  std::vector<double> nu_grid;       // strictly decreasing
  std::vector<std::size_t> counts;   // greedy-maximal ν-separated set sizes
};

/// Greedy scan in sample order: keep a point iff its D₁ to every kept point
/// is ≥ ν. Greedy maximality is a 2-approximation of maximum packing.
SeparationTable sep_table(const DistanceMatrix& distances,
                          const std::vector<double>& nu_grid, double delta = 1.0);

std::vector<double> geometric_nu_grid(double nu_max, double nu_min, double ratio);

struct DimensionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
  double nu_lo = 0.0, nu_hi = 0.0;   // interior grid range used by the fit
  double stability_drift = 0.0;      // observed max D₁ drift under doubling
  SeparationTable table;
  bool sample_truncated = false;
};

/// Least-squares fit of log Sep vs −log ν over the interior of the ν-grid;
/// the slope estimates ac = dim_B([X]). Enforces the window-doubling
/// stability threshold before fitting.
DimensionFit empirical_ac(const Substitution& theta,
                          const EmpiricalConfig& config = {});

struct IfsCheckReport {
  std::size_t pieces = 0;               // |θ|
  double contraction_lower_margin = 0;  // min over pairs of D(θx,θy) − lowbound
  double contraction_upper_margin = 0;  // min over pairs of highbound − D(θx,θy)
  std::size_t contraction_pairs = 0;
  std::size_t contraction_violations = 0;  // outside tolerance 4/n
  double ssc_gap = 0.0;         // min D₁ between points of distinct pieces
  std::size_t attractor_points = 0;
  std::size_t attractor_ambiguous = 0;  // points near more than one piece
  bool degenerate = false;      // pieces collapse (finite subshift)
};

/// Diagnostic checks of the IFS structure: the contraction sandwich, the
/// strong separation gap between pieces, and piece membership of samples.
IfsCheckReport ifs_checks(const Substitution& theta, const OrbitSample& sample);

}  // namespace substdim
