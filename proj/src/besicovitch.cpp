#include "substdim/besicovitch.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "substdim/errors.hpp"
#include "substdim/language.hpp"

namespace substdim {

namespace {

unsigned resolve_threads(unsigned configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("SUBSTDIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

std::size_t count_diffs(const std::uint8_t* a, const std::uint8_t* b,
                        std::size_t n) {
  std::size_t cnt = 0;
  for (std::size_t k = 0; k < n; ++k) cnt += a[k] != b[k];
  return cnt;
}

}  // namespace

OrbitSample sample_orbit(const Substitution& theta, std::size_t count,
                         std::size_t radius) {
  if (theta.alphabet_size() > 255)
    throw PreconditionError("alphabet too large for orbit sampling");
  const std::size_t n = radius;
  // x_{[−2n,2n)}, trimmed to x_{[−n,2n)}.
  const Word wide = periodic_point_prefix(theta, 2 * n);
  OrbitSample sample;
  sample.radius = n;
  sample.track.assign(wide.begin() + static_cast<std::ptrdiff_t>(n), wide.end());

  const std::size_t q = minimal_period(
      Word(wide.begin(), wide.end()));  // period of the materialized stretch
  if (2 * q <= n) {
    // Finite subshift: only q distinct shifts exist.
    const std::size_t keep = std::min(count, q);
    for (std::size_t t = 0; t < keep; ++t) sample.offsets.push_back(t);
    sample.truncated = keep < count;
    return sample;
  }

  // Consecutive shifts cover every residue class mod ℓ^m for ℓ^m ≤ count,
  // which is what separates points of these (near-Toeplitz) systems.
  const std::size_t keep = std::min(count, n);
  for (std::size_t t = 0; t < keep; ++t) sample.offsets.push_back(t);
  sample.truncated = keep < count;
  return sample;
}

DisagreementEstimate d_delta_estimate(const OrbitSample& sample, std::size_t i,
                                      std::size_t j, double delta, double beta) {
  if (delta <= 0.0 || delta > 1.0)
    throw PreconditionError("delta must lie in (0,1]");
  const std::size_t n = sample.radius;
  DisagreementEstimate est;
  est.window = n;
  est.delta = delta;

  std::vector<std::uint8_t> hit(n, 0);
  std::size_t valid = n;
  if (delta == 1.0) {
    const std::uint8_t* a = sample.forward(i);
    const std::uint8_t* b = sample.forward(j);
    for (std::size_t k = 0; k < n; ++k) hit[k] = a[k] != b[k];
  } else {
    const auto r = static_cast<std::size_t>(
        std::ceil(std::log(1.0 / delta) / std::log(beta)));
    const std::size_t ti = sample.offsets[i], tj = sample.offsets[j];
    const std::uint8_t* base = sample.track.data() + sample.radius;
    valid = 0;
    for (std::size_t k = 0; k < n; ++k) {
      // Positions whose neighborhood exceeds the track are dropped entirely.
      if (std::max(ti, tj) + k + r >= 2 * n) {
        hit[k] = 2;  // marker: excluded
        continue;
      }
      ++valid;
      bool disagree = false;
      for (std::ptrdiff_t d = -static_cast<std::ptrdiff_t>(r);
           d <= static_cast<std::ptrdiff_t>(r) && !disagree; ++d) {
        const std::ptrdiff_t ka = static_cast<std::ptrdiff_t>(ti + k) + d;
        const std::ptrdiff_t kb = static_cast<std::ptrdiff_t>(tj + k) + d;
        if (ka < -static_cast<std::ptrdiff_t>(n) ||
            kb < -static_cast<std::ptrdiff_t>(n))
          continue;
        if (base[ka] != base[kb]) disagree = true;
      }
      hit[k] = disagree ? 1 : 0;
    }
  }

  std::size_t total = 0;
  for (std::size_t k = 0; k < n; ++k) total += hit[k] == 1;
  est.value = valid ? static_cast<double>(total) / static_cast<double>(valid) : 0.0;

  // limsup proxy: max of averages over trailing windows of halving length.
  est.suffix_max = est.value;
  for (std::size_t m = n / 2; m >= 1024 && m >= 1; m /= 2) {
    std::size_t cnt = 0, ok = 0;
    for (std::size_t k = n - m; k < n; ++k) {
      if (hit[k] == 2) continue;
      ++ok;
      cnt += hit[k] == 1;
    }
    if (ok)
      est.suffix_max = std::max(
          est.suffix_max, static_cast<double>(cnt) / static_cast<double>(ok));
    if (m < 2048) break;
  }
  return est;
}

double d_B_estimate(const OrbitSample& sample, std::size_t i, std::size_t j,
                    double beta) {
  const std::size_t n = sample.radius;
  const std::size_t ti = sample.offsets[i], tj = sample.offsets[j];
  const std::uint8_t* base = sample.track.data() + sample.radius;
  const std::ptrdiff_t lo = -static_cast<std::ptrdiff_t>(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // d_β(σᵏx, σᵏy) = β^(−m) with m the distance to the nearest disagreement.
    double value = 0.0;
    for (std::ptrdiff_t d = 0; d <= 40; ++d) {
      const std::ptrdiff_t ka = static_cast<std::ptrdiff_t>(ti + k);
      const std::ptrdiff_t kb = static_cast<std::ptrdiff_t>(tj + k);
      const bool right_ok = static_cast<std::size_t>(ka + d) < 2 * n &&
                            static_cast<std::size_t>(kb + d) < 2 * n;
      const bool left_ok = ka - d >= lo && kb - d >= lo;
      if (!right_ok && !left_ok) break;
      if ((right_ok && base[ka + d] != base[kb + d]) ||
          (left_ok && base[ka - d] != base[kb - d])) {
        value = std::pow(beta, -static_cast<double>(d));
        break;
      }
    }
    sum += value;
  }
  return sum / static_cast<double>(n);
}

double DistanceMatrix::max_drift() const {
  double drift = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i)
    drift = std::max(drift, std::abs(full[i] - half[i]));
  return drift;
}

DistanceMatrix pairwise_d1(const OrbitSample& sample, unsigned threads) {
  const std::size_t m = sample.count();
  const std::size_t n = sample.radius;
  DistanceMatrix mat;
  mat.count = m;
  mat.full.assign(m * m, 0.0);
  mat.half.assign(m * m, 0.0);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto [i, j] = pairs[p];
      const std::uint8_t* a = sample.forward(i);
      const std::uint8_t* b = sample.forward(j);
      const std::size_t c1 = count_diffs(a, b, n / 2);
      const std::size_t c2 = count_diffs(a + n / 2, b + n / 2, n - n / 2);
      const double full = static_cast<double>(c1 + c2) / static_cast<double>(n);
      const double half =
          n / 2 ? static_cast<double>(c1) / static_cast<double>(n / 2) : 0.0;
      mat.full[i * m + j] = mat.full[j * m + i] = full;
      mat.half[i * m + j] = mat.half[j * m + i] = half;
    }
  };

  const unsigned nthreads =
      std::min<unsigned>(resolve_threads(threads),
                         std::max<std::size_t>(pairs.size() / 64, 1));
  if (nthreads <= 1) {
    work(0, pairs.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (pairs.size() + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(pairs.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return mat;
}

std::vector<double> geometric_nu_grid(double nu_max, double nu_min,
                                      double ratio) {
  if (!(nu_max > nu_min) || !(ratio > 0.0 && ratio < 1.0) || nu_max > 1.0 ||
      nu_min <= 0.0)
    throw PreconditionError("invalid nu grid parameters");
  std::vector<double> grid;
  for (double nu = nu_max; nu >= nu_min * (1 - 1e-12); nu *= ratio)
    grid.push_back(nu);
  return grid;
}

SeparationTable sep_table(const DistanceMatrix& distances,
                          const std::vector<double>& nu_grid, double delta) {
  for (std::size_t t = 1; t < nu_grid.size(); ++t)
    if (!(nu_grid[t] < nu_grid[t - 1]))
      throw PreconditionError("nu grid must be strictly decreasing");

  SeparationTable table;
  table.delta = delta;
  table.nu_grid = nu_grid;

  // Nested greedy: the kept set at each ν seeds the next (smaller) ν, so the
  // sets are nested and counts monotone; each is still greedy-maximal.
  std::vector<std::size_t> kept;
  std::vector<bool> in_kept(distances.count, false);
  for (double nu : nu_grid) {
    for (std::size_t i = 0; i < distances.count; ++i) {
      if (in_kept[i]) continue;
      bool ok = true;
      for (std::size_t k : kept)
        if (distances.at(i, k) < nu) {
          ok = false;
          break;
        }
      if (ok) {
        kept.push_back(i);
        in_kept[i] = true;
      }
    }
    table.counts.push_back(kept.size());
  }
  return table;
}

DimensionFit empirical_ac(const Substitution& theta,
                          const EmpiricalConfig& config) {
  const OrbitSample sample =
      sample_orbit(theta, config.sample_count, config.window_radius);
  const DistanceMatrix distances = pairwise_d1(sample, config.threads);

  DimensionFit fit;
  fit.sample_truncated = sample.truncated;
  fit.stability_drift = distances.max_drift();
  if (fit.stability_drift > config.stability_threshold)
    throw UndecidedError(
        "D1 estimates not stable under window doubling (drift " +
        std::to_string(fit.stability_drift) + ")");

  const auto grid =
      geometric_nu_grid(config.nu_max, config.nu_min, config.nu_ratio);
  fit.table = sep_table(distances, grid, config.delta);

  // Interior of the grid: drop the extreme ν on both ends, and drop the
  // saturated tail where the count has hit the sample budget (those rows
  // measure the budget, not the geometry).
  if (fit.table.nu_grid.size() < 5)
    throw PreconditionError("nu grid too small for a dimension fit");
  const std::size_t lo = 1;
  std::size_t hi = fit.table.nu_grid.size() - 1;
  const std::size_t budget = sample.count();
  while (hi > lo + 3 && fit.table.counts[hi - 1] >= budget) --hi;
  const std::size_t used = hi - lo;
  if (used < 3) throw PreconditionError("fewer than 3 usable grid points");

  Eigen::MatrixXd design(used, 2);
  Eigen::VectorXd response(used);
  for (std::size_t t = 0; t < used; ++t) {
    design(static_cast<Eigen::Index>(t), 0) = -std::log(fit.table.nu_grid[lo + t]);
    design(static_cast<Eigen::Index>(t), 1) = 1.0;
    response(static_cast<Eigen::Index>(t)) =
        std::log(static_cast<double>(fit.table.counts[lo + t]));
  }
  const Eigen::Vector2d beta =
      design.colPivHouseholderQr().solve(response);
  fit.slope = beta(0);
  fit.intercept = beta(1);
  fit.points_used = used;
  fit.nu_lo = fit.table.nu_grid[hi - 1];
  fit.nu_hi = fit.table.nu_grid[lo];

  const double mean = response.mean();
  const double ss_tot = (response.array() - mean).square().sum();
  const double ss_res = (design * beta - response).squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

IfsCheckReport ifs_checks(const Substitution& theta, const OrbitSample& sample) {
  const std::size_t n = sample.radius;
  const std::size_t len = theta.length();
  IfsCheckReport report;
  report.pieces = len;

  // Agreement counts give the exact contraction envelope at k = 1.
  std::uint64_t c = len, C = 0;
  for (Symbol a = 0; a < theta.alphabet_size(); ++a)
    for (Symbol b = a + 1; b < theta.alphabet_size(); ++b) {
      std::uint64_t agree = 0;
      for (std::size_t jj = 0; jj < len; ++jj)
        if (theta.images[a][jj] == theta.images[b][jj]) ++agree;
      c = std::min(c, agree);
      C = std::max(C, agree);
    }
  if (theta.alphabet_size() < 2) C = c = len;

  const double ratio_lo = static_cast<double>(len - C) / static_cast<double>(len);
  const double ratio_hi = static_cast<double>(len - c) / static_cast<double>(len);
  const double tol = 4.0 / static_cast<double>(n);

  // (a) contraction sandwich on sampled pairs.
  const std::size_t m = std::min<std::size_t>(sample.count(), 24);
  report.contraction_lower_margin = report.contraction_upper_margin = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    Word wi(sample.forward(i), sample.forward(i) + n);
    const Word img_i = substdim::apply(theta, wi);
    for (std::size_t j = i + 1; j < m; ++j) {
      Word wj(sample.forward(j), sample.forward(j) + n);
      const Word img_j = substdim::apply(theta, wj);
      std::size_t d_base = 0;
      for (std::size_t k = 0; k < n; ++k) d_base += wi[k] != wj[k];
      std::size_t d_img = 0;
      for (std::size_t k = 0; k < img_i.size(); ++k) d_img += img_i[k] != img_j[k];
      const double dist = static_cast<double>(d_base) / static_cast<double>(n);
      const double dist_img =
          static_cast<double>(d_img) / static_cast<double>(img_i.size());
      ++report.contraction_pairs;
      const double lo_margin = dist_img - ratio_lo * dist;
      const double hi_margin = ratio_hi * dist - dist_img;
      report.contraction_lower_margin =
          std::min(report.contraction_lower_margin, lo_margin);
      report.contraction_upper_margin =
          std::min(report.contraction_upper_margin, hi_margin);
      if (lo_margin < -tol || hi_margin < -tol) ++report.contraction_violations;
    }
  }

  // (b)+(c) piece geometry on shifts σ^{ℓt+i}(x): these are exactly the
  // σⁱ∘θ images of sampled points.
  std::vector<std::size_t> base_offsets;
  for (std::size_t t : sample.offsets)
    if (len * t + len <= n && base_offsets.size() < 16) base_offsets.push_back(t);
  if (base_offsets.empty()) base_offsets.push_back(0);

  struct PiecePoint {
    std::size_t shift;
    std::size_t piece;
  };
  std::vector<PiecePoint> points;
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t t : base_offsets) points.push_back({len * t + i, i});

  const std::uint8_t* base = sample.track.data() + sample.radius;
  auto shift_dist = [&](std::size_t s1, std::size_t s2) {
    return static_cast<double>(count_diffs(base + s1, base + s2, n)) /
           static_cast<double>(n);
  };

  report.ssc_gap = 1.0;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t q = p + 1; q < points.size(); ++q)
      if (points[p].piece != points[q].piece)
        report.ssc_gap =
            std::min(report.ssc_gap, shift_dist(points[p].shift, points[q].shift));

  const double member_tol = std::max(report.ssc_gap / 2.0, tol);
  report.attractor_points = points.size();
  for (const auto& pt : points) {
    std::size_t near_pieces = 0;
    for (std::size_t i = 0; i < len; ++i) {
      double best = 1.0;
      for (const auto& other : points)
        if (other.piece == i)
          best = std::min(best, shift_dist(pt.shift, other.shift));
      if (best <= member_tol) ++near_pieces;
    }
    if (near_pieces != 1) ++report.attractor_ambiguous;
  }
  report.degenerate = sample.truncated || report.ssc_gap <= tol;
  return report;
}

}  // namespace substdim
