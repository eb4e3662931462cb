/*
 * Copyright 2026 The driftwatch authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Test-side reference implementations ("oracles"). Each one computes the
// same quantity as the library by a structurally different route — brute
// force, naive counting, alternative formulas — so agreement is meaningful
// evidence rather than the same code evaluated twice.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracles {

// Uniform in [0, 1) from the top 53 bits; fixed mapping so fixtures are
// reproducible everywhere.
inline double uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline std::vector<double> uniform_vector(std::mt19937_64& engine,
                                          std::size_t n, double lo,
                                          double hi) {
  std::vector<double> out(n);
  for (double& v : out) {
    v = lo + (hi - lo) * uniform(engine);
  }
  return out;
}

// Wasserstein-1 between two empirical distributions by explicit optimal
// transport: expand both samples to a common atom count (the LCM), where
// the optimal 1D coupling is simply the sorted pairing, and average the
// pairwise moves. Exact for equal-weight empirical measures.
inline double wasserstein1_transport(std::vector<double> a,
                                     std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t atoms = std::lcm(a.size(), b.size());
  std::vector<double> ea;
  std::vector<double> eb;
  ea.reserve(atoms);
  eb.reserve(atoms);
  for (double v : a) {
    ea.insert(ea.end(), atoms / a.size(), v);
  }
  for (double v : b) {
    eb.insert(eb.end(), atoms / b.size(), v);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    total += std::abs(ea[i] - eb[i]);
  }
  return total / static_cast<double>(atoms);
}

// K-S statistic by exhaustive scan: evaluate both empirical CDFs at every
// sample value of either side with naive counting.
inline double ks_exhaustive(const std::vector<double>& a,
                            const std::vector<double>& b) {
  std::vector<double> candidates(a);
  candidates.insert(candidates.end(), b.begin(), b.end());
  double max_gap = 0.0;
  for (double x : candidates) {
    std::size_t count_a = 0;
    for (double v : a) {
      count_a += v <= x ? 1 : 0;
    }
    std::size_t count_b = 0;
    for (double v : b) {
      count_b += v <= x ? 1 : 0;
    }
    const double fa = static_cast<double>(count_a) / static_cast<double>(a.size());
    const double fb = static_cast<double>(count_b) / static_cast<double>(b.size());
    max_gap = std::max(max_gap, std::abs(fa - fb));
  }
  return max_gap;
}

// Direct KL evaluation via the log-difference form (the library divides
// inside the log), optionally smoothed the same way the spec defines it.
inline double kl_direct(const std::vector<double>& p,
                        const std::vector<double>& q, double smoothing) {
  const double n = static_cast<double>(p.size());
  double p_sum = n * smoothing;
  double q_sum = n * smoothing;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p_sum += p[i];
    q_sum += q[i];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double fp = (p[i] + smoothing) / p_sum;
    const double fq = (q[i] + smoothing) / q_sum;
    if (fp > 0.0) {
      total += fp * (std::log(fp) - std::log(fq));
    }
  }
  return total;
}

// Empirical CDF by rank counting: (support value, count of samples <= it).
struct CdfPoints {
  std::vector<double> support;
  std::vector<double> cumulative;
};

inline CdfPoints cdf_rank_count(const std::vector<double>& samples) {
  std::vector<double> support(samples);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  CdfPoints out;
  out.support = support;
  for (double s : support) {
    std::size_t count = 0;
    for (double v : samples) {
      count += v <= s ? 1 : 0;
    }
    out.cumulative.push_back(static_cast<double>(count) /
                             static_cast<double>(samples.size()));
  }
  return out;
}

// Histogram counting with the library's assignment rule (clamped
// truncation); exercises mass normalization and downstream formulas
// independently of the library's counting loop.
inline std::vector<double> histogram_mass(const std::vector<double>& samples,
                                          std::size_t bins, double lo,
                                          double hi) {
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double x : samples) {
    std::size_t idx;
    if (x < lo) {
      idx = 0;
    } else if (x > hi) {
      idx = bins - 1;
    } else {
      idx = std::min<std::size_t>(
          static_cast<std::size_t>((x - lo) / width), bins - 1);
    }
    ++counts[idx];
  }
  std::vector<double> mass(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    mass[b] = static_cast<double>(counts[b]) /
              static_cast<double>(samples.size());
  }
  return mass;
}

// EER by exhaustive threshold evaluation with naive counting at every
// candidate, closed by the reject-everything endpoint, interpolating where
// FAR - FRR changes sign.
inline double eer_exhaustive(const std::vector<double>& fake,
                             const std::vector<double>& real) {
  std::vector<double> thresholds(fake);
  thresholds.insert(thresholds.end(), real.begin(), real.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  double prev_far = 1.0;
  double prev_frr = 0.0;
  for (std::size_t k = 0; k <= thresholds.size(); ++k) {
    double far;
    double frr;
    if (k < thresholds.size()) {
      const double t = thresholds[k];
      std::size_t fake_accepted = 0;
      for (double v : fake) {
        fake_accepted += v >= t ? 1 : 0;
      }
      std::size_t real_rejected = 0;
      for (double v : real) {
        real_rejected += v < t ? 1 : 0;
      }
      far = static_cast<double>(fake_accepted) /
            static_cast<double>(fake.size());
      frr = static_cast<double>(real_rejected) /
            static_cast<double>(real.size());
    } else {
      far = 0.0;
      frr = 1.0;
    }
    const double diff = far - frr;
    if (diff <= 0.0) {
      if (diff == 0.0) {
        return far;
      }
      const double prev_diff = prev_far - prev_frr;
      const double s = prev_diff / (prev_diff - diff);
      return prev_far + s * (far - prev_far);
    }
    prev_far = far;
    prev_frr = frr;
  }
  return 1.0;
}

// Pearson correlation via raw moments (the library centers first).
inline double pearson_raw_moments(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double sa = 0.0;
  double sb = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    saa += a[i] * a[i];
    sbb += b[i] * b[i];
    sab += a[i] * b[i];
  }
  const double cov = sab - sa * sb / n;
  const double var_a = saa - sa * sa / n;
  const double var_b = sbb - sb * sb / n;
  return cov / std::sqrt(var_a * var_b);
}

// Random PMF with dyadic masses (integers over 256), so masses sum to
// exactly 1.0 in binary floating point and every mass is strictly positive.
inline std::vector<double> dyadic_pmf(std::mt19937_64& engine,
                                      std::size_t size) {
  std::vector<std::uint64_t> cuts;
  // size-1 distinct cut points inside (0, 256) carve 256 grains into
  // `size` strictly positive integer parts.
  while (cuts.size() < size - 1) {
    const std::uint64_t c = 1 + engine() % 255;
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) {
      cuts.push_back(c);
    }
  }
  cuts.push_back(0);
  cuts.push_back(256);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> mass(size);
  for (std::size_t i = 0; i < size; ++i) {
    mass[i] = static_cast<double>(cuts[i + 1] - cuts[i]) / 256.0;
  }
  return mass;
}

}  // namespace oracles
