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

#include "driftwatch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace driftwatch {

namespace {

void check_scores(const std::vector<double>& scores, const char* which) {
  if (scores.empty()) {
    throw std::invalid_argument(std::string("eer: empty ") + which +
                                " score list");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw std::invalid_argument(std::string("eer: non-finite ") + which +
                                  " score at index " + std::to_string(i));
    }
  }
}

}  // namespace

double eer(const ScoreSet& scores) {
  check_scores(scores.fake_scores, "fake");
  check_scores(scores.real_scores, "real");

  std::vector<double> fake(scores.fake_scores);
  std::vector<double> real(scores.real_scores);
  std::sort(fake.begin(), fake.end());
  std::sort(real.begin(), real.end());
  const double n_fake = static_cast<double>(fake.size());
  const double n_real = static_cast<double>(real.size());

  std::vector<double> thresholds;
  thresholds.reserve(fake.size() + real.size());
  std::merge(fake.begin(), fake.end(), real.begin(), real.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  // At threshold t: accepted-as-real iff score >= t, so
  //   FAR(t) = #(fake >= t) / n_fake   (nonincreasing in t)
  //   FRR(t) = #(real <  t) / n_real   (nondecreasing in t)
  // FAR - FRR starts at 1 at the smallest score; one virtual
  // reject-everything operating point (FAR 0, FRR 1) closes the sweep so a
  // sign change always exists.
  double prev_far = 1.0;
  double prev_frr = 0.0;
  const std::size_t steps = thresholds.size() + 1;
  for (std::size_t k = 0; k < steps; ++k) {
    double far;
    double frr;
    if (k < thresholds.size()) {
      const double t = thresholds[k];
      const auto fake_below =
          std::lower_bound(fake.begin(), fake.end(), t) - fake.begin();
      const auto real_below =
          std::lower_bound(real.begin(), real.end(), t) - real.begin();
      far = (n_fake - static_cast<double>(fake_below)) / n_fake;
      frr = static_cast<double>(real_below) / n_real;
    } else {
      far = 0.0;
      frr = 1.0;
    }

    const double diff = far - frr;
    if (diff <= 0.0) {
      if (diff == 0.0) {
        return far;
      }
      // Interpolate on the segment between the previous operating point
      // and this one, in (FAR, FRR) space.
      const double prev_diff = prev_far - prev_frr;
      const double s = prev_diff / (prev_diff - diff);
      return prev_far + s * (far - prev_far);
    }
    prev_far = far;
    prev_frr = frr;
  }
  // Unreachable: the virtual endpoint has diff = -1.
  return 1.0;
}

double pooled_eer(std::span<const ScoreSet> groups) {
  if (groups.empty()) {
    throw std::invalid_argument("pooled_eer: empty group list");
  }
  ScoreSet pooled;
  for (const ScoreSet& group : groups) {
    pooled.fake_scores.insert(pooled.fake_scores.end(),
                              group.fake_scores.begin(),
                              group.fake_scores.end());
    pooled.real_scores.insert(pooled.real_scores.end(),
                              group.real_scores.begin(),
                              group.real_scores.end());
  }
  return eer(pooled);
}

}  // namespace driftwatch
