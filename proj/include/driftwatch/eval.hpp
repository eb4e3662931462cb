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

// Detection-performance evaluation: equal error rate from paired fake/real
// detector scores, and pooled EER across score groups.

#pragma once

#include <span>
#include <vector>

namespace driftwatch {

// Paired detector score lists. Convention: higher score = more likely
// real. A sample whose score equals the decision threshold counts as
// accepted-as-real. Both lists must be nonempty with finite values
// (checked by eer).
struct ScoreSet {
  std::vector<double> fake_scores;
  std::vector<double> real_scores;
};

// Equal error rate. Sweeps every candidate threshold (the merged score
// values plus a reject-everything endpoint), computing the
// false-acceptance rate (fake scored as real) and false-rejection rate
// (real scored as fake), and linearly interpolates between the two
// adjacent operating points where FAR - FRR changes sign. Interpolation
// happens in rate space, so the result is invariant under any strictly
// increasing transform of the scores. Range [0, 1]; values above 0.5
// indicate reversed polarity.
double eer(const ScoreSet& scores);

// EER of all groups pooled: fake and real scores concatenated across
// groups, then scored as one set.
double pooled_eer(std::span<const ScoreSet> groups);

}  // namespace driftwatch
