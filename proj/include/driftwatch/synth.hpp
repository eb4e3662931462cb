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

// Synthetic embedding generation: sequences with growing location shift
// stand in for evolving attack families, and distribution interpolation
// stands in for the drift reduction that detector fine-tuning produces.
// Everything is reproducible: identical spec + seed gives bitwise-identical
// output.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "driftwatch/drift_engine.hpp"

namespace driftwatch {

enum class SynthFamily : std::uint8_t {
  Gaussian = 0,
  GaussianMixture = 1,
};

struct SynthSpec {
  std::size_t dim = 1;
  std::size_t count = 1;
  SynthFamily family = SynthFamily::Gaussian;
  double location_shift = 0.0;
  double scale_factor = 1.0;
  // Mixture components sit 3 * scale_factor apart starting at
  // location_shift; empty means two equal components.
  std::vector<double> mixture_weights;
  std::uint64_t seed = 0;

  void validate() const;
};

// Gaussian family: every dimension i.i.d. Normal(location_shift,
// scale_factor^2). The label records the shift.
EmbeddingSet generate(const SynthSpec& spec);

// One set per shift, each from an independently derived seed, so adding a
// shift never perturbs earlier sets.
std::vector<EmbeddingSet> evolve_sequence(const SynthSpec& base,
                                          std::span<const double> shifts);

// Resamples test.count rows with replacement, each taken from the
// reference with probability lambda and from the test set otherwise.
// lambda = 0 reproduces a resample of the test set, lambda = 1 a resample
// of the reference.
EmbeddingSet simulate_finetune(const EmbeddingSet& test,
                               const EmbeddingSet& reference, double lambda,
                               std::uint64_t seed);

}  // namespace driftwatch
