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

#include "driftwatch/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "driftwatch/format.hpp"
#include "driftwatch/rng.hpp"

namespace driftwatch {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) {
    throw std::invalid_argument(message);
  }
}

constexpr double kComponentSpacingSigmas = 3.0;

}  // namespace

void SynthSpec::validate() const {
  require(dim >= 1, "SynthSpec: dim must be >= 1");
  require(count >= 1, "SynthSpec: count must be >= 1");
  require(std::isfinite(location_shift), "SynthSpec: non-finite shift");
  require(std::isfinite(scale_factor) && scale_factor > 0.0,
          "SynthSpec: scale_factor must be > 0");
  if (!mixture_weights.empty()) {
    double sum = 0.0;
    for (double w : mixture_weights) {
      require(w >= 0.0, "SynthSpec: negative mixture weight");
      sum += w;
    }
    require(std::abs(sum - 1.0) <= 1e-9,
            "SynthSpec: mixture weights must sum to 1");
  }
}

EmbeddingSet generate(const SynthSpec& spec) {
  spec.validate();

  std::mt19937_64 engine(spec.seed);
  rng::NormalSampler normal(engine);
  std::vector<double> data(spec.count * spec.dim);

  if (spec.family == SynthFamily::Gaussian) {
    for (double& value : data) {
      value = spec.location_shift + spec.scale_factor * normal.next();
    }
  } else {
    std::vector<double> weights = spec.mixture_weights;
    if (weights.empty()) {
      weights = {0.5, 0.5};
    }
    const double spacing = kComponentSpacingSigmas * spec.scale_factor;
    for (double& value : data) {
      const double u = rng::uniform_unit(engine);
      double cumulative = 0.0;
      std::size_t component = weights.size() - 1;
      for (std::size_t k = 0; k < weights.size(); ++k) {
        cumulative += weights[k];
        if (u < cumulative) {
          component = k;
          break;
        }
      }
      const double center =
          spec.location_shift + static_cast<double>(component) * spacing;
      value = center + spec.scale_factor * normal.next();
    }
  }

  return EmbeddingSet(spec.dim, std::move(data),
                      "shift=" + format_double(spec.location_shift));
}

std::vector<EmbeddingSet> evolve_sequence(const SynthSpec& base,
                                          std::span<const double> shifts) {
  require(!shifts.empty(), "evolve_sequence: empty shift list");
  std::vector<EmbeddingSet> sets;
  sets.reserve(shifts.size());
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    SynthSpec spec = base;
    spec.location_shift = shifts[k];
    spec.seed = rng::derive_seed(base.seed, k);
    sets.push_back(generate(spec));
  }
  return sets;
}

EmbeddingSet simulate_finetune(const EmbeddingSet& test,
                               const EmbeddingSet& reference, double lambda,
                               std::uint64_t seed) {
  require(test.dim() == reference.dim(),
          "simulate_finetune: test dim " + std::to_string(test.dim()) +
              " does not match reference dim " +
              std::to_string(reference.dim()));
  require(lambda >= 0.0 && lambda <= 1.0,
          "simulate_finetune: lambda must lie in [0, 1]");

  std::mt19937_64 engine(seed);
  const std::size_t dim = test.dim();
  const std::size_t rows = test.row_count();
  std::vector<double> data(rows * dim);
  for (std::size_t r = 0; r < rows; ++r) {
    const bool from_reference = rng::uniform_unit(engine) < lambda;
    const EmbeddingSet& source = from_reference ? reference : test;
    const std::size_t pick =
        static_cast<std::size_t>(rng::uniform_below(engine, source.row_count()));
    const auto row = source.row(pick);
    std::copy(row.begin(), row.end(),
              data.begin() + static_cast<std::ptrdiff_t>(r * dim));
  }
  return EmbeddingSet(dim, std::move(data),
                      test.label() + "|finetune=" + format_double(lambda));
}

}  // namespace driftwatch
