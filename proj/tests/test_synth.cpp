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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "driftwatch/synth.hpp"

using namespace driftwatch;

namespace {

bool near(double a, double b, double tolerance) {
  return std::abs(a - b) <= tolerance;
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

double variance_of(const std::vector<double>& values) {
  const double mean = mean_of(values);
  double sum = 0.0;
  for (double v : values) {
    sum += (v - mean) * (v - mean);
  }
  return sum / static_cast<double>(values.size());
}

std::vector<std::vector<double>> rows_of(const EmbeddingSet& set) {
  std::vector<std::vector<double>> rows;
  rows.reserve(set.row_count());
  for (std::size_t r = 0; r < set.row_count(); ++r) {
    const auto row = set.row(r);
    rows.emplace_back(row.begin(), row.end());
  }
  return rows;
}

bool all_rows_from(const EmbeddingSet& result, const EmbeddingSet& source) {
  const std::vector<std::vector<double>> pool = rows_of(source);
  for (const std::vector<double>& row : rows_of(result)) {
    if (std::find(pool.begin(), pool.end(), row) == pool.end()) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("generate is bitwise deterministic per spec and seed") {
  SynthSpec spec;
  spec.dim = 5;
  spec.count = 64;
  spec.location_shift = 0.3;
  spec.scale_factor = 1.5;
  spec.seed = 99;

  const EmbeddingSet a = generate(spec);
  const EmbeddingSet b = generate(spec);
  CHECK(a.data() == b.data());
  CHECK(a.label() == b.label());
  CHECK(a.row_count() == 64);
  CHECK(a.dim() == 5);

  spec.seed = 100;
  CHECK(generate(spec).data() != a.data());
}

TEST_CASE("generate handles the minimal one-by-one spec") {
  SynthSpec spec;  // dim = 1, count = 1
  const EmbeddingSet set = generate(spec);
  CHECK(set.row_count() == 1);
  CHECK(set.dim() == 1);
  CHECK(std::isfinite(set.at(0, 0)));
}

TEST_CASE("generate labels record the location shift") {
  SynthSpec spec;
  spec.location_shift = 0.25;
  CHECK(generate(spec).label() == "shift=0.25");
  spec.location_shift = 0.0;
  CHECK(generate(spec).label() == "shift=0");
}

TEST_CASE("gaussian samples track the requested moments") {
  SynthSpec spec;
  spec.dim = 4;
  spec.count = 10000;
  spec.location_shift = 0.7;
  spec.scale_factor = 1.0;
  spec.seed = 2026;
  const EmbeddingSet set = generate(spec);
  CHECK(near(mean_of(set.data()), 0.7, 0.05));
  CHECK(near(variance_of(set.data()), 1.0, 0.1));

  spec.scale_factor = 2.0;
  const EmbeddingSet wide = generate(spec);
  CHECK(near(variance_of(wide.data()), 4.0, 0.3));
}

TEST_CASE("mixture components sit three scaled sigmas apart") {
  SynthSpec spec;
  spec.dim = 1;
  spec.count = 20000;
  spec.family = SynthFamily::GaussianMixture;
  spec.location_shift = 1.0;
  spec.scale_factor = 1.0;
  spec.seed = 31;

  // Default weights are two equal components at shift and shift + 3.
  const EmbeddingSet both = generate(spec);
  CHECK(near(mean_of(both.data()), 1.0 + 1.5, 0.05));

  spec.mixture_weights = {1.0, 0.0};
  const EmbeddingSet first_only = generate(spec);
  CHECK(near(mean_of(first_only.data()), 1.0, 0.05));
  CHECK(near(variance_of(first_only.data()), 1.0, 0.1));

  spec.mixture_weights = {0.0, 1.0};
  const EmbeddingSet second_only = generate(spec);
  CHECK(near(mean_of(second_only.data()), 1.0 + 3.0, 0.05));
}

TEST_CASE("SynthSpec validation rejects malformed requests") {
  SynthSpec spec;
  spec.dim = 0;
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
  spec.dim = 1;
  spec.count = 0;
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
  spec.count = 1;
  spec.scale_factor = 0.0;
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
  spec.scale_factor = -1.0;
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
  spec.scale_factor = 1.0;
  spec.location_shift = std::nan("");
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
  spec.location_shift = 0.0;
  spec.family = SynthFamily::GaussianMixture;
  spec.mixture_weights = {0.5, -0.5, 1.0};
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
  spec.mixture_weights = {0.5, 0.4};
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
}

TEST_CASE("evolve_sequence derives an independent stream per shift") {
  SynthSpec base;
  base.dim = 3;
  base.count = 40;
  base.seed = 7;

  const std::vector<double> short_run{0.0, 0.1, 0.2};
  const std::vector<double> long_run{0.0, 0.1, 0.2, 0.3};
  const std::vector<EmbeddingSet> first = evolve_sequence(base, short_run);
  const std::vector<EmbeddingSet> second = evolve_sequence(base, long_run);

  REQUIRE(first.size() == 3);
  REQUIRE(second.size() == 4);
  // Appending a shift never perturbs earlier sets.
  for (std::size_t k = 0; k < first.size(); ++k) {
    CHECK(first[k].data() == second[k].data());
    CHECK(first[k].label() == second[k].label());
  }
  CHECK(second[0].label() == "shift=0");
  CHECK(second[1].label() == "shift=0.1");
  CHECK(second[3].label() == "shift=0.3");
  // Distinct derived seeds: even equal shifts would give different draws.
  CHECK(second[0].data() != second[1].data());

  CHECK_THROWS_AS(evolve_sequence(base, std::span<const double>{}),
                  std::invalid_argument);
}

TEST_CASE("simulate_finetune at the endpoints resamples one source only") {
  SynthSpec spec;
  spec.dim = 3;
  spec.count = 40;
  spec.seed = 21;
  const EmbeddingSet test = generate(spec);
  spec.location_shift = 5.0;
  spec.seed = 22;
  const EmbeddingSet reference = generate(spec);

  const EmbeddingSet pure_test = simulate_finetune(test, reference, 0.0, 3);
  CHECK(pure_test.row_count() == test.row_count());
  CHECK(all_rows_from(pure_test, test));
  CHECK_FALSE(all_rows_from(pure_test, reference));

  const EmbeddingSet pure_ref = simulate_finetune(test, reference, 1.0, 3);
  CHECK(pure_ref.row_count() == test.row_count());
  CHECK(all_rows_from(pure_ref, reference));
  CHECK_FALSE(all_rows_from(pure_ref, test));
}

TEST_CASE("simulate_finetune mixes both sources between the endpoints") {
  SynthSpec spec;
  spec.dim = 2;
  spec.count = 200;
  spec.seed = 51;
  const EmbeddingSet test = generate(spec);
  spec.location_shift = 8.0;
  spec.seed = 52;
  const EmbeddingSet reference = generate(spec);

  const EmbeddingSet mixed = simulate_finetune(test, reference, 0.5, 9);
  const std::vector<std::vector<double>> test_rows = rows_of(test);
  std::size_t from_test = 0;
  for (const std::vector<double>& row : rows_of(mixed)) {
    from_test += std::find(test_rows.begin(), test_rows.end(), row) !=
                         test_rows.end()
                     ? 1
                     : 0;
  }
  CHECK(from_test > 0);
  CHECK(from_test < mixed.row_count());

  // Deterministic per seed.
  const EmbeddingSet again = simulate_finetune(test, reference, 0.5, 9);
  CHECK(again.data() == mixed.data());
  CHECK(mixed.label() == test.label() + "|finetune=0.5");
}

TEST_CASE("simulate_finetune validates dimensions and lambda") {
  SynthSpec spec;
  spec.dim = 2;
  spec.count = 10;
  const EmbeddingSet test = generate(spec);
  spec.dim = 3;
  const EmbeddingSet reference = generate(spec);
  CHECK_THROWS_AS(simulate_finetune(test, reference, 0.5, 0),
                  std::invalid_argument);

  spec.dim = 2;
  const EmbeddingSet ok_ref = generate(spec);
  CHECK_THROWS_AS(simulate_finetune(test, ok_ref, -0.1, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_finetune(test, ok_ref, 1.1, 0),
                  std::invalid_argument);
}
