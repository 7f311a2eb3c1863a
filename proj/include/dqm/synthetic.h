//
// Copyright 2026 The dqmetrics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DQM_SYNTHETIC_H_
#define DQM_SYNTHETIC_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dqm/gtree.h"
#include "dqm/table.h"

namespace dqm {

// Source of synthetic "original" datasets resembling a fitted table.
class SyntheticGenerator {
 public:
  virtual ~SyntheticGenerator() = default;
  virtual const std::vector<ColumnSchema>& schema() const = 0;
  // Largest sample the generator serves (the size of its source).
  virtual size_t max_rows() const = 0;
  // Rows get ids 0..n-1. Fails when n exceeds max_rows().
  virtual absl::StatusOr<Table> Sample(size_t n, uint64_t seed) const = 0;
};

// Gaussian copula over every column. Numerical columns keep their empirical
// marginals (inverse ECDF); categorical columns map to consecutive intervals
// of the latent normal, ordered by frequency, so that categories take part
// in the correlation structure. Missing cells keep their per-column rate.
class CopulaGenerator : public SyntheticGenerator {
 public:
  // Fits on a bootstrap resample of `source` drawn with `seed`, so that
  // generators fit with different seeds differ the way independently
  // trained models would. Requires at least 100 rows.
  static absl::StatusOr<std::unique_ptr<CopulaGenerator>> Fit(
      const Table& source, uint64_t seed);

  const std::vector<ColumnSchema>& schema() const override { return schema_; }
  size_t max_rows() const override { return max_rows_; }
  absl::StatusOr<Table> Sample(size_t n, uint64_t seed) const override;

  // Latent correlation matrix, row-major, columns in schema order.
  const std::vector<double>& correlation() const { return correlation_; }

 private:
  struct Marginal {
    std::vector<double> sorted;  // numerical, non-missing
    double missing_rate = 0.0;
    // Categorical: tokens by descending frequency and their cumulative
    // probabilities (last entry 1). A missing token is std::nullopt.
    std::vector<std::optional<std::string>> tokens;
    std::vector<double> cumulative;
  };

  CopulaGenerator() = default;

  std::vector<ColumnSchema> schema_;
  std::vector<Marginal> marginals_;
  std::vector<double> correlation_;
  std::vector<double> cholesky_;  // lower triangle, row-major
  size_t max_rows_ = 0;
};

// Minimum rows CopulaGenerator::Fit accepts.
inline constexpr size_t kMinFitRows = 100;

// Census-like table with a five-valued sensitive column "race", four
// numerical quasi-identifiers (age, education_num, hours_per_week, fnlwgt)
// and seven categorical ones (workclass, marital_status, occupation,
// relationship, sex, native_region, income). Several columns shift with
// race so that one-vs-rest tests find real signal.
absl::StatusOr<Table> AdultLikeSource(size_t n, uint64_t seed);

// Hierarchies for workclass, marital_status, occupation and native_region
// of AdultLikeSource; the others fall back to flat trees.
GTreeMap AdultLikeGTrees();

// The model t = X + b X Y + c Z with X = 1000 U[0, 1] (rounded to
// 10^-rounding when set, e.g. -2 for hundreds), Y, Z ~ U[0, 1].
struct RandomModelSample {
  std::vector<double> x;  // original
  std::vector<double> t;  // anonymized
};
absl::StatusOr<RandomModelSample> GenRandomModel(
    size_t n, double b, double c, std::optional<int> rounding, uint64_t seed);

// Wraps a random-model sample as a one-column ("value") dataset pair.
absl::StatusOr<DatasetPair> RandomModelPair(const RandomModelSample& sample);

}  // namespace dqm

#endif  // DQM_SYNTHETIC_H_
