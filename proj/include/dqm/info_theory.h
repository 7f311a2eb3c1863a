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

#ifndef DQM_INFO_THEORY_H_
#define DQM_INFO_THEORY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "dqm/table.h"

namespace dqm {

struct NmiConfig {
  // Aligned columns at least this long are scored on repeated fixed-size
  // samples instead of in full.
  size_t sample_size = 10000;
  size_t n_repeats = 5;
  int knn_k = 3;
  uint64_t seed = 0;
};

absl::Status ValidateNmiConfig(const NmiConfig& config);

struct MIEstimate {
  double mi_nats = 0.0;
  double h_original_nats = 0.0;
  double h_anonymized_nats = 0.0;
  size_t sample_size_used = 0;
  bool sampled = false;
};

// Kraskov (algorithm 1) mutual information in nats between two equal-length
// vectors, using Chebyshev k-nearest neighbours. Each input is scaled to unit
// variance and perturbed by relative jitter of 1e-10 to break ties. The
// estimate is clamped at 0.
absl::StatusOr<double> EstimateMi(absl::Span<const double> x,
                                  absl::Span<const double> y,
                                  const NmiConfig& config);

// Entropy in nats, estimated as the Kraskov mutual information between the
// values and an independently jittered copy of themselves. For discrete data
// this tracks the plug-in entropy; for continuous data it grows with the
// sample size like psi(n) - psi(k + 1). Constant input yields 0.
absl::StatusOr<double> EstimateEntropy(absl::Span<const double> values,
                                       const NmiConfig& config);

// H(O), H(A) and MI(O, A) from a single pass over all pairs, using the rng
// stream `stream` of the config seed.
absl::StatusOr<MIEstimate> EstimateInformation(absl::Span<const double> original,
                                               absl::Span<const double> anonymized,
                                               const NmiConfig& config,
                                               uint64_t stream = 0);

// Penalty-scaled NMI: 1 - (1/e) * integral_0^e 2^-x (1 - n) dx. The limit as
// e -> 0 is n.
double ScaleNmiv1(double n, double e);

// Pairs of aligned non-missing values of a numerical column.
struct AlignedValues {
  std::vector<double> original;
  std::vector<double> anonymized;
};
absl::StatusOr<AlignedValues> AlignedNumeric(const DatasetPair& pair,
                                             absl::string_view column);

// MI(O_i, A_i) / H(O_i) clamped into [0, 1]; nullopt when H(O_i) is 0 or
// fewer than two pairs exist.
absl::StatusOr<std::optional<double>> Nmiv1Raw(const DatasetPair& pair,
                                               absl::string_view column,
                                               const NmiConfig& config);
// MI(O_i, A_i) / H(A_i) with the same conventions.
absl::StatusOr<std::optional<double>> Nmiv2Raw(const DatasetPair& pair,
                                               absl::string_view column,
                                               const NmiConfig& config);

struct NmiScore {
  std::optional<double> value;  // mean over samples
  double variance = 0.0;        // across samples
  size_t samples = 0;
  bool sampled = false;
  double mean_entropy = 0.0;    // of the normalizing side
};

enum class NmiDivisor { kOriginal, kAnonymized };

// Sampled and scaled NMI. With at least sample_size aligned pairs, n_repeats
// samples of exactly sample_size pairs are scored and averaged; otherwise all
// pairs are scored once. Each sample is scaled by its own divisor entropy.
absl::StatusOr<NmiScore> SampledScaledNmi(const AlignedValues& values,
                                          const NmiConfig& config,
                                          NmiDivisor divisor);

// NMIv1 and NMIv2 from the same samples and estimates.
struct NmiScores {
  NmiScore v1;
  NmiScore v2;
};
absl::StatusOr<NmiScores> SampledScaledNmiBoth(const AlignedValues& values,
                                               const NmiConfig& config);

absl::StatusOr<NmiScore> Nmiv1(const DatasetPair& pair,
                               absl::string_view column,
                               const NmiConfig& config);
absl::StatusOr<NmiScore> Nmiv2(const DatasetPair& pair,
                               absl::string_view column,
                               const NmiConfig& config);

}  // namespace dqm

#endif  // DQM_INFO_THEORY_H_
