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

#include "dqm/info_theory.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "absl/strings/str_cat.h"
#include "dqm/random.h"

namespace dqm {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kJitter = 1e-10;

// psi(m) for m = 0..n (psi(0) unused).
std::vector<double> DigammaTable(size_t n) {
  std::vector<double> psi(n + 2, 0.0);
  psi[1] = -kEulerGamma;
  for (size_t m = 1; m + 1 < psi.size(); ++m) psi[m + 1] = psi[m] + 1.0 / m;
  return psi;
}

// Unit variance (no centering) plus tie-breaking noise.
std::vector<double> Prepare(absl::Span<const double> v, Rng& rng) {
  const size_t n = v.size();
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  std::vector<double> out(v.begin(), v.end());
  if (sd > 0.0) {
    for (double& x : out) x /= sd;
  }
  double abs_mean = 0.0;
  for (double x : out) abs_mean += std::abs(x);
  abs_mean /= n;
  const double scale = kJitter * std::max(1.0, abs_mean);
  for (double& x : out) x += scale * rng.Normal();
  return out;
}

size_t CountOpen(const std::vector<double>& sorted, double center,
                 double radius) {
  auto lo = std::upper_bound(sorted.begin(), sorted.end(), center - radius);
  auto hi = std::lower_bound(sorted.begin(), sorted.end(), center + radius);
  return hi > lo ? static_cast<size_t>(hi - lo) : 0;
}

double Ksg(const std::vector<double>& x, const std::vector<double>& y,
           int k_requested) {
  const size_t n = x.size();
  const size_t k = std::min<size_t>(k_requested, n - 1);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return x[a] < x[b]; });
  std::vector<double> xs(n), ys(n);
  for (size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }
  std::vector<double> y_sorted = y;
  std::sort(y_sorted.begin(), y_sorted.end());
  const std::vector<double> psi = DigammaTable(n);

  double sum_psi = 0.0;
  std::priority_queue<double> heap;
  for (size_t p = 0; p < n; ++p) {
    while (!heap.empty()) heap.pop();
    ptrdiff_t left = static_cast<ptrdiff_t>(p) - 1;
    size_t right = p + 1;
    for (;;) {
      const double gap_l =
          left >= 0 ? xs[p] - xs[left] : std::numeric_limits<double>::infinity();
      const double gap_r =
          right < n ? xs[right] - xs[p] : std::numeric_limits<double>::infinity();
      const double gap = std::min(gap_l, gap_r);
      if (!std::isfinite(gap)) break;
      if (heap.size() == k && gap >= heap.top()) break;
      const size_t j = gap_l <= gap_r ? static_cast<size_t>(left--) : right++;
      const double d = std::max(std::abs(xs[j] - xs[p]), std::abs(ys[j] - ys[p]));
      if (heap.size() < k) {
        heap.push(d);
      } else if (d < heap.top()) {
        heap.pop();
        heap.push(d);
      }
    }
    const double r = heap.top();
    const size_t nx = CountOpen(xs, xs[p], r) - 1;
    const size_t ny = CountOpen(y_sorted, ys[p], r) - 1;
    sum_psi += psi[nx + 1] + psi[ny + 1];
  }
  const double mi = psi[n] + psi[k] - sum_psi / n;
  return std::max(0.0, mi);
}

bool IsConstant(absl::Span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

absl::Status CheckInput(absl::Span<const double> x, absl::Span<const double> y) {
  if (x.size() != y.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: ", x.size(), " vs ", y.size()));
  }
  if (x.size() < 2) {
    return absl::InvalidArgumentError("at least two values are required");
  }
  for (absl::Span<const double> v : {x, y}) {
    for (double e : v) {
      if (!std::isfinite(e)) {
        return absl::InvalidArgumentError("values must be finite");
      }
    }
  }
  return absl::OkStatus();
}

double SelfInformation(absl::Span<const double> v, const std::vector<double>& jittered,
                       Rng& rng, int k) {
  if (IsConstant(v)) return 0.0;
  return Ksg(jittered, Prepare(v, rng), k);
}

}  // namespace

absl::Status ValidateNmiConfig(const NmiConfig& config) {
  if (config.sample_size < 1 || config.n_repeats < 1 || config.knn_k < 1) {
    return absl::InvalidArgumentError(
        "nmi config: sample_size, n_repeats and knn_k must be >= 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> EstimateMi(absl::Span<const double> x,
                                  absl::Span<const double> y,
                                  const NmiConfig& config) {
  if (absl::Status s = CheckInput(x, y); !s.ok()) return s;
  if (IsConstant(x) || IsConstant(y)) return 0.0;
  Rng rng(config.seed, 0);
  const std::vector<double> px = Prepare(x, rng);
  const std::vector<double> py = Prepare(y, rng);
  return Ksg(px, py, config.knn_k);
}

absl::StatusOr<double> EstimateEntropy(absl::Span<const double> values,
                                       const NmiConfig& config) {
  if (absl::Status s = CheckInput(values, values); !s.ok()) return s;
  if (IsConstant(values)) return 0.0;
  Rng rng(config.seed, 0);
  const std::vector<double> a = Prepare(values, rng);
  return SelfInformation(values, a, rng, config.knn_k);
}

absl::StatusOr<MIEstimate> EstimateInformation(
    absl::Span<const double> original, absl::Span<const double> anonymized,
    const NmiConfig& config, uint64_t stream) {
  if (absl::Status s = CheckInput(original, anonymized); !s.ok()) return s;
  Rng rng(config.seed, stream);
  const std::vector<double> po = Prepare(original, rng);
  const std::vector<double> pa = Prepare(anonymized, rng);
  MIEstimate est;
  est.sample_size_used = original.size();
  est.mi_nats = IsConstant(original) || IsConstant(anonymized)
                    ? 0.0
                    : Ksg(po, pa, config.knn_k);
  est.h_original_nats = SelfInformation(original, po, rng, config.knn_k);
  est.h_anonymized_nats = SelfInformation(anonymized, pa, rng, config.knn_k);
  return est;
}

double ScaleNmiv1(double n, double e) {
  if (e <= 1e-12) return n;
  // integral_0^e 2^-x dx = (1 - 2^-e) / ln 2
  const double integral = -std::expm1(-e * M_LN2) / M_LN2;
  return 1.0 - (1.0 - n) * integral / e;
}

absl::StatusOr<AlignedValues> AlignedNumeric(const DatasetPair& pair,
                                             absl::string_view column) {
  absl::StatusOr<absl::Span<const double>> o =
      pair.aligned_original.Numeric(column);
  if (!o.ok()) return o.status();
  absl::StatusOr<absl::Span<const double>> a = pair.anonymized.Numeric(column);
  if (!a.ok()) return a.status();
  AlignedValues out;
  for (size_t i = 0; i < o->size(); ++i) {
    if (IsMissing((*o)[i]) || IsMissing((*a)[i])) continue;
    out.original.push_back((*o)[i]);
    out.anonymized.push_back((*a)[i]);
  }
  return out;
}

namespace {

absl::StatusOr<std::optional<double>> RawRatio(const DatasetPair& pair,
                                               absl::string_view column,
                                               const NmiConfig& config,
                                               NmiDivisor divisor) {
  absl::StatusOr<AlignedValues> v = AlignedNumeric(pair, column);
  if (!v.ok()) return v.status();
  if (v->original.size() < 2) return std::optional<double>();
  absl::StatusOr<MIEstimate> est =
      EstimateInformation(v->original, v->anonymized, config);
  if (!est.ok()) return est.status();
  const double h = divisor == NmiDivisor::kOriginal ? est->h_original_nats
                                                    : est->h_anonymized_nats;
  if (h <= 0.0) return std::optional<double>();
  return std::optional<double>(std::clamp(est->mi_nats / h, 0.0, 1.0));
}

}  // namespace

absl::StatusOr<std::optional<double>> Nmiv1Raw(const DatasetPair& pair,
                                               absl::string_view column,
                                               const NmiConfig& config) {
  return RawRatio(pair, column, config, NmiDivisor::kOriginal);
}

absl::StatusOr<std::optional<double>> Nmiv2Raw(const DatasetPair& pair,
                                               absl::string_view column,
                                               const NmiConfig& config) {
  return RawRatio(pair, column, config, NmiDivisor::kAnonymized);
}

namespace {

void Summarize(const std::vector<double>& scaled, double entropy_sum,
               NmiScore& score) {
  score.samples = scaled.size();
  if (scaled.empty()) return;
  const double mean =
      std::accumulate(scaled.begin(), scaled.end(), 0.0) / scaled.size();
  double ss = 0.0;
  for (double s : scaled) ss += (s - mean) * (s - mean);
  score.value = std::clamp(mean, 0.0, 1.0);
  score.variance = ss / scaled.size();
  score.mean_entropy = entropy_sum / scaled.size();
}

}  // namespace

absl::StatusOr<NmiScores> SampledScaledNmiBoth(const AlignedValues& values,
                                               const NmiConfig& config) {
  if (absl::Status s = ValidateNmiConfig(config); !s.ok()) return s;
  NmiScores scores;
  const size_t n = values.original.size();
  if (n < 2) return scores;
  const bool sampled = n >= config.sample_size;
  scores.v1.sampled = scores.v2.sampled = sampled;
  const size_t repeats = sampled ? config.n_repeats : 1;
  std::vector<double> scaled1, scaled2;
  double h1_sum = 0.0, h2_sum = 0.0;
  for (size_t r = 0; r < repeats; ++r) {
    std::vector<double> o, a;
    if (sampled) {
      // Stream 2r selects rows, stream 2r + 1 jitters them.
      Rng picker(config.seed, 2 * r);
      for (size_t i : picker.SampleWithoutReplacement(n, config.sample_size)) {
        o.push_back(values.original[i]);
        a.push_back(values.anonymized[i]);
      }
    } else {
      o = values.original;
      a = values.anonymized;
    }
    absl::StatusOr<MIEstimate> est =
        EstimateInformation(o, a, config, 2 * r + 1);
    if (!est.ok()) return est.status();
    if (est->h_original_nats > 0.0) {
      const double raw = std::clamp(est->mi_nats / est->h_original_nats, 0.0, 1.0);
      scaled1.push_back(ScaleNmiv1(raw, est->h_original_nats));
      h1_sum += est->h_original_nats;
    }
    if (est->h_anonymized_nats > 0.0) {
      const double raw =
          std::clamp(est->mi_nats / est->h_anonymized_nats, 0.0, 1.0);
      scaled2.push_back(ScaleNmiv1(raw, est->h_anonymized_nats));
      h2_sum += est->h_anonymized_nats;
    }
  }
  Summarize(scaled1, h1_sum, scores.v1);
  Summarize(scaled2, h2_sum, scores.v2);
  return scores;
}

absl::StatusOr<NmiScore> SampledScaledNmi(const AlignedValues& values,
                                          const NmiConfig& config,
                                          NmiDivisor divisor) {
  absl::StatusOr<NmiScores> both = SampledScaledNmiBoth(values, config);
  if (!both.ok()) return both.status();
  return divisor == NmiDivisor::kOriginal ? both->v1 : both->v2;
}

absl::StatusOr<NmiScore> Nmiv1(const DatasetPair& pair,
                               absl::string_view column,
                               const NmiConfig& config) {
  absl::StatusOr<AlignedValues> v = AlignedNumeric(pair, column);
  if (!v.ok()) return v.status();
  return SampledScaledNmi(*v, config, NmiDivisor::kOriginal);
}

absl::StatusOr<NmiScore> Nmiv2(const DatasetPair& pair,
                               absl::string_view column,
                               const NmiConfig& config) {
  absl::StatusOr<AlignedValues> v = AlignedNumeric(pair, column);
  if (!v.ok()) return v.status();
  return SampledScaledNmi(*v, config, NmiDivisor::kAnonymized);
}

}  // namespace dqm
