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

#include <cmath>
#include <vector>

#include "dqm/random.h"
#include "dqm/synthetic.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "test_util.h"

namespace dqm {
namespace {

using ::testing::DoubleNear;
using ::testing::Optional;

// Digamma at a positive integer: -gamma + sum_{j<n} 1/j.
double DigammaInt(int n) {
  double s = -0.57721566490153286;
  for (int j = 1; j < n; ++j) s += 1.0 / j;
  return s;
}

std::vector<double> Uniform(size_t n, double scale, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.Uniform();
  return v;
}

TEST(ScaleNmiv1Test, MatchesQuadrature) {
  for (double n : {0.0, 0.21, 0.5, 0.8, 1.0}) {
    for (double e : {0.05, 0.5, 1.0, 2.37, 4.61, 6.91, 10.26, 20.0}) {
      EXPECT_NEAR(ScaleNmiv1(n, e), oracle::ScaledNmiByQuadrature(n, e), 1e-9)
          << "n=" << n << " e=" << e;
    }
  }
}

TEST(ScaleNmiv1Test, EdgeCases) {
  EXPECT_EQ(ScaleNmiv1(0.3, 0.0), 0.3);
  EXPECT_DOUBLE_EQ(ScaleNmiv1(1.0, 7.0), 1.0);
  // Tiny entropy approaches the unscaled value continuously.
  EXPECT_NEAR(ScaleNmiv1(0.3, 1e-9), 0.3, 1e-9);
  // Reduced penalty at high entropy.
  EXPECT_GT(ScaleNmiv1(0.27, 10.26), 0.84);
  EXPECT_LT(ScaleNmiv1(0.27, 10.26), 0.90);
}

TEST(EntropyTest, ContinuousSelfInformationMatchesDigammaIdentity) {
  // For continuous data the estimator's self-MI reduces to
  // psi(n) - psi(k + 1) with k = 3.
  for (size_t n : {2000u, 20000u}) {
    ASSERT_OK_AND_ASSIGN(double h, EstimateEntropy(Uniform(n, 1000.0, 7), {}));
    EXPECT_NEAR(h, DigammaInt(n) - DigammaInt(4), 0.05) << n;
  }
}

TEST(EntropyTest, DiscreteMatchesShannonEntropy) {
  std::vector<double> v = Uniform(20000, 1000.0, 11);
  for (double& x : v) x = std::round(x / 100.0) * 100.0;
  // Eleven levels: the two end levels carry half weight.
  const double exact = -(2 * 0.05 * std::log(0.05) + 9 * 0.1 * std::log(0.1));
  ASSERT_OK_AND_ASSIGN(double h, EstimateEntropy(v, {}));
  EXPECT_NEAR(h, exact, 0.1);
}

TEST(EntropyTest, ConstantIsZeroAndErrorsReported) {
  ASSERT_OK_AND_ASSIGN(double h, EstimateEntropy(std::vector<double>(50, 4.0), {}));
  EXPECT_EQ(h, 0.0);
  EXPECT_FALSE(EstimateEntropy(std::vector<double>{1.0}, {}).ok());
  EXPECT_FALSE(EstimateEntropy(std::vector<double>{1.0, NAN}, {}).ok());
  EXPECT_FALSE(EstimateMi(std::vector<double>{1, 2, 3},
                          std::vector<double>{1, 2}, {})
                   .ok());
}

TEST(MutualInformationTest, GaussianMatchesClosedForm) {
  Rng rng(3);
  const double rho = 0.8;
  std::vector<double> x(5000), y(5000);
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.Normal();
    y[i] = rho * x[i] + std::sqrt(1 - rho * rho) * rng.Normal();
  }
  ASSERT_OK_AND_ASSIGN(double mi, EstimateMi(x, y, {}));
  EXPECT_NEAR(mi, -0.5 * std::log(1 - rho * rho), 0.03);
}

TEST(MutualInformationTest, IndependentIsNearZero) {
  ASSERT_OK_AND_ASSIGN(double mi, EstimateMi(Uniform(10000, 1.0, 1),
                                             Uniform(10000, 1.0, 2), {}));
  EXPECT_GE(mi, 0.0);
  EXPECT_LT(mi, 0.05);
}

TEST(MutualInformationTest, SymmetricUpToJitter) {
  std::vector<double> x = Uniform(3000, 1.0, 4);
  std::vector<double> y = x;
  for (size_t i = 0; i < y.size(); ++i) y[i] = x[i] * x[i] + 0.1 * (i % 7);
  ASSERT_OK_AND_ASSIGN(double xy, EstimateMi(x, y, {}));
  ASSERT_OK_AND_ASSIGN(double yx, EstimateMi(y, x, {}));
  EXPECT_NEAR(xy, yx, 0.02);
}

TEST(MutualInformationTest, SeedDeterminism) {
  std::vector<double> x = Uniform(2000, 1.0, 5), y = Uniform(2000, 1.0, 6);
  NmiConfig a, b;
  a.seed = b.seed = 9;
  EXPECT_EQ(*EstimateMi(x, y, a), *EstimateMi(x, y, b));
}

TEST(NmiTest, SamplingTriggersAtSampleSize) {
  ASSERT_OK_AND_ASSIGN(RandomModelSample s,
                       GenRandomModel(3000, 0.4, 0.05, std::nullopt, 1));
  AlignedValues v{s.x, s.t};
  NmiConfig cfg;
  cfg.sample_size = 1000;
  ASSERT_OK_AND_ASSIGN(NmiScore sampled,
                       SampledScaledNmi(v, cfg, NmiDivisor::kOriginal));
  EXPECT_TRUE(sampled.sampled);
  EXPECT_EQ(sampled.samples, 5u);
  EXPECT_GE(sampled.variance, 0.0);
  cfg.sample_size = 5000;
  ASSERT_OK_AND_ASSIGN(NmiScore full,
                       SampledScaledNmi(v, cfg, NmiDivisor::kOriginal));
  EXPECT_FALSE(full.sampled);
  EXPECT_EQ(full.samples, 1u);
  EXPECT_EQ(full.variance, 0.0);
}

TEST(NmiTest, InvalidConfigRejected) {
  AlignedValues v{{1, 2, 3}, {1, 2, 3}};
  NmiConfig cfg;
  cfg.n_repeats = 0;
  EXPECT_FALSE(SampledScaledNmi(v, cfg, NmiDivisor::kOriginal).ok());
  cfg = NmiConfig();
  cfg.knn_k = 0;
  EXPECT_FALSE(ValidateNmiConfig(cfg).ok());
}

TEST(NmiTest, IdentityScoresNearOne) {
  std::vector<double> x = Uniform(3000, 100.0, 8);
  AlignedValues v{x, x};
  ASSERT_OK_AND_ASSIGN(NmiScores s, SampledScaledNmiBoth(v, {}));
  EXPECT_THAT(s.v1.value, Optional(DoubleNear(1.0, 0.05)));
  EXPECT_THAT(s.v2.value, Optional(DoubleNear(1.0, 0.05)));
}

TEST(NmiTest, NoisyAnonymizationPenalizedByAnonymizedEntropy) {
  // Low-entropy original, high-entropy anonymized values.
  Rng rng(12);
  std::vector<double> o(4000), a(4000);
  for (size_t i = 0; i < o.size(); ++i) {
    o[i] = std::round(rng.Uniform() * 10.0);
    a[i] = o[i] + 3.0 * rng.Normal();
  }
  ASSERT_OK_AND_ASSIGN(DatasetPair p, RandomModelPair({o, a}));
  ASSERT_OK_AND_ASSIGN(auto v1, Nmiv1Raw(p, "value", {}));
  ASSERT_OK_AND_ASSIGN(auto v2, Nmiv2Raw(p, "value", {}));
  ASSERT_TRUE(v1.has_value() && v2.has_value());
  EXPECT_LT(*v2, *v1);
}

TEST(NmiTest, ConstantOriginalIsNotApplicable) {
  AlignedValues v{std::vector<double>(100, 1.0), Uniform(100, 1.0, 3)};
  ASSERT_OK_AND_ASSIGN(NmiScores s, SampledScaledNmiBoth(v, {}));
  EXPECT_FALSE(s.v1.value.has_value());
  EXPECT_TRUE(s.v2.value.has_value());
}

}  // namespace
}  // namespace dqm
