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

#include "dqm/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "Eigen/Cholesky"
#include "Eigen/Core"
#include "absl/strings/str_cat.h"
#include "boost/math/distributions/normal.hpp"
#include "dqm/random.h"

namespace dqm {

namespace {

constexpr double kEdge = 1e-12;

double NormalQuantile(double u) {
  static const boost::math::normal standard;
  return boost::math::quantile(standard, std::clamp(u, kEdge, 1.0 - kEdge));
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Mid-rank of every non-missing value, scaled into (0, 1).
std::vector<double> MidRankUniforms(const std::vector<double>& v) {
  std::vector<size_t> order;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!IsMissing(v[i])) order.push_back(i);
  }
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> u(v.size(), 0.5);
  const double m = static_cast<double>(order.size());
  for (size_t lo = 0; lo < order.size();) {
    size_t hi = lo;
    while (hi + 1 < order.size() && v[order[hi + 1]] == v[order[lo]]) ++hi;
    const double mid = 0.5 * (lo + hi) + 0.5;
    for (size_t j = lo; j <= hi; ++j) u[order[j]] = mid / m;
    lo = hi + 1;
  }
  return u;
}

}  // namespace

absl::StatusOr<std::unique_ptr<CopulaGenerator>> CopulaGenerator::Fit(
    const Table& source, uint64_t seed) {
  const size_t n = source.num_rows();
  if (n < kMinFitRows) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fit error: source has ", n, " rows, at least ", kMinFitRows,
        " are required"));
  }
  Rng rng(seed, 0);
  std::vector<size_t> rows(n);
  for (size_t& r : rows) r = static_cast<size_t>(rng.Below(n));
  const Table boot = source.SelectRows(rows);

  auto gen = std::unique_ptr<CopulaGenerator>(new CopulaGenerator());
  gen->schema_ = source.schema();
  gen->max_rows_ = n;
  const size_t p = gen->schema_.size();
  Eigen::MatrixXd latent(n, p);

  for (size_t c = 0; c < p; ++c) {
    Marginal m;
    if (const auto* num = std::get_if<NumericValues>(&boot.column(c))) {
      size_t missing = 0;
      for (double v : *num) {
        if (IsMissing(v)) {
          ++missing;
        } else {
          m.sorted.push_back(v);
        }
      }
      std::sort(m.sorted.begin(), m.sorted.end());
      m.missing_rate = static_cast<double>(missing) / n;
      const std::vector<double> u = MidRankUniforms(*num);
      for (size_t i = 0; i < n; ++i) {
        latent(i, c) = IsMissing((*num)[i]) ? 0.0 : NormalQuantile(u[i]);
      }
    } else {
      const auto& cat = std::get<CategoricalValues>(boot.column(c));
      std::map<std::optional<std::string>, size_t> counts;
      for (const auto& v : cat) ++counts[v];
      std::vector<std::pair<std::optional<std::string>, size_t>> by_freq(
          counts.begin(), counts.end());
      std::stable_sort(by_freq.begin(), by_freq.end(),
                       [](const auto& a, const auto& b) {
                         return a.second > b.second;
                       });
      std::map<std::optional<std::string>, size_t> slot;
      double cum = 0.0;
      for (const auto& [token, count] : by_freq) {
        slot[token] = m.tokens.size();
        m.tokens.push_back(token);
        cum += static_cast<double>(count) / n;
        m.cumulative.push_back(cum);
      }
      m.cumulative.back() = 1.0;
      for (size_t i = 0; i < n; ++i) {
        const size_t s = slot[cat[i]];
        const double lo = s == 0 ? 0.0 : m.cumulative[s - 1];
        const double hi = m.cumulative[s];
        latent(i, c) = NormalQuantile(lo + (hi - lo) * rng.Uniform());
      }
    }
    gen->marginals_.push_back(std::move(m));
  }

  // Pearson correlation of the latent scores.
  Eigen::MatrixXd centered = latent.rowwise() - latent.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
  Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(p, p);
  for (size_t a = 0; a < p; ++a) {
    for (size_t b = 0; b < p; ++b) {
      if (a != b && sd(a) > 0.0 && sd(b) > 0.0) {
        corr(a, b) = cov(a, b) / (sd(a) * sd(b));
      }
    }
  }
  // Shrink toward the identity until the matrix factors.
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (double lambda = 0.0;; lambda = lambda == 0.0 ? 1e-6 : lambda * 10.0) {
    const Eigen::MatrixXd shrunk =
        (1.0 - lambda) * corr + lambda * Eigen::MatrixXd::Identity(p, p);
    llt.compute(shrunk);
    if (llt.info() == Eigen::Success || lambda >= 1.0) {
      corr = shrunk;
      break;
    }
  }
  const Eigen::MatrixXd l = llt.matrixL();
  gen->correlation_.resize(p * p);
  gen->cholesky_.resize(p * p);
  for (size_t a = 0; a < p; ++a) {
    for (size_t b = 0; b < p; ++b) {
      gen->correlation_[a * p + b] = corr(a, b);
      gen->cholesky_[a * p + b] = l(a, b);
    }
  }
  return gen;
}

absl::StatusOr<Table> CopulaGenerator::Sample(size_t n, uint64_t seed) const {
  if (n > max_rows_) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sample size ", n, " exceeds the source size ", max_rows_));
  }
  const size_t p = schema_.size();
  Rng rng(seed, 1);
  std::vector<ColumnData> columns;
  for (size_t c = 0; c < p; ++c) {
    if (schema_[c].kind == ColumnKind::kNumerical) {
      columns.emplace_back(NumericValues(n));
    } else {
      columns.emplace_back(CategoricalValues(n));
    }
  }
  std::vector<double> e(p), z(p);
  for (size_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < p; ++c) e[c] = rng.Normal();
    for (size_t a = 0; a < p; ++a) {
      double s = 0.0;
      for (size_t b = 0; b <= a; ++b) s += cholesky_[a * p + b] * e[b];
      z[a] = s;
    }
    for (size_t c = 0; c < p; ++c) {
      const Marginal& m = marginals_[c];
      const double u = NormalCdf(z[c]);
      if (auto* num = std::get_if<NumericValues>(&columns[c])) {
        const double missing_draw = rng.Uniform();
        if (m.sorted.empty() || missing_draw < m.missing_rate) {
          (*num)[i] = MissingNumber();
        } else {
          const size_t idx = std::min(
              static_cast<size_t>(u * m.sorted.size()), m.sorted.size() - 1);
          (*num)[i] = m.sorted[idx];
        }
      } else {
        auto& cat = std::get<CategoricalValues>(columns[c]);
        const size_t s = static_cast<size_t>(
            std::upper_bound(m.cumulative.begin(), m.cumulative.end(), u) -
            m.cumulative.begin());
        cat[i] = m.tokens[std::min(s, m.tokens.size() - 1)];
      }
    }
  }
  std::vector<RowId> ids(n);
  std::iota(ids.begin(), ids.end(), RowId{0});
  return Table::Create(schema_, std::move(ids), std::move(columns));
}

namespace {

struct Choice {
  const char* token;
  double weight;
};

template <size_t N>
const char* Pick(Rng& rng, const std::array<Choice, N>& choices) {
  double total = 0.0;
  for (const Choice& c : choices) total += c.weight;
  double u = rng.Uniform() * total;
  for (const Choice& c : choices) {
    if (u < c.weight) return c.token;
    u -= c.weight;
  }
  return choices.back().token;
}

double Clamp(double v, double lo, double hi) { return std::clamp(v, lo, hi); }

}  // namespace

absl::StatusOr<Table> AdultLikeSource(size_t n, uint64_t seed) {
  Rng rng(seed, 0);
  std::vector<ColumnSchema> schema = {
      {"age", ColumnKind::kNumerical, ColumnRole::kQuasiIdentifier},
      {"education_num", ColumnKind::kNumerical, ColumnRole::kQuasiIdentifier},
      {"hours_per_week", ColumnKind::kNumerical, ColumnRole::kQuasiIdentifier},
      {"fnlwgt", ColumnKind::kNumerical, ColumnRole::kQuasiIdentifier},
      {"workclass", ColumnKind::kCategorical, ColumnRole::kQuasiIdentifier},
      {"marital_status", ColumnKind::kCategorical, ColumnRole::kQuasiIdentifier},
      {"occupation", ColumnKind::kCategorical, ColumnRole::kQuasiIdentifier},
      {"relationship", ColumnKind::kCategorical, ColumnRole::kQuasiIdentifier},
      {"sex", ColumnKind::kCategorical, ColumnRole::kQuasiIdentifier},
      {"native_region", ColumnKind::kCategorical, ColumnRole::kQuasiIdentifier},
      {"income", ColumnKind::kCategorical, ColumnRole::kQuasiIdentifier},
      {"race", ColumnKind::kCategorical, ColumnRole::kSensitiveAttribute},
  };
  NumericValues age(n), edu(n), hours(n), fnlwgt(n);
  CategoricalValues workclass(n), marital(n), occupation(n), relationship(n),
      sex(n), region(n), income(n), race(n);
  static constexpr std::array<Choice, 5> kRace = {{{"White", 0.85},
                                                   {"Black", 0.10},
                                                   {"Asian-Pac-Islander", 0.03},
                                                   {"Amer-Indian-Eskimo", 0.01},
                                                   {"Other", 0.01}}};
  for (size_t i = 0; i < n; ++i) {
    const std::string r = Pick(rng, kRace);
    const bool black = r == "Black";
    const bool asian = r == "Asian-Pac-Islander";
    const bool native = r == "Amer-Indian-Eskimo";
    const bool other = r == "Other";
    race[i] = r;

    const bool male = rng.Uniform() < (black ? 0.52 : 0.68);
    sex[i] = male ? "Male" : "Female";

    const double age_shift = black ? -1.5 : asian ? 0.5 : native ? -2.0
                             : other ? -4.0 : 0.0;
    age[i] = Clamp(std::round(38.0 + age_shift + 13.0 * rng.Normal()), 17, 90);

    const double edu_shift = asian ? 1.2 : black ? -0.6 : other ? -0.8
                             : native ? -0.7 : 0.0;
    edu[i] = Clamp(std::round(10.0 + edu_shift + 0.02 * (age[i] - 38.0) +
                              2.5 * rng.Normal()),
                   1, 16);

    const double hour_shift = black ? -1.0 : asian ? 0.5 : 0.0;
    hours[i] = Clamp(std::round(40.0 + hour_shift + (male ? 3.0 : -3.0) +
                                11.0 * rng.Normal()),
                     1, 99);

    const double wgt_shift = black ? 0.14 : asian ? 0.05 : native ? -0.1 : 0.0;
    fnlwgt[i] = std::round(std::exp(12.0 + wgt_shift + 0.45 * rng.Normal()));

    const double gov = black ? 1.6 : 1.0;
    const std::array<Choice, 8> kWork = {{{"Private", 0.70},
                                          {"Self-emp-not-inc", 0.08},
                                          {"Local-gov", 0.06 * gov},
                                          {"State-gov", 0.04 * gov},
                                          {"Self-emp-inc", 0.035},
                                          {"Federal-gov", 0.03 * gov},
                                          {"Without-pay", 0.005},
                                          {"Unknown", 0.05}}};
    workclass[i] = Pick(rng, kWork);

    const double young = age[i] < 27 ? 1.0 : 0.0;
    const double old = age[i] > 60 ? 1.0 : 0.0;
    const double married_w = (black ? 0.28 : 0.48) * (1.0 - 0.8 * young);
    const std::array<Choice, 5> kMarital = {
        {{"Married-civ-spouse", married_w},
         {"Never-married", 0.30 + 0.9 * young},
         {"Divorced", 0.14 * (1.0 - young)},
         {"Separated", black ? 0.07 : 0.03},
         {"Widowed", 0.02 + 0.15 * old}}};
    const std::string m = Pick(rng, kMarital);
    marital[i] = m;

    if (m == "Married-civ-spouse") {
      relationship[i] = male ? "Husband" : "Wife";
    } else {
      const std::array<Choice, 4> kRel = {{{"Not-in-family", 0.5},
                                           {"Own-child", 0.1 + 0.6 * young},
                                           {"Unmarried", 0.25},
                                           {"Other-relative", asian ? 0.12 : 0.05}}};
      relationship[i] = Pick(rng, kRel);
    }

    const double high = edu[i] >= 13 ? 1.0 : 0.0;
    const double low = edu[i] <= 8 ? 1.0 : 0.0;
    const std::array<Choice, 10> kOcc = {{{"Prof-specialty", 0.06 + 0.30 * high},
                                          {"Exec-managerial", 0.08 + 0.20 * high},
                                          {"Adm-clerical", 0.12},
                                          {"Sales", 0.11},
                                          {"Craft-repair", 0.13 * (1.0 - high)},
                                          {"Machine-op-inspct", 0.06 + 0.08 * low},
                                          {"Other-service", 0.08 + 0.10 * low +
                                                                (black ? 0.06 : 0.0)},
                                          {"Transport-moving", 0.05},
                                          {"Handlers-cleaners", 0.03 + 0.06 * low},
                                          {"Tech-support", 0.03 + 0.02 * high}}};
    occupation[i] = Pick(rng, kOcc);

    const std::array<Choice, 5> kRegion = {
        {{"United-States", asian ? 0.35 : other ? 0.55 : 0.92},
         {"Latin-America", other ? 0.35 : 0.04},
         {"Asia", asian ? 0.60 : 0.005},
         {"Europe", black || asian ? 0.01 : 0.025},
         {"Other-region", 0.02}}};
    region[i] = Pick(rng, kRegion);

    const double logit = -9.0 + 0.45 * edu[i] + 0.04 * age[i] +
                         0.03 * hours[i] + (male ? 0.9 : 0.0) +
                         (m == "Married-civ-spouse" ? 1.2 : 0.0);
    income[i] = rng.Uniform() < 1.0 / (1.0 + std::exp(-logit)) ? ">50K"
                                                                : "<=50K";
  }
  std::vector<RowId> ids(n);
  std::iota(ids.begin(), ids.end(), RowId{0});
  std::vector<ColumnData> columns = {
      std::move(age),        std::move(edu),        std::move(hours),
      std::move(fnlwgt),     std::move(workclass),  std::move(marital),
      std::move(occupation), std::move(relationship), std::move(sex),
      std::move(region),     std::move(income),     std::move(race)};
  return Table::Create(std::move(schema), std::move(ids), std::move(columns));
}

GTreeMap AdultLikeGTrees() {
  using Spec = GTree::Spec;
  auto leaf = [](const char* label) { return Spec{label, 0.0, {}}; };
  GTreeMap trees;
  trees.emplace(
      "workclass",
      *GTree::Build(Spec{"*", 1.0,
                         {Spec{"Government", 0.4,
                               {leaf("Federal-gov"), leaf("State-gov"),
                                leaf("Local-gov")}},
                          Spec{"Self-employed", 0.3,
                               {leaf("Self-emp-inc"), leaf("Self-emp-not-inc")}},
                          leaf("Private"),
                          Spec{"Other", 0.3,
                               {leaf("Without-pay"), leaf("Unknown")}}}}));
  trees.emplace(
      "marital_status",
      *GTree::Build(Spec{"*", 1.0,
                         {leaf("Married-civ-spouse"), leaf("Never-married"),
                          Spec{"Previously-married", 0.5,
                               {leaf("Divorced"), leaf("Separated"),
                                leaf("Widowed")}}}}));
  trees.emplace(
      "occupation",
      *GTree::Build(Spec{
          "*", 1.0,
          {Spec{"White-collar", 0.5,
                {leaf("Prof-specialty"), leaf("Exec-managerial"),
                 leaf("Adm-clerical"), leaf("Sales"), leaf("Tech-support")}},
           Spec{"Blue-collar", 0.5,
                {leaf("Craft-repair"), leaf("Machine-op-inspct"),
                 leaf("Transport-moving"), leaf("Handlers-cleaners")}},
           leaf("Other-service")}}));
  trees.emplace(
      "native_region",
      *GTree::Build(Spec{"*", 1.0,
                         {leaf("United-States"),
                          Spec{"Abroad", 0.8,
                               {leaf("Latin-America"), leaf("Asia"),
                                leaf("Europe"), leaf("Other-region")}}}}));
  return trees;
}

absl::StatusOr<RandomModelSample> GenRandomModel(size_t n, double b, double c,
                                                 std::optional<int> rounding,
                                                 uint64_t seed) {
  if (!(b >= 0.0 && b <= 1.0 && c >= 0.0 && c <= 1.0)) {
    return absl::InvalidArgumentError("random model: b and c must be in [0, 1]");
  }
  Rng rng(seed, 0);
  RandomModelSample s;
  s.x.resize(n);
  s.t.resize(n);
  const double unit =
      rounding.has_value() ? std::pow(10.0, -static_cast<double>(*rounding)) : 0.0;
  for (size_t i = 0; i < n; ++i) {
    double x = 1000.0 * rng.Uniform();
    if (rounding.has_value()) x = std::round(x / unit) * unit;
    const double y = rng.Uniform();
    const double z = rng.Uniform();
    s.x[i] = x;
    s.t[i] = x + b * x * y + c * z;
  }
  return s;
}

absl::StatusOr<DatasetPair> RandomModelPair(const RandomModelSample& sample) {
  if (sample.x.size() != sample.t.size()) {
    return absl::InvalidArgumentError("random model: length mismatch");
  }
  std::vector<ColumnSchema> schema = {
      {"value", ColumnKind::kNumerical, ColumnRole::kQuasiIdentifier}};
  std::vector<RowId> ids(sample.x.size());
  std::iota(ids.begin(), ids.end(), RowId{0});
  absl::StatusOr<Table> o = Table::Create(schema, ids, {NumericValues(sample.x)});
  if (!o.ok()) return o.status();
  absl::StatusOr<Table> a = Table::Create(schema, ids, {NumericValues(sample.t)});
  if (!a.ok()) return a.status();
  return AlignPair(*o, *a, {});
}

}  // namespace dqm
