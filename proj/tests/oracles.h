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

// Independent reference implementations used to cross-check the library.
// Nothing here shares code with the library: special functions come from
// classic series and continued-fraction expansions, integrals from adaptive
// quadrature and AUC from exhaustive pair counting.

#ifndef DQM_TESTS_ORACLES_H_
#define DQM_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dqm::oracle {

// Continued fraction for the incomplete beta function (modified Lentz).
inline long double BetaContinuedFraction(long double a, long double b,
                                         long double x) {
  constexpr long double kTiny = 1e-300L;
  constexpr long double kEps = 1e-18L;
  long double c = 1.0L;
  long double d = 1.0L - (a + b) * x / (a + 1.0L);
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0L / d;
  long double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const long double m2 = 2.0L * m;
    long double aa = m * (b - m) * x / ((a + m2 - 1.0L) * (a + m2));
    d = 1.0L + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0L + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0L / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0L));
    d = 1.0L + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0L + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0L / d;
    const long double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0L) < kEps) return h;
  }
  throw std::runtime_error("beta continued fraction did not converge");
}

// Regularized incomplete beta I_x(a, b).
inline double RegularizedBeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const long double la = a, lb = b, lx = x;
  const long double front =
      std::exp(std::lgamma(la + lb) - std::lgamma(la) - std::lgamma(lb) +
               la * std::log(lx) + lb * std::log1p(-lx));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return static_cast<double>(front * BetaContinuedFraction(la, lb, lx) / la);
  }
  return static_cast<double>(
      1.0L - front * BetaContinuedFraction(lb, la, 1.0L - lx) / lb);
}

// Regularized upper incomplete gamma Q(a, x).
inline double RegularizedGammaQ(double a, double x) {
  if (x <= 0.0) return 1.0;
  const long double la = a, lx = x;
  const long double log_front = -lx + la * std::log(lx) - std::lgamma(la);
  if (x < a + 1.0) {
    // Series for P(a, x).
    long double sum = 1.0L / la, term = sum;
    for (int n = 1; n <= 100000; ++n) {
      term *= lx / (la + n);
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-19L) break;
    }
    return static_cast<double>(1.0L - sum * std::exp(log_front));
  }
  // Continued fraction for Q(a, x) (modified Lentz).
  constexpr long double kTiny = 1e-300L;
  long double b = lx + 1.0L - la;
  long double c = 1.0L / kTiny;
  long double d = 1.0L / b;
  long double h = d;
  for (int i = 1; i <= 100000; ++i) {
    const long double an = -i * (i - la);
    b += 2.0L;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0L / d;
    const long double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0L) < 1e-19L) break;
  }
  return static_cast<double>(std::exp(log_front) * h);
}

// Two-sided p-value of Student's t with `df` degrees of freedom.
inline double StudentTwoSidedP(double t, double df) {
  return RegularizedBeta(df / 2.0, 0.5, df / (df + t * t));
}

inline double ChiSquareUpperP(double x, double df) {
  return RegularizedGammaQ(df / 2.0, x / 2.0);
}

struct WelchResult {
  double t;
  double df;
  double p;
};

// Welch statistic and Welch-Satterthwaite df from the textbook formulas.
inline WelchResult Welch(const std::vector<double>& a,
                         const std::vector<double>& b) {
  auto mean = [](const std::vector<double>& v) {
    long double s = 0;
    for (double x : v) s += x;
    return s / v.size();
  };
  auto var = [&](const std::vector<double>& v) {
    const long double m = mean(v);
    long double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
  };
  const long double va = var(a) / a.size(), vb = var(b) / b.size();
  const long double t = (mean(a) - mean(b)) / std::sqrt(va + vb);
  const long double df = (va + vb) * (va + vb) /
                         (va * va / (a.size() - 1) + vb * vb / (b.size() - 1));
  return {static_cast<double>(t), static_cast<double>(df),
          StudentTwoSidedP(static_cast<double>(t), static_cast<double>(df))};
}

// G statistic with expected counts from the margins, computed cell by cell.
inline double GStatistic(const std::vector<std::vector<double>>& obs) {
  const size_t r = obs.size(), c = obs[0].size();
  long double total = 0;
  std::vector<long double> rs(r, 0), cs(c, 0);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      rs[i] += obs[i][j];
      cs[j] += obs[i][j];
      total += obs[i][j];
    }
  long double g = 0;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      const long double e = rs[i] * cs[j] / total;
      if (obs[i][j] > 0) g += obs[i][j] * std::log(obs[i][j] / e);
    }
  return static_cast<double>(2 * g);
}

// Adaptive Simpson quadrature.
inline double Integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-14) {
  std::function<double(double, double, double, double, double, double, int)>
      rec = [&](double lo, double hi, double flo, double fmid, double fhi,
                double whole, int depth) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(lo, mid, flo, flm, fmid, left, depth - 1) +
           rec(mid, hi, fmid, frm, fhi, right, depth - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 50);
}

// Scaled NMI by direct integration of 2^-x (1 - n) over [0, e].
inline double ScaledNmiByQuadrature(double n, double e) {
  if (e == 0.0) return n;
  const double integral =
      Integrate([&](double x) { return std::pow(2.0, -x) * (1.0 - n); }, 0.0, e);
  return 1.0 - integral / e;
}

// AUC as the probability that a random positive outscores a random
// negative, ties counting one half.
inline double MannWhitneyAuc(const std::vector<double>& scores,
                             const std::vector<int>& labels) {
  long double wins = 0, pairs = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1;
      if (scores[i] > scores[j]) {
        wins += 1;
      } else if (scores[i] == scores[j]) {
        wins += 0.5L;
      }
    }
  }
  return static_cast<double>(wins / pairs);
}

// Average precision by its definition over every cut of the ranking,
// with tied scores cut together.
inline double AveragePrecisionByCuts(const std::vector<double>& scores,
                                     const std::vector<int>& labels) {
  std::vector<double> cuts(scores);
  std::sort(cuts.begin(), cuts.end(), std::greater<double>());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double pos = 0;
  for (int l : labels) pos += l;
  double ap = 0, prev_recall = 0;
  for (double c : cuts) {
    double tp = 0, all = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= c) {
        all += 1;
        tp += labels[i];
      }
    }
    const double recall = tp / pos;
    ap += (recall - prev_recall) * (tp / all);
    prev_recall = recall;
  }
  return ap;
}

}  // namespace dqm::oracle

#endif  // DQM_TESTS_ORACLES_H_
