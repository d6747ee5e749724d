// Copyright 2026 unihpf contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "unihpf/common.hpp"

namespace unihpf {

// Average precision over a ranked list: rank by score descending, ties kept in
// input order (stable), AP = mean over positives of precision at their ranks.
// Degenerate label vectors (no positive or no negative) are an error for the
// binary form.
inline double average_precision(const std::vector<double>& scores,
                                const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw DataError("average_precision: size mismatch or empty input");
  size_t n_pos = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("average_precision: labels must be 0/1");
    n_pos += static_cast<size_t>(y);
  }
  if (n_pos == 0 || n_pos == scores.size())
    throw DataError("average_precision: labels are all one class");

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  double ap = 0.0;
  size_t tp = 0;
  for (size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] == 1) {
      ++tp;
      ap += static_cast<double>(tp) / static_cast<double>(k + 1);
    }
  }
  return ap / static_cast<double>(n_pos);
}

// Macro mean over classes that have at least one positive; classes with no
// negatives contribute 1. Errors if no class has a positive.
inline double average_precision_macro(const std::vector<std::vector<double>>& scores,
                                      const std::vector<std::vector<int>>& labels) {
  if (scores.empty() || scores.size() != labels.size())
    throw DataError("average_precision_macro: size mismatch or empty input");
  size_t n_classes = scores[0].size();
  double sum = 0.0;
  size_t used = 0;
  for (size_t c = 0; c < n_classes; ++c) {
    std::vector<double> s(scores.size());
    std::vector<int> y(scores.size());
    size_t n_pos = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      s[i] = scores[i][c];
      y[i] = labels[i][c];
      n_pos += static_cast<size_t>(y[i]);
    }
    if (n_pos == 0) continue;
    sum += (n_pos == scores.size()) ? 1.0 : average_precision(s, y);
    ++used;
  }
  if (used == 0) throw DataError("average_precision_macro: no class has a positive");
  return sum / static_cast<double>(used);
}

namespace detail {

// regularized incomplete beta I_x(a, b), Lentz continued fraction
inline double betacf(double a, double b, double x) {
  const double eps = 3e-16, fpmin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

inline double ibeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

inline double student_t_two_sided_p(double t, double df) {
  double x = df / (df + t * t);
  return ibeta(df / 2.0, 0.5, x);
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_var(const std::vector<double>& v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace detail

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  bool degenerate = false;  // zero variance everywhere: p forced to 0 or 1
};

// Welch two-sample two-sided t-test.
inline TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw DataError("welch_t_test: each sample needs at least 2 values");
  double ma = detail::mean(a), mb = detail::mean(b);
  double va = detail::sample_var(a, ma), vb = detail::sample_var(b, mb);
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  TTestResult r;
  double se2 = va / na + vb / nb;
  if (se2 <= 0.0) {
    r.degenerate = true;
    r.p = (ma == mb) ? 1.0 : 0.0;
    r.t = (ma == mb) ? 0.0 : std::numeric_limits<double>::infinity();
    return r;
  }
  r.t = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
  r.p = detail::student_t_two_sided_p(r.t, r.df);
  return r;
}

// Paired two-sided t-test on aligned samples (e.g. matched seeds).
inline TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw DataError("paired_t_test: samples must align with at least 2 pairs");
  std::vector<double> d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  double md = detail::mean(d);
  double vd = detail::sample_var(d, md);
  TTestResult r;
  if (vd <= 0.0) {
    r.degenerate = true;
    r.p = (md == 0.0) ? 1.0 : 0.0;
    r.t = (md == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    return r;
  }
  r.df = static_cast<double>(d.size() - 1);
  r.t = md / std::sqrt(vd / static_cast<double>(d.size()));
  r.p = detail::student_t_two_sided_p(r.t, r.df);
  return r;
}

// 2x2 chi-square independence test (1 dof, no continuity correction).
inline double chi2_2x2_p(double a, double b, double c, double d) {
  double n = a + b + c + d;
  double r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
  if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) return 1.0;
  double num = a * d - b * c;
  double chi2 = n * num * num / (r1 * r2 * c1 * c2);
  return std::erfc(std::sqrt(chi2 / 2.0));
}

}  // namespace unihpf
