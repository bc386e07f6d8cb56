#include "polarity/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "polarity/error.hpp"

namespace polarity {

void SmoothingConfig::validate() const {
  if (window < 1 || window % 2 == 0) throw ConfigError("smoothing window must be odd and >= 1");
  if (degree >= window) throw ConfigError("smoothing degree must be < window");
}

namespace {

// Least-squares polynomial fit over y at integer offsets [-h, h], evaluated
// at offset 0. Solves the normal equations by Gaussian elimination; the
// system is tiny (degree <= ~5).
double fit_at_center(const std::vector<double>& y, std::size_t h, std::size_t degree) {
  const std::size_t m = degree + 1;
  std::vector<double> moments(2 * degree + 1, 0.0);  // sum of x^k over window
  std::vector<double> rhs(m, 0.0);                   // sum of y * x^k
  const long hh = static_cast<long>(h);
  for (long x = -hh; x <= hh; ++x) {
    const double yv = y[static_cast<std::size_t>(x + hh)];
    double xp = 1.0;
    for (std::size_t k = 0; k <= 2 * degree; ++k) {
      moments[k] += xp;
      if (k < m) rhs[k] += yv * xp;
      xp *= static_cast<double>(x);
    }
  }
  // normal matrix A[i][j] = moments[i + j]
  std::vector<std::vector<double>> a(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[i][j] = moments[i + j];
  }
  std::vector<double> b = rhs;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw NumericError("savgol: singular normal equations");
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t cc = col; cc < m; ++cc) a[r][cc] -= f * a[col][cc];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> coef(m);
  for (std::size_t i = m; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < m; ++j) s -= a[i][j] * coef[j];
    coef[i] = s / a[i][i];
  }
  return coef[0];  // polynomial value at the window centre
}

}  // namespace

LearningCurve savgol_smooth(const LearningCurve& curve, const SmoothingConfig& cfg) {
  cfg.validate();
  const std::size_t n = curve.points.size();
  if (n == 0) throw ArgumentError("savgol_smooth: empty curve");
  if (n < cfg.degree + 1) {
    throw NumericError("savgol_smooth: fewer than degree+1 points in any effective window");
  }
  if (cfg.window > 2 * n - 1) {
    throw ArgumentError("savgol_smooth: window exceeds 2*len-1");
  }
  const std::size_t h_nominal = (cfg.window - 1) / 2;

  LearningCurve out = curve;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = std::min({h_nominal, i, n - 1 - i});
    std::vector<double> y(2 * h + 1);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = curve.points[i - h + k].accuracy;
    const std::size_t degree = std::min(cfg.degree, 2 * h);  // degrade at the edges
    out.points[i].accuracy = fit_at_center(y, h, degree);
  }
  return out;
}

double final_accuracy(const LearningCurve& smoothed) {
  if (smoothed.points.empty()) throw ArgumentError("final_accuracy: empty curve");
  return smoothed.points.back().accuracy;
}

DataEfficiencyResult data_efficiency(const LearningCurve& smoothed, double threshold_factor) {
  if (smoothed.points.empty()) throw ArgumentError("data_efficiency: empty curve");
  DataEfficiencyResult res;
  res.context = smoothed.context;
  res.final_accuracy = final_accuracy(smoothed);
  res.threshold_accuracy = threshold_factor * res.final_accuracy;
  for (std::size_t i = 0; i < smoothed.points.size(); ++i) {
    if (smoothed.points[i].accuracy >= res.threshold_accuracy) {
      res.examples_to_95 = smoothed.points[i].examples_seen;
      res.step_to_95 = smoothed.points[i].step;
      res.index_to_95 = i;
      return res;
    }
  }
  // by construction the last point satisfies the threshold; guard anyway
  const CurvePoint& last = smoothed.points.back();
  res.examples_to_95 = last.examples_seen;
  res.step_to_95 = last.step;
  res.index_to_95 = smoothed.points.size() - 1;
  return res;
}

AbcResult abc(const LearningCurve& all_curve, const LearningCurve& single_curve) {
  if (all_curve.points.empty() || single_curve.points.empty()) {
    throw ArgumentError("abc: empty curve");
  }
  // intersect on common steps, preserving order
  std::vector<CurvePoint> a, s;
  {
    std::size_t ia = 0, is = 0;
    while (ia < all_curve.points.size() && is < single_curve.points.size()) {
      const std::size_t sa = all_curve.points[ia].step;
      const std::size_t ss = single_curve.points[is].step;
      if (sa == ss) {
        a.push_back(all_curve.points[ia]);
        s.push_back(single_curve.points[is]);
        ++ia;
        ++is;
      } else if (sa < ss) {
        ++ia;
      } else {
        ++is;
      }
    }
  }
  if (a.empty()) throw ArgumentError("abc: step grids have empty intersection");

  LearningCurve ac{all_curve.context, all_curve.seed_tag, a};
  LearningCurve sc{single_curve.context, single_curve.seed_tag, s};
  const DataEfficiencyResult ea = data_efficiency(ac);
  const DataEfficiencyResult es = data_efficiency(sc);
  const std::size_t end_index = std::max(ea.index_to_95, es.index_to_95);

  AbcResult res;
  res.context = all_curve.context;
  res.endpoint_step = a[end_index].step;
  res.endpoint_examples = a[end_index].examples_seen;

  double area = 0.0;
  for (std::size_t i = 0; i + 1 <= end_index; ++i) {
    const double dx = a[i + 1].examples_seen - a[i].examples_seen;
    const double d0 = a[i].accuracy - s[i].accuracy;
    const double d1 = a[i + 1].accuracy - s[i + 1].accuracy;
    area += dx * 0.5 * (d0 + d1);
  }
  res.abc = area;
  const double extent = a[end_index].examples_seen - a[0].examples_seen;
  res.normalized_abc = extent > 0.0 ? area / extent : 0.0;
  return res;
}

FrequencyEfficiencyReport frequency_vs_efficiency(
    const std::vector<std::pair<ContextType, double>>& frequency_per_100k,
    const std::vector<std::vector<DataEfficiencyResult>>& per_seed_results) {
  if (frequency_per_100k.size() < 3) {
    throw ArgumentError("frequency_vs_efficiency: need at least 3 contexts");
  }
  if (per_seed_results.empty()) {
    throw ArgumentError("frequency_vs_efficiency: need at least 1 seed");
  }
  FrequencyEfficiencyReport report;
  std::vector<double> xs, ys;
  for (const auto& [context, freq] : frequency_per_100k) {
    EfficiencyScatterPoint pt;
    pt.context = context;
    pt.frequency_per_100k = freq;
    for (const auto& seed_results : per_seed_results) {
      bool found = false;
      for (const DataEfficiencyResult& r : seed_results) {
        if (r.context == context) {
          pt.per_seed_examples.push_back(r.examples_to_95);
          found = true;
          break;
        }
      }
      if (!found) {
        throw ArgumentError("frequency_vs_efficiency: missing context " +
                            std::string(to_string(context)) + " in a seed's results");
      }
    }
    double sum = 0.0;
    for (double v : pt.per_seed_examples) sum += v;
    pt.mean_examples_to_95 = sum / static_cast<double>(pt.per_seed_examples.size());
    xs.push_back(pt.frequency_per_100k);
    ys.push_back(pt.mean_examples_to_95);
    report.points.push_back(std::move(pt));
  }
  report.correlation = pearson(xs, ys);
  return report;
}

}  // namespace polarity
