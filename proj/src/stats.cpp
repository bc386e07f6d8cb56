#include "polarity/stats.hpp"

#include <cmath>

#include "polarity/error.hpp"

namespace polarity {

namespace {

// Lentz's continued fraction for the incomplete beta function.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw ArgumentError("incomplete_beta: a, b must be > 0");
  if (x < 0.0 || x > 1.0) throw ArgumentError("incomplete_beta: x must be in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double df) {
  if (df <= 0.0) throw ArgumentError("student_t_sf: df must be > 0");
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double x = df / (df + t * t);
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);  // P(|T| >= |t|) / 2
  return t >= 0.0 ? tail : 1.0 - tail;
}

StatResult pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ArgumentError("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 3) throw ArgumentError("pearson: need at least 3 points");
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateStatError("pearson: zero variance, correlation undefined");
  }
  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);

  StatResult res;
  res.test = "pearson";
  res.statistic = r;
  res.n = n;
  res.df = static_cast<double>(n - 2);
  res.sidedness = Sidedness::TwoSided;
  if (std::fabs(r) >= 1.0) {
    res.p_value = 0.0;
  } else {
    const double t = r * std::sqrt(res.df / (1.0 - r * r));
    res.p_value = 2.0 * student_t_sf(std::fabs(t), res.df);
  }
  return res;
}

StatResult t_test_one_sample(std::span<const double> values, double mu0, Sidedness sidedness) {
  const std::size_t n = values.size();
  if (n < 2) throw ArgumentError("t_test_one_sample: need at least 2 values");
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(n - 1);
  if (var == 0.0) {
    throw DegenerateStatError("t_test_one_sample: zero sample variance, test degenerate");
  }
  StatResult res;
  res.test = "t_one_sample";
  res.n = n;
  res.df = static_cast<double>(n - 1);
  res.sidedness = sidedness;
  res.statistic = (m - mu0) / std::sqrt(var / static_cast<double>(n));
  if (sidedness == Sidedness::OneSided) {
    res.p_value = student_t_sf(res.statistic, res.df);  // H1: mean > mu0
  } else {
    res.p_value = 2.0 * student_t_sf(std::fabs(res.statistic), res.df);
  }
  return res;
}

StatResult t_test_welch(std::span<const double> xs, std::span<const double> ys,
                        Sidedness sidedness) {
  if (xs.size() < 2 || ys.size() < 2) throw ArgumentError("t_test_welch: need >= 2 per sample");
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sx = 0.0, sy = 0.0;
  for (double v : xs) sx += (v - mx) * (v - mx);
  for (double v : ys) sy += (v - my) * (v - my);
  sx /= nx - 1.0;
  sy /= ny - 1.0;
  const double se2 = sx / nx + sy / ny;
  if (se2 == 0.0) throw DegenerateStatError("t_test_welch: zero variance in both samples");

  StatResult res;
  res.test = "welch_two_sample";
  res.n = xs.size() + ys.size();
  res.sidedness = sidedness;
  res.statistic = (mx - my) / std::sqrt(se2);
  res.df = se2 * se2 /
           (sx * sx / (nx * nx * (nx - 1.0)) + sy * sy / (ny * ny * (ny - 1.0)));
  if (sidedness == Sidedness::OneSided) {
    res.p_value = student_t_sf(res.statistic, res.df);  // H1: mean(xs) > mean(ys)
  } else {
    res.p_value = 2.0 * student_t_sf(std::fabs(res.statistic), res.df);
  }
  return res;
}

}  // namespace polarity
