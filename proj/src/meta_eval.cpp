#include "fmeval/meta_eval.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fmeval/errors.hpp"

namespace fmeval {
namespace {

void require_same_length(const ScoreVector& x, const ScoreVector& y) {
  if (x.size() != y.size()) {
    throw Error(Errc::length_mismatch, "score vectors differ in length (" +
                                           std::to_string(x.size()) + " vs " +
                                           std::to_string(y.size()) + ")");
  }
}

bool is_constant(const std::vector<double>& v) {
  for (double x : v) {
    if (x != v.front()) return false;
  }
  return true;
}

double pearson_rho(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(Errc::degenerate_input, "constant score vector has no defined correlation");
  }
  return sxy / std::sqrt(sxx * syy);
}

// Mid-ranks: ties receive the average of the ranks they span (1-based).
std::vector<double> mid_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

// Continued fraction for the regularized incomplete beta (Lentz's method).
double beta_continued_fraction(double a, double b, double x) {
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
    const int m2 = 2 * m;
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

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(ln_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(ln_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_two_sided_p(double t, int df) {
  if (df < 1) throw Error(Errc::range_error, "t distribution needs df >= 1");
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

CorrelationResult pearson(const ScoreVector& x, const ScoreVector& y) {
  require_same_length(x, y);
  if (x.size() < 2) throw Error(Errc::degenerate_input, "need at least 2 paired scores");
  if (is_constant(x.values) || is_constant(y.values)) {
    throw Error(Errc::degenerate_input, "constant score vector has no defined correlation");
  }
  return CorrelationResult{pearson_rho(x.values, y.values), CorrelationMethod::pearson,
                           static_cast<int>(x.size())};
}

CorrelationResult spearman(const ScoreVector& x, const ScoreVector& y) {
  require_same_length(x, y);
  if (x.size() < 2) throw Error(Errc::degenerate_input, "need at least 2 paired scores");
  if (is_constant(x.values) || is_constant(y.values)) {
    throw Error(Errc::degenerate_input, "constant score vector has no defined correlation");
  }
  const std::vector<double> rx = mid_ranks(x.values);
  const std::vector<double> ry = mid_ranks(y.values);
  return CorrelationResult{pearson_rho(rx, ry), CorrelationMethod::spearman,
                           static_cast<int>(x.size())};
}

CorrelationMatrix correlation_matrix(const std::vector<AlignedColumn>& columns,
                                     CorrelationMethod method) {
  const std::size_t k = columns.size();
  for (std::size_t i = 1; i < k; ++i) {
    if (columns[i].values.size() != columns[0].values.size()) {
      throw Error(Errc::length_mismatch, "aligned columns differ in length");
    }
  }
  CorrelationMatrix matrix;
  matrix.method = method;
  matrix.cells.assign(k, std::vector<MatrixCell>(k));
  for (const auto& column : columns) matrix.labels.push_back(column.label);
  for (std::size_t i = 0; i < k; ++i) {
    int defined = 0;
    for (const auto& v : columns[i].values) defined += v.has_value() ? 1 : 0;
    matrix.cells[i][i] = MatrixCell{1.0, defined};
    for (std::size_t j = i + 1; j < k; ++j) {
      ScoreVector xs;
      ScoreVector ys;
      for (std::size_t r = 0; r < columns[i].values.size(); ++r) {
        if (columns[i].values[r] && columns[j].values[r]) {
          xs.values.push_back(*columns[i].values[r]);
          ys.values.push_back(*columns[j].values[r]);
        }
      }
      MatrixCell cell;
      cell.n = static_cast<int>(xs.size());
      try {
        const CorrelationResult result = (method == CorrelationMethod::spearman)
                                             ? spearman(xs, ys)
                                             : pearson(xs, ys);
        cell.rho = result.rho;
      } catch (const Error&) {
        // Pair has too few complete rows or a constant column; leave the cell empty.
      }
      matrix.cells[i][j] = cell;
      matrix.cells[j][i] = cell;
    }
  }
  return matrix;
}

AgreementResult cohens_kappa(const std::vector<int>& a, const std::vector<int>& b, int classes) {
  if (a.size() != b.size()) {
    throw Error(Errc::length_mismatch, "label vectors differ in length");
  }
  if (a.empty()) throw Error(Errc::degenerate_input, "empty label vectors");
  if (classes < 2) throw Error(Errc::label_range, "need at least 2 classes");
  std::vector<double> pa(classes, 0.0);
  std::vector<double> pb(classes, 0.0);
  const double n = static_cast<double>(a.size());
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 1 || a[i] > classes || b[i] < 1 || b[i] > classes) {
      throw Error(Errc::label_range,
                  "label outside [1," + std::to_string(classes) + "] at index " + std::to_string(i));
    }
    pa[a[i] - 1] += 1.0;
    pb[b[i] - 1] += 1.0;
    if (a[i] == b[i]) agree += 1.0;
  }
  const double p_o = agree / n;
  double p_e = 0.0;
  for (int c = 0; c < classes; ++c) p_e += (pa[c] / n) * (pb[c] / n);
  if (p_e >= 1.0) {
    throw Error(Errc::degenerate_input, "both raters constant; kappa undefined");
  }
  AgreementResult result;
  result.observed_agreement = p_o;
  result.expected_agreement = p_e;
  result.kappa = (p_o - p_e) / (1.0 - p_e);
  result.classes = classes;
  result.n = static_cast<int>(a.size());
  return result;
}

BootstrapSummary bootstrap(const ScoreVector& values, Statistic statistic, int resamples,
                           std::uint64_t seed) {
  if (values.values.empty()) throw Error(Errc::empty_input, "cannot bootstrap an empty vector");
  if (resamples < 1) throw Error(Errc::range_error, "resamples must be >= 1");
  (void)statistic;  // only the mean is supported
  const std::size_t n = values.size();
  std::mt19937_64 rng(seed);
  std::vector<double> stats(resamples);
  for (int r = 0; r < resamples; ++r) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += values.values[rng() % n];
    }
    stats[r] = total / static_cast<double>(n);
  }
  std::sort(stats.begin(), stats.end());
  BootstrapSummary summary;
  summary.statistic = "mean";
  summary.point =
      std::accumulate(values.values.begin(), values.values.end(), 0.0) / static_cast<double>(n);
  summary.resamples = resamples;
  summary.ci_low = quantile_sorted(stats, 0.025);
  summary.ci_high = quantile_sorted(stats, 0.975);
  summary.iqr = quantile_sorted(stats, 0.75) - quantile_sorted(stats, 0.25);
  summary.seed = seed;
  return summary;
}

PowerResult power_analysis(const ScoreVector& a, const ScoreVector& b, int resamples, double alpha,
                           std::uint64_t seed) {
  require_same_length(a, b);
  if (a.values.empty()) throw Error(Errc::empty_input, "cannot test empty score vectors");
  if (resamples < 1) throw Error(Errc::range_error, "resamples must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::range_error, "alpha must lie in (0,1)");
  const std::size_t n = a.size();
  std::vector<double> diffs(n);
  for (std::size_t i = 0; i < n; ++i) diffs[i] = a.values[i] - b.values[i];

  PowerResult result;
  result.metric = a.label;
  result.alpha = alpha;
  result.resamples = resamples;
  result.zero_variance = is_constant(diffs);

  std::mt19937_64 rng(seed);
  int rejections = 0;
  std::vector<double> d(n);
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) d[i] = diffs[rng() % n];
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : d) var += (v - mean) * (v - mean);
    bool reject = false;
    if (n < 2 || var == 0.0) {
      reject = (mean != 0.0);
    } else {
      var /= static_cast<double>(n - 1);
      const double t = mean / std::sqrt(var / static_cast<double>(n));
      reject = student_t_two_sided_p(t, static_cast<int>(n) - 1) < alpha;
    }
    if (reject) ++rejections;
  }
  result.power = static_cast<double>(rejections) / static_cast<double>(resamples);
  return result;
}

WeightFit fit_weights(const std::vector<std::array<double, 4>>& facet_scores,
                      const ScoreVector& overall) {
  if (facet_scores.size() != overall.size()) {
    throw Error(Errc::length_mismatch, "facet matrix and overall vector differ in length");
  }
  const auto n = static_cast<Eigen::Index>(facet_scores.size());
  if (n < 4) throw Error(Errc::degenerate_input, "weight fitting needs at least 4 rows");
  Eigen::MatrixXd x(n, 4);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j) x(i, j) = facet_scores[i][j];
    y(i) = overall.values[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < 4) {
    // The columns rejected by the pivoting are the dependent ones.
    const auto& perm = qr.colsPermutation().indices();
    std::string offending;
    for (Eigen::Index k = qr.rank(); k < 4; ++k) {
      if (!offending.empty()) offending += ",";
      offending += facet_name(static_cast<FacetKind>(perm[k]));
    }
    throw Error(Errc::rank_deficient, "collinear facet columns: " + offending, offending);
  }
  const Eigen::VectorXd w = qr.solve(y);
  WeightFit fit;
  for (int j = 0; j < 4; ++j) fit.raw[j] = w(j);
  const double coeff_sum = w.sum();
  if (std::fabs(coeff_sum) < 1e-12) {
    throw Error(Errc::degenerate_input, "fitted coefficients sum to zero; cannot normalize");
  }
  for (int j = 0; j < 4; ++j) fit.weights.values[j] = w(j) / coeff_sum;
  fit.mse = (x * w - y).squaredNorm() / static_cast<double>(n);
  fit.n = static_cast<int>(n);
  return fit;
}

}  // namespace fmeval
