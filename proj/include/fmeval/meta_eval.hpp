#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fmeval/score_vector.hpp"
#include "fmeval/weights.hpp"

namespace fmeval {

enum class CorrelationMethod { spearman, pearson };

struct CorrelationResult {
  double rho = 0.0;
  CorrelationMethod method = CorrelationMethod::spearman;
  int n = 0;
};

// Spearman rank correlation: Pearson over mid-ranks, ties averaged.
CorrelationResult spearman(const ScoreVector& x, const ScoreVector& y);

CorrelationResult pearson(const ScoreVector& x, const ScoreVector& y);

// A score column that may have gaps; used for pairwise-complete correlation
// matrices over observations that not every metric covers.
struct AlignedColumn {
  std::string label;
  std::vector<std::optional<double>> values;
};

struct MatrixCell {
  std::optional<double> rho;  // absent when a pair has <2 complete rows or is constant
  int n = 0;
};

struct CorrelationMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<MatrixCell>> cells;  // symmetric, unit diagonal
  CorrelationMethod method = CorrelationMethod::spearman;
};

CorrelationMatrix correlation_matrix(const std::vector<AlignedColumn>& columns,
                                     CorrelationMethod method);

struct AgreementResult {
  double observed_agreement = 0.0;
  double expected_agreement = 0.0;
  double kappa = 0.0;
  int classes = 0;
  int n = 0;
};

// Cohen's kappa over integer labels in [1, classes].
AgreementResult cohens_kappa(const std::vector<int>& a, const std::vector<int>& b, int classes);

enum class Statistic { mean };

struct BootstrapSummary {
  std::string statistic;
  double point = 0.0;
  int resamples = 0;
  double ci_low = 0.0;   // percentile 95% CI over the resample distribution
  double ci_high = 0.0;
  double iqr = 0.0;
  std::uint64_t seed = 0;
};

// Resampling protocol (fixed so independent reimplementations agree bit for
// bit): rng = std::mt19937_64(seed); each resample draws n indices as
// rng() % n in order; quantiles use linear interpolation on the sorted
// resample statistics, h = q * (resamples - 1).
BootstrapSummary bootstrap(const ScoreVector& values, Statistic statistic, int resamples,
                           std::uint64_t seed);

struct PowerResult {
  std::string metric;
  std::pair<std::string, std::string> systems;
  double power = 0.0;
  double alpha = 0.05;
  int resamples = 0;
  bool zero_variance = false;  // all paired differences equal in the input
};

// Fraction of bootstrap resamples in which a paired two-sided t-test on the
// per-record differences rejects at `alpha`. Resample indices follow the
// bootstrap protocol above. A zero-variance resample counts as a rejection
// iff its mean difference is nonzero.
PowerResult power_analysis(const ScoreVector& a, const ScoreVector& b, int resamples, double alpha,
                           std::uint64_t seed);

struct WeightFit {
  WeightVector weights;          // coefficients normalized to sum 1
  std::array<double, 4> raw{};   // ordinary least squares coefficients
  double mse = 0.0;
  int n = 0;
};

// OLS without intercept of overall on the four normalized facet columns
// (ordered B, M, R, C).
WeightFit fit_weights(const std::vector<std::array<double, 4>>& facet_scores,
                      const ScoreVector& overall);

// Two-sided p-value of a t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, int df);

}  // namespace fmeval
