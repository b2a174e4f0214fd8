#include "fmeval/baseline_metrics.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "fmeval/errors.hpp"
#include "fmeval/text.hpp"

namespace fmeval {
namespace {

std::map<std::string, int> ngram_counts(const std::vector<std::string>& tokens, int n) {
  std::map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back(' ');
      key.append(tokens[i + k]);
    }
    ++counts[key];
  }
  return counts;
}

double f1_of(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = (a[i - 1] == b[j - 1]) ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

std::string_view rouge_variant_name(RougeVariant variant) {
  switch (variant) {
    case RougeVariant::rouge1: return "rouge1";
    case RougeVariant::rouge2: return "rouge2";
    case RougeVariant::rougeL: return "rougeL";
  }
  return "";
}

RougeScore rouge_n(std::string_view reference, std::string_view hypothesis, int n) {
  if (n != 1 && n != 2) throw Error(Errc::range_error, "rouge_n supports n in {1,2}");
  const auto ref_counts = ngram_counts(tokenize(reference), n);
  const auto hyp_counts = ngram_counts(tokenize(hypothesis), n);
  long ref_total = 0;
  long hyp_total = 0;
  long overlap = 0;
  for (const auto& [gram, count] : ref_counts) ref_total += count;
  for (const auto& [gram, count] : hyp_counts) hyp_total += count;
  for (const auto& [gram, count] : ref_counts) {
    auto it = hyp_counts.find(gram);
    if (it != hyp_counts.end()) overlap += std::min(count, it->second);
  }
  RougeScore score;
  score.variant = (n == 1) ? RougeVariant::rouge1 : RougeVariant::rouge2;
  score.recall = ref_total > 0 ? static_cast<double>(overlap) / ref_total : 0.0;
  score.precision = hyp_total > 0 ? static_cast<double>(overlap) / hyp_total : 0.0;
  score.f1 = f1_of(score.precision, score.recall);
  return score;
}

RougeScore rouge_l(std::string_view reference, std::string_view hypothesis) {
  const auto ref_tokens = tokenize(reference);
  const auto hyp_tokens = tokenize(hypothesis);
  const std::size_t lcs = lcs_length(ref_tokens, hyp_tokens);
  RougeScore score;
  score.variant = RougeVariant::rougeL;
  score.recall = ref_tokens.empty() ? 0.0 : static_cast<double>(lcs) / ref_tokens.size();
  score.precision = hyp_tokens.empty() ? 0.0 : static_cast<double>(lcs) / hyp_tokens.size();
  score.f1 = f1_of(score.precision, score.recall);
  return score;
}

RougeScore rouge(std::string_view reference, std::string_view hypothesis, RougeVariant variant) {
  switch (variant) {
    case RougeVariant::rouge1: return rouge_n(reference, hypothesis, 1);
    case RougeVariant::rouge2: return rouge_n(reference, hypothesis, 2);
    case RougeVariant::rougeL: return rouge_l(reference, hypothesis);
  }
  throw Error(Errc::range_error, "unknown rouge variant");
}

FacetMetricScore facet_metric(const FacetSet& ref_facets, const FacetSet& gen_facets,
                              const WeightVector& weights, RougeVariant variant) {
  weights.validate();
  if (ref_facets.present_count() == 0) {
    throw Error(Errc::all_omitted, "reference facet set has no facets");
  }
  FacetMetricScore out;
  double weight_total = 0.0;
  double weighted_f1 = 0.0;
  for (FacetKind kind : kFacetOrder) {
    if (!ref_facets.has(kind)) continue;
    const std::string_view gen_text =
        gen_facets.has(kind) ? std::string_view(gen_facets.text(kind)) : std::string_view();
    const RougeScore score = rouge(ref_facets.text(kind), gen_text, variant);
    out.facets[static_cast<int>(kind)] = score;
    weight_total += weights[kind];
    weighted_f1 += weights[kind] * score.f1;
  }
  if (weight_total > 0.0) {
    out.overall = weighted_f1 / weight_total;
  } else {
    // All reference facets carry zero weight; fall back to the plain mean.
    int n = 0;
    double total = 0.0;
    for (const auto& s : out.facets) {
      if (s) {
        total += s->f1;
        ++n;
      }
    }
    out.overall = n ? total / n : 0.0;
  }
  return out;
}

}  // namespace fmeval
