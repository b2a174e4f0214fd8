#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "fmeval/facet.hpp"
#include "fmeval/weights.hpp"

namespace fmeval {

enum class RougeVariant { rouge1, rouge2, rougeL };

std::string_view rouge_variant_name(RougeVariant variant);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  RougeVariant variant = RougeVariant::rouge1;
};

// Clipped n-gram overlap, n in {1,2}. Empty n-gram sets yield zero components.
RougeScore rouge_n(std::string_view reference, std::string_view hypothesis, int n);

// Summary-level ROUGE-L: one LCS over the whole token sequences.
RougeScore rouge_l(std::string_view reference, std::string_view hypothesis);

RougeScore rouge(std::string_view reference, std::string_view hypothesis, RougeVariant variant);

// Lexical scoring applied per extracted facet. Facets absent from the
// reference are skipped; facets the generation lacks score 0. `overall` is
// the weight-renormalized mean of facet F1 over reference-present facets.
struct FacetMetricScore {
  std::array<std::optional<RougeScore>, 4> facets;
  std::optional<double> overall;
};

FacetMetricScore facet_metric(const FacetSet& ref_facets, const FacetSet& gen_facets,
                              const WeightVector& weights, RougeVariant variant);

}  // namespace fmeval
