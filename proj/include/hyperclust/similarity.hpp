#pragma once

#include "hyperclust/hypergraph.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace hyperclust {

using MemberSet = std::span<const VertexId>;

enum class SimilarityKind { Jaccard, Simplicial, SizeFiltered };

// Size-filter slack: a pair passes when min|M| * ratio + offset >= max|M|.
struct SizeFilterParams {
    double slack_ratio = 1.1;
    double slack_offset = 2.0;
};

struct SimilarityConfig {
    SimilarityKind kind = SimilarityKind::Jaccard;
    SizeFilterParams filter{};
};

std::optional<SimilarityKind> parse_similarity_kind(std::string_view text);
std::string_view to_string(SimilarityKind kind);

// Throws ParameterError unless slack_ratio >= 1 and slack_offset >= 0.
void validate(const SizeFilterParams& params);

// All set arguments are sorted, duplicate-free and non-empty (InputError otherwise).
double jaccard(MemberSet a, MemberSet b);
double simplicial(MemberSet a, MemberSet b);
double size_filtered(MemberSet a, MemberSet b, const SizeFilterParams& params = {});

// Filter predicate on cardinalities. Decimal parameters (up to six places) are
// compared in exact integer arithmetic, so 10 * 1.1 + 2 >= 13 holds.
bool size_filter_passes(std::size_t size_a, std::size_t size_b, const SizeFilterParams& params);

// Structural similarity from the overlap count and the two set sizes.
double similarity_from_overlap(const SimilarityConfig& config, std::size_t overlap,
                               std::size_t size_a, std::size_t size_b);

double similarity(const SimilarityConfig& config, MemberSet a, MemberSet b);

// max(1 - |ti - tj| / sigma, 0). Throws ParameterError when sigma <= 0.
double time_kernel(double ti, double tj, double sigma);

// sqrt(s * t) for s, t in [0, 1].
double combined_weight(double structural, double temporal);

}  // namespace hyperclust
