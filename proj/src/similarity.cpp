#include "hyperclust/similarity.hpp"

#include "hyperclust/error.hpp"

#include <algorithm>
#include <cmath>

namespace hyperclust {

namespace {

std::size_t overlap_count(MemberSet a, MemberSet b) {
    std::size_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

void require_non_empty(MemberSet a, MemberSet b) {
    if (a.empty() || b.empty())
        throw InputError("similarity of an empty member set is undefined");
}

// Smallest power-of-ten scale (<= 1e6) that makes both parameters integral.
std::optional<long long> decimal_scale(const SizeFilterParams& p) {
    long long scale = 1;
    for (int digits = 0; digits <= 6; ++digits, scale *= 10) {
        const double r = p.slack_ratio * static_cast<double>(scale);
        const double o = p.slack_offset * static_cast<double>(scale);
        if (std::abs(r - std::round(r)) < 1e-9 * static_cast<double>(scale) &&
            std::abs(o - std::round(o)) < 1e-9 * static_cast<double>(scale))
            return scale;
    }
    return std::nullopt;
}

}  // namespace

std::optional<SimilarityKind> parse_similarity_kind(std::string_view text) {
    if (text == "jaccard")
        return SimilarityKind::Jaccard;
    if (text == "simplicial")
        return SimilarityKind::Simplicial;
    if (text == "size-filtered" || text == "filtered")
        return SimilarityKind::SizeFiltered;
    return std::nullopt;
}

std::string_view to_string(SimilarityKind kind) {
    switch (kind) {
    case SimilarityKind::Jaccard: return "jaccard";
    case SimilarityKind::Simplicial: return "simplicial";
    case SimilarityKind::SizeFiltered: return "size-filtered";
    }
    return "jaccard";
}

void validate(const SizeFilterParams& params) {
    if (!(params.slack_ratio >= 1.0) || !std::isfinite(params.slack_ratio))
        throw ParameterError("size filter slack ratio must be >= 1");
    if (!(params.slack_offset >= 0.0) || !std::isfinite(params.slack_offset))
        throw ParameterError("size filter slack offset must be >= 0");
}

__extension__ using Wide = __int128;

bool size_filter_passes(std::size_t size_a, std::size_t size_b, const SizeFilterParams& params) {
    const auto small = static_cast<long long>(std::min(size_a, size_b));
    const auto large = static_cast<long long>(std::max(size_a, size_b));
    if (auto scale = decimal_scale(params)) {
        const auto ratio = static_cast<Wide>(std::llround(params.slack_ratio * *scale));
        const auto offset = static_cast<Wide>(std::llround(params.slack_offset * *scale));
        return small * ratio + offset >= static_cast<Wide>(large) * *scale;
    }
    return static_cast<double>(small) * params.slack_ratio + params.slack_offset >=
           static_cast<double>(large);
}

double similarity_from_overlap(const SimilarityConfig& config, std::size_t overlap,
                               std::size_t size_a, std::size_t size_b) {
    if (overlap == 0)
        return 0.0;
    switch (config.kind) {
    case SimilarityKind::Jaccard:
        return static_cast<double>(overlap) / static_cast<double>(size_a + size_b - overlap);
    case SimilarityKind::Simplicial:
        return overlap == std::min(size_a, size_b) ? 1.0 : 0.0;
    case SimilarityKind::SizeFiltered:
        if (!size_filter_passes(size_a, size_b, config.filter))
            return 0.0;
        return static_cast<double>(overlap) / static_cast<double>(size_a + size_b - overlap);
    }
    return 0.0;
}

double similarity(const SimilarityConfig& config, MemberSet a, MemberSet b) {
    require_non_empty(a, b);
    return similarity_from_overlap(config, overlap_count(a, b), a.size(), b.size());
}

double jaccard(MemberSet a, MemberSet b) {
    return similarity({SimilarityKind::Jaccard, {}}, a, b);
}

double simplicial(MemberSet a, MemberSet b) {
    return similarity({SimilarityKind::Simplicial, {}}, a, b);
}

double size_filtered(MemberSet a, MemberSet b, const SizeFilterParams& params) {
    validate(params);
    return similarity({SimilarityKind::SizeFiltered, params}, a, b);
}

double time_kernel(double ti, double tj, double sigma) {
    if (!(sigma > 0.0))
        throw ParameterError("time kernel width sigma must be positive");
    return std::max(1.0 - std::abs(ti - tj) / sigma, 0.0);
}

double combined_weight(double structural, double temporal) {
    if (!(structural >= 0.0 && structural <= 1.0) || !(temporal >= 0.0 && temporal <= 1.0))
        throw ParameterError("similarities must lie in [0, 1]");
    return std::sqrt(structural * temporal);
}

}  // namespace hyperclust
