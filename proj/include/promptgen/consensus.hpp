#pragma once

#include "promptgen/sampler.hpp"
#include "promptgen/similarity.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace promptgen {

/// One LLM-generated instruction hypothesis plus its provenance.
struct CandidatePrompt {
    std::string text; // normalized instruction
    SampleLabel sample_label = SampleLabel::A;
    int index = 0; // completion index within the sample's batch
    std::string raw_completion;
};

struct RankedEntry {
    CandidatePrompt candidate;
    double score = 0.0;
};

/// Candidates sorted by consensus score, descending. Ties break by shorter
/// text, then lexicographic text, then (sample_label, index).
struct RankedPromptList {
    std::vector<RankedEntry> entries;

    const RankedEntry& top() const { return entries.front(); }
};

using SimilarityFn = std::function<double(std::string_view, std::string_view)>;

/// Symmetric pairwise matrix with each distinct pair computed exactly once
/// (k*(k-1)/2 calls); the diagonal is fixed at 1.
std::vector<std::vector<double>> pairwise_similarity_matrix(std::span<const std::string> texts,
                                                            const SimilarityFn& similarity);

/// score_i = average Jaro-Winkler similarity of candidate i to every *other*
/// candidate (self excluded, divide by k - 1).
/// Throws TooFewCandidatesError for fewer than 2 candidates.
std::vector<double> consensus_scores(std::span<const CandidatePrompt> candidates,
                                     const SimilarityParams& params = {});

RankedPromptList rank(std::vector<CandidatePrompt> candidates,
                      const SimilarityParams& params = {});

} // namespace promptgen
