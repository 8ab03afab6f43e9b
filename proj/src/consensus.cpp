#include "promptgen/consensus.hpp"

#include "promptgen/errors.hpp"

#include <algorithm>

namespace promptgen {

std::vector<std::vector<double>> pairwise_similarity_matrix(std::span<const std::string> texts,
                                                            const SimilarityFn& similarity) {
    const std::size_t k = texts.size();
    std::vector<std::vector<double>> matrix(k, std::vector<double>(k, 1.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double s = similarity(texts[i], texts[j]);
            matrix[i][j] = s;
            matrix[j][i] = s;
        }
    }
    return matrix;
}

std::vector<double> consensus_scores(std::span<const CandidatePrompt> candidates,
                                     const SimilarityParams& params) {
    const std::size_t k = candidates.size();
    if (k < 2) {
        throw TooFewCandidatesError("consensus scoring needs at least 2 candidates, got " +
                                    std::to_string(k));
    }
    params.validate();

    std::vector<std::string> texts;
    texts.reserve(k);
    for (const auto& candidate : candidates) {
        texts.push_back(candidate.text);
    }
    const auto matrix = pairwise_similarity_matrix(
        texts, [&params](std::string_view a, std::string_view b) {
            return jaro_winkler(a, b, params);
        });

    std::vector<double> scores(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j != i) {
                sum += matrix[i][j];
            }
        }
        scores[i] = sum / static_cast<double>(k - 1);
    }
    return scores;
}

RankedPromptList rank(std::vector<CandidatePrompt> candidates, const SimilarityParams& params) {
    const auto scores = consensus_scores(candidates, params);

    RankedPromptList ranked;
    ranked.entries.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ranked.entries.push_back({std::move(candidates[i]), scores[i]});
    }

    std::sort(ranked.entries.begin(), ranked.entries.end(),
              [](const RankedEntry& lhs, const RankedEntry& rhs) {
                  if (lhs.score != rhs.score) {
                      return lhs.score > rhs.score;
                  }
                  if (lhs.candidate.text.size() != rhs.candidate.text.size()) {
                      return lhs.candidate.text.size() < rhs.candidate.text.size();
                  }
                  if (lhs.candidate.text != rhs.candidate.text) {
                      return lhs.candidate.text < rhs.candidate.text;
                  }
                  if (lhs.candidate.sample_label != rhs.candidate.sample_label) {
                      return lhs.candidate.sample_label < rhs.candidate.sample_label;
                  }
                  return lhs.candidate.index < rhs.candidate.index;
              });
    return ranked;
}

} // namespace promptgen
