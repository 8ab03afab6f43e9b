#pragma once

#include <string_view>

namespace promptgen {

struct SimilarityParams {
    double prefix_scale = 0.1; // in [0, 0.25]
    int max_prefix = 4;        // common-prefix cap, in code points

    /// Throws std::invalid_argument unless prefix_scale is in [0, 0.25],
    /// max_prefix >= 0 and prefix_scale * max_prefix <= 1.
    void validate() const;
};

/// Jaro similarity over Unicode scalar values, in [0, 1]. Both strings empty
/// scores 1.0; exactly one empty scores 0.0.
double jaro(std::u32string_view s1, std::u32string_view s2);
double jaro(std::string_view s1_utf8, std::string_view s2_utf8);

/// Jaro-Winkler: jaro plus a common-prefix bonus of l * prefix_scale *
/// (1 - jaro), with l capped at max_prefix. Always >= jaro and <= 1.
double jaro_winkler(std::u32string_view s1, std::u32string_view s2,
                    const SimilarityParams& params = {});
double jaro_winkler(std::string_view s1_utf8, std::string_view s2_utf8,
                    const SimilarityParams& params = {});

} // namespace promptgen
