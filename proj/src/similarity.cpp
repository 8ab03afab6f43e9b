#include "promptgen/similarity.hpp"

#include "promptgen/unicode.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace promptgen {

void SimilarityParams::validate() const {
    if (prefix_scale < 0.0 || prefix_scale > 0.25) {
        throw std::invalid_argument("prefix_scale must be in [0, 0.25]");
    }
    if (max_prefix < 0) {
        throw std::invalid_argument("max_prefix must be non-negative");
    }
    if (prefix_scale * max_prefix > 1.0) {
        throw std::invalid_argument("prefix_scale * max_prefix must not exceed 1");
    }
}

double jaro(std::u32string_view s1, std::u32string_view s2) {
    const std::size_t len1 = s1.size();
    const std::size_t len2 = s2.size();
    if (len1 == 0 && len2 == 0) {
        return 1.0;
    }
    if (len1 == 0 || len2 == 0) {
        return 0.0;
    }

    // Characters match only within this window; clamped so length-1 strings
    // can still match at the same position.
    const std::size_t max_len = std::max(len1, len2);
    const std::size_t window = max_len / 2 > 0 ? max_len / 2 - 1 : 0;

    std::vector<bool> matched1(len1, false);
    std::vector<bool> matched2(len2, false);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < len1; ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(len2, i + window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (!matched2[j] && s1[i] == s2[j]) {
                matched1[i] = true;
                matched2[j] = true;
                ++matches;
                break;
            }
        }
    }
    if (matches == 0) {
        return 0.0;
    }

    // Transpositions: half the count of matched characters whose order
    // differs between the two matched sequences.
    std::size_t out_of_order = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < len1; ++i) {
        if (!matched1[i]) {
            continue;
        }
        while (!matched2[j]) {
            ++j;
        }
        if (s1[i] != s2[j]) {
            ++out_of_order;
        }
        ++j;
    }

    const double m = static_cast<double>(matches);
    const double t = static_cast<double>(out_of_order) / 2.0;
    return (m / static_cast<double>(len1) + m / static_cast<double>(len2) + (m - t) / m) / 3.0;
}

double jaro(std::string_view s1_utf8, std::string_view s2_utf8) {
    return jaro(std::u32string_view(decode_utf8(s1_utf8)), std::u32string_view(decode_utf8(s2_utf8)));
}

double jaro_winkler(std::u32string_view s1, std::u32string_view s2,
                    const SimilarityParams& params) {
    params.validate();
    const double base = jaro(s1, s2);

    const std::size_t limit =
        std::min({s1.size(), s2.size(), static_cast<std::size_t>(params.max_prefix)});
    std::size_t prefix = 0;
    while (prefix < limit && s1[prefix] == s2[prefix]) {
        ++prefix;
    }

    return base + static_cast<double>(prefix) * params.prefix_scale * (1.0 - base);
}

double jaro_winkler(std::string_view s1_utf8, std::string_view s2_utf8,
                    const SimilarityParams& params) {
    return jaro_winkler(std::u32string_view(decode_utf8(s1_utf8)),
                        std::u32string_view(decode_utf8(s2_utf8)), params);
}

} // namespace promptgen
