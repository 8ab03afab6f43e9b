#pragma once

// Brute-force reference implementations used as independent oracles. They are
// written straight from the textbook definitions, favoring clarity over
// speed, and must stay decoupled from the library code they check.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace oracle {

// Jaro similarity computed the long way: explicit per-position window scan,
// greedy first-free matching, transpositions as half the count of matched
// characters whose order differs.
inline double jaro(const std::u32string& a, const std::u32string& b) {
    if (a.empty() && b.empty()) {
        return 1.0;
    }
    if (a.empty() || b.empty()) {
        return 0.0;
    }

    const long window = std::max<long>(
        static_cast<long>(std::max(a.size(), b.size())) / 2 - 1, 0);

    std::vector<bool> a_used(a.size(), false);
    std::vector<bool> b_used(b.size(), false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const long dist = static_cast<long>(i) - static_cast<long>(j);
            if (dist > window || -dist > window) {
                continue;
            }
            if (!b_used[j] && a[i] == b[j]) {
                a_used[i] = true;
                b_used[j] = true;
                break;
            }
        }
    }

    std::u32string a_matched;
    std::u32string b_matched;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a_used[i]) {
            a_matched.push_back(a[i]);
        }
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (b_used[j]) {
            b_matched.push_back(b[j]);
        }
    }

    const double m = static_cast<double>(a_matched.size());
    if (m == 0) {
        return 0.0;
    }
    std::size_t out_of_order = 0;
    for (std::size_t k = 0; k < a_matched.size(); ++k) {
        if (a_matched[k] != b_matched[k]) {
            ++out_of_order;
        }
    }
    const double t = static_cast<double>(out_of_order) / 2.0;

    return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) +
            (m - t) / m) /
           3.0;
}

inline double jaro_winkler(const std::u32string& a, const std::u32string& b,
                           double prefix_scale = 0.1, int max_prefix = 4) {
    const double base = jaro(a, b);
    int prefix = 0;
    while (prefix < max_prefix && prefix < static_cast<int>(std::min(a.size(), b.size())) &&
           a[prefix] == b[prefix]) {
        ++prefix;
    }
    return base + prefix * prefix_scale * (1.0 - base);
}

inline std::u32string widen(const std::string& ascii) {
    return {ascii.begin(), ascii.end()};
}

// All strings over `alphabet` with length in [0, max_len].
inline std::vector<std::u32string> all_strings(const std::u32string& alphabet,
                                               std::size_t max_len) {
    std::vector<std::u32string> out = {U""};
    std::vector<std::u32string> frontier = {U""};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::u32string> next;
        for (const auto& prefix : frontier) {
            for (char32_t c : alphabet) {
                next.push_back(prefix + c);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

// Consensus reference: independent double loop over every other candidate.
inline std::vector<double> consensus(const std::vector<std::string>& texts,
                                     const std::function<double(const std::string&,
                                                                const std::string&)>& sim) {
    std::vector<double> scores(texts.size(), 0.0);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < texts.size(); ++j) {
            if (j == i) {
                continue;
            }
            sum += sim(texts[i], texts[j]);
        }
        scores[i] = sum / static_cast<double>(texts.size() - 1);
    }
    return scores;
}

} // namespace oracle
