#pragma once

#include "promptgen/example_pool.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace promptgen {

enum class SampleLabel { A, B, C };

char to_char(SampleLabel label);

struct SamplerConfig {
    std::size_t sample_size = 5;
    std::uint64_t seed = 0;
};

/// The three randomized example subsets: A and B disjoint, C a half/half
/// mixture of both (ceil(k/2) from A, floor(k/2) from B).
struct SampleTriple {
    std::vector<std::string> sample_a; // ExamplePair ids, in draw order
    std::vector<std::string> sample_b;
    std::vector<std::string> sample_c;
    std::uint64_t seed = 0;
};

/// Draws the triple deterministically from (pool order, config.seed), with the
/// effective sample size k = min(config.sample_size, pool.size() / 2).
/// Throws PoolTooSmallError if the pool has fewer than kMinPoolSize examples.
SampleTriple build_samples(const ExamplePool& pool, const SamplerConfig& config);

/// One uniform sample of `count` ids (used by the baseline mode).
std::vector<std::string> draw_sample(const ExamplePool& pool, std::size_t count,
                                     std::uint64_t seed);

/// Resolves sample ids back to the pool's pairs, preserving id order.
std::vector<ExamplePair> select_examples(const ExamplePool& pool,
                                         std::span<const std::string> ids);

} // namespace promptgen
