#include "promptgen/sampler.hpp"

#include "promptgen/errors.hpp"

#include <random>
#include <unordered_map>

namespace promptgen {

char to_char(SampleLabel label) {
    switch (label) {
    case SampleLabel::A:
        return 'A';
    case SampleLabel::B:
        return 'B';
    case SampleLabel::C:
        return 'C';
    }
    return '?';
}

namespace {

// Unbiased bounded draw from the raw generator output. mt19937_64 is fixed by
// the standard, so sequences are identical across platforms; going through
// std::uniform_int_distribution would not be.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) {
            return r % n;
        }
    }
}

// Draws `count` elements without replacement; draw order is returned order.
std::vector<std::size_t> draw_without_replacement(std::vector<std::size_t>& available,
                                                  std::size_t count, std::mt19937_64& rng) {
    std::vector<std::size_t> drawn;
    drawn.reserve(count);
    for (std::size_t d = 0; d < count; ++d) {
        const std::size_t pick = static_cast<std::size_t>(bounded(rng, available.size()));
        drawn.push_back(available[pick]);
        available.erase(available.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return drawn;
}

std::vector<std::size_t> index_range(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = i;
    }
    return v;
}

std::vector<std::string> to_ids(const ExamplePool& pool, const std::vector<std::size_t>& indices) {
    std::vector<std::string> ids;
    ids.reserve(indices.size());
    for (std::size_t i : indices) {
        ids.push_back(pool.examples[i].id);
    }
    return ids;
}

} // namespace

SampleTriple build_samples(const ExamplePool& pool, const SamplerConfig& config) {
    const std::size_t n = pool.size();
    if (n < kMinPoolSize) {
        throw PoolTooSmallError("pool has " + std::to_string(n) + " examples; at least " +
                                std::to_string(kMinPoolSize) + " are required for sampling");
    }
    if (config.sample_size < 2) {
        throw InputError("sample_size must be at least 2");
    }

    // Clamp so A and B stay disjoint even for small pools.
    const std::size_t k = std::min(config.sample_size, n / 2);

    std::mt19937_64 rng(config.seed);
    auto available = index_range(n);
    const auto idx_a = draw_without_replacement(available, k, rng);
    const auto idx_b = draw_without_replacement(available, k, rng);

    // C: half of A and half of B, ceil from A when k is odd.
    const std::size_t from_a = (k + 1) / 2;
    const std::size_t from_b = k / 2;
    auto pool_a = idx_a;
    auto pool_b = idx_b;
    auto idx_c = draw_without_replacement(pool_a, from_a, rng);
    const auto idx_c_b = draw_without_replacement(pool_b, from_b, rng);
    idx_c.insert(idx_c.end(), idx_c_b.begin(), idx_c_b.end());

    SampleTriple triple;
    triple.sample_a = to_ids(pool, idx_a);
    triple.sample_b = to_ids(pool, idx_b);
    triple.sample_c = to_ids(pool, idx_c);
    triple.seed = config.seed;
    return triple;
}

std::vector<std::string> draw_sample(const ExamplePool& pool, std::size_t count,
                                     std::uint64_t seed) {
    const std::size_t n = pool.size();
    if (n < count) {
        throw PoolTooSmallError("pool has " + std::to_string(n) + " examples; " +
                                std::to_string(count) + " requested");
    }
    std::mt19937_64 rng(seed);
    auto available = index_range(n);
    return to_ids(pool, draw_without_replacement(available, count, rng));
}

std::vector<ExamplePair> select_examples(const ExamplePool& pool,
                                         std::span<const std::string> ids) {
    std::unordered_map<std::string_view, const ExamplePair*> by_id;
    for (const auto& pair : pool.examples) {
        by_id.emplace(pair.id, &pair);
    }
    std::vector<ExamplePair> selected;
    selected.reserve(ids.size());
    for (const auto& id : ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw InputError("sample references unknown example id: " + id);
        }
        selected.push_back(*it->second);
    }
    return selected;
}

} // namespace promptgen
