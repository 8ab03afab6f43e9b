#pragma once

#include "promptgen/example_pool.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace promptgen {

struct GenerationConfig {
    int num_candidates = 10; // N per rendered meta-prompt
    double temperature = 1.0;
    double top_p = 1.0;
    int max_new_tokens = 512;
    std::string model_id = "meta-llama/Llama-3.3-70B-Instruct";
    std::chrono::milliseconds request_timeout{30000};
    int max_retries = 3;
    int max_in_flight = 4;
    std::chrono::milliseconds initial_backoff{250};

    /// Throws InputError on invalid settings; multinomial sampling requires
    /// temperature > 0.
    void validate() const;
};

struct TokenUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

struct CompletionBatch {
    std::string prompt_hash; // sha256 of the rendered prompt
    std::vector<std::string> completions;
    TokenUsage usage;
    std::string backend_id;
    std::vector<std::string> shortfall_reasons; // one per missing completion, never padded
};

/// Uniform completion interface. Implementations must be safe for concurrent
/// calls from up to GenerationConfig::max_in_flight threads; callers enforce
/// the cap when fanning out.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;

    /// Up to cfg.num_candidates sampled completions for one prompt.
    virtual CompletionBatch generate(const std::string& prompt, const GenerationConfig& cfg) = 0;

    /// One completion with greedy-equivalent settings (temperature 0).
    virtual std::string infer(const std::string& task_prompt, const GenerationConfig& cfg) = 0;

    virtual std::string id() const = 0;
};

struct HttpBackendOptions {
    std::string base_url; // e.g. http://localhost:8000
    std::string chat_path = "/v1/chat/completions";
    std::string api_key;  // empty: read from LLM_API_KEY (required)
};

/// Chat-completions HTTP backend with retry/backoff. Throws AuthError when no
/// credential is available.
std::unique_ptr<LlmBackend> make_http_backend(const HttpBackendOptions& options);

/// Deterministic offline backend: completions are a pure function of
/// (prompt digest, completion index, seed).
class MockBackend : public LlmBackend {
public:
    explicit MockBackend(std::uint64_t seed);

    CompletionBatch generate(const std::string& prompt, const GenerationConfig& cfg) override;
    std::string infer(const std::string& task_prompt, const GenerationConfig& cfg) override;
    std::string id() const override { return "mock"; }

    /// Primes infer() to answer output_text for any task prompt containing
    /// input_text. Not thread-safe against concurrent infer calls.
    void prime(const std::string& input_text, const std::string& output_text);
    void prime_gold(const CneTable& table);

private:
    std::uint64_t seed_;
    std::vector<std::pair<std::string, std::string>> primed_;
};

std::unique_ptr<MockBackend> make_mock_backend(std::uint64_t seed);

/// Offline backend answering from a recorded fixture file (JSON mapping
/// prompt digest -> completions). Throws BackendUnavailableError for prompts
/// with no recording.
std::unique_ptr<LlmBackend> make_replay_backend(const std::filesystem::path& fixture_path);

/// Decorator that records every response of the wrapped backend into a
/// replay fixture file.
std::unique_ptr<LlmBackend> make_recording_backend(std::unique_ptr<LlmBackend> inner,
                                                   const std::filesystem::path& fixture_path);

} // namespace promptgen
