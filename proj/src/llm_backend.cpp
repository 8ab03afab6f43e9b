#include "promptgen/llm_backend.hpp"

#include "promptgen/digest.hpp"
#include "promptgen/errors.hpp"
#include "promptgen/util.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <thread>

namespace promptgen {

using nlohmann::json;
using nlohmann::ordered_json;

void GenerationConfig::validate() const {
    if (num_candidates < 1) {
        throw InputError("num_candidates must be at least 1");
    }
    if (temperature <= 0.0) {
        throw InputError("temperature must be > 0 for multinomial sampling");
    }
    if (top_p <= 0.0 || top_p > 1.0) {
        throw InputError("top_p must be in (0, 1]");
    }
    if (max_new_tokens < 1) {
        throw InputError("max_new_tokens must be at least 1");
    }
    if (max_retries < 0) {
        throw InputError("max_retries must be non-negative");
    }
    if (max_in_flight < 1) {
        throw InputError("max_in_flight must be at least 1");
    }
}

// ---------------------------------------------------------------------------
// HTTP backend
// ---------------------------------------------------------------------------

namespace {

bool is_retryable_status(int status) {
    return status == 408 || status == 409 || status == 429 || status >= 500;
}

bool is_timeout_error(httplib::Error err) {
    // Read/Write failures after a successful connect are what a tripped
    // read-timeout looks like through httplib.
    return err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
           err == httplib::Error::Write;
}

class HttpBackend final : public LlmBackend {
public:
    explicit HttpBackend(const HttpBackendOptions& options) : options_(options) {
        if (options_.api_key.empty()) {
            const char* env = std::getenv("LLM_API_KEY");
            if (env == nullptr || *env == '\0') {
                throw AuthError("no API credential: set LLM_API_KEY or pass an api key");
            }
            options_.api_key = env;
        }
        if (options_.base_url.empty()) {
            throw InputError("http backend requires a base url");
        }
    }

    CompletionBatch generate(const std::string& prompt, const GenerationConfig& cfg) override {
        cfg.validate();
        if (prompt.empty()) {
            throw InputError("prompt must not be empty");
        }

        CompletionBatch batch;
        batch.prompt_hash = sha256_hex(prompt);
        batch.backend_id = id();

        const int want = cfg.num_candidates;
        // First attempt asks for the whole batch in one request; endpoints
        // that ignore `n` get topped up with follow-up requests.
        try {
            collect(prompt, cfg, cfg.temperature, want, batch);
            while (static_cast<int>(batch.completions.size()) < want) {
                const auto before = batch.completions.size();
                collect(prompt, cfg, cfg.temperature,
                        want - static_cast<int>(batch.completions.size()), batch);
                if (batch.completions.size() == before) {
                    batch.shortfall_reasons.assign(
                        want - batch.completions.size(),
                        "endpoint returned an empty choice list");
                    break;
                }
            }
        } catch (const BackendError& e) {
            if (batch.completions.empty()) {
                throw;
            }
            std::vector<std::string> causes(want - batch.completions.size(), e.what());
            throw PartialBatchError("generated " + std::to_string(batch.completions.size()) +
                                        " of " + std::to_string(want) +
                                        " completions: " + e.what(),
                                    batch.completions, causes);
        }
        return batch;
    }

    std::string infer(const std::string& task_prompt, const GenerationConfig& cfg) override {
        if (task_prompt.empty()) {
            throw InputError("task prompt must not be empty");
        }
        CompletionBatch batch;
        batch.prompt_hash = sha256_hex(task_prompt);
        // Greedy-equivalent settings for reproducible evaluation.
        collect(task_prompt, cfg, 0.0, 1, batch);
        if (batch.completions.empty()) {
            throw BackendUnavailableError("endpoint returned no completion");
        }
        return batch.completions.front();
    }

    std::string id() const override { return "http:" + options_.base_url; }

private:
    // Issues one chat-completions request (with retry/backoff) and appends
    // the returned choices to the batch.
    void collect(const std::string& prompt, const GenerationConfig& cfg, double temperature,
                 int n, CompletionBatch& batch) {
        ordered_json body = {
            {"model", cfg.model_id},
            {"messages", ordered_json::array({{{"role", "user"}, {"content", prompt}}})},
            {"temperature", temperature},
            {"top_p", cfg.top_p},
            {"n", n},
            {"max_tokens", cfg.max_new_tokens},
        };

        const json response = post_with_retries(body.dump(), cfg);

        if (!response.contains("choices") || !response["choices"].is_array()) {
            throw BackendUnavailableError("malformed response: missing choices array");
        }
        for (const auto& choice : response["choices"]) {
            if (static_cast<int>(batch.completions.size()) >= cfg.num_candidates) {
                break; // never exceed N, even against over-generous endpoints
            }
            if (choice.contains("message") && choice["message"].contains("content") &&
                choice["message"]["content"].is_string()) {
                batch.completions.push_back(choice["message"]["content"].get<std::string>());
            }
        }
        if (response.contains("usage") && response["usage"].is_object()) {
            const auto& usage = response["usage"];
            batch.usage.prompt_tokens += usage.value("prompt_tokens", std::int64_t(0));
            batch.usage.completion_tokens += usage.value("completion_tokens", std::int64_t(0));
        }
    }

    json post_with_retries(const std::string& body, const GenerationConfig& cfg) {
        std::string last_error;
        bool last_was_timeout = false;

        for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(cfg.initial_backoff *
                                            (1 << std::min(attempt - 1, 10)));
            }

            httplib::Client client(options_.base_url);
            client.set_connection_timeout(cfg.request_timeout);
            client.set_read_timeout(cfg.request_timeout);
            client.set_write_timeout(cfg.request_timeout);
            client.set_bearer_token_auth(options_.api_key);

            auto result = client.Post(options_.chat_path, body, "application/json");
            if (!result) {
                last_was_timeout = is_timeout_error(result.error());
                last_error = "transport error: " + httplib::to_string(result.error());
                continue;
            }

            const int status = result->status;
            if (status == 401 || status == 403) {
                throw AuthError("credential rejected (HTTP " + std::to_string(status) + ")");
            }
            if (status == 200) {
                json doc = json::parse(result->body, nullptr, /*allow_exceptions=*/false);
                if (doc.is_discarded()) {
                    throw BackendUnavailableError("endpoint returned invalid JSON");
                }
                return doc;
            }
            if (!is_retryable_status(status)) {
                throw BackendUnavailableError("HTTP " + std::to_string(status) + ": " +
                                              result->body.substr(0, 200));
            }
            last_was_timeout = false;
            last_error = "HTTP " + std::to_string(status);
        }

        const std::string what = "backend unavailable after " +
                                 std::to_string(cfg.max_retries + 1) + " attempts (" + last_error +
                                 ")";
        if (last_was_timeout) {
            throw TimeoutError(what);
        }
        throw BackendUnavailableError(what);
    }

    HttpBackendOptions options_;
};

} // namespace

std::unique_ptr<LlmBackend> make_http_backend(const HttpBackendOptions& options) {
    return std::make_unique<HttpBackend>(options);
}

// ---------------------------------------------------------------------------
// Mock backend
// ---------------------------------------------------------------------------

namespace {

// Task-agnostic instruction-shaped phrases; the digest picks one per
// completion, so repeated picks act like the near-duplicate candidates a real
// sampling run produces.
constexpr std::array<std::string_view, 8> kMockPhrases = {
    "apply the underlying rule to turn each input into its output",
    "rewrite every input according to the hidden instruction",
    "transform the given input into the expected output format",
    "map each input record to the matching output record",
    "produce the output that corresponds to each provided input",
    "follow the demonstrated pattern to convert inputs to outputs",
    "derive the output from the input using the implied convention",
    "complete each input by generating its paired output",
};

} // namespace

MockBackend::MockBackend(std::uint64_t seed) : seed_(seed) {}

CompletionBatch MockBackend::generate(const std::string& prompt, const GenerationConfig& cfg) {
    cfg.validate();
    if (prompt.empty()) {
        throw InputError("prompt must not be empty");
    }

    CompletionBatch batch;
    batch.prompt_hash = sha256_hex(prompt);
    batch.backend_id = id();
    for (int i = 0; i < cfg.num_candidates; ++i) {
        const std::string key =
            batch.prompt_hash + ":" + std::to_string(i) + ":" + std::to_string(seed_);
        const std::string digest = sha256_hex(key);
        const std::uint64_t h = std::stoull(digest.substr(0, 15), nullptr, 16);
        std::string text(kMockPhrases[h % kMockPhrases.size()]);
        text += " [" + std::to_string(i) + "-" + digest.substr(16, 6) + "]";
        batch.completions.push_back(std::move(text));
    }
    batch.usage.prompt_tokens = static_cast<std::int64_t>(prompt.size() / 4 + 1);
    batch.usage.completion_tokens =
        static_cast<std::int64_t>(16 * std::max(1, cfg.num_candidates));
    return batch;
}

std::string MockBackend::infer(const std::string& task_prompt, const GenerationConfig&) {
    if (task_prompt.empty()) {
        throw InputError("task prompt must not be empty");
    }
    // Match primed inputs only against the final Input: section, so few-shot
    // demonstrations earlier in the prompt cannot shadow the actual task.
    const std::size_t last_input = task_prompt.rfind("\nInput: ");
    const std::size_t from = last_input == std::string::npos ? 0 : last_input;
    for (const auto& [input_text, output_text] : primed_) {
        if (task_prompt.find(input_text, from) != std::string::npos) {
            return output_text;
        }
    }
    const std::string digest = sha256_hex(task_prompt + ":" + std::to_string(seed_));
    return "mock inference " + digest.substr(0, 12);
}

void MockBackend::prime(const std::string& input_text, const std::string& output_text) {
    primed_.emplace_back(input_text, output_text);
}

void MockBackend::prime_gold(const CneTable& table) {
    prime(cne_input_json(table), cne_output_json(table));
}

std::unique_ptr<MockBackend> make_mock_backend(std::uint64_t seed) {
    return std::make_unique<MockBackend>(seed);
}

// ---------------------------------------------------------------------------
// Replay / record fixtures
// ---------------------------------------------------------------------------

namespace {

struct FixtureStore {
    std::map<std::string, std::vector<std::string>> generate;
    std::map<std::string, std::string> infer;

    static FixtureStore load(const std::filesystem::path& path) {
        FixtureStore store;
        if (!std::filesystem::exists(path)) {
            return store;
        }
        json doc = json::parse(read_file(path), nullptr, /*allow_exceptions=*/false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw MalformedFileError("invalid fixture file: " + path.string());
        }
        if (doc.contains("generate")) {
            for (const auto& [digest, completions] : doc["generate"].items()) {
                store.generate[digest] = completions.get<std::vector<std::string>>();
            }
        }
        if (doc.contains("infer")) {
            for (const auto& [digest, completion] : doc["infer"].items()) {
                store.infer[digest] = completion.get<std::string>();
            }
        }
        return store;
    }

    void save(const std::filesystem::path& path) const {
        json doc;
        doc["generate"] = generate;
        doc["infer"] = infer;
        write_file(path, doc.dump(2) + "\n");
    }
};

class ReplayBackend final : public LlmBackend {
public:
    explicit ReplayBackend(const std::filesystem::path& path) : path_(path) {
        if (!std::filesystem::exists(path)) {
            throw MalformedFileError("fixture file not found: " + path.string());
        }
        store_ = FixtureStore::load(path);
    }

    CompletionBatch generate(const std::string& prompt, const GenerationConfig& cfg) override {
        cfg.validate();
        CompletionBatch batch;
        batch.prompt_hash = sha256_hex(prompt);
        batch.backend_id = id();
        const auto it = store_.generate.find(batch.prompt_hash);
        if (it == store_.generate.end()) {
            throw BackendUnavailableError("no recorded completions for prompt digest " +
                                          batch.prompt_hash);
        }
        const std::size_t take =
            std::min<std::size_t>(it->second.size(), static_cast<std::size_t>(cfg.num_candidates));
        batch.completions.assign(it->second.begin(), it->second.begin() + take);
        if (static_cast<int>(take) < cfg.num_candidates) {
            batch.shortfall_reasons.assign(cfg.num_candidates - take,
                                           "fixture holds only " +
                                               std::to_string(it->second.size()) + " completions");
        }
        return batch;
    }

    std::string infer(const std::string& task_prompt, const GenerationConfig&) override {
        const std::string digest = sha256_hex(task_prompt);
        const auto it = store_.infer.find(digest);
        if (it == store_.infer.end()) {
            throw BackendUnavailableError("no recorded inference for prompt digest " + digest);
        }
        return it->second;
    }

    std::string id() const override { return "replay:" + path_.filename().string(); }

private:
    FixtureStore store_;
    std::filesystem::path path_;
};

class RecordingBackend final : public LlmBackend {
public:
    RecordingBackend(std::unique_ptr<LlmBackend> inner, std::filesystem::path path)
        : inner_(std::move(inner)), path_(std::move(path)), store_(FixtureStore::load(path_)) {}

    CompletionBatch generate(const std::string& prompt, const GenerationConfig& cfg) override {
        auto batch = inner_->generate(prompt, cfg);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            store_.generate[batch.prompt_hash] = batch.completions;
            store_.save(path_);
        }
        return batch;
    }

    std::string infer(const std::string& task_prompt, const GenerationConfig& cfg) override {
        auto completion = inner_->infer(task_prompt, cfg);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            store_.infer[sha256_hex(task_prompt)] = completion;
            store_.save(path_);
        }
        return completion;
    }

    std::string id() const override { return inner_->id(); }

private:
    std::unique_ptr<LlmBackend> inner_;
    std::filesystem::path path_;
    FixtureStore store_;
    std::mutex mutex_;
};

} // namespace

std::unique_ptr<LlmBackend> make_replay_backend(const std::filesystem::path& fixture_path) {
    return std::make_unique<ReplayBackend>(fixture_path);
}

std::unique_ptr<LlmBackend> make_recording_backend(std::unique_ptr<LlmBackend> inner,
                                                   const std::filesystem::path& fixture_path) {
    return std::make_unique<RecordingBackend>(std::move(inner), fixture_path);
}

} // namespace promptgen
