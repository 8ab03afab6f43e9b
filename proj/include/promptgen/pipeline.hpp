#pragma once

#include "promptgen/cne_eval.hpp"
#include "promptgen/consensus.hpp"
#include "promptgen/example_pool.hpp"
#include "promptgen/llm_backend.hpp"
#include "promptgen/meta_prompt.hpp"
#include "promptgen/sampler.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace promptgen {

enum class BackendKind { http, mock, replay };

std::string_view to_string(BackendKind kind);
BackendKind backend_from_string(std::string_view s);

/// Everything a run needs; the CLI fills this from flags.
struct RunOptions {
    std::filesystem::path pool_path;
    std::filesystem::path dataset_path;
    std::filesystem::path prompt_path; // evaluate: file holding the instruction
    std::filesystem::path out_dir = "out";

    LanguageTag language = LanguageTag::english;
    TemplateVariant variant = TemplateVariant::ours;
    std::optional<std::uint64_t> seed; // OS entropy when unset
    std::size_t sample_size = 5;

    GenerationConfig generation;
    EvalConfig eval;

    BackendKind backend = BackendKind::mock;
    std::string base_url;
    std::filesystem::path fixture_path; // replay source
    std::filesystem::path record_path;  // record fixtures while running http
    int few_shot = 0;                   // demonstrations prepended at inference time
};

struct BackendHandle {
    std::unique_ptr<LlmBackend> backend;
    MockBackend* mock = nullptr; // set when kind == mock, for gold priming
};

BackendHandle make_backend(const RunOptions& options, std::uint64_t seed);

struct GenerateOutcome {
    std::uint64_t seed = 0;
    bool baseline = false;
    SampleTriple samples;
    std::vector<RenderedMetaPrompt> rendered;
    std::vector<CandidatePrompt> candidates;
    std::size_t skipped_candidates = 0;
    RankedPromptList ranked; // baseline: one entry with a NaN (-> null) score
    std::string selected_prompt;
    std::string manifest_json;
    std::string manifest_digest;
};

struct EvalOutcome {
    EvalReport report;
    std::string manifest_json;
    std::string manifest_digest;
    std::string eval_json;
    std::string eval_text;
};

struct PipelineOutcome {
    GenerateOutcome generation;
    EvalOutcome evaluation;
};

/// Step 1 + Step 2: sample, render, generate candidates, normalize, rank.
/// Writes manifest.json, ranked.json and prompt.txt under out_dir.
GenerateOutcome cmd_generate(const RunOptions& options);

/// Scores an existing instruction file over a gold dataset. Writes
/// manifest.json, eval.json and eval.txt under out_dir.
EvalOutcome cmd_evaluate(const RunOptions& options);

/// generate followed by evaluate, sharing one manifest and output directory.
PipelineOutcome cmd_pipeline(const RunOptions& options);

} // namespace promptgen
