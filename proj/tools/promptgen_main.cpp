#include "promptgen/cne_eval.hpp"
#include "promptgen/errors.hpp"
#include "promptgen/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using promptgen::RunOptions;

struct CliState {
    RunOptions options;
    std::string language = "en";
    std::string variant = "ours";
    std::string backend = "mock";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::int64_t timeout_ms = 30000;
    bool no_lowercase = false;
    bool no_collapse_ws = false;
};

void add_common_flags(CLI::App* cmd, CliState& state) {
    cmd->add_option("--language", state.language, "Language of the pool/templates (en|de)")
        ->check(CLI::IsMember({"en", "de"}));
    cmd->add_option("--seed", state.seed, "Seed for sampling and the mock backend")
        ->each([&state](const std::string&) { state.seed_set = true; });
    cmd->add_option("--backend", state.backend, "Completion backend (http|mock|replay)")
        ->check(CLI::IsMember({"http", "mock", "replay"}));
    cmd->add_option("--base-url", state.options.base_url, "Chat-completions base URL (http)");
    cmd->add_option("--model", state.options.generation.model_id, "Model id sent to the endpoint");
    cmd->add_option("--fixtures", state.options.fixture_path, "Replay fixture file");
    cmd->add_option("--record", state.options.record_path,
                    "Record responses into a replay fixture file (http backend)");
    cmd->add_option("--max-retries", state.options.generation.max_retries, "HTTP retry budget");
    cmd->add_option("--timeout-ms", state.timeout_ms, "Per-request timeout in milliseconds");
    cmd->add_option("--max-in-flight", state.options.generation.max_in_flight,
                    "Concurrent request cap");
    cmd->add_option("--max-new-tokens", state.options.generation.max_new_tokens,
                    "Completion length limit");
    cmd->add_option("--out", state.options.out_dir, "Output directory");
}

void add_generate_flags(CLI::App* cmd, CliState& state) {
    cmd->add_option("--pool", state.options.pool_path, "Example pool file")->required();
    cmd->add_option("--sample-size", state.options.sample_size,
                    "Examples per sample (clamped to half the pool)");
    cmd->add_option("--num-candidates", state.options.generation.num_candidates,
                    "Candidate prompts per sample (N)");
    cmd->add_option("--temperature", state.options.generation.temperature,
                    "Sampling temperature for candidate generation");
    cmd->add_option("--top-p", state.options.generation.top_p, "Nucleus sampling mass");
    cmd->add_option("--variant", state.variant, "Meta-prompt variant (ours|instinduc)")
        ->check(CLI::IsMember({"ours", "instinduc"}));
}

void add_eval_flags(CLI::App* cmd, CliState& state, bool pool_optional) {
    cmd->add_option("--dataset", state.options.dataset_path, "CNE dataset file with gold")
        ->required();
    cmd->add_option("--threshold", state.options.eval.match_threshold,
                    "Match threshold on Jaro-Winkler similarity");
    cmd->add_flag("--no-lowercase", state.no_lowercase, "Compare case-sensitively");
    cmd->add_flag("--no-collapse-whitespace", state.no_collapse_ws,
                  "Keep whitespace as-is when comparing");
    cmd->add_option("--few-shot", state.options.few_shot,
                    "Demonstrations prepended to each task prompt (requires --pool)");
    if (pool_optional) {
        cmd->add_option("--pool", state.options.pool_path, "Example pool (for --few-shot)");
    }
}

RunOptions finalize(CliState& state) {
    state.options.language = promptgen::language_from_string(state.language);
    state.options.variant = promptgen::variant_from_string(state.variant);
    state.options.backend = promptgen::backend_from_string(state.backend);
    if (state.seed_set) {
        state.options.seed = state.seed;
    }
    state.options.generation.request_timeout = std::chrono::milliseconds(state.timeout_ms);
    state.options.eval.lowercase = !state.no_lowercase;
    state.options.eval.collapse_whitespace = !state.no_collapse_ws;
    return state.options;
}

void print_generate_summary(const promptgen::GenerateOutcome& outcome) {
    std::printf("seed: %llu\n", static_cast<unsigned long long>(outcome.seed));
    std::printf("candidates: %zu (skipped %zu)\n", outcome.candidates.size(),
                outcome.skipped_candidates);
    std::printf("selected prompt:\n%s\n", outcome.selected_prompt.c_str());
}

void print_eval_summary(const promptgen::EvalOutcome& outcome) {
    std::fputs(outcome.eval_text.c_str(), stdout);
    std::printf("accuracy: %s%%\n", promptgen::format_percent(outcome.report.accuracy).c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automatic prompt generation and CNE evaluation"};
    app.require_subcommand(1);

    CliState state;

    CLI::App* generate = app.add_subcommand(
        "generate", "Induce and rank task prompts from an example pool");
    add_common_flags(generate, state);
    add_generate_flags(generate, state);

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Score an instruction file over a gold CNE dataset");
    add_common_flags(evaluate, state);
    add_eval_flags(evaluate, state, /*pool_optional=*/true);
    evaluate->add_option("--prompt", state.options.prompt_path, "Instruction file to evaluate")
        ->required();

    CLI::App* pipeline =
        app.add_subcommand("pipeline", "generate followed by evaluate in one output directory");
    add_common_flags(pipeline, state);
    add_generate_flags(pipeline, state);
    add_eval_flags(pipeline, state, /*pool_optional=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const RunOptions options = finalize(state);
        if (generate->parsed()) {
            print_generate_summary(promptgen::cmd_generate(options));
        } else if (evaluate->parsed()) {
            print_eval_summary(promptgen::cmd_evaluate(options));
        } else {
            const auto outcome = promptgen::cmd_pipeline(options);
            print_generate_summary(outcome.generation);
            print_eval_summary(outcome.evaluation);
        }
    } catch (const promptgen::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
