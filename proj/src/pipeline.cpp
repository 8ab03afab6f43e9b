#include "promptgen/pipeline.hpp"

#include "promptgen/digest.hpp"
#include "promptgen/errors.hpp"
#include "promptgen/unicode.hpp"
#include "promptgen/util.hpp"

#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <random>

namespace promptgen {

using nlohmann::ordered_json;

std::string_view to_string(BackendKind kind) {
    switch (kind) {
    case BackendKind::http:
        return "http";
    case BackendKind::mock:
        return "mock";
    case BackendKind::replay:
        return "replay";
    }
    return "?";
}

BackendKind backend_from_string(std::string_view s) {
    if (s == "http") {
        return BackendKind::http;
    }
    if (s == "mock") {
        return BackendKind::mock;
    }
    if (s == "replay") {
        return BackendKind::replay;
    }
    throw InputError("unknown backend: " + std::string(s));
}

BackendHandle make_backend(const RunOptions& options, std::uint64_t seed) {
    BackendHandle handle;
    switch (options.backend) {
    case BackendKind::http: {
        HttpBackendOptions http;
        http.base_url = options.base_url;
        handle.backend = make_http_backend(http);
        if (!options.record_path.empty()) {
            handle.backend =
                make_recording_backend(std::move(handle.backend), options.record_path);
        }
        break;
    }
    case BackendKind::mock: {
        auto mock = make_mock_backend(seed);
        handle.mock = mock.get();
        handle.backend = std::move(mock);
        break;
    }
    case BackendKind::replay:
        if (options.fixture_path.empty()) {
            throw InputError("replay backend requires --fixtures");
        }
        handle.backend = make_replay_backend(options.fixture_path);
        break;
    }
    return handle;
}

namespace {

std::uint64_t resolve_seed(const RunOptions& options) {
    if (options.seed) {
        return *options.seed;
    }
    std::random_device rd;
    return (std::uint64_t(rd()) << 32) ^ rd();
}

std::string iso8601_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

ordered_json ranked_entry_json(const RankedEntry& entry) {
    ordered_json j;
    j["text"] = entry.candidate.text;
    j["score"] = entry.score; // NaN (baseline) serializes as null
    j["sample_label"] = std::string(1, to_char(entry.candidate.sample_label));
    j["index"] = entry.candidate.index;
    return j;
}

ordered_json generation_json(const GenerationConfig& cfg) {
    ordered_json j;
    j["num_candidates"] = cfg.num_candidates;
    j["temperature"] = cfg.temperature;
    j["top_p"] = cfg.top_p;
    j["max_new_tokens"] = cfg.max_new_tokens;
    j["model_id"] = cfg.model_id;
    j["request_timeout_ms"] = cfg.request_timeout.count();
    j["max_retries"] = cfg.max_retries;
    j["max_in_flight"] = cfg.max_in_flight;
    return j;
}

ordered_json eval_config_json(const EvalConfig& cfg, int few_shot) {
    ordered_json j;
    j["match_threshold"] = cfg.match_threshold;
    j["normalize"] = {{"lowercase", cfg.lowercase},
                      {"collapse_whitespace", cfg.collapse_whitespace}};
    j["few_shot"] = few_shot;
    return j;
}

ordered_json file_stamp(const std::filesystem::path& path) {
    ordered_json j;
    j["path"] = path.string();
    j["sha256"] = sha256_file(path);
    return j;
}

// Deterministic backends must produce byte-identical artifacts across runs,
// so only live http manifests carry a wall-clock stamp.
void maybe_stamp_time(ordered_json& manifest, BackendKind kind) {
    if (kind == BackendKind::http) {
        manifest["created_at"] = iso8601_now();
    }
}

struct WrittenManifest {
    std::string bytes;
    std::string digest;
};

WrittenManifest write_manifest(const ordered_json& manifest,
                               const std::filesystem::path& out_dir) {
    WrittenManifest written;
    written.bytes = manifest.dump(2) + "\n";
    written.digest = sha256_hex(written.bytes);
    write_file(out_dir / "manifest.json", written.bytes);
    return written;
}

void write_ranked(const GenerateOutcome& outcome, const std::filesystem::path& out_dir) {
    ordered_json doc;
    doc["manifest_digest"] = outcome.manifest_digest;
    doc["top"] = ranked_entry_json(outcome.ranked.top());
    ordered_json entries = ordered_json::array();
    for (const auto& entry : outcome.ranked.entries) {
        entries.push_back(ranked_entry_json(entry));
    }
    doc["entries"] = std::move(entries);
    write_file(out_dir / "ranked.json", doc.dump(2) + "\n");
}

std::string eval_report_json(const EvalReport& report, const std::string& manifest_digest,
                             const std::string& system_name, const std::string& dataset_name,
                             const EvalConfig& config) {
    ordered_json doc;
    doc["manifest_digest"] = manifest_digest;
    doc["system"] = system_name;
    doc["dataset"] = dataset_name;
    doc["match_threshold"] = config.match_threshold;
    doc["total_columns"] = report.total_columns;
    doc["matched_columns"] = report.matched_columns;
    doc["unparsed_tables"] = report.unparsed_tables;
    doc["accuracy"] = report.accuracy;
    doc["accuracy_percent"] = format_percent(report.accuracy);

    ordered_json tables = ordered_json::array();
    for (const auto& table : report.per_table) {
        ordered_json t;
        t["table"] = table.table_name;
        t["parsed"] = table.parsed;
        if (!table.parsed) {
            t["error"] = table.error;
        }
        ordered_json columns = ordered_json::array();
        for (const auto& col : table.per_column) {
            ordered_json c;
            c["column"] = col.column;
            c["gold"] = col.gold;
            c["predicted"] = col.predicted;
            c["similarity"] = col.similarity;
            c["matched"] = col.matched;
            columns.push_back(std::move(c));
        }
        t["columns"] = std::move(columns);
        tables.push_back(std::move(t));
    }
    doc["per_table"] = std::move(tables);
    return doc.dump(2) + "\n";
}

std::string eval_report_text(const EvalReport& report, const std::string& manifest_digest,
                             const std::string& system_name, const std::string& dataset_name) {
    std::string out;
    out += "CNE evaluation\n";
    out += "manifest: " + manifest_digest + "\n";
    out += "\n";
    out += "System          Dataset                   Accuracy\n";

    std::string system_col = system_name;
    system_col.resize(16, ' ');
    std::string dataset_col = dataset_name;
    dataset_col.resize(26, ' ');
    out += system_col + dataset_col + format_percent(report.accuracy) + "\n";
    out += "\n";
    out += "columns total:   " + std::to_string(report.total_columns) + "\n";
    out += "columns matched: " + std::to_string(report.matched_columns) + "\n";
    out += "tables unparsed: " + std::to_string(report.unparsed_tables) + "\n";
    return out;
}

std::string dataset_label(const std::filesystem::path& path) {
    return path.stem().string();
}

std::vector<ExamplePair> few_shot_demos(const RunOptions& options) {
    if (options.few_shot <= 0) {
        return {};
    }
    if (options.pool_path.empty()) {
        throw InputError("--few-shot requires --pool");
    }
    ExamplePool pool = load_pool(options.pool_path);
    if (static_cast<std::size_t>(options.few_shot) > pool.size()) {
        throw InputError("--few-shot exceeds pool size");
    }
    return {pool.examples.begin(), pool.examples.begin() + options.few_shot};
}

} // namespace

GenerateOutcome cmd_generate(const RunOptions& options) {
    options.generation.validate();

    GenerateOutcome outcome;
    outcome.seed = resolve_seed(options);
    outcome.baseline = options.variant == TemplateVariant::instruction_induction_baseline;

    ExamplePool pool = load_pool(options.pool_path);
    pool.language = options.language;
    const MetaPromptTemplate& tpl = builtin_template(options.language, options.variant);

    auto backend = make_backend(options, outcome.seed);

    if (outcome.baseline) {
        // Instruction induction: one sample of five examples, one greedy
        // completion, no consensus ranking.
        const std::size_t take = std::min<std::size_t>(5, pool.size());
        outcome.samples.seed = outcome.seed;
        outcome.samples.sample_a = draw_sample(pool, take, outcome.seed);
        const auto examples = select_examples(pool, outcome.samples.sample_a);
        outcome.rendered.push_back(render(tpl, examples, SampleLabel::A));

        const std::string completion =
            backend.backend->infer(outcome.rendered.front().text, options.generation);
        CandidatePrompt candidate;
        candidate.raw_completion = completion;
        candidate.text = assemble_task_prompt(completion, options.language);
        outcome.candidates.push_back(candidate);
        outcome.ranked.entries.push_back(
            {candidate, std::numeric_limits<double>::quiet_NaN()});
        outcome.selected_prompt = candidate.text;
    } else {
        SamplerConfig sampler_cfg;
        sampler_cfg.sample_size = options.sample_size;
        sampler_cfg.seed = outcome.seed;
        outcome.samples = build_samples(pool, sampler_cfg);

        const std::array<std::pair<SampleLabel, const std::vector<std::string>*>, 3> samples = {
            {{SampleLabel::A, &outcome.samples.sample_a},
             {SampleLabel::B, &outcome.samples.sample_b},
             {SampleLabel::C, &outcome.samples.sample_c}}};

        for (const auto& [label, ids] : samples) {
            const auto examples = select_examples(pool, *ids);
            outcome.rendered.push_back(render(tpl, examples, label));
        }

        for (const auto& rendered : outcome.rendered) {
            const CompletionBatch batch =
                backend.backend->generate(rendered.text, options.generation);
            for (std::size_t i = 0; i < batch.completions.size(); ++i) {
                CandidatePrompt candidate;
                candidate.sample_label = rendered.sample_label;
                candidate.index = static_cast<int>(i);
                candidate.raw_completion = batch.completions[i];
                try {
                    candidate.text =
                        assemble_task_prompt(candidate.raw_completion, options.language);
                } catch (const EmptyCompletionError&) {
                    ++outcome.skipped_candidates;
                    continue;
                }
                outcome.candidates.push_back(std::move(candidate));
            }
        }

        outcome.ranked = rank(outcome.candidates, options.eval.similarity);
        outcome.selected_prompt = outcome.ranked.top().candidate.text;
    }

    ordered_json manifest;
    manifest["tool"] = "promptgen";
    manifest["command"] = "generate";
    manifest["language"] = std::string(to_string(options.language));
    manifest["variant"] = std::string(to_string(options.variant));
    manifest["seed"] = outcome.seed;
    manifest["sampler"] = {{"sample_size", options.sample_size}};
    manifest["generation"] = generation_json(options.generation);
    manifest["similarity"] = {{"prefix_scale", options.eval.similarity.prefix_scale},
                              {"max_prefix", options.eval.similarity.max_prefix}};
    manifest["backend"] = {{"id", backend.backend->id()}};
    manifest["pool"] = file_stamp(options.pool_path);
    manifest["pool"]["examples"] = pool.size();
    manifest["samples"] = {{"a", outcome.samples.sample_a},
                           {"b", outcome.samples.sample_b},
                           {"c", outcome.samples.sample_c}};
    manifest["skipped_candidates"] = outcome.skipped_candidates;
    ordered_json top = ordered_json::array();
    for (std::size_t i = 0; i < outcome.ranked.entries.size() && i < 5; ++i) {
        top.push_back(ranked_entry_json(outcome.ranked.entries[i]));
    }
    manifest["top_prompts"] = std::move(top);
    manifest["selected_prompt_sha256"] = sha256_hex(outcome.selected_prompt);
    maybe_stamp_time(manifest, options.backend);

    const auto written = write_manifest(manifest, options.out_dir);
    outcome.manifest_json = written.bytes;
    outcome.manifest_digest = written.digest;
    write_ranked(outcome, options.out_dir);
    write_file(options.out_dir / "prompt.txt", outcome.selected_prompt + "\n");
    return outcome;
}

namespace {

EvalOutcome evaluate_with_manifest(const RunOptions& options, LlmBackend& backend,
                                   MockBackend* mock, const std::string& instruction,
                                   ordered_json manifest) {
    auto tables = load_cne_dataset(options.dataset_path);
    if (mock != nullptr) {
        // Gold-echo wiring check: the primed mock answers each table with its
        // gold output, so a healthy run scores 100%.
        for (const auto& table : tables) {
            if (table.gold) {
                mock->prime_gold(table);
            }
        }
    }

    EvalConfig eval_cfg = options.eval;
    eval_cfg.demonstrations = few_shot_demos(options);

    EvalOutcome outcome;
    outcome.report =
        evaluate(tables, backend, instruction, eval_cfg, options.generation);

    const std::string system_name(to_string(options.variant));
    const std::string dataset_name = dataset_label(options.dataset_path);

    const auto written = write_manifest(manifest, options.out_dir);
    outcome.manifest_json = written.bytes;
    outcome.manifest_digest = written.digest;
    outcome.eval_json = eval_report_json(outcome.report, outcome.manifest_digest, system_name,
                                         dataset_name, eval_cfg);
    outcome.eval_text =
        eval_report_text(outcome.report, outcome.manifest_digest, system_name, dataset_name);
    write_file(options.out_dir / "eval.json", outcome.eval_json);
    write_file(options.out_dir / "eval.txt", outcome.eval_text);
    return outcome;
}

} // namespace

EvalOutcome cmd_evaluate(const RunOptions& options) {
    options.eval.validate();
    if (options.prompt_path.empty()) {
        throw InputError("evaluate requires --prompt");
    }
    const std::string instruction(trim(read_file(options.prompt_path)));
    if (instruction.empty()) {
        throw InputError("prompt file is empty: " + options.prompt_path.string());
    }

    const std::uint64_t seed = resolve_seed(options);
    auto backend = make_backend(options, seed);

    ordered_json manifest;
    manifest["tool"] = "promptgen";
    manifest["command"] = "evaluate";
    manifest["language"] = std::string(to_string(options.language));
    manifest["variant"] = std::string(to_string(options.variant));
    manifest["generation"] = generation_json(options.generation);
    manifest["evaluation"] = eval_config_json(options.eval, options.few_shot);
    manifest["similarity"] = {{"prefix_scale", options.eval.similarity.prefix_scale},
                              {"max_prefix", options.eval.similarity.max_prefix}};
    manifest["backend"] = {{"id", backend.backend->id()}};
    manifest["dataset"] = file_stamp(options.dataset_path);
    manifest["prompt"] = file_stamp(options.prompt_path);
    maybe_stamp_time(manifest, options.backend);

    return evaluate_with_manifest(options, *backend.backend, backend.mock, instruction,
                                  std::move(manifest));
}

PipelineOutcome cmd_pipeline(const RunOptions& options) {
    options.eval.validate();
    if (options.dataset_path.empty()) {
        throw InputError("pipeline requires --dataset");
    }

    PipelineOutcome outcome;
    outcome.generation = cmd_generate(options);

    // Re-stamp the shared manifest as a pipeline run and fold in the dataset.
    ordered_json manifest = ordered_json::parse(outcome.generation.manifest_json);
    manifest["command"] = "pipeline";
    manifest["evaluation"] = eval_config_json(options.eval, options.few_shot);
    manifest["dataset"] = file_stamp(options.dataset_path);

    const std::uint64_t seed = outcome.generation.seed;
    auto backend = make_backend(options, seed);
    outcome.evaluation = evaluate_with_manifest(
        options, *backend.backend, backend.mock, outcome.generation.selected_prompt,
        std::move(manifest));

    // ranked.json was written against the generate manifest; rewrite it so
    // every artifact references the final pipeline manifest.
    outcome.generation.manifest_json = outcome.evaluation.manifest_json;
    outcome.generation.manifest_digest = outcome.evaluation.manifest_digest;
    write_ranked(outcome.generation, options.out_dir);
    return outcome;
}

} // namespace promptgen
