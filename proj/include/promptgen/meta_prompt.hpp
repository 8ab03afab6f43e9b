#pragma once

#include "promptgen/example_pool.hpp"
#include "promptgen/sampler.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace promptgen {

enum class TemplateVariant { ours, instruction_induction_baseline };

std::string_view to_string(TemplateVariant variant);
TemplateVariant variant_from_string(std::string_view s); // "ours" | "instinduc"

/// A task-agnostic meta-prompt: fixed preamble, demonstrations in between,
/// fixed completion stub the model continues from.
struct MetaPromptTemplate {
    LanguageTag language = LanguageTag::english;
    TemplateVariant variant = TemplateVariant::ours;
    std::string preamble;
    std::string completion_stub;
};

/// Built-in templates matching the golden files under templates/ byte for
/// byte. The baseline exists for English only.
const MetaPromptTemplate& builtin_template(LanguageTag language, TemplateVariant variant);

/// Parses a golden template file (preamble, placeholder demonstration block,
/// stub ending in the <COMPLETE> cue) back into a MetaPromptTemplate.
MetaPromptTemplate parse_template_file(const std::filesystem::path& path, LanguageTag language,
                                       TemplateVariant variant);

/// Reconstructs the golden-file byte layout from a template; the inverse of
/// parse_template_file.
std::string template_reference_text(const MetaPromptTemplate& tpl);

struct RenderedMetaPrompt {
    std::string text;
    SampleLabel sample_label = SampleLabel::A;
    std::vector<std::string> example_ids;
};

/// preamble + blank line + "Input: .../Output: ..." per example + blank line
/// + completion stub. Throws EmptySampleError on an empty example list.
RenderedMetaPrompt render(const MetaPromptTemplate& tpl, std::span<const ExamplePair> examples,
                          SampleLabel label);

/// Normalizes a raw completion into the task instruction: trims, drops a
/// repeated completion stub, strips surrounding quotes and truncates at the
/// first blank line. Idempotent. Throws EmptyCompletionError if nothing
/// remains.
std::string assemble_task_prompt(std::string_view completion, LanguageTag language);

/// Instantiates the selected instruction for one task input, optionally with
/// leading demonstrations:
///   instruction \n [Input/Output demos...] Input: {input} \n Output:
std::string task_prompt_with_input(std::string_view instruction, std::string_view task_input,
                                   std::span<const ExamplePair> demonstrations = {});

} // namespace promptgen
