#include "promptgen/meta_prompt.hpp"

#include "promptgen/errors.hpp"
#include "promptgen/unicode.hpp"
#include "promptgen/util.hpp"

#include <array>

namespace promptgen {

namespace {

constexpr std::string_view kCompletionCue = "<COMPLETE>";
constexpr std::string_view kPlaceholderBlock =
    "Input: ...\nOutput: ...\nInput: ...\nOutput: ...\n...\n";

const MetaPromptTemplate kOursEn{
    LanguageTag::english,
    TemplateVariant::ours,
    "I gave a friend an instruction. Based on the instruction he produced the following input "
    "and output pairs:",
    "Complete the following text.\nThe instruction was to",
};

const MetaPromptTemplate kOursDe{
    LanguageTag::german,
    TemplateVariant::ours,
    "Ich gab einem Freund eine Anweisung. Danach erzeugte er die folgenden Eingabe und "
    "Ausgabepaare:",
    "Vervollständigen Sie den folgenden Satz. Die Anweisung lautete:",
};

const MetaPromptTemplate kInstInducEn{
    LanguageTag::english,
    TemplateVariant::instruction_induction_baseline,
    "I gave a friend an instruction and five inputs. The friend read the instruction and wrote "
    "an output for every one of the inputs. Here are the input-output pairs:",
    "The instruction was",
};

} // namespace

std::string_view to_string(TemplateVariant variant) {
    return variant == TemplateVariant::ours ? "ours" : "instinduc";
}

TemplateVariant variant_from_string(std::string_view s) {
    if (s == "ours") {
        return TemplateVariant::ours;
    }
    if (s == "instinduc" || s == "instruction_induction") {
        return TemplateVariant::instruction_induction_baseline;
    }
    throw InputError("unknown template variant: " + std::string(s));
}

const MetaPromptTemplate& builtin_template(LanguageTag language, TemplateVariant variant) {
    if (variant == TemplateVariant::ours) {
        return language == LanguageTag::english ? kOursEn : kOursDe;
    }
    if (language == LanguageTag::english) {
        return kInstInducEn;
    }
    throw InputError("the instruction-induction baseline template exists for English only");
}

MetaPromptTemplate parse_template_file(const std::filesystem::path& path, LanguageTag language,
                                       TemplateVariant variant) {
    const std::string content = read_file(path);

    const std::string separator = "\n\n" + std::string(kPlaceholderBlock) + "\n";
    const std::size_t sep_pos = content.find(separator);
    if (sep_pos == std::string::npos) {
        throw MalformedFileError("template file lacks the placeholder demonstration block: " +
                                 path.string());
    }

    MetaPromptTemplate tpl;
    tpl.language = language;
    tpl.variant = variant;
    tpl.preamble = content.substr(0, sep_pos);

    std::string stub = content.substr(sep_pos + separator.size());
    const std::size_t cue_pos = stub.rfind(kCompletionCue);
    if (cue_pos == std::string::npos) {
        throw MalformedFileError("template file lacks the completion cue: " + path.string());
    }
    stub.erase(cue_pos);
    tpl.completion_stub = std::string(trim(stub));
    return tpl;
}

std::string template_reference_text(const MetaPromptTemplate& tpl) {
    std::string out = tpl.preamble;
    out += "\n\n";
    out += kPlaceholderBlock;
    out += "\n";
    out += tpl.completion_stub;
    out += " ";
    out += kCompletionCue;
    out += "\n";
    return out;
}

RenderedMetaPrompt render(const MetaPromptTemplate& tpl, std::span<const ExamplePair> examples,
                          SampleLabel label) {
    if (examples.empty()) {
        throw EmptySampleError("cannot render a meta-prompt from an empty sample");
    }

    RenderedMetaPrompt rendered;
    rendered.sample_label = label;
    rendered.text = tpl.preamble;
    rendered.text += "\n\n";
    for (const auto& example : examples) {
        rendered.text += "Input: ";
        rendered.text += example.input_text;
        rendered.text += "\nOutput: ";
        rendered.text += example.output_text;
        rendered.text += "\n";
        rendered.example_ids.push_back(example.id);
    }
    rendered.text += "\n";
    rendered.text += tpl.completion_stub;
    return rendered;
}

namespace {

// Quote pairs stripped from completions, as code points.
bool is_quote(char32_t cp) {
    switch (cp) {
    case U'"':
    case U'\'':
    case U'`':
    case 0x2018: // ‘
    case 0x2019: // ’
    case 0x201A: // ‚
    case 0x201C: // “
    case 0x201D: // ”
    case 0x201E: // „
    case 0x00AB: // «
    case 0x00BB: // »
        return true;
    default:
        return false;
    }
}

std::string strip_surrounding_quotes(const std::string& text) {
    std::u32string cps = decode_utf8(text);
    while (cps.size() >= 2 && is_quote(cps.front()) && is_quote(cps.back())) {
        cps = cps.substr(1, cps.size() - 2);
    }
    return encode_utf8(cps);
}

std::string truncate_at_blank_line(const std::string& text) {
    std::size_t line_start = 0;
    while (line_start < text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string::npos) {
            line_end = text.size();
        }
        if (trim(std::string_view(text).substr(line_start, line_end - line_start)).empty()) {
            return text.substr(0, line_start);
        }
        line_start = line_end + 1;
    }
    return text;
}

// The final line of each stub; models asked to "complete the following text"
// sometimes echo it back before the actual instruction.
std::string_view stub_echo(LanguageTag language) {
    return language == LanguageTag::english ? "The instruction was to" : "Die Anweisung lautete:";
}

std::string normalize_once(const std::string& input, LanguageTag language) {
    std::string s(trim(input));
    const std::string_view echo = stub_echo(language);
    while (s.starts_with(echo)) {
        s = std::string(trim(std::string_view(s).substr(echo.size())));
    }
    s = strip_surrounding_quotes(s);
    s = truncate_at_blank_line(s);
    return std::string(trim(s));
}

} // namespace

std::string assemble_task_prompt(std::string_view completion, LanguageTag language) {
    if (trim(completion).empty()) {
        throw EmptyCompletionError("completion is empty after trimming");
    }

    // Iterate to a fixpoint: each pass can expose work for an earlier step
    // (e.g. truncation revealing surrounding quotes).
    std::string current(completion);
    for (;;) {
        std::string next = normalize_once(current, language);
        if (next == current) {
            break;
        }
        current = std::move(next);
    }
    if (current.empty()) {
        throw EmptyCompletionError("completion is empty after normalization");
    }
    return current;
}

std::string task_prompt_with_input(std::string_view instruction, std::string_view task_input,
                                   std::span<const ExamplePair> demonstrations) {
    std::string out(instruction);
    out += "\n";
    for (const auto& demo : demonstrations) {
        out += "Input: ";
        out += demo.input_text;
        out += "\nOutput: ";
        out += demo.output_text;
        out += "\n";
    }
    out += "Input: ";
    out += task_input;
    out += "\nOutput:";
    return out;
}

} // namespace promptgen
