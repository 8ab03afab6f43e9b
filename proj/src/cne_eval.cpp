#include "promptgen/cne_eval.hpp"

#include "promptgen/errors.hpp"
#include "promptgen/meta_prompt.hpp"
#include "promptgen/unicode.hpp"
#include "promptgen/util.hpp"

#include <json.hpp>

#include <cstdio>
#include <optional>

namespace promptgen {

using nlohmann::json;

void EvalConfig::validate() const {
    if (match_threshold <= 0.0 || match_threshold > 1.0) {
        throw InputError("match_threshold must be in (0, 1]");
    }
    similarity.validate();
}

namespace {

// Finds the next balanced {...} span starting at or after `from`, honoring
// string literals and escapes. Returns the end offset past the brace, or
// npos.
std::size_t balanced_object_end(std::string_view raw, std::size_t from) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = from; i < raw.size(); ++i) {
        const char c = raw[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            --depth;
            if (depth == 0) {
                return i + 1;
            }
        }
    }
    return std::string_view::npos;
}

std::optional<json> first_object_with_columns(std::string_view raw) {
    for (std::size_t start = raw.find('{'); start != std::string_view::npos;
         start = raw.find('{', start + 1)) {
        const std::size_t end = balanced_object_end(raw, start);
        if (end == std::string_view::npos) {
            continue;
        }
        json doc = json::parse(raw.substr(start, end - start), nullptr,
                               /*allow_exceptions=*/false);
        if (!doc.is_discarded() && doc.is_object() && doc.contains("columns") &&
            doc["columns"].is_object()) {
            return doc;
        }
    }
    return std::nullopt;
}

} // namespace

std::map<std::string, std::string> parse_prediction(std::string_view raw, const CneTable& table) {
    const auto doc = first_object_with_columns(raw);
    if (!doc) {
        throw UnparseableError("no JSON object with a \"columns\" map in model output");
    }

    const auto& columns = (*doc)["columns"];
    std::map<std::string, std::string> predicted;
    for (const auto& column : table.columns) {
        if (columns.contains(column) && columns[column].is_string()) {
            predicted[column] = columns[column].get<std::string>();
        } else {
            predicted[column] = ""; // scored as similarity 0 against non-empty gold
        }
    }
    return predicted;
}

std::pair<double, bool> score_column(std::string_view predicted, std::string_view gold,
                                     const EvalConfig& config) {
    config.validate();

    const auto normalize = [&config](std::string_view text) {
        std::u32string cps = decode_utf8(text);
        if (config.lowercase) {
            cps = to_lower(cps);
        }
        if (config.collapse_whitespace) {
            cps = collapse_whitespace(cps);
        }
        return cps;
    };

    const std::u32string lhs = normalize(predicted);
    const std::u32string rhs = normalize(gold);
    const double similarity = jaro_winkler(lhs, rhs, config.similarity);
    return {similarity, similarity >= config.match_threshold};
}

EvalReport evaluate(std::span<const CneTable> tables, LlmBackend& backend,
                    const std::string& instruction, const EvalConfig& config,
                    const GenerationConfig& gen_cfg) {
    config.validate();
    if (tables.empty()) {
        throw EvalError("dataset contains no tables");
    }
    for (const auto& table : tables) {
        if (!table.gold) {
            throw NoGoldError("table \"" + table.table_name + "\" has no gold expansions");
        }
    }

    // One inference per table; responses land by index so the report order
    // matches the dataset regardless of completion order.
    std::vector<std::string> responses(tables.size());
    std::vector<std::string> failures(tables.size());
    parallel_for_indexed(tables.size(), gen_cfg.max_in_flight, [&](std::size_t i) {
        const std::string prompt =
            task_prompt_with_input(instruction, cne_input_json(tables[i]), config.demonstrations);
        try {
            responses[i] = backend.infer(prompt, gen_cfg);
        } catch (const BackendError& e) {
            failures[i] = e.what();
        }
    });

    EvalReport report;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const CneTable& table = tables[i];
        TableResult result;
        result.table_name = table.table_name;

        std::map<std::string, std::string> predicted;
        if (!failures[i].empty()) {
            result.parsed = false;
            result.error = failures[i];
        } else {
            try {
                predicted = parse_prediction(responses[i], table);
            } catch (const UnparseableError& e) {
                result.parsed = false;
                result.error = e.what();
            }
        }
        if (!result.parsed) {
            ++report.unparsed_tables;
        }

        for (const auto& column : table.columns) {
            ColumnResult col;
            col.column = column;
            col.gold = table.gold->at(column);
            col.predicted = result.parsed ? predicted[column] : "";
            if (col.predicted.empty()) {
                col.similarity = 0.0;
                col.matched = false;
            } else {
                std::tie(col.similarity, col.matched) =
                    score_column(col.predicted, col.gold, config);
            }
            ++report.total_columns;
            if (col.matched) {
                ++report.matched_columns;
            }
            result.per_column.push_back(std::move(col));
        }
        report.per_table.push_back(std::move(result));
    }

    report.accuracy = report.total_columns == 0
                          ? 0.0
                          : static_cast<double>(report.matched_columns) /
                                static_cast<double>(report.total_columns);
    return report;
}

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
    return buf;
}

} // namespace promptgen
