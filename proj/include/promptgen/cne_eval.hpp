#pragma once

#include "promptgen/example_pool.hpp"
#include "promptgen/llm_backend.hpp"
#include "promptgen/similarity.hpp"

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace promptgen {

struct EvalConfig {
    double match_threshold = 0.85;
    bool lowercase = true;
    bool collapse_whitespace = true;
    SimilarityParams similarity;
    std::vector<ExamplePair> demonstrations; // prepended to each task prompt when non-empty

    void validate() const; // throws InputError unless 0 < match_threshold <= 1
};

struct ColumnResult {
    std::string column;
    std::string gold;
    std::string predicted;
    double similarity = 0.0;
    bool matched = false;
};

struct TableResult {
    std::string table_name;
    std::vector<ColumnResult> per_column;
    bool parsed = true;
    std::string error; // parse/backend failure detail when !parsed
};

struct EvalReport {
    std::vector<TableResult> per_table;
    std::size_t total_columns = 0;
    std::size_t matched_columns = 0;
    std::size_t unparsed_tables = 0;
    double accuracy = 0.0; // matched / total, 0 when total is 0
};

/// Extracts expansions from a raw model response: the first balanced JSON
/// object containing a "columns" map wins; columns absent from it map to "".
/// Throws UnparseableError when no such object exists.
std::map<std::string, std::string> parse_prediction(std::string_view raw, const CneTable& table);

/// Normalizes both strings per config, then Jaro-Winkler; matched when the
/// similarity reaches the threshold.
std::pair<double, bool> score_column(std::string_view predicted, std::string_view gold,
                                     const EvalConfig& config);

/// Runs the instruction over every table (inference fanned out up to
/// gen_cfg.max_in_flight), parses and scores predictions, micro-averages
/// accuracy over columns. Backend or parse failures mark the table unparsed
/// with all its columns unmatched. Throws NoGoldError if any table lacks
/// gold, EvalError if the dataset is empty.
EvalReport evaluate(std::span<const CneTable> tables, LlmBackend& backend,
                    const std::string& instruction, const EvalConfig& config,
                    const GenerationConfig& gen_cfg);

/// "51.89"-style fixed two-decimal percentage.
std::string format_percent(double fraction);

} // namespace promptgen
