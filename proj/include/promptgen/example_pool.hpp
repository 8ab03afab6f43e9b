#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace promptgen {

enum class LanguageTag { english, german };

std::string_view to_string(LanguageTag tag);
LanguageTag language_from_string(std::string_view s); // accepts "en"/"de"/"english"/"german"

/// One demonstration pair for the target task.
struct ExamplePair {
    std::string input_text;
    std::string output_text;
    std::string id; // stable: source file + index unless the file provides one

    bool operator==(const ExamplePair&) const = default;
};

inline constexpr std::size_t kMinPoolSize = 4;

struct ExamplePool {
    std::vector<ExamplePair> examples;
    LanguageTag language = LanguageTag::english;

    std::size_t size() const { return examples.size(); }
};

/// Loads a pool file: JSON array of {"input": string, "output": string}
/// objects (optional "id"), UTF-8, order preserved.
/// Throws MalformedFileError, PoolTooSmallError, DuplicateIdError.
ExamplePool load_pool(const std::filesystem::path& path);

void save_pool(const ExamplePool& pool, const std::filesystem::path& path);

/// A table with cryptic column names; gold carries the validated expansions.
struct CneTable {
    std::string table_name;
    std::vector<std::string> columns;
    std::optional<std::map<std::string, std::string>> gold;
};

/// Single-line JSON in the fixed layout {"table": ..., "columns": [...]},
/// with a space after ":" and "," so serialized examples are byte-stable.
std::string cne_input_json(const CneTable& table);

/// {"table": ..., "columns": {col: expansion, ...}} with expansion keys in
/// column order. Throws MissingGoldError.
std::string cne_output_json(const CneTable& table);

ExamplePair cne_to_example(const CneTable& table);

/// Dataset file: JSON array of {"table": string, "columns": [string...],
/// "gold": {string: string} | null}. Throws MalformedFileError,
/// DuplicateColumnError.
std::vector<CneTable> load_cne_dataset(const std::filesystem::path& path);

} // namespace promptgen
