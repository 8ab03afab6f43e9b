#include "promptgen/example_pool.hpp"

#include "promptgen/errors.hpp"
#include "promptgen/unicode.hpp"
#include "promptgen/util.hpp"

#include <json.hpp>

#include <set>
#include <unordered_set>

namespace promptgen {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(LanguageTag tag) {
    return tag == LanguageTag::english ? "en" : "de";
}

LanguageTag language_from_string(std::string_view s) {
    if (s == "en" || s == "english") {
        return LanguageTag::english;
    }
    if (s == "de" || s == "german") {
        return LanguageTag::german;
    }
    throw InputError("unknown language tag: " + std::string(s));
}

namespace {

json parse_json_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        throw MalformedFileError("invalid JSON in " + path.string());
    }
    return doc;
}

std::string json_quote(std::string_view s) { return json(s).dump(); }

} // namespace

ExamplePool load_pool(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    if (!doc.is_array()) {
        throw MalformedFileError("pool file must be a JSON array: " + path.string());
    }

    ExamplePool pool;
    std::unordered_set<std::string> seen_ids;
    const std::string file_tag = path.filename().string();
    std::size_t index = 0;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("input") || !entry.contains("output") ||
            !entry["input"].is_string() || !entry["output"].is_string()) {
            throw MalformedFileError("pool entry " + std::to_string(index) +
                                     " must be {\"input\": string, \"output\": string}");
        }
        ExamplePair pair;
        pair.input_text = entry["input"].get<std::string>();
        pair.output_text = entry["output"].get<std::string>();
        if (trim(pair.input_text).empty() || trim(pair.output_text).empty()) {
            throw MalformedFileError("pool entry " + std::to_string(index) +
                                     " has an empty input or output");
        }
        if (entry.contains("id") && entry["id"].is_string()) {
            pair.id = entry["id"].get<std::string>();
        } else {
            pair.id = file_tag + "#" + std::to_string(index);
        }
        if (!seen_ids.insert(pair.id).second) {
            throw DuplicateIdError("duplicate example id: " + pair.id);
        }
        pool.examples.push_back(std::move(pair));
        ++index;
    }

    if (pool.size() < kMinPoolSize) {
        throw PoolTooSmallError("pool has " + std::to_string(pool.size()) +
                                " examples; at least " + std::to_string(kMinPoolSize) +
                                " are required");
    }
    return pool;
}

void save_pool(const ExamplePool& pool, const std::filesystem::path& path) {
    ordered_json doc = ordered_json::array();
    for (const auto& pair : pool.examples) {
        doc.push_back({{"input", pair.input_text}, {"output", pair.output_text}, {"id", pair.id}});
    }
    write_file(path, doc.dump(2) + "\n");
}

std::string cne_input_json(const CneTable& table) {
    std::string out = "{\"table\": " + json_quote(table.table_name) + ", \"columns\": [";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += json_quote(table.columns[i]);
    }
    out += "]}";
    return out;
}

std::string cne_output_json(const CneTable& table) {
    if (!table.gold) {
        throw MissingGoldError("table \"" + table.table_name + "\" has no gold expansions");
    }
    std::string out = "{\"table\": " + json_quote(table.table_name) + ", \"columns\": {";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += json_quote(table.columns[i]) + ": " + json_quote(table.gold->at(table.columns[i]));
    }
    out += "}}";
    return out;
}

ExamplePair cne_to_example(const CneTable& table) {
    ExamplePair pair;
    pair.input_text = cne_input_json(table);
    pair.output_text = cne_output_json(table);
    pair.id = table.table_name;
    return pair;
}

std::vector<CneTable> load_cne_dataset(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    if (!doc.is_array()) {
        throw MalformedFileError("dataset file must be a JSON array: " + path.string());
    }

    std::vector<CneTable> tables;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("table") || !entry["table"].is_string() ||
            !entry.contains("columns") || !entry["columns"].is_array()) {
            throw MalformedFileError("dataset entries must be {\"table\", \"columns\", \"gold\"?}");
        }
        CneTable table;
        table.table_name = entry["table"].get<std::string>();

        std::set<std::string> seen;
        for (const auto& col : entry["columns"]) {
            if (!col.is_string()) {
                throw MalformedFileError("column names must be strings in table \"" +
                                         table.table_name + "\"");
            }
            auto name = col.get<std::string>();
            if (!seen.insert(name).second) {
                throw DuplicateColumnError("duplicate column \"" + name + "\" in table \"" +
                                           table.table_name + "\"");
            }
            table.columns.push_back(std::move(name));
        }

        if (entry.contains("gold") && !entry["gold"].is_null()) {
            if (!entry["gold"].is_object()) {
                throw MalformedFileError("gold must be an object in table \"" + table.table_name +
                                         "\"");
            }
            std::map<std::string, std::string> gold;
            for (const auto& [key, value] : entry["gold"].items()) {
                if (!seen.count(key)) {
                    throw MalformedFileError("gold key \"" + key + "\" is not a column of table \"" +
                                             table.table_name + "\"");
                }
                if (!value.is_string() || trim(value.get<std::string>()).empty()) {
                    throw MalformedFileError("gold expansion for \"" + key +
                                             "\" must be a non-empty string");
                }
                gold[key] = value.get<std::string>();
            }
            if (gold.size() != table.columns.size()) {
                throw MalformedFileError("gold of table \"" + table.table_name +
                                         "\" does not cover every column");
            }
            table.gold = std::move(gold);
        }
        tables.push_back(std::move(table));
    }
    return tables;
}

} // namespace promptgen
