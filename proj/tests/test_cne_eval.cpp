#include "promptgen/cne_eval.hpp"

#include "promptgen/errors.hpp"
#include "promptgen/meta_prompt.hpp"
#include "support/oracles.hpp"
#include "support/scripted_backend.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace promptgen;
using testutil::ScriptedBackend;

namespace {

CneTable vbuk_table() {
    CneTable table;
    table.table_name = "vbuk";
    table.columns = {"mandt", "vbeln", "gbstk", "vbtyp", "aedat"};
    table.gold = std::map<std::string, std::string>{
        {"mandt", "Mandant"},
        {"vbeln", "Vertriebsbelegnummer eines CAS-Kontaktes"},
        {"gbstk", "Gesamtbearbeitungsstatus des Vertriebsbeleges"},
        {"vbtyp", "Vertriebsbelegtyp"},
        {"aedat", "Datum der letzten Änderung"},
    };
    return table;
}

} // namespace

TEST_CASE("parse_prediction reads the documented output shape") {
    const auto table = vbuk_table();
    const std::string raw = cne_output_json(table);
    const auto predicted = parse_prediction(raw, table);
    REQUIRE(predicted.size() == 5);
    CHECK(predicted.at("aedat") == "Datum der letzten Änderung");
    CHECK(predicted.at("mandt") == "Mandant");
}

TEST_CASE("parse_prediction extracts JSON wrapped in prose") {
    const auto table = vbuk_table();
    const std::string raw = "Sure! Here is the expansion you asked for:\n\n" +
                            cne_output_json(table) + "\n\nLet me know if you need more.";
    const auto predicted = parse_prediction(raw, table);
    CHECK(predicted.at("vbtyp") == "Vertriebsbelegtyp");
}

TEST_CASE("parse_prediction skips objects without a columns map") {
    const auto table = vbuk_table();
    const std::string raw =
        R"(metadata {"note": "x"} then the real thing )" + cne_output_json(table);
    CHECK(parse_prediction(raw, table).at("mandt") == "Mandant");
}

TEST_CASE("parse_prediction fails without any JSON object") {
    const auto table = vbuk_table();
    CHECK_THROWS_AS(parse_prediction("sorry, I cannot", table), UnparseableError);
    CHECK_THROWS_AS(parse_prediction("{ broken json", table), UnparseableError);
}

TEST_CASE("missing columns map to empty predictions") {
    auto table = vbuk_table();
    const std::string raw = R"({"table": "vbuk", "columns": {"mandt": "Mandant"}})";
    const auto predicted = parse_prediction(raw, table);
    CHECK(predicted.at("mandt") == "Mandant");
    CHECK(predicted.at("vbeln").empty());
}

TEST_CASE("score_column identity and empty prediction") {
    const EvalConfig config;
    CHECK(score_column("Discount Percentage Applicable", "Discount Percentage Applicable",
                       config) == std::pair{1.0, true});
    const auto [similarity, matched] = score_column("", "Mandant", config);
    CHECK(similarity == 0.0);
    CHECK(!matched);
}

TEST_CASE("near-miss expansion clears the 0.85 threshold") {
    // Verified against the brute-force oracle before asserting the match.
    const std::string predicted = "discount percent applicable";
    const std::string gold = "discount percentage applicable";
    const double reference =
        oracle::jaro_winkler(oracle::widen(predicted), oracle::widen(gold));
    CHECK(reference > 0.85);

    const EvalConfig config;
    const auto [similarity, matched] =
        score_column("Discount Percent Applicable", "Discount Percentage Applicable", config);
    CHECK(similarity == doctest::Approx(reference).epsilon(1e-12));
    CHECK(matched);
}

TEST_CASE("normalization flags change the comparison") {
    EvalConfig config;
    const auto [with_fold, matched_fold] = score_column("MANDANT", "Mandant", config);
    CHECK(with_fold == 1.0);
    CHECK(matched_fold);

    config.lowercase = false;
    const auto [without_fold, matched_raw] = score_column("MANDANT", "Mandant", config);
    CHECK(without_fold < 1.0);

    config.lowercase = true;
    config.collapse_whitespace = false;
    const auto [ws_kept, ws_matched] = score_column("Mandant  Nummer", "Mandant Nummer", config);
    CHECK(ws_kept < 1.0);
    config.collapse_whitespace = true;
    CHECK(score_column("  Mandant   Nummer ", "Mandant Nummer", config).first == 1.0);

    // With normalization fully disabled, byte-equal strings still score 1.
    config.lowercase = false;
    config.collapse_whitespace = false;
    CHECK(score_column("Datum der letzten Änderung", "Datum der letzten Änderung", config) ==
          std::pair{1.0, true});
}

TEST_CASE("threshold monotonicity") {
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"Mandant", "Mandant"},
        {"Mandantt", "Mandant"},
        {"Datum der letzten Aenderung", "Datum der letzten Änderung"},
        {"Bestand", "Bestandsmenge"},
        {"falsch", "Mandant"},
    };
    EvalConfig config;
    std::size_t previous = pairs.size() + 1;
    for (double threshold : {0.5, 0.7, 0.85, 0.95, 1.0}) {
        config.match_threshold = threshold;
        std::size_t matched = 0;
        for (const auto& [predicted, gold] : pairs) {
            matched += score_column(predicted, gold, config).second ? 1 : 0;
        }
        CHECK(matched <= previous);
        previous = matched;
    }
}

TEST_CASE("evaluate aggregates per-column results") {
    const auto table = vbuk_table();
    ScriptedBackend backend;
    backend.script(table, cne_output_json(table));

    const std::vector<CneTable> tables = {table};
    const auto report = evaluate(tables, backend, "expand the column names", {}, {});
    CHECK(report.total_columns == 5);
    CHECK(report.matched_columns == 5);
    CHECK(report.unparsed_tables == 0);
    CHECK(report.accuracy == 1.0);
    CHECK(format_percent(report.accuracy) == "100.00");
}

TEST_CASE("gold-echo mock scores 100 percent") {
    const auto table = vbuk_table();
    MockBackend mock(3);
    mock.prime_gold(table);
    const std::vector<CneTable> tables = {table};
    const auto report = evaluate(tables, mock, "expand the column names", {}, {});
    CHECK(report.accuracy == 1.0);
}

TEST_CASE("unparseable and failing tables count as unmatched") {
    const auto table = vbuk_table();
    CneTable second = table;
    second.table_name = "vbap";

    ScriptedBackend backend;
    backend.script(table, "I don't feel like answering in JSON");
    // `second` is left unscripted: the backend error marks it unparsed.

    const std::vector<CneTable> tables = {table, second};
    const auto report = evaluate(tables, backend, "expand", {}, {});
    CHECK(report.unparsed_tables == 2);
    CHECK(report.matched_columns == 0);
    CHECK(report.total_columns == 10);
    CHECK(format_percent(report.accuracy) == "0.00");
    CHECK(!report.per_table[0].parsed);
    CHECK(!report.per_table[1].error.empty());
}

TEST_CASE("evaluate requires gold and a non-empty dataset") {
    ScriptedBackend backend;
    auto table = vbuk_table();
    table.gold.reset();
    const std::vector<CneTable> no_gold = {table};
    CHECK_THROWS_AS(evaluate(no_gold, backend, "x", {}, {}), NoGoldError);
    const std::vector<CneTable> empty;
    CHECK_THROWS_AS(evaluate(empty, backend, "x", {}, {}), EvalError);
}

TEST_CASE("accuracy is invariant under table and column reordering") {
    auto t1 = vbuk_table();
    CneTable t2;
    t2.table_name = "aufkpf";
    t2.columns = {"aufnr", "bstdt"};
    t2.gold = std::map<std::string, std::string>{{"aufnr", "Auftragsnummer"},
                                                 {"bstdt", "Bestelldatum"}};

    ScriptedBackend backend;
    backend.script(t1, cne_output_json(t1));
    backend.script(t2, R"({"columns": {"aufnr": "Auftragsnummer", "bstdt": "falsch"}})");

    const std::vector<CneTable> order_a = {t1, t2};
    const std::vector<CneTable> order_b = {t2, t1};
    const auto report_a = evaluate(order_a, backend, "expand", {}, {});

    auto t1_shuffled = t1;
    std::reverse(t1_shuffled.columns.begin(), t1_shuffled.columns.end());
    ScriptedBackend backend_b;
    backend_b.script(t1_shuffled, cne_output_json(t1));
    backend_b.script(t2, R"({"columns": {"aufnr": "Auftragsnummer", "bstdt": "falsch"}})");
    const std::vector<CneTable> order_c = {t2, t1_shuffled};

    CHECK(evaluate(order_b, backend, "expand", {}, {}).accuracy == report_a.accuracy);
    CHECK(evaluate(order_c, backend_b, "expand", {}, {}).accuracy == report_a.accuracy);
}

TEST_CASE("column accounting: 185 columns with 89 mismatches is 51.89 percent") {
    // 15 tables, 5x13 + 10x12 = 185 columns; 14 tables answer 6 columns
    // wrong, the last answers 5 wrong: 89 misses, 96 matches.
    std::vector<CneTable> tables;
    ScriptedBackend backend;
    for (int t = 0; t < 15; ++t) {
        const int cols = t < 5 ? 13 : 12;
        const int wrong = t < 14 ? 6 : 5;
        CneTable table;
        table.table_name = "tab" + std::to_string(t);
        std::map<std::string, std::string> gold;
        std::string response = R"({"table": ")" + table.table_name + R"(", "columns": {)";
        for (int c = 0; c < cols; ++c) {
            const std::string column = "c" + std::to_string(t) + "_" + std::to_string(c);
            const std::string expansion =
                "Feld " + std::to_string(t) + " " + std::to_string(c) + " Wert";
            table.columns.push_back(column);
            gold[column] = expansion;
            if (c > 0) {
                response += ", ";
            }
            const bool miss = c < wrong;
            response += "\"" + column + "\": \"" + (miss ? "xj xj xj" : expansion) + "\"";
        }
        response += "}}";
        table.gold = std::move(gold);
        backend.script(table, response);
        tables.push_back(std::move(table));
    }

    const auto report = evaluate(tables, backend, "expand the column names", {}, {});
    CHECK(report.total_columns == 185);
    CHECK(report.matched_columns == 96);
    CHECK(report.accuracy == doctest::Approx(0.518918918918919).epsilon(1e-9));
    CHECK(format_percent(report.accuracy) == "51.89");

    std::size_t unmatched = 0;
    for (const auto& table : report.per_table) {
        for (const auto& col : table.per_column) {
            unmatched += col.matched ? 0 : 1;
        }
    }
    CHECK(report.matched_columns + unmatched == report.total_columns);
}

TEST_CASE("eval config validation") {
    EvalConfig config;
    config.match_threshold = 0.0;
    CHECK_THROWS_AS(config.validate(), InputError);
    config.match_threshold = 1.5;
    CHECK_THROWS_AS(config.validate(), InputError);
    config.match_threshold = 1.0;
    CHECK_NOTHROW(config.validate());
}
