#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mtforge/dialogue.hpp"
#include "mtforge/errors.hpp"

#include "support/paths.hpp"

using namespace mtforge;
using nlohmann::json;

namespace {

Dialogue tiny_dialogue(const std::string& id, int turns) {
    Dialogue d;
    d.id = id;
    for (int r = 1; r <= turns; ++r) {
        Turn t;
        t.round = r;
        t.question_raw = "And round " + std::to_string(r) + "?";
        t.question_complete = "What is round " + std::to_string(r) + "?";
        t.gql = "MATCH (a:stock) RETURN a.name LIMIT " + std::to_string(r);
        t.answer = json::array({"x"});
        if (r > 1) t.pattern = Pattern::P1;
        t.entities = {"CITIC Securities"};
        t.relations = {"belong_to"};
        d.turns.push_back(std::move(t));
    }
    return d;
}

}  // namespace

TEST_CASE("figure-1 dialogue round-trips losslessly") {
    auto dialogues = read_dataset(testsupport::figure1_path());
    REQUIRE(dialogues.size() == 1);
    CHECK(dialogues[0].turns.size() == 4);
    CHECK(dialogues[0].turns[0].pattern == std::nullopt);
    CHECK(dialogues[0].turns[3].pattern == Pattern::P4);

    auto path = testsupport::temp_file("roundtrip.jsonl");
    write_dataset(dialogues, path);
    auto again = read_dataset(path);
    REQUIRE(again.size() == 1);
    CHECK(dialogue_to_json(again[0]) == dialogue_to_json(dialogues[0]));
    std::filesystem::remove(path);
}

TEST_CASE("empty dataset round-trips to an empty file") {
    auto path = testsupport::temp_file("empty.jsonl");
    write_dataset({}, path);
    CHECK(read_dataset(path).empty());
    std::filesystem::remove(path);
}

TEST_CASE("round gaps are invariant errors naming the dialogue") {
    Dialogue d = tiny_dialogue("gappy", 3);
    d.turns[2].round = 4;  // 1,2,4
    CHECK_THROWS_WITH_AS(validate_dialogue(d, false), doctest::Contains("gappy"),
                         InvariantError);
}

TEST_CASE("placeholder tokens in complete questions are rejected") {
    Dialogue d = tiny_dialogue("ph", 1);
    d.turns[0].question_complete = "What is the opening price of [s]?";
    CHECK_THROWS_AS(validate_dialogue(d, false), InvariantError);
}

TEST_CASE("unparseable gql is rejected on read") {
    Dialogue d = tiny_dialogue("bad", 1);
    d.turns[0].gql = "MATCH (a RETURN";
    CHECK_THROWS_AS(validate_dialogue(d, false), InvariantError);
}

TEST_CASE("forge bounds apply only when requested") {
    Dialogue d = tiny_dialogue("short", 3);
    CHECK_NOTHROW(validate_dialogue(d, false));
    CHECK_THROWS_AS(validate_dialogue(d, true), InvariantError);
}

TEST_CASE("malformed JSONL reports the line number") {
    auto path = testsupport::temp_file("badline.jsonl");
    {
        std::ofstream out(path);
        out << dialogue_to_json(tiny_dialogue("ok", 1)).dump() << "\n";
        out << "{not json\n";
    }
    CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains("line 2"), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("compute_stats follows the Table-2 definitions") {
    SUBCASE("two dialogues of 5 and 7 turns average 6.0") {
        auto stats = compute_stats({tiny_dialogue("a", 5), tiny_dialogue("b", 7)});
        CHECK(stats.data_points == 2);
        CHECK(stats.total_gqls == 12);
        CHECK(stats.avg_turns == doctest::Approx(6.0));
    }
    SUBCASE("empty dataset reports zeros") {
        auto stats = compute_stats({});
        CHECK(stats.data_points == 0);
        CHECK(stats.total_gqls == 0);
        CHECK(stats.avg_turns == 0.0);
        CHECK(stats.avg_entities == 0.0);
    }
    SUBCASE("entities and relations count distinct per dialogue") {
        Dialogue d = tiny_dialogue("dup", 3);  // same entity in every turn
        auto stats = compute_stats({d});
        CHECK(stats.avg_entities == doctest::Approx(1.0));
        CHECK(stats.avg_relations == doctest::Approx(1.0));
    }
}

TEST_CASE("stats totals are additive over dataset unions") {
    std::vector<Dialogue> a = {tiny_dialogue("a", 5)};
    std::vector<Dialogue> b = {tiny_dialogue("b", 7), tiny_dialogue("c", 6)};
    std::vector<Dialogue> both = a;
    both.insert(both.end(), b.begin(), b.end());
    auto sa = compute_stats(a);
    auto sb = compute_stats(b);
    auto sboth = compute_stats(both);
    CHECK(sboth.data_points == sa.data_points + sb.data_points);
    CHECK(sboth.total_gqls == sa.total_gqls + sb.total_gqls);
}

TEST_CASE("render_answer flattens single columns and keeps rows otherwise") {
    ResultTable single;
    single.columns = {"x"};
    single.rows = {{Value("a")}, {Value(2)}};
    CHECK(render_answer(single) == json::array({"a", 2}));

    ResultTable multi;
    multi.columns = {"x", "y"};
    multi.rows = {{Value("a"), Value(1.5)}};
    CHECK(render_answer(multi) == json::array({json::array({"a", 1.5})}));
}

TEST_CASE("seeded shuffle is deterministic") {
    std::vector<Dialogue> a = {tiny_dialogue("a", 1), tiny_dialogue("b", 1),
                               tiny_dialogue("c", 1), tiny_dialogue("d", 1)};
    std::vector<Dialogue> b = a;
    shuffle_dialogues(a, 42);
    shuffle_dialogues(b, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == b[i].id);
}
