#include "hyperclust/error.hpp"
#include "hyperclust/io.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace hyperclust;

namespace {

TemporalHypergraph from_jsonl(const std::string& text) {
    std::istringstream in(text);
    return parse_jsonl(in);
}

}  // namespace

TEST_CASE("minimal record") {
    const auto g = from_jsonl(R"({"members":["alice","bob"],"time":"2018-01-01"})" "\n");
    REQUIRE(g.edge_count() == 1);
    CHECK(g.edge(0).members.size() == 2);
    CHECK(g.edge(0).raw_time == "2018-01-01");
    CHECK(std::isnan(g.edge(0).time));
    CHECK_FALSE(g.edge(0).id.has_value());
}

TEST_CASE("records are indexed in file order") {
    const auto g = from_jsonl(R"({"members":["a"],"time":1})" "\n"
                              "\n"
                              R"({"members":["b"],"time":2,"labels":["math.at","cs.lg"],"extra":true})" "\n"
                              R"({"id":7,"members":["A"],"time":3})" "\n");
    REQUIRE(g.edge_count() == 3);
    for (EdgeId e = 0; e < 3; ++e)
        CHECK(g.edge(e).source_index == e);
    CHECK(g.edge(1).labels == std::vector<std::string>{"math.at", "cs.lg"});
    CHECK(g.edge(2).id == "7");
    // "A" and "a" are the same author after normalization.
    CHECK(g.edge(2).members == g.edge(0).members);
}

TEST_CASE("empty member lists parse") {
    const auto g = from_jsonl(R"({"members":[],"time":"2018-01-01"})" "\n");
    REQUIRE(g.edge_count() == 1);
    CHECK(g.edge(0).members.empty());
}

TEST_CASE("errors carry the line number") {
    std::string text;
    for (int k = 1; k < 17; ++k)
        text += R"({"members":["a"],"time":1})" "\n";
    text += "{\"members\": [\"a\"], \"time\": \n";
    try {
        from_jsonl(text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 17);
        CHECK(std::string(e.what()).find("17") != std::string::npos);
    }

    CHECK_THROWS_AS(from_jsonl(R"({"time":1})" "\n"), SchemaError);
    CHECK_THROWS_AS(from_jsonl(R"({"members":"a","time":1})" "\n"), SchemaError);
    CHECK_THROWS_AS(from_jsonl(R"({"members":[1],"time":1})" "\n"), SchemaError);
    CHECK_THROWS_AS(from_jsonl(R"({"members":["a"]})" "\n"), SchemaError);
    CHECK_THROWS_AS(from_jsonl(R"({"members":["a"],"time":true})" "\n"), SchemaError);
    CHECK_THROWS_AS(from_jsonl("[1,2]\n"), SchemaError);
    CHECK_THROWS_AS(from_jsonl(R"({"id":"x","members":["a"],"time":1})" "\n"
                               R"({"id":"x","members":["b"],"time":2})" "\n"),
                    DuplicateIdError);
}

TEST_CASE("csv edge list with incidence") {
    std::istringstream edges("id,time,labels\n"
                             "p1,2018-01-01,math.at;stat.ml\n"
                             "p2,12.5,\n");
    std::istringstream incidence("edge_id,member\n"
                                 "p1,Alice\n"
                                 "p2,\"Bob, Jr.\"\n"
                                 "p1,bob, jr.\n");
    // Unquoted trailing field with a comma is malformed.
    CHECK_THROWS_AS(parse_csv(edges, incidence), ParseError);

    std::istringstream edges2("id,time,labels\n"
                              "p1,2018-01-01,math.at;stat.ml\n"
                              "p2,12.5,\n");
    std::istringstream incidence2("edge_id,member\n"
                                  "p1,Alice\n"
                                  "p2,\"Bob, Jr.\"\n"
                                  "p1,\"bob, jr.\"\n");
    const auto g = parse_csv(edges2, incidence2);
    REQUIRE(g.edge_count() == 2);
    CHECK(g.edge(0).id == "p1");
    CHECK(g.edge(0).members.size() == 2);
    CHECK(g.edge(0).labels == std::vector<std::string>{"math.at", "stat.ml"});
    CHECK(g.edge(1).time == 12.5);
    CHECK(g.vertex_count() == 2);
}

TEST_CASE("csv line splitting") {
    CHECK(split_csv_line("a,\"b,c\",\"d\"\"e\"", 1) == std::vector<std::string>{"a", "b,c", "d\"e"});
    CHECK(split_csv_line("", 1) == std::vector<std::string>{""});
    CHECK_THROWS_AS(split_csv_line("\"open", 3), ParseError);
}

TEST_CASE("jsonl round trip") {
    const auto g = from_jsonl(R"({"id":"p","members":["bob","alice"],"time":3.25,"labels":["cs.lg"]})" "\n"
                              R"({"members":["carol"],"time":0})" "\n");
    std::ostringstream out;
    write_jsonl(out, g);
    const auto back = from_jsonl(out.str());
    REQUIRE(back.edge_count() == 2);
    CHECK(back.edge(0).id == "p");
    CHECK(back.edge(0).time == 3.25);
    CHECK(back.edge(0).labels == g.edge(0).labels);
    CHECK(back.vertex_name(back.edge(0).members[0]) == g.vertex_name(g.edge(0).members[0]));
    std::ostringstream again;
    write_jsonl(again, back);
    CHECK(again.str() == out.str());
}

TEST_CASE("format_real") {
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(30) == "30");
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");
}
