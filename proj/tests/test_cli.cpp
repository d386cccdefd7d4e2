#include "fink/cli.hpp"
#include "fink/json_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace fink;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int s = cli::run(args, out, err);
    return {s, out.str(), err.str()};
}

template <class T>
void round_trip(const T& value) {
    const json j = value;
    const T back = j.get<T>();
    CHECK(json(back).dump() == j.dump());
}

} // namespace

TEST_CASE("parse examples") {
    CHECK(run({"span", "--k", "2", "--blocks", "2:{0:2} 2:{2:2}"}).status == cli::ok);
    auto c = run({"count", "--k", "3", "--d", "4", "--format", "csv"});
    CHECK(c.status == cli::ok);
    CHECK(c.out.rfind("k,d,t,t_prime,t_tilde,C,maps\n", 0) == 0);
    auto bad = run({"span", "--k"});
    CHECK(bad.status == cli::usage);
    CHECK(bad.out.empty());
    CHECK(bad.err.find("--k") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(run({}).status == cli::usage);
    CHECK(run({"frobnicate"}).status == cli::usage);
    CHECK(run({"span", "--k", "9", "--blocks", "1:{0:1}"}).status == cli::usage);
    CHECK(run({"span", "--k", "1", "--blocks", "1:{0:1} 1:{0:1}"}).status == cli::usage);
    CHECK(run({"span", "--k", "1"}).status == cli::usage);
    CHECK(run({"count", "--k", "1", "--d", "2", "--format", "xml"}).status == cli::usage);
    CHECK(run({"homog", "--k", "1", "--rule", "rainbow"}).status == cli::usage);
    CHECK(run({"homog", "--k", "1", "--coloring", "{not json"}).status == cli::usage);
    CHECK(run({"mixing", "--k", "1", "--pair", "x0"}).status == cli::usage);
    CHECK(run({"canonize", "--k", "1", "--mode", "theorem3"}).status == cli::usage);
}

TEST_CASE("span of two singletons") {
    auto r = run({"span", "--k", "1", "--blocks", "1:{0:1} 1:{1:1}", "--format", "json"});
    REQUIRE(r.status == cli::ok);
    auto j = json::parse(r.out);
    CHECK(j["size"] == 3);
    CHECK(j["elements"].size() == 3);
    CHECK(j["elements"][2]["vector"] == "1:{0:1,1:1}");
    auto t = run({"span", "--k", "1", "--blocks", "1:{0:1} 1:{1:1}"});
    // header, rule, three rows
    CHECK(std::count(t.out.begin(), t.out.end(), '\n') == 5);
}

TEST_CASE("count row at arity 2") {
    auto r = run({"count", "--k", "1", "--d", "2", "--format", "json"});
    REQUIRE(r.status == cli::ok);
    auto j = json::parse(r.out);
    CHECK(j["C"] == j["t_tilde"]);
    CHECK(j["t_tilde"] == j["t_prime"]);
    CHECK(j["t"] == 5);
}

TEST_CASE("mixing pair from the command line") {
    auto r = run({"mixing", "--rule", "union", "--k", "1", "--pair", "x0 | x0+x2", "--format", "json"});
    REQUIRE(r.status == cli::ok);
    auto j = json::parse(r.out);
    CHECK(j["verdict"] == "MixedAtHorizon");
    auto sep = run({"mixing", "--rule", "union", "--k", "1", "--pair", "x0+x2 | x0+x1+x2", "--format", "json"});
    REQUIRE(sep.status == cli::ok);
    CHECK(json::parse(sep.out)["verdict"] == "Separated");
}

TEST_CASE("sos and stairs") {
    auto r = run({"sos", "--k", "2", "--vector", "2:{0:2}", "--format", "json"});
    REQUIRE(r.status == cli::ok);
    auto j = json::parse(r.out);
    CHECK(j[0]["sos"] == false);
    CHECK(j[0]["clause"] == "range");
    auto s = run({"stairs", "--k", "1", "--format", "json"});
    REQUIRE(s.status == cli::ok);
    auto sj = json::parse(s.out);
    CHECK(sj["raw"] == 12);
    CHECK(sj["deduped"] == 5);
}

TEST_CASE("homog and canonize") {
    auto h = run({"homog", "--k", "1", "--rule", "min-parity", "--format", "json"});
    REQUIRE(h.status == cli::ok);
    auto w = json::parse(h.out)["witness"].get<BlockSequence>();
    CHECK(w.size() == 3);
    CHECK(certify_homogeneous(w, Coloring::rule(ColorRule::min_parity), 1));

    auto c = run({"canonize", "--k", "1", "--rule", "constant", "--format", "json"});
    REQUIRE(c.status == cli::ok);
    auto cr = json::parse(c.out).get<CanonizeResult>();
    CHECK(cr.found());
}

TEST_CASE("exhaustion exits with 1") {
    auto h = run({"homog", "--k", "1", "--rule", "min-parity", "--budget-nodes", "2"});
    CHECK(h.status == cli::exhausted);
    CHECK_FALSE(h.err.empty());
    auto u = run({"homog", "--k", "1", "--rule", "union", "--target-len", "2", "--format", "json"});
    CHECK(u.status == cli::exhausted);
    CHECK(json::parse(u.out)["witness"].is_null());
}

TEST_CASE("parse_pair") {
    auto X = unit_blocks(2, 4);
    auto [s, t] = cli::parse_pair("T^1x0+x1 | x0, x3", X);
    CHECK(s.size() == 1);
    CHECK(to_string(s[0]) == "2:{0:1,1:2}");
    CHECK(t.size() == 2);
    CHECK(cli::parse_approximation("2:{0:2} 2:{3:2}", X) == t);
    CHECK_THROWS_AS(cli::parse_pair("x0", X), Error);
    CHECK_THROWS_AS(cli::parse_approximation("y0", X), Error);
    CHECK(cli::parse_approximation("()", X).empty());
}

TEST_CASE("json round trips") {
    round_trip(parse_kvector("2:{0:1,2:2}"));
    round_trip(make_sos(2, 2));
    round_trip(span_enumerate(unit_blocks(2, 2))[3].term);
    for (const auto& f : enumerate_raw_stair_functions(2)) round_trip(f);
    for (const auto& m : enumerate_canonical_maps(1, 2)) round_trip(m);
    round_trip(Horizon{});
    round_trip(count_canonical(2, 3));
    round_trip(Coloring::rule(ColorRule::first_value));

    std::map<BlockSequence, Color> table;
    for (const auto& s : approximations(unit_blocks(1, 3), 1)) table[s] = std::to_string(s[0].size());
    round_trip(Coloring::table(table));

    for (const auto& args : std::vector<std::vector<std::string>>{
             {"homog", "--k", "1", "--format", "json"},
             {"homog", "--k", "1", "--rule", "union", "--target-len", "2", "--format", "json"},
             {"mixing", "--k", "1", "--pair", "x0 | x0+x2", "--format", "json"},
             {"canonize", "--k", "1", "--rule", "identity", "--n", "1", "--format", "json"}}) {
        auto r = run(args);
        auto j = json::parse(r.out);
        if (args[0] == "homog") round_trip(j.get<HomogResult>());
        if (args[0] == "mixing") round_trip(j.get<MixReport>());
        if (args[0] == "canonize") round_trip(j.get<CanonizeResult>());
    }
}

TEST_CASE("identical invocations give identical bytes") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"span", "--k", "2", "--blocks", "2:{0:2} 2:{2:2}", "--format", "json"},
             {"count", "--k", "2", "--d", "3", "--format", "json"},
             {"homog", "--k", "2", "--rule", "first-value", "--universe", "5", "--target-len", "2", "--format", "json"},
             {"mixing", "--k", "1", "--pair", "x0 | x0+x2", "--format", "json"}}) {
        auto a = run(args);
        auto b = run(args);
        CHECK(a.out == b.out);
        CHECK(a.status == b.status);
    }
}
