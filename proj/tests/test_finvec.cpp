#include "fink/finvec.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace fink;

namespace {

KVector V(const char* s) { return parse_kvector(s); }
BlockSequence S(const char* s, int k) { return parse_blocks(s, k); }

std::uint64_t binom(std::uint64_t n, std::uint64_t r) {
    std::uint64_t v = 1;
    for (std::uint64_t i = 1; i <= r; ++i) v = v * (n - r + i) / i;
    return v;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t v = 1;
    while (e--) v *= b;
    return v;
}

// sum_r C(m,r)(k^r - (k-1)^r)
std::uint64_t span_law(std::uint64_t m, std::uint64_t k) {
    std::uint64_t s = 0;
    for (std::uint64_t r = 1; r <= m; ++r) s += binom(m, r) * (ipow(k, r) - ipow(k - 1, r));
    return s;
}

BlockSequence random_blocks(std::mt19937_64& rng, int k, std::size_t m) {
    std::vector<KVector> blocks;
    Position at = 0;
    std::uniform_int_distribution<int> len(1, 3), val(1, k), gap(0, 1);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Entry> e;
        const int n = len(rng);
        for (int j = 0; j < n; ++j) {
            at += gap(rng);
            e.push_back({at++, val(rng)});
        }
        e[std::uniform_int_distribution<std::size_t>(0, e.size() - 1)(rng)].value = k;
        blocks.emplace_back(k, std::move(e));
    }
    return BlockSequence(k, std::move(blocks));
}

} // namespace

TEST_CASE("kvector encoding round trip") {
    auto x = V("2:{0:1,2:2}");
    CHECK(x.level() == 2);
    CHECK(x.size() == 2);
    CHECK(to_string(x) == "2:{0:1,2:2}");
    CHECK(to_string(KVector{}) == "0:{}");
    CHECK(parse_kvector(to_string(KVector{})).is_zero());
    CHECK_THROWS_AS(parse_kvector("2:{0:1}"), Error);
    CHECK_THROWS_AS(parse_kvector("1:{2:1,0:1}"), Error);
    CHECK_THROWS_AS(parse_kvector("1:{0:0}"), Error);
}

TEST_CASE("tetris") {
    CHECK(tetris(V("2:{0:2}"), 1) == V("1:{0:1}"));
    auto x = V("3:{0:1,4:3,6:2}");
    CHECK(tetris(x, 0) == x);
    CHECK(tetris(V("2:{0:1,2:2}"), 2).is_zero());
    CHECK(tetris(V("2:{0:1,2:2}"), 2).level() == 0);
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; i + j <= 3; ++j) CHECK(tetris(tetris(x, i), j) == tetris(x, i + j));
}

TEST_CASE("block_sum") {
    std::vector<KVector> a{V("1:{0:1}"), V("2:{2:2}")};
    CHECK(block_sum(a) == V("2:{0:1,2:2}"));
    std::vector<KVector> clash{V("1:{0:1}"), V("2:{0:2}")};
    try {
        block_sum(clash);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OverlappingSupports);
    }
    try {
        block_sum({});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyInput);
    }
    std::vector<KVector> one{V("3:{1:3,5:1}")};
    CHECK(block_sum(one) == one[0]);
}

TEST_CASE("block sequences reject overlapping or unordered blocks") {
    CHECK_THROWS_AS(S("1:{0:1,2:1} 1:{1:1}", 1), Error);
    CHECK_THROWS_AS(S("1:{0:1} 2:{1:2}", 1), Error);
    CHECK_NOTHROW(S("[\"1:{0:1}\", \"1:{3:1}\"]", 1));
}

TEST_CASE("span enumeration order and size") {
    auto el = span_enumerate(S("1:{0:1} 1:{1:1}", 1));
    REQUIRE(el.size() == 3);
    CHECK(el[0].vector == V("1:{0:1}"));
    CHECK(el[1].vector == V("1:{1:1}"));
    CHECK(el[2].vector == V("1:{0:1,1:1}"));

    auto two = span_enumerate(S("2:{0:2} 2:{2:2}", 2));
    REQUIRE(two.size() == 5);
    const char* expect[] = {"2:{0:2}", "2:{2:2}", "2:{0:2,2:2}", "2:{0:1,2:2}", "2:{0:2,2:1}"};
    for (std::size_t i = 0; i < 5; ++i) CHECK(to_string(two[i].vector) == expect[i]);
    CHECK(to_string(two[3].term) == "Tx0+x1");

    CHECK(span_enumerate(unit_blocks(2, 3)).size() == 19);
    for (int k = 1; k <= 3; ++k)
        for (std::size_t m = 1; m <= 4; ++m) {
            CHECK(span_enumerate(unit_blocks(k, m)).size() == span_law(m, k));
            CHECK(span_size(m, k) == span_law(m, k));
        }
}

TEST_CASE("span elements realize their terms") {
    auto X = S("3:{0:3,1:1} 3:{3:2,4:3} 3:{6:3}", 3);
    for (const auto& el : span_enumerate(X)) CHECK(realize(X, el.term) == el.vector);
}

TEST_CASE("span_contains") {
    auto X = S("2:{0:2} 2:{2:2}", 2);
    auto t = span_contains(X, V("2:{0:1,2:2}"));
    REQUIRE(t);
    REQUIRE(t->parts.size() == 2);
    CHECK(t->parts[0].block == 0);
    CHECK(t->parts[0].shift == 1);
    CHECK(t->parts[1].block == 1);
    CHECK(t->parts[1].shift == 0);
    CHECK_FALSE(span_contains(X, V("2:{1:2}")));
    CHECK_FALSE(span_contains(X, V("1:{0:1,2:1}")));
    CHECK_THROWS_AS(span_contains(X, V("3:{0:3}")), Error);
}

TEST_CASE("span_contains agrees with enumeration on random queries") {
    std::mt19937_64 rng(7);
    for (int k = 1; k <= 3; ++k)
        for (std::size_t m = 2; m <= 4; ++m) {
            auto X = random_blocks(rng, k, m);
            std::map<KVector, SpanTerm> table;
            for (auto& el : span_enumerate(X)) table.emplace(el.vector, el.term);
            const Position top = X.back().max_support() + 2;
            for (int q = 0; q < 60; ++q) {
                KVector w;
                if (q % 2 == 0) {
                    auto it = table.begin();
                    std::advance(it, std::uniform_int_distribution<std::size_t>(0, table.size() - 1)(rng));
                    w = it->first;
                } else {
                    std::vector<Entry> e;
                    for (Position p = 0; p < top; ++p)
                        if (rng() % 3 == 0) e.push_back({p, 1 + static_cast<int>(rng() % k)});
                    if (e.empty()) e.push_back({0, k});
                    e[rng() % e.size()].value = k;
                    w = KVector(k, e);
                }
                auto got = span_contains(X, w);
                auto it = table.find(w);
                CHECK(got.has_value() == (it != table.end()));
                if (got && it != table.end()) CHECK(*got == it->second);
            }
        }
}

TEST_CASE("leq") {
    auto X = S("1:{0:1} 1:{1:1}", 1);
    CHECK(leq(X, X));
    CHECK(leq(S("1:{0:1,1:1}", 1), X));
    CHECK_FALSE(leq(S("1:{0:1}", 1), X, OrderKind::finalized));
    CHECK(leq(S("1:{0:1}", 1), restrict(X, 1), OrderKind::finalized));
    CHECK_THROWS_AS(leq(S("2:{0:2}", 2), X), Error);
}

TEST_CASE("leq is reflexive and transitive on small instances") {
    for (int k = 1; k <= 2; ++k) {
        auto X = unit_blocks(k, 3);
        std::vector<BlockSequence> all;
        for (std::size_t n = 1; n <= 3; ++n)
            for (auto& a : approximations(X, n)) all.push_back(a);
        for (const auto& a : all) CHECK(leq(a, a));
        std::size_t checked = 0;
        for (const auto& a : all)
            for (const auto& b : all) {
                if (!leq(a, b)) continue;
                for (const auto& c : all)
                    if (leq(b, c)) {
                        CHECK(leq(a, c));
                        ++checked;
                    }
            }
        CHECK(checked > 0);
    }
}

TEST_CASE("restrict") {
    auto X = S("1:{0:1} 1:{1:1} 1:{2:1}", 1);
    CHECK(restrict(X, 0).empty());
    CHECK(restrict(X, 3) == X);
    CHECK(restrict(X, 2) == S("1:{0:1} 1:{1:1}", 1));
    CHECK_THROWS_AS(restrict(X, 4), Error);
}

TEST_CASE("approximations") {
    auto X = unit_blocks(1, 3);
    auto zero = approximations(X, 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].empty());
    CHECK(approximations(X, 1).size() == 7);
    CHECK(approximations(unit_blocks(2, 2), 1).size() == 5);
    CHECK_THROWS_AS(approximations(X, 4), Error);
    for (const auto& s : approximations(unit_blocks(2, 4), 2)) {
        CHECK(s.size() == 2);
        CHECK(precedes(s[0], s[1]));
        CHECK(leq(s, unit_blocks(2, 4)));
    }
}

TEST_CASE("depth") {
    auto X = unit_blocks(1, 5);
    for (std::size_t n = 0; n <= 5; ++n) CHECK(depth(X, restrict(X, n)) == n);
    CHECK(depth(X, S("1:{0:1,2:1}", 1)) == 3);
    CHECK_FALSE(depth(X, S("1:{9:1}", 1)).has_value());
    auto Y = unit_blocks(2, 3);
    for (const auto& s : approximations(Y, 1)) {
        auto d = depth(Y, s);
        REQUIRE(d);
        CHECK(leq(s, restrict(Y, *d), OrderKind::finalized));
        CHECK_FALSE(leq(s, restrict(Y, *d - 1)));
    }
}

TEST_CASE("tail") {
    auto X = S("1:{0:1} 1:{1:1} 1:{2:1}", 1);
    CHECK(tail(X, BlockSequence(1)) == X);
    CHECK(tail(X, S("1:{0:1}", 1)) == S("1:{1:1} 1:{2:1}", 1));
    auto s = S("1:{0:1}", 1);
    auto t = S("1:{0:1,1:1}", 1);
    CHECK(tail(X, s, t) == tail(tail(X, s), t));
    CHECK(tail(X, s, t) == S("1:{2:1}", 1));
}
