#include "fink/canon.hpp"
#include "fink/finvec.hpp"
#include "fink/pigeonhole.hpp"
#include "fink/staircase.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace fink;

namespace {

using Clock = std::chrono::steady_clock;

// Wall-clock limits, seconds.
constexpr double limit_span = 1.0;
constexpr double limit_membership = 5.0;
constexpr double limit_mixing = 30.0;
constexpr double limit_tetris = 5.0;
constexpr double limit_counting = 10.0;
constexpr double limit_canonize_each = 60.0;
constexpr double limit_pigeonhole_each = 30.0;
constexpr double limit_fronts = 5.0;

constexpr int membership_queries = 200;
constexpr int tetris_samples = 100;

struct Outcome {
    bool ok = true;
    std::string note;
    double seconds = 0;
};

void fail(Outcome& o, const std::string& why) {
    if (o.ok) o.note = why;
    o.ok = false;
}

template <class F>
double timed(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

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

Outcome span_law() {
    Outcome o;
    o.seconds = timed([&] {
        for (int k = 1; k <= 3; ++k)
            for (std::size_t m = 1; m <= 4; ++m) {
                std::uint64_t expect = 0;
                for (std::uint64_t r = 1; r <= m; ++r) expect += binom(m, r) * (ipow(k, r) - ipow(k - 1, r));
                const auto got = span_enumerate(unit_blocks(k, m)).size();
                if (got != expect)
                    fail(o, "k=" + std::to_string(k) + " m=" + std::to_string(m) + ": " + std::to_string(got) +
                                " vs " + std::to_string(expect));
            }
    });
    if (o.seconds >= limit_span) fail(o, "too slow");
    return o;
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

Outcome membership() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::size_t hits = 0;
    o.seconds = timed([&] {
        for (int k = 1; k <= 3; ++k)
            for (std::size_t m = 2; m <= 4; ++m) {
                const auto X = random_blocks(rng, k, m);
                std::map<KVector, SpanTerm> table;
                for (auto& el : span_enumerate(X)) table.emplace(el.vector, el.term);
                const Position top = X.back().max_support() + 2;
                for (int q = 0; q < membership_queries; ++q) {
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
                    const auto got = span_contains(X, w);
                    const auto it = table.find(w);
                    if (got.has_value() != (it != table.end()) || (got && *got != it->second))
                        fail(o, "disagreement on " + to_string(w) + " over " + to_string(X));
                    if (got) ++hits;
                    if (got && realize(X, *got) != w) fail(o, "term does not realize " + to_string(w));
                }
            }
    });
    o.note = o.ok ? std::to_string(9 * membership_queries) + " queries, " + std::to_string(hits) + " members" : o.note;
    if (o.seconds >= limit_membership) fail(o, "too slow");
    return o;
}

Outcome mixing_triple() {
    Outcome o;
    const auto X = unit_blocks(1, 8);
    const BlockSequence s(1, {parse_kvector("1:{0:1}")});
    const BlockSequence t(1, {parse_kvector("1:{0:1,2:1}")});
    const BlockSequence p(1, {parse_kvector("1:{0:1,1:1,2:1}")});
    const auto F = uniform_front(X, 2);
    const auto c = Coloring::rule(ColorRule::union_of_blocks);
    Horizon h;
    h.max_blocks = 8;
    o.seconds = timed([&] {
        const auto st = decide_mixing(F, s, t, c, h);
        const auto sp = decide_mixing(F, s, p, c, h);
        const auto tp = decide_mixing(F, t, p, c, h);
        if (st.verdict != MixVerdict::mixed_at_horizon) fail(o, "s,t not mixed");
        if (sp.verdict != MixVerdict::mixed_at_horizon) fail(o, "s,p not mixed");
        if (tp.verdict != MixVerdict::separated) fail(o, "t,p not separated");
        else if (!tp.witness || !separates(F, *tp.witness, t, p, c)) fail(o, "separating witness does not re-verify");
        if (o.ok) {
            std::ostringstream os;
            os << "t,p separated by " << to_string(*tp.witness) << "; " << st.reducts_examined + sp.reducts_examined
               << " reducts checked for the mixed pairs";
            o.note = os.str();
        }
    });
    if (o.seconds >= limit_mixing) fail(o, "too slow");
    return o;
}

Outcome tetris_sos() {
    Outcome o;
    std::mt19937_64 rng(99);
    o.seconds = timed([&] {
        for (int k = 1; k <= 4; ++k)
            for (int i = 0; i < tetris_samples; ++i) {
                const auto x = random_sos(k, rng);
                if (!is_sos(x).ok) fail(o, "sample not sos: " + to_string(x));
                const auto y = tetris(x, 1);
                // level 0 has only the zero vector
                const bool good = k == 1 ? y.is_zero() : (y.level() == k - 1 && is_sos(y).ok);
                if (!good) fail(o, "tetris image not sos: " + to_string(y));
            }
    });
    if (o.seconds >= limit_tetris) fail(o, "too slow");
    return o;
}

Outcome counting() {
    Outcome o;
    std::ostringstream os;
    o.seconds = timed([&] {
        for (int k = 1; k <= 4; ++k) {
            const auto row = count_canonical(k, 2);
            const auto c2 = row.c;
            const auto c3 = counting_recursion(row.t, row.t_tilde, 3);
            if (c2 != row.t_tilde) fail(o, "C2 != t~ at k=" + std::to_string(k));
            if (c3 != 3 * row.t_tilde * row.t + row.t_tilde) fail(o, "C3 identity fails at k=" + std::to_string(k));
            if (k == 1 && row.t != 5) fail(o, "t_1 = " + std::to_string(row.t));
            os << (k > 1 ? " " : "") << "k" << k << ":t=" << row.t << ",t~=" << row.t_tilde << ",C3=" << c3;
        }
    });
    if (o.ok) o.note = os.str();
    if (o.seconds >= limit_counting) fail(o, "too slow");
    return o;
}

Outcome canonization() {
    Outcome o;
    const auto X = make_sos(1, 6);
    const auto F1 = uniform_front(X, 1);
    const auto F2 = uniform_front(X, 2);
    std::ostringstream os;
    auto one = [&](const char* name, const Front& F, ColorRule rule, CanonMode mode,
                   const std::function<bool(const std::map<std::size_t, CanonicalMap>&)>& shape) {
        const auto c = Coloring::rule(rule);
        CanonizeResult r;
        const double secs = timed([&] { r = canonize(F, c, X.size(), mode); });
        o.seconds = std::max(o.seconds, secs);
        if (!r.found()) return fail(o, std::string(name) + ": exhausted");
        if (!shape(*r.maps)) fail(o, std::string(name) + ": unexpected map");
        if (!verify_canonical(F, c, *r.reduct, *r.maps)) fail(o, std::string(name) + ": verification failed");
        if (secs >= limit_canonize_each) fail(o, std::string(name) + ": too slow");
        for (const auto& [d, m] : *r.maps) os << name << "[" << d << "]=" << to_string(m) << " ";
    };
    one("constant", F2, ColorRule::constant, CanonMode::theorem2,
        [](const auto& m) { return m.at(2).groups.empty(); });
    one("identity", F1, ColorRule::identity, CanonMode::theorem1, [](const auto& m) {
        const auto& g = m.at(1).groups;
        return g.size() == 1 && to_string(g[0].g) == "min{1} theta2{1} max{1}";
    });
    one("union", F2, ColorRule::union_of_blocks, CanonMode::theorem2, [](const auto& m) {
        const auto& g = m.at(2).groups;
        return g.size() == 1 && g[0].coords == std::vector<std::size_t>{0, 1} &&
               g[0].shifts == std::vector<int>{0, 0} && to_string(g[0].g) == "min{1} theta2{1} max{1}";
    });
    if (o.ok) o.note = os.str();
    return o;
}

Outcome pigeonhole() {
    Outcome o;
    std::ostringstream os;
    auto one = [&](const char* name, int k, ColorRule rule, std::size_t target) {
        const auto c = Coloring::rule(rule);
        SearchBudget b;
        b.max_universe_blocks = 8;
        b.target_length = target;
        HomogResult r;
        const double secs = timed([&] { r = find_homogeneous(c, unit_blocks(k, 8), 1, b); });
        o.seconds = std::max(o.seconds, secs);
        if (!r.found()) return fail(o, std::string(name) + ": no witness");
        if (!certify_homogeneous(*r.witness, c, 1)) fail(o, std::string(name) + ": certification failed");
        if (secs >= limit_pigeonhole_each) fail(o, std::string(name) + ": too slow");
        os << name << "=" << to_string(*r.witness) << " ";

        SearchBudget small = b;
        small.max_universe_blocks = 6;
        const auto X6 = unit_blocks(k, 6);
        const auto fast = find_homogeneous(c, X6, 1, small);
        if (fast.witness != naive_homogeneous(c, X6, 1, small)) fail(o, std::string(name) + ": not minimal");
    };
    one("min-parity", 1, ColorRule::min_parity, 3);
    one("first-value", 2, ColorRule::first_value, 2);
    if (o.ok) o.note = os.str();
    return o;
}

Outcome fronts() {
    Outcome o;
    o.seconds = timed([&] {
        for (int k = 1; k <= 2; ++k) {
            const auto X = unit_blocks(k, 5);
            for (std::size_t n = 1; n <= 3; ++n) {
                const auto F = uniform_front(X, n);
                const std::string where = " (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")";
                if (!front_check(F).ok) fail(o, "uniform front rejected" + where);

                // a member followed by its next base block
                std::size_t pick = 0;
                while (*depth(X, F.members[pick]) >= X.size()) ++pick;
                const auto& m = F.members[pick];
                const auto d = depth(X, m);
                auto longer = std::vector<KVector>(m.begin(), m.end());
                longer.push_back(X[*d]);
                auto added = F.members;
                added.emplace_back(k, longer);
                const auto ra = front_check(make_front(X, added));
                if (ra.ok || ra.fault != FrontFault::antichain || !ra.first || !ra.second || *ra.first != m ||
                    !is_prefix(*ra.first, *ra.second))
                    fail(o, "added extension not caught" + where);

                auto removed = F.members;
                const auto gone = removed[removed.size() / 2];
                removed.erase(removed.begin() + static_cast<std::ptrdiff_t>(removed.size() / 2));
                const auto rr = front_check(make_front(X, removed));
                if (rr.ok || rr.fault != FrontFault::cover || !rr.first || *rr.first != gone)
                    fail(o, "removed member not caught" + where);
            }
        }
    });
    if (o.seconds >= limit_fronts) fail(o, "too slow");
    return o;
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"span-size law", span_law},
        {"membership oracle", membership},
        {"mixing triple", mixing_triple},
        {"tetris preserves sos", tetris_sos},
        {"counting identities", counting},
        {"canonization smoke", canonization},
        {"pigeonhole searches", pigeonhole},
        {"front axioms", fronts},
    };
    int failed = 0;
    int i = 0;
    for (const auto& [name, run] : criteria) {
        ++i;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            fail(o, std::string("threw: ") + e.what());
        }
        std::printf("criterion %d %-22s %s  %.3fs  %s\n", i, name, o.ok ? "PASS" : "FAIL", o.seconds, o.note.c_str());
        if (!o.ok) ++failed;
    }
    return failed ? 1 : 0;
}
