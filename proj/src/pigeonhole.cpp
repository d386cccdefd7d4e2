#include "fink/pigeonhole.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <thread>

namespace fink {

void SearchBudget::validate() const {
    if (target_length > max_universe_blocks)
        throw Error(ErrorCode::OutOfRange, "target length exceeds the universe bound");
}

unsigned default_threads() {
    if (const char* v = std::getenv("FINK_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(v, &end, 10);
        if (end != v && *end == '\0' && n >= 1 && n <= 256) return static_cast<unsigned>(n);
    }
    return 1;
}

namespace {

struct Search {
    const Coloring& c;
    const SpanIndex& index;
    std::size_t n;
    std::size_t target;
    std::optional<std::uint64_t> node_limit;
    const std::atomic<std::size_t>* best_branch = nullptr;  // stop when an earlier branch succeeded
    std::size_t branch = 0;

    SearchStats stats;
    bool hit_limit = false;
    std::vector<KVector> blocks;
    std::optional<Color> color;
    std::optional<BlockSequence> found;

    bool cancelled() const { return best_branch && best_branch->load() < branch; }

    // Colors of the n-approximations of the current blocks that use the
    // last one; false when a second color shows up.
    bool admit() {
        const BlockSequence Y(index.base().level(), blocks);
        const std::size_t last = blocks.size() - 1;
        if (n == 0 || n > blocks.size()) return true;
        SpanIndex yi(Y);
        return for_each_approximation(yi, n, [&](const BlockSequence& s) {
            auto term = span_contains(Y, s.back());
            if (term->last_block() != last) return true;
            auto col = c(s);
            if (!color) color = col;
            return *color == col;
        });
    }

    // true stops the search (found, limit or cancelled).
    bool dive(std::size_t next) {
        if (blocks.size() == target) {
            found = BlockSequence(index.base().level(), blocks);
            return true;
        }
        for (std::size_t r : index.starting_from(next)) {
            if (cancelled()) return true;
            if (node_limit && stats.nodes >= *node_limit) {
                hit_limit = true;
                return true;
            }
            const auto& el = index.elements()[r];
            const auto saved = color;
            if (!step(el)) continue;
            if (dive(el.term.last_block() + 1)) return true;
            blocks.pop_back();
            color = saved;
        }
        return false;
    }

    // Pushes el and checks it; pops and returns false when pruned.
    bool step(const SpanElement& el) {
        ++stats.nodes;
        blocks.push_back(el.vector);
        if (stats.depth_histogram.size() < blocks.size() + 1) stats.depth_histogram.resize(blocks.size() + 1, 0);
        ++stats.depth_histogram[blocks.size()];
        const auto saved = color;
        if (admit()) return true;
        color = saved;
        ++stats.pruned;
        blocks.pop_back();
        return false;
    }
};

void merge(SearchStats& into, const SearchStats& from) {
    into.nodes += from.nodes;
    into.pruned += from.pruned;
    if (into.depth_histogram.size() < from.depth_histogram.size())
        into.depth_histogram.resize(from.depth_histogram.size(), 0);
    for (std::size_t i = 0; i < from.depth_histogram.size(); ++i) into.depth_histogram[i] += from.depth_histogram[i];
}

} // namespace

HomogResult find_homogeneous(const Coloring& c, const BlockSequence& X, std::size_t n, const SearchBudget& budget) {
    budget.validate();
    const auto universe = restrict(X, std::min(X.size(), budget.max_universe_blocks));
    HomogResult result;
    if (budget.target_length > universe.size()) return result;
    SpanIndex index(universe);

    unsigned threads = budget.threads ? budget.threads : default_threads();
    if (budget.node_limit || budget.target_length == 0) threads = 1;

    if (threads <= 1) {
        Search s{c, index, n, budget.target_length, budget.node_limit, nullptr, 0, {}, false, {}, {}, {}};
        if (n == 0) s.color = c(BlockSequence(X.level()));
        s.dive(0);
        result.stats = s.stats;
        result.hit_node_limit = s.hit_limit;
        if (s.found) {
            result.witness = s.found;
            result.color = s.color ? s.color : std::optional<Color>(c(BlockSequence(X.level())));
        }
        return result;
    }

    // Split on the first block; the least successful branch wins.
    const auto roots = index.starting_from(0);
    std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
    std::atomic<std::size_t> next_root{0};
    std::vector<std::vector<Search>> per_thread(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            while (true) {
                const std::size_t b = next_root.fetch_add(1);
                if (b >= roots.size() || b > best.load()) return;
                Search s{c, index, n, budget.target_length, std::nullopt, &best, b, {}, false, {}, {}, {}};
                if (n == 0) s.color = c(BlockSequence(X.level()));
                const auto& el = index.elements()[roots[b]];
                if (s.step(el)) s.dive(el.term.last_block() + 1);
                if (s.found) {
                    std::size_t cur = best.load();
                    while (b < cur && !best.compare_exchange_weak(cur, b)) {
                    }
                }
                per_thread[t].push_back(std::move(s));
            }
        });
    for (auto& th : pool) th.join();
    for (auto& v : per_thread)
        for (auto& s : v) {
            merge(result.stats, s.stats);
            if (s.found && s.branch == best.load()) {
                result.witness = s.found;
                result.color = s.color;
            }
        }
    return result;
}

bool certify_homogeneous(const BlockSequence& Y, const Coloring& c, std::size_t n) {
    if (n > Y.size()) return true;
    std::optional<Color> seen;
    for (const auto& s : approximations(Y, n)) {
        auto col = c(s);
        if (seen && *seen != col) return false;
        seen = col;
    }
    return true;
}

std::optional<BlockSequence> naive_homogeneous(const Coloring& c, const BlockSequence& X, std::size_t n,
                                               const SearchBudget& budget) {
    const auto universe = restrict(X, std::min(X.size(), budget.max_universe_blocks));
    if (budget.target_length > universe.size()) return std::nullopt;
    for (const auto& Y : approximations(universe, budget.target_length))
        if (certify_homogeneous(Y, c, n)) return Y;
    return std::nullopt;
}

} // namespace fink
