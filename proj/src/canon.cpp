#include "fink/canon.hpp"

#include <algorithm>
#include <functional>

namespace fink {

bool is_prefix(const BlockSequence& s, const BlockSequence& t) {
    if (s.size() > t.size()) return false;
    return std::equal(s.begin(), s.end(), t.begin());
}

Front make_front(BlockSequence base, std::vector<BlockSequence> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return Front{std::move(base), std::move(members)};
}

Front uniform_front(const BlockSequence& X, std::size_t n) { return make_front(X, approximations(X, n)); }

std::string_view to_string(FrontFault f) {
    switch (f) {
    case FrontFault::none: return "none";
    case FrontFault::not_subsequence: return "not_subsequence";
    case FrontFault::antichain: return "antichain";
    case FrontFault::cover: return "cover";
    }
    return "unknown";
}

namespace {

BlockSequence prefix(const BlockSequence& s, std::size_t n) { return restrict(s, n); }

// Member and hat lookups shared by the mixing searches.
struct FrontSets {
    std::set<BlockSequence> members;
    std::set<BlockSequence> hat;

    explicit FrontSets(const Front& F) : members(F.members.begin(), F.members.end()) {
        for (const auto& m : F.members)
            for (std::size_t n = 0; n <= m.size(); ++n) hat.insert(prefix(m, n));
    }
};

} // namespace

FrontCheck front_check(const Front& F) {
    FrontCheck out;
    auto fail = [&](FrontFault f, BlockSequence a, std::optional<BlockSequence> b = std::nullopt) {
        out.ok = false;
        out.fault = f;
        out.first = std::move(a);
        out.second = std::move(b);
        return out;
    };
    for (const auto& m : F.members)
        if (m.level() != F.base.level() || !leq(m, F.base)) return fail(FrontFault::not_subsequence, m);

    std::set<BlockSequence> members(F.members.begin(), F.members.end());
    for (const auto& m : members)
        for (std::size_t n = 0; n < m.size(); ++n) {
            auto p = prefix(m, n);
            if (members.count(p)) return fail(FrontFault::antichain, p, m);
        }

    std::size_t H = 0;
    for (const auto& m : members) H = std::max(H, m.size());
    SpanIndex index(F.base);
    std::optional<BlockSequence> uncovered;
    for_each_approximation(index, H, [&](const BlockSequence& Y) {
        for (std::size_t n = 0; n <= Y.size(); ++n)
            if (members.count(prefix(Y, n))) return true;
        uncovered = Y;
        return false;
    });
    if (uncovered) return fail(FrontFault::cover, *uncovered);
    return out;
}

FrontDerived front_derived(const Front& F) {
    FrontDerived out;
    std::set<BlockSequence> hat;
    for (const auto& m : F.members)
        for (std::size_t n = 0; n <= m.size(); ++n) hat.insert(prefix(m, n));
    if (hat.empty()) hat.insert(BlockSequence(F.base.level()));
    out.hat.assign(hat.begin(), hat.end());
    for (const auto& t : out.hat) out.fibers[t];
    for (const auto& m : F.members)
        for (std::size_t n = 0; n <= m.size(); ++n) out.fibers[prefix(m, n)].push_back(m);
    return out;
}

Front restrict_front(const Front& F, const BlockSequence& Y) {
    std::vector<BlockSequence> kept;
    for (const auto& m : F.members)
        if (leq(m, Y)) kept.push_back(m);
    return Front{Y, std::move(kept)};
}

bool in_hat(const Front& F, const BlockSequence& t) {
    return std::any_of(F.members.begin(), F.members.end(), [&](const BlockSequence& m) { return is_prefix(t, m); });
}

bool is_member(const Front& F, const BlockSequence& t) {
    return std::binary_search(F.members.begin(), F.members.end(), t);
}

std::string_view to_string(ColorRule r) {
    switch (r) {
    case ColorRule::union_of_blocks: return "union";
    case ColorRule::constant: return "constant";
    case ColorRule::min_parity: return "min-parity";
    case ColorRule::first_value: return "first-value";
    case ColorRule::identity: return "identity";
    }
    return "unknown";
}

std::optional<ColorRule> parse_color_rule(std::string_view name) {
    for (auto r : {ColorRule::union_of_blocks, ColorRule::constant, ColorRule::min_parity, ColorRule::first_value,
                   ColorRule::identity})
        if (to_string(r) == name) return r;
    return std::nullopt;
}

Coloring Coloring::rule(ColorRule r) {
    Coloring c;
    c.rule_ = r;
    return c;
}

Coloring Coloring::table(std::map<BlockSequence, Color> colors) {
    Coloring c;
    c.table_ = std::move(colors);
    return c;
}

Color Coloring::operator()(const BlockSequence& s) const {
    if (!rule_) {
        auto it = table_.find(s);
        if (it == table_.end()) throw Error(ErrorCode::MissingColor, "no color for " + to_string(s));
        return it->second;
    }
    switch (*rule_) {
    case ColorRule::union_of_blocks: return to_string(s.flatten());
    case ColorRule::constant: return "0";
    case ColorRule::identity: return to_string(s);
    case ColorRule::min_parity:
        if (s.empty()) return "empty";
        return std::to_string(s[0].min_support() % 2);
    case ColorRule::first_value:
        if (s.empty()) return "empty";
        return std::to_string(s[0].entries().front().value);
    }
    return {};
}

namespace {

// Realizes s inside the span of Z; returns the last Z-block used, or nullopt
// when s is not an approximation of Z. The empty s uses no block.
std::optional<std::optional<std::size_t>> embed(const BlockSequence& Z, const BlockSequence& s) {
    std::optional<std::size_t> last;
    for (const auto& b : s) {
        auto term = span_contains(Z, b);
        if (!term) return std::nullopt;
        if (last && term->first_block() <= *last) return std::nullopt;
        last = term->last_block();
    }
    return last;
}

std::vector<BlockSequence> extensions_in(const FrontSets& F, const SpanIndex& Z, const BlockSequence& s) {
    std::vector<BlockSequence> out;
    auto used = embed(Z.base(), s);
    if (!used) return out;
    std::vector<KVector> cur(s.begin(), s.end());
    std::function<void(std::size_t)> grow = [&](std::size_t next) {
        BlockSequence seq(Z.base().level(), cur);
        if (F.members.count(seq)) {
            out.push_back(std::move(seq));
            return;
        }
        if (!F.hat.count(seq)) return;
        for (std::size_t r : Z.starting_from(next)) {
            const auto& el = Z.elements()[r];
            cur.push_back(el.vector);
            grow(el.term.last_block() + 1);
            cur.pop_back();
        }
    };
    grow(*used ? **used + 1 : 0);
    return out;
}

std::set<Color> colors_of(const std::vector<BlockSequence>& seqs, const Coloring& c) {
    std::set<Color> out;
    for (const auto& s : seqs) out.insert(c(s));
    return out;
}

bool disjoint(const std::set<Color>& a, const std::set<Color>& b) {
    return std::none_of(a.begin(), a.end(), [&](const Color& x) { return b.count(x) > 0; });
}

void require_open(const FrontSets& F, const BlockSequence& s, const char* name) {
    if (!F.hat.count(s) || F.members.count(s))
        throw Error(ErrorCode::NotInFront, std::string(name) + " = " + to_string(s) + " is not a proper prefix of a member");
}

// Entries of w at positions <= bound.
KVector clip(const KVector& w, Position bound) {
    std::vector<Entry> kept;
    for (const auto& e : w.entries())
        if (e.pos <= bound) kept.push_back(e);
    return KVector(std::move(kept));
}

// Calls visit(Z, ext_Z(s), ext_Z(t)) for every compatible reduct within the
// horizon, in canonical order; stops when visit returns false.
void for_each_compatible(const Front& F, const FrontSets& sets, const BlockSequence& s, const BlockSequence& t,
                         const Horizon& h, std::uint64_t* examined,
                         const std::function<bool(const BlockSequence&, const std::vector<BlockSequence>&,
                                                  const std::vector<BlockSequence>&)>& visit) {
    const std::size_t top = std::min(h.max_blocks, F.base.size());
    SpanIndex base(F.base);
    for (std::size_t n = 1; n <= top; ++n) {
        const bool go_on = for_each_approximation(base, n, [&](const BlockSequence& Z) {
            if (examined) ++*examined;
            SpanIndex zi(Z);
            auto es = extensions_in(sets, zi, s);
            if (es.empty()) return true;
            auto et = extensions_in(sets, zi, t);
            if (et.empty()) return true;
            return visit(Z, es, et);
        });
        if (!go_on) return;
    }
}

// The block of sbar after s, cut at the end of t, must be exactly w.
bool weak_condition(const BlockSequence& s, const BlockSequence& t, const KVector& w,
                    const std::vector<BlockSequence>& es, const std::set<Color>& t_colors, const Coloring& c) {
    const Position bound = t.flatten().max_support();
    for (const auto& sbar : es) {
        if (sbar.size() <= s.size()) continue;
        if (clip(sbar[s.size()], bound) != w) continue;
        if (t_colors.count(c(sbar))) return true;
    }
    return false;
}

} // namespace

std::vector<BlockSequence> extensions(const Front& F, const BlockSequence& Z, const BlockSequence& s) {
    return extensions_in(FrontSets(F), SpanIndex(Z), s);
}

bool separates(const Front& F, const BlockSequence& Z, const BlockSequence& s, const BlockSequence& t,
               const Coloring& c) {
    FrontSets sets(F);
    require_open(sets, s, "s");
    require_open(sets, t, "t");
    SpanIndex zi(Z);
    auto es = extensions_in(sets, zi, s);
    auto et = extensions_in(sets, zi, t);
    if (es.empty() || et.empty())
        throw Error(ErrorCode::IncompatibleReduct, to_string(Z) + " has no member extension of " +
                                                       to_string(es.empty() ? s : t));
    return disjoint(colors_of(es, c), colors_of(et, c));
}

std::string_view to_string(MixVerdict v) {
    switch (v) {
    case MixVerdict::separated: return "Separated";
    case MixVerdict::mixed_at_horizon: return "MixedAtHorizon";
    }
    return "unknown";
}

bool weakly_mixes_with(const Front& F, const BlockSequence& s, const BlockSequence& t, const KVector& w,
                       const Coloring& c, const Horizon& horizon) {
    if (w.is_zero() || t.flatten().is_zero()) return false;
    FrontSets sets(F);
    bool ok = true;
    bool any = false;
    for_each_compatible(F, sets, s, t, horizon, nullptr,
                        [&](const BlockSequence&, const std::vector<BlockSequence>& es,
                            const std::vector<BlockSequence>& et) {
                            any = true;
                            ok = weak_condition(s, t, w, es, colors_of(et, c), c);
                            return ok;
                        });
    return ok && any;
}

MixReport decide_mixing(const Front& F, const BlockSequence& s, const BlockSequence& t, const Coloring& c,
                        const Horizon& horizon) {
    FrontSets sets(F);
    require_open(sets, s, "s");
    require_open(sets, t, "t");
    MixReport report;
    report.horizon = horizon;
    for_each_compatible(F, sets, s, t, horizon, &report.reducts_examined,
                        [&](const BlockSequence& Z, const std::vector<BlockSequence>& es,
                            const std::vector<BlockSequence>& et) {
                            ++report.compatible_reducts;
                            if (!disjoint(colors_of(es, c), colors_of(et, c))) return true;
                            report.verdict = MixVerdict::separated;
                            report.witness = Z;
                            return false;
                        });
    if (report.compatible_reducts == 0)
        throw Error(ErrorCode::IncompatibleReduct, "no reduct within the horizon extends both " + to_string(s) +
                                                       " and " + to_string(t));
    if (report.verdict == MixVerdict::separated || !horizon.weak) return report;

    const Depth ds = depth(F.base, s);
    const Depth dt = depth(F.base, t);
    const bool shallower = ds && (!dt || *ds < *dt);
    if (!shallower) return report;

    // Candidates: nonempty sets of entries of t lying after s, by size then
    // position order.
    const KVector ft = t.flatten();
    const KVector fs = s.flatten();
    std::vector<Entry> pool;
    for (const auto& e : ft.entries())
        if ((fs.is_zero() || e.pos > fs.max_support()) && fs.at(e.pos) != e.value) pool.push_back(e);
    if (pool.size() > horizon.max_witness_atoms) pool.resize(horizon.max_witness_atoms);
    std::vector<KVector> candidates;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pool.size()); ++mask) {
        std::vector<Entry> pick;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (mask >> i & 1U) pick.push_back(pool[i]);
        candidates.emplace_back(std::move(pick));
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const KVector& a, const KVector& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.entries().begin(), a.entries().end(), b.entries().begin(),
                                            b.entries().end());
    });

    // One pass over the reducts per candidate, keeping the survivors.
    std::vector<char> alive(candidates.size(), 1);
    for_each_compatible(F, sets, s, t, horizon, nullptr,
                        [&](const BlockSequence&, const std::vector<BlockSequence>& es,
                            const std::vector<BlockSequence>& et) {
                            const auto tc = colors_of(et, c);
                            bool left = false;
                            for (std::size_t i = 0; i < candidates.size(); ++i) {
                                if (alive[i] && !weak_condition(s, t, candidates[i], es, tc, c)) alive[i] = 0;
                                left = left || alive[i];
                            }
                            return left;
                        });
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (alive[i]) {
            report.weak_witness = candidates[i];
            break;
        }
    return report;
}

void CanonicalMap::validate() const {
    auto bad = [&](const std::string& why) { throw Error(ErrorCode::InvalidCanonicalMap, why); };
    if (level < 1) bad("level must be >= 1");
    std::vector<char> used(arity, 0);
    std::size_t prev_least = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& g = groups[gi];
        if (g.coords.empty()) bad("empty group");
        if (g.shifts.size() != g.coords.size()) bad("one shift per coordinate is required");
        for (std::size_t i = 0; i < g.coords.size(); ++i) {
            if (g.coords[i] >= arity) bad("coordinate out of range");
            if (i > 0 && g.coords[i - 1] >= g.coords[i]) bad("group coordinates must ascend");
            if (used[g.coords[i]]) bad("coordinate " + std::to_string(g.coords[i]) + " used twice");
            used[g.coords[i]] = 1;
            if (g.shifts[i] < 0 || g.shifts[i] > level - 1) bad("shift out of 0..k-1");
        }
        if (*std::min_element(g.shifts.begin(), g.shifts.end()) != 0) bad("minimum shift of a group must be 0");
        if (gi > 0 && g.coords.front() <= prev_least) bad("groups must be ordered by least coordinate");
        prev_least = g.coords.front();
        if (g.g.level != level) bad("group function level differs from the map level");
        g.g.validate();
    }
}

std::string to_string(const CanonicalMap& m) {
    if (m.groups.empty()) return "const";
    std::string out;
    for (const auto& g : m.groups) {
        if (!out.empty()) out += " ; ";
        out += "[";
        for (std::size_t i = 0; i < g.coords.size(); ++i) {
            if (i) out += "+";
            if (g.shifts[i] == 1) out += "T";
            if (g.shifts[i] > 1) out += "T^" + std::to_string(g.shifts[i]);
            out += "t" + std::to_string(g.coords[i]);
        }
        out += "] " + to_string(g.g);
    }
    return out;
}

std::vector<KVector> apply_canonical(const CanonicalMap& m, const BlockSequence& element) {
    m.validate();
    if (element.size() != m.arity)
        throw Error(ErrorCode::InvalidCanonicalMap, "map of arity " + std::to_string(m.arity) + " applied to " +
                                                        std::to_string(element.size()) + " blocks");
    if (!element.empty() && element.level() != m.level)
        throw Error(ErrorCode::LevelMismatch, "map level differs from the element level");
    std::vector<KVector> out;
    for (const auto& g : m.groups) {
        std::vector<KVector> parts;
        for (std::size_t i = 0; i < g.coords.size(); ++i) parts.push_back(tetris(element[g.coords[i]], g.shifts[i]));
        out.push_back(eval(g.g, block_sum(parts)));
    }
    return out;
}

namespace {

std::vector<std::vector<int>> shift_tuples(int k, std::size_t m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(m, 0);
    while (true) {
        if (*std::min_element(cur.begin(), cur.end()) == 0) out.push_back(cur);
        std::size_t i = m;
        while (i > 0) {
            --i;
            if (++cur[i] < k) break;
            cur[i] = 0;
            if (i == 0) return out;
        }
    }
}

// Layouts of disjoint groups: each coordinate in turn is unused, joins an
// earlier group, or opens a new one.
void layouts(std::size_t d, std::size_t c, std::vector<std::vector<std::size_t>>& cur,
             std::vector<std::vector<std::vector<std::size_t>>>& out) {
    if (c == d) {
        out.push_back(cur);
        return;
    }
    layouts(d, c + 1, cur, out);
    for (std::size_t g = 0; g < cur.size(); ++g) {
        cur[g].push_back(c);
        layouts(d, c + 1, cur, out);
        cur[g].pop_back();
    }
    cur.push_back({c});
    layouts(d, c + 1, cur, out);
    cur.pop_back();
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "count exceeds 64 bits");
    return r;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "count exceeds 64 bits");
    return r;
}

std::uint64_t choose(std::size_t n, std::size_t r) {
    if (r > n) return 0;
    std::uint64_t v = 1;
    for (std::size_t i = 1; i <= r; ++i) v = mul(v, n - r + i) / i;
    return v;
}

std::uint64_t power(std::uint64_t b, std::size_t e) {
    std::uint64_t v = 1;
    while (e--) v = mul(v, b);
    return v;
}

} // namespace

std::vector<CanonicalMap> enumerate_canonical_maps(int level, std::size_t arity, const DedupeOptions& options) {
    std::vector<StairFunction> fns;
    for (auto& f : enumerate_stair_functions(level, true, options))
        if (!f.is_constant()) fns.push_back(std::move(f));

    std::vector<std::vector<std::vector<std::size_t>>> shapes;
    std::vector<std::vector<std::size_t>> cur;
    layouts(arity, 0, cur, shapes);
    // Layout recursion opens groups in order of least coordinate already.
    std::vector<CanonicalMap> out;
    for (const auto& shape : shapes) {
        CanonicalMap m{level, arity, {}};
        std::function<void(std::size_t)> fill = [&](std::size_t gi) {
            if (gi == shape.size()) {
                out.push_back(m);
                return;
            }
            for (const auto& sh : shift_tuples(level, shape[gi].size()))
                for (const auto& f : fns) {
                    m.groups.push_back({shape[gi], sh, f});
                    fill(gi + 1);
                    m.groups.pop_back();
                }
        };
        fill(0);
    }
    return out;
}

std::uint64_t canonical_map_count(int level, std::size_t arity, std::uint64_t nonconstant_functions) {
    const auto k = static_cast<std::uint64_t>(level);
    std::vector<std::uint64_t> a(arity + 1, 0);
    for (std::size_t s = 1; s <= arity; ++s) a[s] = mul(power(k, s) - power(k - 1, s), nonconstant_functions);
    // B[u]: weighted set partitions of u coordinates.
    std::vector<std::uint64_t> B(arity + 1, 0);
    B[0] = 1;
    for (std::size_t u = 1; u <= arity; ++u)
        for (std::size_t j = 1; j <= u; ++j) B[u] = add(B[u], mul(mul(choose(u - 1, j - 1), a[j]), B[u - j]));
    std::uint64_t total = 0;
    for (std::size_t u = 0; u <= arity; ++u) total = add(total, mul(choose(arity, u), B[u]));
    return total;
}

std::uint64_t counting_recursion(std::uint64_t t, std::uint64_t t_tilde, std::size_t d) {
    if (d < 2) throw Error(ErrorCode::OutOfRange, "the counting recursion starts at d = 2");
    std::vector<std::uint64_t> C(d + 1, 0);
    for (std::size_t e = 2; e <= d; ++e) {
        std::uint64_t inner = 0;
        for (std::size_t j = 2; j <= e; ++j) inner = add(inner, mul(choose(e, j), power(t, e - j)));
        for (std::size_t j = 2; j + 2 <= e; ++j) inner = add(inner, mul(choose(e, j), C[e - j]));
        C[e] = mul(t_tilde, inner);
    }
    return C[d];
}

CountRow count_canonical(int level, std::size_t arity, const DedupeOptions& options) {
    CountRow row;
    row.level = level;
    row.arity = arity;
    std::uint64_t constant = 0;
    for (const auto& cl : stair_classes(level, options)) {
        ++row.t;
        if (cl.representative.middle && *cl.representative.middle >= 1) ++row.t_prime;
        if (cl.representative.is_constant()) ++constant;
    }
    row.t_tilde = mul(static_cast<std::uint64_t>(level), row.t_prime);
    row.c = counting_recursion(row.t, row.t_tilde, arity);
    row.maps = canonical_map_count(level, arity, row.t - constant);
    return row;
}

namespace {

using Image = std::vector<KVector>;

bool biconditional(const std::vector<BlockSequence>& members, const std::vector<Color>& colors,
                   const std::map<std::size_t, const CanonicalMap*>& maps) {
    std::map<Color, Image> by_color;
    std::map<Image, Color> by_image;
    for (std::size_t i = 0; i < members.size(); ++i) {
        Image img;
        try {
            img = apply_canonical(*maps.at(members[i].size()), members[i]);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::AtomOverlap) return false;
            throw;
        }
        auto [ci, cfresh] = by_color.try_emplace(colors[i], img);
        if (!cfresh && ci->second != img) return false;
        auto [ii, ifresh] = by_image.try_emplace(std::move(img), colors[i]);
        if (!ifresh && ii->second != colors[i]) return false;
    }
    return true;
}

} // namespace

CanonizeResult canonize(const Front& F, const Coloring& c, std::size_t target_len, CanonMode mode,
                        const DedupeOptions& options) {
    CanonizeResult result;
    result.target_length = target_len;
    if (target_len > F.base.size())
        throw Error(ErrorCode::OutOfRange, "target length exceeds the base length");
    std::set<std::size_t> arities;
    for (const auto& m : F.members) arities.insert(m.size());
    if (mode == CanonMode::theorem1 && (arities.size() != 1 || *arities.begin() != 1))
        throw Error(ErrorCode::OutOfRange, "theorem1 mode needs a front of 1-approximations");

    std::vector<std::size_t> order(arities.begin(), arities.end());
    std::vector<std::vector<CanonicalMap>> choices;
    for (auto d : order) choices.push_back(enumerate_canonical_maps(F.base.level(), d, options));

    SpanIndex index(F.base);
    for_each_approximation(index, target_len, [&](const BlockSequence& Y) {
        ++result.reducts_tried;
        const auto members = restrict_front(F, Y).members;
        std::vector<Color> colors;
        for (const auto& m : members) colors.push_back(c(m));
        std::vector<std::size_t> pick(order.size(), 0);
        while (true) {
            ++result.maps_tried;
            std::map<std::size_t, const CanonicalMap*> maps;
            for (std::size_t i = 0; i < order.size(); ++i) maps[order[i]] = &choices[i][pick[i]];
            if (biconditional(members, colors, maps)) {
                result.reduct = Y;
                std::map<std::size_t, CanonicalMap> chosen;
                for (const auto& [d, m] : maps) chosen.emplace(d, *m);
                result.maps = std::move(chosen);
                return false;
            }
            std::size_t i = order.size();
            while (i > 0) {
                --i;
                if (++pick[i] < choices[i].size()) break;
                pick[i] = 0;
                if (i == 0) return true;
            }
            if (order.empty()) return true;
        }
    });
    return result;
}

bool verify_canonical(const Front& F, const Coloring& c, const BlockSequence& Y,
                      const std::map<std::size_t, CanonicalMap>& maps) {
    std::vector<BlockSequence> members;
    for (const auto& m : F.members)
        if (leq(m, Y)) members.push_back(m);
    std::vector<Image> images;
    for (const auto& m : members) {
        auto it = maps.find(m.size());
        if (it == maps.end()) return false;
        images.push_back(apply_canonical(it->second, m));
    }
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if ((c(members[i]) == c(members[j])) != (images[i] == images[j])) return false;
    return true;
}

} // namespace fink
