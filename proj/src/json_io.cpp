#include "fink/json_io.hpp"

namespace fink {

namespace {

template <class T>
std::optional<T> opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

template <class T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

BlockSequence sequence_from_strings(const json& arr, int level_hint) {
    std::vector<KVector> blocks;
    for (const auto& e : arr) blocks.push_back(parse_kvector(e.get<std::string>()));
    const int level = blocks.empty() ? level_hint : blocks.front().level();
    return BlockSequence(level, std::move(blocks));
}

} // namespace

void to_json(json& j, const KVector& x) { j = to_string(x); }
void from_json(const json& j, KVector& x) { x = parse_kvector(j.get<std::string>()); }

void to_json(json& j, const BlockSequence& X) {
    j = json{{"level", X.level()}, {"blocks", json::array()}};
    for (const auto& b : X) j["blocks"].push_back(b);
}

void from_json(const json& j, BlockSequence& X) {
    X = sequence_from_strings(j.at("blocks"), j.at("level").get<int>());
}

void to_json(json& j, const SpanTerm& t) {
    j = json::array();
    for (const auto& p : t.parts) j.push_back({{"block", p.block}, {"shift", p.shift}});
}

void from_json(const json& j, SpanTerm& t) {
    t.parts.clear();
    for (const auto& p : j) t.parts.push_back({p.at("block").get<std::size_t>(), p.at("shift").get<int>()});
}

void to_json(json& j, const StairFunction& f) {
    auto pairs = [](const std::map<int, int>& m) {
        json a = json::array();
        for (const auto& [jj, l] : m) a.push_back({jj, l});
        return a;
    };
    j = json{{"level", f.level}, {"min", f.mins}, {"theta0", pairs(f.lower)}, {"theta2", opt_json(f.middle)},
             {"max", f.maxs}, {"theta1", pairs(f.upper)}, {"text", to_string(f)}};
}

void from_json(const json& j, StairFunction& f) {
    auto pairs = [](const json& a) {
        std::map<int, int> m;
        for (const auto& p : a) m[p.at(0).get<int>()] = p.at(1).get<int>();
        return m;
    };
    f = StairFunction{};
    f.level = j.at("level").get<int>();
    f.mins = j.value("min", std::vector<int>{});
    f.maxs = j.value("max", std::vector<int>{});
    if (j.contains("theta0")) f.lower = pairs(j.at("theta0"));
    if (j.contains("theta1")) f.upper = pairs(j.at("theta1"));
    f.middle = opt<int>(j, "theta2");
    f.validate();
}

void to_json(json& j, const CanonGroup& g) {
    j = json{{"coords", g.coords}, {"shifts", g.shifts}, {"g", g.g}};
}

void from_json(const json& j, CanonGroup& g) {
    g.coords = j.at("coords").get<std::vector<std::size_t>>();
    g.shifts = j.at("shifts").get<std::vector<int>>();
    g.g = j.at("g").get<StairFunction>();
}

void to_json(json& j, const CanonicalMap& m) {
    j = json{{"level", m.level}, {"arity", m.arity}, {"groups", m.groups}, {"text", to_string(m)}};
}

void from_json(const json& j, CanonicalMap& m) {
    m.level = j.at("level").get<int>();
    m.arity = j.at("arity").get<std::size_t>();
    m.groups = j.at("groups").get<std::vector<CanonGroup>>();
    m.validate();
}

void to_json(json& j, const Horizon& h) {
    j = json{{"max_blocks", h.max_blocks}, {"max_witness_atoms", h.max_witness_atoms}, {"weak", h.weak}};
}

void from_json(const json& j, Horizon& h) {
    h.max_blocks = j.at("max_blocks").get<std::size_t>();
    h.max_witness_atoms = j.at("max_witness_atoms").get<std::size_t>();
    h.weak = j.at("weak").get<bool>();
}

void to_json(json& j, const MixReport& r) {
    j = json{{"verdict", to_string(r.verdict)},
             {"witness", opt_json(r.witness)},
             {"weak_witness", opt_json(r.weak_witness)},
             {"horizon", r.horizon},
             {"reducts_examined", r.reducts_examined},
             {"compatible_reducts", r.compatible_reducts}};
}

void from_json(const json& j, MixReport& r) {
    const auto v = j.at("verdict").get<std::string>();
    if (v == to_string(MixVerdict::separated)) r.verdict = MixVerdict::separated;
    else if (v == to_string(MixVerdict::mixed_at_horizon)) r.verdict = MixVerdict::mixed_at_horizon;
    else throw Error(ErrorCode::ParseError, "unknown verdict '" + v + "'");
    r.witness = opt<BlockSequence>(j, "witness");
    r.weak_witness = opt<KVector>(j, "weak_witness");
    r.horizon = j.at("horizon").get<Horizon>();
    r.reducts_examined = j.at("reducts_examined").get<std::uint64_t>();
    r.compatible_reducts = j.at("compatible_reducts").get<std::uint64_t>();
}

void to_json(json& j, const SearchStats& s) {
    j = json{{"nodes", s.nodes}, {"pruned", s.pruned}, {"depth_histogram", s.depth_histogram}};
}

void from_json(const json& j, SearchStats& s) {
    s.nodes = j.at("nodes").get<std::uint64_t>();
    s.pruned = j.at("pruned").get<std::uint64_t>();
    s.depth_histogram = j.at("depth_histogram").get<std::vector<std::uint64_t>>();
}

void to_json(json& j, const HomogResult& r) {
    j = json{{"found", r.found()},
             {"witness", opt_json(r.witness)},
             {"color", opt_json(r.color)},
             {"stats", r.stats},
             {"hit_node_limit", r.hit_node_limit}};
}

void from_json(const json& j, HomogResult& r) {
    r.witness = opt<BlockSequence>(j, "witness");
    r.color = opt<std::string>(j, "color");
    r.stats = j.at("stats").get<SearchStats>();
    r.hit_node_limit = j.at("hit_node_limit").get<bool>();
}

void to_json(json& j, const CountRow& r) {
    j = json{{"k", r.level}, {"d", r.arity}, {"t", r.t}, {"t_prime", r.t_prime},
             {"t_tilde", r.t_tilde}, {"C", r.c}, {"maps", r.maps}};
}

void from_json(const json& j, CountRow& r) {
    r.level = j.at("k").get<int>();
    r.arity = j.at("d").get<std::size_t>();
    r.t = j.at("t").get<std::uint64_t>();
    r.t_prime = j.at("t_prime").get<std::uint64_t>();
    r.t_tilde = j.at("t_tilde").get<std::uint64_t>();
    r.c = j.at("C").get<std::uint64_t>();
    r.maps = j.at("maps").get<std::uint64_t>();
}

void to_json(json& j, const Coloring& c) {
    if (c.named_rule()) {
        j = json{{"rule", to_string(*c.named_rule())}};
        return;
    }
    json rows = json::array();
    for (const auto& [member, color] : c.entries()) {
        json enc = json::array();
        for (const auto& b : member) enc.push_back(b);
        rows.push_back({enc, color});
    }
    j = json{{"table", rows}};
}

void from_json(const json& j, Coloring& c) {
    if (j.contains("rule")) {
        const auto name = j.at("rule").get<std::string>();
        auto r = parse_color_rule(name);
        if (!r) throw Error(ErrorCode::ParseError, "unknown coloring rule '" + name + "'");
        c = Coloring::rule(*r);
        return;
    }
    if (!j.contains("table")) throw Error(ErrorCode::ParseError, "coloring needs \"rule\" or \"table\"");
    const int level = j.value("level", 1);
    std::map<BlockSequence, Color> table;
    for (const auto& row : j.at("table")) {
        const auto& col = row.at(1);
        table[sequence_from_strings(row.at(0), level)] = col.is_string() ? col.get<std::string>() : col.dump();
    }
    c = Coloring::table(std::move(table));
}

void to_json(json& j, const CanonizeResult& r) {
    json maps = nullptr;
    if (r.maps) {
        maps = json::array();
        for (const auto& [d, m] : *r.maps) maps.push_back({{"arity", d}, {"map", m}});
    }
    j = json{{"found", r.found()},         {"reduct", opt_json(r.reduct)},       {"maps", maps},
             {"reducts_tried", r.reducts_tried}, {"maps_tried", r.maps_tried}, {"target_length", r.target_length}};
}

void from_json(const json& j, CanonizeResult& r) {
    r.reduct = opt<BlockSequence>(j, "reduct");
    r.maps.reset();
    if (j.contains("maps") && !j.at("maps").is_null()) {
        std::map<std::size_t, CanonicalMap> maps;
        for (const auto& e : j.at("maps")) maps[e.at("arity").get<std::size_t>()] = e.at("map").get<CanonicalMap>();
        r.maps = std::move(maps);
    }
    r.reducts_tried = j.at("reducts_tried").get<std::uint64_t>();
    r.maps_tried = j.at("maps_tried").get<std::uint64_t>();
    r.target_length = j.at("target_length").get<std::size_t>();
}

} // namespace fink
