#include "fink/cli.hpp"

#include "fink/canon.hpp"
#include "fink/json_io.hpp"
#include "fink/pigeonhole.hpp"
#include "fink/staircase.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fink::cli {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    return out;
}

std::size_t read_number(std::string_view s, std::size_t& i, std::string_view whole) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
    if (ec != std::errc()) throw Error(ErrorCode::ParseError, "expected a number in '" + std::string(whole) + "'");
    i = static_cast<std::size_t>(p - s.data());
    return v;
}

// T^2x1+x3 style term.
SpanTerm parse_term(std::string_view text) {
    SpanTerm term;
    for (const auto& part : split(text, '+')) {
        std::size_t i = 0;
        int shift = 0;
        if (i < part.size() && part[i] == 'T') {
            ++i;
            shift = 1;
            if (i < part.size() && part[i] == '^') {
                ++i;
                shift = static_cast<int>(read_number(part, i, text));
            }
        }
        if (i >= part.size() || part[i] != 'x')
            throw Error(ErrorCode::ParseError, "expected x<index> in '" + std::string(text) + "'");
        ++i;
        const auto block = read_number(part, i, text);
        if (i != part.size()) throw Error(ErrorCode::ParseError, "trailing text in '" + std::string(text) + "'");
        term.parts.push_back({block, shift});
    }
    return term;
}

} // namespace

BlockSequence parse_approximation(std::string_view text, const BlockSequence& base) {
    const auto t = trim(text);
    if (t.empty() || t == "()") return BlockSequence(base.level());
    if (t.find(':') != std::string::npos) return parse_blocks(t, base.level());
    std::vector<KVector> blocks;
    for (const auto& piece : split(t, ',')) blocks.push_back(realize(base, parse_term(piece)));
    return BlockSequence(base.level(), std::move(blocks));
}

std::pair<BlockSequence, BlockSequence> parse_pair(std::string_view text, const BlockSequence& base) {
    const auto sides = split(text, '|');
    if (sides.size() != 2) throw Error(ErrorCode::ParseError, "a pair needs exactly one '|'");
    return {parse_approximation(sides[0], base), parse_approximation(sides[1], base)};
}

namespace {

// What a subcommand emits: the JSON document plus a flat view for csv/table.
struct Doc {
    json data;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int status = ok;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void emit(const Doc& doc, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << doc.data.dump(2) << '\n';
        return;
    }
    if (format == "csv") {
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(r[i]);
            out << '\n';
        };
        line(doc.header);
        for (const auto& r : doc.rows) line(r);
        return;
    }
    std::vector<std::size_t> width(doc.header.size(), 0);
    auto measure = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    };
    measure(doc.header);
    for (const auto& r : doc.rows) measure(r);
    auto line = [&](const std::vector<std::string>& r) {
        std::string s;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) s += "  ";
            s += r[i];
            if (i + 1 < r.size()) s += std::string(width[i] - r[i].size(), ' ');
        }
        out << s << '\n';
    };
    line(doc.header);
    std::string rule;
    for (std::size_t i = 0; i < width.size(); ++i) rule += (i ? "  " : "") + std::string(width[i], '-');
    out << rule << '\n';
    for (const auto& r : doc.rows) line(r);
}

std::string read_source(const std::string& s) {
    // A path if it names a readable file, inline text otherwise.
    std::ifstream in(s);
    if (!in) return s;
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Options {
    int k = 1;
    std::string format = "table";
    std::string blocks;
    std::string vector;
    std::string rule;
    std::string coloring;
    std::string pair;
    std::string mode = "theorem2";
    std::size_t d = 2;
    std::size_t n = 0;
    std::size_t target_len = 0;
    std::size_t horizon_blocks = 8;
    std::size_t universe = 8;
    std::size_t base_len = 0;
    std::uint64_t budget_nodes = 0;
    unsigned threads = 0;
    bool strong = false;
    bool raw = false;
    bool no_weak = false;
};

BlockSequence base_or(const Options& o, BlockSequence fallback) {
    if (o.blocks.empty()) return fallback;
    return parse_blocks(read_source(o.blocks), o.k);
}

Coloring coloring_of(const Options& o, const std::string& fallback) {
    if (!o.coloring.empty()) return json::parse(read_source(o.coloring)).get<Coloring>();
    const auto name = o.rule.empty() ? fallback : o.rule;
    auto r = parse_color_rule(name);
    if (!r) throw Error(ErrorCode::ParseError, "unknown coloring rule '" + name + "'");
    return Coloring::rule(*r);
}

Doc do_span(const Options& o) {
    if (o.blocks.empty()) throw Error(ErrorCode::ParseError, "--blocks is required");
    const auto X = parse_blocks(read_source(o.blocks), o.k);
    Doc doc;
    doc.header = {"rank", "term", "vector"};
    doc.data = {{"base", X}, {"size", 0}, {"elements", json::array()}};
    std::size_t rank = 0;
    for (const auto& el : span_enumerate(X)) {
        doc.data["elements"].push_back({{"term", el.term}, {"text", to_string(el.term)}, {"vector", el.vector}});
        doc.rows.push_back({std::to_string(rank++), to_string(el.term), to_string(el.vector)});
    }
    doc.data["size"] = rank;
    return doc;
}

Doc do_sos(const Options& o) {
    std::vector<KVector> inputs;
    if (!o.vector.empty()) inputs.push_back(parse_kvector(o.vector));
    if (!o.blocks.empty())
        for (const auto& b : parse_blocks(read_source(o.blocks), o.k)) inputs.push_back(b);
    if (inputs.empty()) throw Error(ErrorCode::ParseError, "--vector or --blocks is required");
    Doc doc;
    doc.header = {"vector", "sos", "clause", "index"};
    if (o.strong) doc.header.push_back("strong");
    doc.data = json::array();
    for (const auto& x : inputs) {
        const auto v = is_sos(x);
        json row = {{"vector", x}, {"sos", v.ok}, {"clause", to_string(v.clause)}, {"index", v.index}};
        std::vector<std::string> cells{to_string(x), v.ok ? "yes" : "no", std::string(to_string(v.clause)),
                                       std::to_string(v.index)};
        if (o.strong) {
            const bool s = v.ok && strong_decomposition(x).has_value();
            row["strong"] = s;
            cells.push_back(s ? "yes" : "no");
        }
        doc.data.push_back(row);
        doc.rows.push_back(cells);
    }
    return doc;
}

Doc do_stairs(const Options& o) {
    Doc doc;
    const auto raw = enumerate_raw_stair_functions(o.k);
    doc.data = {{"k", o.k}, {"raw", raw.size()}};
    if (o.raw) {
        doc.header = {"index", "function"};
        doc.data["functions"] = raw;
        for (std::size_t i = 0; i < raw.size(); ++i) doc.rows.push_back({std::to_string(i), to_string(raw[i])});
        return doc;
    }
    const auto classes = stair_classes(o.k);
    doc.header = {"index", "representative", "members"};
    doc.data["deduped"] = classes.size();
    doc.data["functions"] = json::array();
    for (std::size_t i = 0; i < classes.size(); ++i) {
        doc.data["functions"].push_back({{"representative", classes[i].representative},
                                         {"members", classes[i].members.size()}});
        doc.rows.push_back({std::to_string(i), to_string(classes[i].representative),
                            std::to_string(classes[i].members.size())});
    }
    return doc;
}

Doc do_count(const Options& o) {
    const auto row = count_canonical(o.k, o.d);
    Doc doc;
    doc.data = row;
    doc.header = {"k", "d", "t", "t_prime", "t_tilde", "C", "maps"};
    doc.rows.push_back({std::to_string(row.level), std::to_string(row.arity), std::to_string(row.t),
                        std::to_string(row.t_prime), std::to_string(row.t_tilde), std::to_string(row.c),
                        std::to_string(row.maps)});
    return doc;
}

Doc do_homog(const Options& o) {
    const auto X = base_or(o, unit_blocks(o.k, o.universe));
    const auto c = coloring_of(o, "min-parity");
    SearchBudget budget;
    budget.max_universe_blocks = o.universe;
    budget.target_length = o.target_len ? o.target_len : std::min<std::size_t>(3, o.universe);
    if (o.budget_nodes) budget.node_limit = o.budget_nodes;
    budget.threads = o.threads;
    const auto r = find_homogeneous(c, X, o.n ? o.n : 1, budget);
    Doc doc;
    doc.data = r;
    doc.status = r.found() ? ok : exhausted;
    doc.header = {"found", "witness", "color", "nodes", "pruned"};
    doc.rows.push_back({r.found() ? "yes" : "no", r.witness ? to_string(*r.witness) : "", r.color.value_or(""),
                        std::to_string(r.stats.nodes), std::to_string(r.stats.pruned)});
    return doc;
}

Doc do_mixing(const Options& o) {
    if (o.pair.empty()) throw Error(ErrorCode::ParseError, "--pair is required");
    const auto X = base_or(o, unit_blocks(o.k, o.base_len ? o.base_len : 8));
    const auto F = uniform_front(X, o.n ? o.n : 2);
    const auto c = coloring_of(o, "union");
    const auto [s, t] = parse_pair(o.pair, X);
    Horizon h;
    h.max_blocks = o.horizon_blocks;
    h.weak = !o.no_weak;
    const auto r = decide_mixing(F, s, t, c, h);
    Doc doc;
    doc.data = r;
    doc.data["s"] = s;
    doc.data["t"] = t;
    doc.header = {"s", "t", "verdict", "witness", "weak_witness", "reducts"};
    doc.rows.push_back({to_string(s), to_string(t), std::string(to_string(r.verdict)),
                        r.witness ? to_string(*r.witness) : "", r.weak_witness ? to_string(*r.weak_witness) : "",
                        std::to_string(r.reducts_examined)});
    return doc;
}

Doc do_canonize(const Options& o) {
    const auto X = base_or(o, make_sos(o.k, o.base_len ? o.base_len : 6));
    const bool t1 = o.mode == "theorem1";
    if (!t1 && o.mode != "theorem2") throw Error(ErrorCode::ParseError, "--mode must be theorem1 or theorem2");
    const std::size_t rank = t1 ? 1 : (o.n ? o.n : 2);
    const auto F = uniform_front(X, rank);
    const auto c = coloring_of(o, "union");
    const std::size_t target = o.target_len ? o.target_len : X.size();
    const auto r = canonize(F, c, target, t1 ? CanonMode::theorem1 : CanonMode::theorem2);
    Doc doc;
    doc.data = r;
    doc.status = r.found() ? ok : exhausted;
    doc.header = {"found", "reduct", "arity", "map"};
    if (!r.found()) doc.rows.push_back({"no", "", "", ""});
    else
        for (const auto& [d, m] : *r.maps)
            doc.rows.push_back({"yes", to_string(*r.reduct), std::to_string(d), to_string(m)});
    return doc;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite-scale toolkit for FIN_k block sequences", "fink"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--k", o.k, "level")->check(CLI::Range(1, 8));
        sub->add_option("--format", o.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
    };
    auto coloring = [&](CLI::App* sub) {
        sub->add_option("--rule", o.rule, "union, constant, min-parity, first-value or identity");
        sub->add_option("--coloring", o.coloring, "coloring JSON, inline or a file path");
    };

    auto* span = app.add_subcommand("span", "enumerate the combinatorial span");
    common(span);
    span->add_option("--blocks", o.blocks, "block encodings or a file");

    auto* sos = app.add_subcommand("sos", "system-of-staircases test");
    common(sos);
    sos->add_option("--vector", o.vector, "one vector encoding");
    sos->add_option("--blocks", o.blocks, "block encodings or a file");
    sos->add_flag("--strong", o.strong, "also test the strong form");

    auto* stairs = app.add_subcommand("stairs", "enumerate staircase functions");
    common(stairs);
    stairs->add_flag("--raw", o.raw, "list parameter tuples without deduplication");

    auto* count = app.add_subcommand("count", "canonical relation counts");
    common(count);
    count->add_option("--d", o.d, "arity")->check(CLI::Range(2, 64));

    auto* homog = app.add_subcommand("homog", "search a homogeneous block subsequence");
    common(homog);
    coloring(homog);
    homog->add_option("--blocks", o.blocks, "universe (default unit blocks)");
    homog->add_option("--n", o.n, "approximation rank (default 1)");
    homog->add_option("--universe", o.universe, "max universe blocks")->check(CLI::Range(1, 64));
    homog->add_option("--target-len", o.target_len, "blocks in the witness (default 3)");
    homog->add_option("--budget-nodes", o.budget_nodes, "node limit");
    homog->add_option("--threads", o.threads, "worker threads (default FINK_THREADS or 1)");

    auto* mixing = app.add_subcommand("mixing", "decide mixing of a pair at a finite horizon");
    common(mixing);
    coloring(mixing);
    mixing->add_option("--blocks", o.blocks, "base (default 8 unit blocks)");
    mixing->add_option("--base-len", o.base_len, "unit blocks in the default base");
    mixing->add_option("--n", o.n, "front rank (default 2)");
    mixing->add_option("--pair", o.pair, "\"x0 | x0+x2\"");
    mixing->add_option("--horizon-blocks", o.horizon_blocks, "largest reduct length");
    mixing->add_flag("--no-weak", o.no_weak, "skip the weak-mixing witness search");

    auto* canon = app.add_subcommand("canonize", "search a canonical map on a reduct");
    common(canon);
    coloring(canon);
    canon->add_option("--blocks", o.blocks, "base (default minimal sos blocks)");
    canon->add_option("--base-len", o.base_len, "blocks in the default base (default 6)");
    canon->add_option("--n", o.n, "front rank (default 2)");
    canon->add_option("--target-len", o.target_len, "reduct length (default: base length)");
    canon->add_option("--mode", o.mode, "theorem1 or theorem2");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "fink: " << e.what() << '\n';
        return usage;
    }

    try {
        Doc doc;
        if (span->parsed()) doc = do_span(o);
        else if (sos->parsed()) doc = do_sos(o);
        else if (stairs->parsed()) doc = do_stairs(o);
        else if (count->parsed()) doc = do_count(o);
        else if (homog->parsed()) doc = do_homog(o);
        else if (mixing->parsed()) doc = do_mixing(o);
        else doc = do_canonize(o);
        emit(doc, o.format, out);
        if (doc.status == exhausted) err << "fink: search exhausted\n";
        return doc.status;
    } catch (const Error& e) {
        err << "fink: " << e.what() << '\n';
        return usage;
    } catch (const json::exception& e) {
        err << "fink: bad JSON: " << e.what() << '\n';
        return usage;
    }
}

} // namespace fink::cli
