#include "covstream/core.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace covstream {

ElementSet::ElementSet(std::vector<Element> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

ElementSet ElementSet::from_bitmask(const Bitmask& b) {
    ElementSet s;
    s.elems_.reserve(b.count());
    b.for_each([&](std::size_t i) { s.elems_.push_back(static_cast<Element>(i)); });
    return s;
}

bool ElementSet::contains(Element e) const {
    return std::binary_search(elems_.begin(), elems_.end(), e);
}

Bitmask ElementSet::to_bitmask(std::size_t universe_size) const {
    Bitmask b(universe_size);
    for (Element e : elems_) b.set(e);
    return b;
}

ElementSet set_union(const ElementSet& a, const ElementSet& b) {
    std::vector<Element> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return ElementSet(std::move(out));
}

ElementSet set_intersection(const ElementSet& a, const ElementSet& b) {
    std::vector<Element> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return ElementSet(std::move(out));
}

ElementSet set_difference(const ElementSet& a, const ElementSet& b) {
    std::vector<Element> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
    return ElementSet(std::move(out));
}

SetSystem::SetSystem(std::size_t universe_size, std::vector<ElementSet> sets)
    : n_(universe_size), sets_(std::move(sets)) {
    if (n_ < 1) throw std::invalid_argument("universe size must be >= 1");
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        const auto& s = sets_[i];
        if (!s.empty() && s.elements().back() >= n_)
            throw std::out_of_range("set " + std::to_string(i) + " contains element " +
                                    std::to_string(s.elements().back()) +
                                    " >= universe size " + std::to_string(n_));
    }
}

ElementSet coverage(const SetSystem& system, std::span<const std::size_t> indices) {
    Bitmask acc(system.universe_size());
    for (std::size_t idx : indices) {
        if (idx >= system.set_count())
            throw std::out_of_range("set index " + std::to_string(idx) +
                                    " >= set count " +
                                    std::to_string(system.set_count()));
        for (Element e : system.set_at(idx)) acc.set(e);
    }
    return ElementSet::from_bitmask(acc);
}

bool is_feasible_cover(const SetSystem& system, std::span<const std::size_t> indices) {
    return coverage(system, indices).size() == system.universe_size();
}

namespace {

// Splits into lines; a single trailing newline is allowed and dropped.
std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

bool parse_u64(const std::string& tok, std::uint64_t& out) {
    if (tok.empty()) return false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

}  // namespace

SetSystem parse_instance(const std::string& text) {
    using Kind = ParseError::Kind;
    const auto lines = split_lines(text);

    if (lines.empty() || lines[0] != "SC v1")
        throw ParseError(Kind::bad_header, 1, "expected header \"SC v1\"");

    if (lines.size() < 2)
        throw ParseError(Kind::bad_counts, 2, "missing \"<n> <m>\" line");
    const auto counts = tokens_of(lines[1]);
    std::uint64_t n = 0, m = 0;
    if (counts.size() != 2 || !parse_u64(counts[0], n) || !parse_u64(counts[1], m))
        throw ParseError(Kind::bad_counts, 2, "expected \"<n> <m>\"");
    if (n < 1)
        throw ParseError(Kind::bad_counts, 2, "universe size must be >= 1");

    if (lines.size() != 2 + m) {
        if (lines.size() < 2 + m)
            throw ParseError(Kind::bad_set_line, lines.size() + 1,
                             "expected " + std::to_string(m) + " set lines, got " +
                                 std::to_string(lines.size() - 2));
        throw ParseError(Kind::trailing_content, 3 + m, "unexpected content after last set");
    }

    std::vector<ElementSet> sets;
    sets.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        const std::size_t lineno = 3 + i;
        const auto toks = tokens_of(lines[2 + i]);
        std::uint64_t k = 0;
        if (toks.empty() || !parse_u64(toks[0], k))
            throw ParseError(Kind::bad_set_line, lineno, "expected \"<k> <e_1> ... <e_k>\"");
        if (toks.size() != 1 + k)
            throw ParseError(Kind::bad_set_line, lineno,
                             "declared " + std::to_string(k) + " elements, found " +
                                 std::to_string(toks.size() - 1));
        std::vector<Element> elems;
        elems.reserve(k);
        for (std::uint64_t j = 0; j < k; ++j) {
            std::uint64_t e = 0;
            if (!parse_u64(toks[1 + j], e))
                throw ParseError(Kind::bad_set_line, lineno,
                                 "bad element token \"" + toks[1 + j] + "\"");
            if (e >= n)
                throw ParseError(Kind::element_out_of_range, lineno,
                                 "element " + std::to_string(e) + " >= n = " +
                                     std::to_string(n));
            if (!elems.empty() && e <= elems.back())
                throw ParseError(Kind::not_strictly_increasing, lineno,
                                 "elements must be strictly increasing");
            elems.push_back(static_cast<Element>(e));
        }
        sets.push_back(ElementSet(std::move(elems)));
    }
    return SetSystem(static_cast<std::size_t>(n), std::move(sets));
}

std::string format_instance(const SetSystem& system) {
    std::string out = "SC v1\n";
    out += std::to_string(system.universe_size());
    out += ' ';
    out += std::to_string(system.set_count());
    out += '\n';
    for (const auto& s : system.sets()) {
        out += std::to_string(s.size());
        for (Element e : s) {
            out += ' ';
            out += std::to_string(e);
        }
        out += '\n';
    }
    return out;
}

SetSystem read_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

void write_instance(const SetSystem& system, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << format_instance(system);
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace covstream
