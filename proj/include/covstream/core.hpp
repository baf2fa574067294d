#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "covstream/bitmask.hpp"
#include "covstream/rng.hpp"

namespace covstream {

using Element = std::uint32_t;

/// Raised when an instance file violates the on-disk format. Carries the
/// 1-based line number of the offending line and a machine-checkable kind.
class ParseError : public std::runtime_error {
public:
    enum class Kind {
        bad_header,
        bad_counts,
        bad_set_line,
        element_out_of_range,
        not_strictly_increasing,
        trailing_content,
    };

    ParseError(Kind kind, std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          kind_(kind),
          line_(line) {}

    Kind kind() const { return kind_; }
    std::size_t line() const { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An immutable subset of the universe, stored as a strictly increasing
/// sequence of 0-based element ids.
class ElementSet {
public:
    ElementSet() = default;

    // Programmatic construction tolerates unsorted/duplicated input and
    // normalizes it; file input is validated before reaching here.
    explicit ElementSet(std::vector<Element> elems);

    static ElementSet from_bitmask(const Bitmask& b);

    const std::vector<Element>& elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    bool contains(Element e) const;

    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    Bitmask to_bitmask(std::size_t universe_size) const;

    bool operator==(const ElementSet&) const = default;

private:
    std::vector<Element> elems_;
};

ElementSet set_union(const ElementSet& a, const ElementSet& b);
ElementSet set_intersection(const ElementSet& a, const ElementSet& b);
ElementSet set_difference(const ElementSet& a, const ElementSet& b);

/// A universe size n plus an ordered collection of subsets of [0, n).
/// Immutable after construction; every contained set is validated against n.
class SetSystem {
public:
    SetSystem(std::size_t universe_size, std::vector<ElementSet> sets);

    std::size_t universe_size() const { return n_; }
    std::size_t set_count() const { return sets_.size(); }
    const ElementSet& set_at(std::size_t i) const { return sets_.at(i); }
    const std::vector<ElementSet>& sets() const { return sets_; }

    bool operator==(const SetSystem&) const = default;

private:
    std::size_t n_;
    std::vector<ElementSet> sets_;
};

/// Union of the selected sets. Indices form a selection (duplicates are
/// harmless); any index >= set_count throws std::out_of_range.
ElementSet coverage(const SetSystem& system, std::span<const std::size_t> indices);

bool is_feasible_cover(const SetSystem& system, std::span<const std::size_t> indices);

// Instance file format (ASCII, line oriented):
//   line 1:       "SC v1"
//   line 2:       "<n> <m>"
//   lines 3..m+2: "<k> <e_1> ... <e_k>"   e_j strictly increasing, < n
SetSystem read_instance(const std::filesystem::path& path);
void write_instance(const SetSystem& system, const std::filesystem::path& path);

// Parse from an already-loaded buffer (the file reader wraps this).
SetSystem parse_instance(const std::string& text);
std::string format_instance(const SetSystem& system);

}  // namespace covstream
