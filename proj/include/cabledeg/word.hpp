#pragma once

// Cable-words: ordered, signed region-transition symbols recorded along one
// cable, and their reduction to a single net transition n(home, Omega_inf).

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cabledeg {

/// Identifier of a complementary region. The unbounded region is a distinguished value.
class RegionId {
public:
    constexpr RegionId() = default;

    static constexpr RegionId exterior() { return RegionId(0, true); }
    static constexpr RegionId bounded(std::uint32_t label) { return RegionId(label, false); }

    constexpr bool is_exterior() const noexcept { return exterior_; }
    /// Meaningless for the exterior region.
    constexpr std::uint32_t label() const noexcept { return label_; }

    /// Decimal label or the literal `inf`.
    std::string str() const;
    static std::optional<RegionId> parse(std::string_view token);

    // The exterior orders after every bounded region.
    friend constexpr auto operator<=>(const RegionId& a, const RegionId& b) {
        if (a.exterior_ != b.exterior_) return a.exterior_ <=> b.exterior_;
        if (a.exterior_) return std::strong_ordering::equal;
        return a.label_ <=> b.label_;
    }
    friend constexpr bool operator==(const RegionId& a, const RegionId& b) {
        return (a <=> b) == 0;
    }

private:
    constexpr RegionId(std::uint32_t label, bool exterior) : label_(label), exterior_(exterior) {}

    std::uint32_t label_ = 0;
    bool exterior_ = false;
};

/// One transverse crossing: the cable passes from `from` into `to`.
/// A barred symbol is stored with sign -1.
struct Symbol {
    RegionId from;
    RegionId to;
    int sign = 1;

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

struct CableWord {
    std::string cable_id;
    RegionId home;
    std::vector<Symbol> symbols;
};

/// Net transition `coefficient (from, to)`.
struct ReducedTerm {
    long long coefficient = 0;
    RegionId from;
    RegionId to;

    friend bool operator==(const ReducedTerm&, const ReducedTerm&) = default;
};

struct CableSystemWord {
    std::vector<CableWord> words;
    std::vector<RegionId> region_set;
};

/// Throws ChainError on the first broken link, or when a symbol is malformed
/// (from == to, sign outside {+1, -1}, first symbol not leaving home).
void check_chain(const CableWord& word);

/// Parses one line of a word file: `<id> ":" (<from> ">" <to> ":" ("+"|"-"))*`.
/// `line_number` only decorates error messages.
CableWord parse_word(std::string_view text, std::size_t line_number = 0);

/// Parses a whole word file; blank lines and lines starting with '#' are skipped.
std::vector<CableWord> parse_word_file(std::string_view text);

std::string format_word(const CableWord& word);

/// `n(from,to)`, e.g. `-1(1,6)`.
std::string format_term(const ReducedTerm& term);

long long signed_sum(const CableWord& word);

enum class Rule { Cancellation, Transitive };

/// Scan state handed to a reduction observer after each step.
struct ReductionStep {
    std::size_t position;  ///< index of the symbol just consumed
    Rule rule;
    ReducedTerm accumulated;
};

using ReductionObserver = std::function<void(const ReductionStep&)>;

/// Single left-to-right scan holding only the running coefficient and the
/// current endpoint region. A symbol that undoes its predecessor is a
/// cancellation step; every other step is a transitive merge. Both add the
/// symbol's sign. An empty word reduces to 0(home, home).
ReducedTerm reduce(const CableWord& word, const ReductionObserver& observer = {});

/// Term-list form of the rewrite system, for applying the two rules in an
/// arbitrary admissible order.
class TermRewriter {
public:
    explicit TermRewriter(const CableWord& word);

    const std::vector<ReducedTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Merges terms `pos` and `pos + 1`. An inverse pair whose coefficients
    /// sum to zero is removed (cancellation); otherwise the pair becomes one
    /// composite term with the summed coefficient (transitive).
    Rule apply(std::size_t pos);

    long long total() const;

    /// The single remaining term, or 0(home, home) when everything cancelled.
    /// Requires size() <= 1.
    ReducedTerm result() const;

private:
    RegionId home_;
    std::vector<ReducedTerm> terms_;
};

struct CableSimplicity {
    std::string cable_id;
    bool home_bounded = true;
    bool ends_exterior = true;
    /// Bounded regions entered again after the cable had left them.
    std::vector<RegionId> reentered;

    bool simple() const { return home_bounded && ends_exterior && reentered.empty(); }
};

struct SimplicityReport {
    std::vector<CableSimplicity> cables;
    /// Homes used by more than one word.
    std::vector<RegionId> duplicate_homes;
    /// Bounded regions of `region_set` without a word.
    std::vector<RegionId> missing_regions;
    /// Pairwise disjointness of cables is a geometric property and is never
    /// decided from words alone.
    static constexpr bool disjointness_checkable = false;

    bool simple() const;
};

SimplicityReport validate_simple(const CableSystemWord& system);

/// Sum of |coefficient| * volume(from) over the reduced terms.
/// Throws Error naming the region when a volume entry is missing.
double vdeg(const std::vector<ReducedTerm>& reduced, const std::map<RegionId, double>& volumes);

}  // namespace cabledeg
