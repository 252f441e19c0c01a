#include "cabledeg/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>

#include "cabledeg/errors.hpp"

namespace cabledeg {

std::string RegionId::str() const { return exterior_ ? std::string("inf") : std::to_string(label_); }

std::optional<RegionId> RegionId::parse(std::string_view token) {
    if (token == "inf") return exterior();
    if (token.empty()) return std::nullopt;
    std::uint32_t value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return bounded(value);
}

namespace {

std::string pair_name(const Symbol& s) { return "(" + s.from.str() + "," + s.to.str() + ")"; }

class WordLexer {
public:
    WordLexer(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }
    std::size_t column() const { return pos_ + 1; }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    /// Reads characters until whitespace or one of `stops`.
    std::string_view token(std::string_view stops) {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               stops.find(text_[pos_]) == std::string_view::npos) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    RegionId region() {
        skip_space();
        const std::size_t col = column();
        auto tok = token(">:");
        auto id = RegionId::parse(tok);
        if (!id) {
            throw ParseError(where(col) + "invalid region token '" + std::string(tok) + "'", line_, col);
        }
        return *id;
    }

    int sign() {
        skip_space();
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
            return text_[pos_++] == '+' ? 1 : -1;
        }
        fail("expected '+' or '-'");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(where(column()) + msg, line_, column());
    }

    std::string where(std::size_t col) const {
        std::ostringstream os;
        if (line_ > 0) os << "line " << line_ << ", ";
        os << "column " << col << ": ";
        return os.str();
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

}  // namespace

void check_chain(const CableWord& word) {
    const auto& s = word.symbols;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j].sign != 1 && s[j].sign != -1) {
            throw ChainError("symbol " + std::to_string(j + 1) + " has sign outside {+1,-1}", j, j);
        }
        if (s[j].from == s[j].to) {
            throw ChainError("symbol " + std::to_string(j + 1) + " " + pair_name(s[j]) +
                                 " does not change region",
                             j, j);
        }
        if (j == 0 && s[0].from != word.home) {
            throw ChainError("first symbol " + pair_name(s[0]) + " does not leave home region " +
                                 word.home.str(),
                             0, 0);
        }
        if (j > 0 && s[j - 1].to != s[j].from) {
            throw ChainError("chain break between symbols " + std::to_string(j) + " " +
                                 pair_name(s[j - 1]) + " and " + std::to_string(j + 1) + " " +
                                 pair_name(s[j]),
                             j - 1, j);
        }
    }
}

CableWord parse_word(std::string_view text, std::size_t line_number) {
    WordLexer lex(text, line_number);
    CableWord word;
    word.cable_id = std::string(lex.token(":"));
    if (word.cable_id.empty()) lex.fail("missing cable id");
    lex.expect(':');
    while (!lex.done()) {
        Symbol sym;
        sym.from = lex.region();
        lex.expect('>');
        sym.to = lex.region();
        lex.expect(':');
        sym.sign = lex.sign();
        word.symbols.push_back(sym);
    }
    if (!word.symbols.empty()) {
        word.home = word.symbols.front().from;
    } else {
        auto id = RegionId::parse(word.cable_id);
        if (!id || id->is_exterior()) {
            throw ParseError(lex.where(1) + "empty word needs a bounded region label as cable id",
                             line_number, 1);
        }
        word.home = *id;
    }
    try {
        check_chain(word);
    } catch (const ChainError& e) {
        if (line_number == 0) throw;
        throw ChainError("line " + std::to_string(line_number) + ": " + e.what(), e.first(), e.second());
    }
    return word;
}

std::vector<CableWord> parse_word_file(std::string_view text) {
    std::vector<CableWord> words;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        auto line = text.substr(start, end - start);
        auto first = line.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && line[first] != '#') {
            words.push_back(parse_word(line, line_no));
        }
        start = end + 1;
    }
    return words;
}

std::string format_word(const CableWord& word) {
    std::string out = word.cable_id + ":";
    for (const auto& s : word.symbols) {
        out += ' ';
        out += s.from.str() + ">" + s.to.str() + ":" + (s.sign > 0 ? "+" : "-");
    }
    return out;
}

std::string format_term(const ReducedTerm& term) {
    return std::to_string(term.coefficient) + "(" + term.from.str() + "," + term.to.str() + ")";
}

long long signed_sum(const CableWord& word) {
    long long sum = 0;
    for (const auto& s : word.symbols) sum += s.sign;
    return sum;
}

ReducedTerm reduce(const CableWord& word, const ReductionObserver& observer) {
    check_chain(word);
    ReducedTerm acc{0, word.home, word.home};
    const Symbol* prev = nullptr;
    for (std::size_t j = 0; j < word.symbols.size(); ++j) {
        const Symbol& s = word.symbols[j];
        const bool inverse =
            prev != nullptr && prev->from == s.to && prev->to == s.from && prev->sign == -s.sign;
        acc.coefficient += s.sign;
        acc.to = s.to;
        if (observer) observer({j, inverse ? Rule::Cancellation : Rule::Transitive, acc});
        prev = &s;
    }
    return acc;
}

TermRewriter::TermRewriter(const CableWord& word) : home_(word.home) {
    check_chain(word);
    terms_.reserve(word.symbols.size());
    for (const auto& s : word.symbols) terms_.push_back({s.sign, s.from, s.to});
}

Rule TermRewriter::apply(std::size_t pos) {
    if (pos + 1 >= terms_.size()) throw Error("rewrite position out of range");
    ReducedTerm& a = terms_[pos];
    const ReducedTerm& b = terms_[pos + 1];
    if (a.to != b.from) throw Error("rewrite on non-adjacent terms");
    const long long sum = a.coefficient + b.coefficient;
    if (a.from == b.to && sum == 0) {
        terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(pos),
                     terms_.begin() + static_cast<std::ptrdiff_t>(pos) + 2);
        return Rule::Cancellation;
    }
    a = {sum, a.from, b.to};
    terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
    return Rule::Transitive;
}

long long TermRewriter::total() const {
    long long sum = 0;
    for (const auto& t : terms_) sum += t.coefficient;
    return sum;
}

ReducedTerm TermRewriter::result() const {
    if (terms_.size() > 1) throw Error("rewrite not finished");
    if (terms_.empty()) return {0, home_, home_};
    return terms_.front();
}

bool SimplicityReport::simple() const {
    if (!duplicate_homes.empty() || !missing_regions.empty()) return false;
    return std::all_of(cables.begin(), cables.end(), [](const auto& c) { return c.simple(); });
}

SimplicityReport validate_simple(const CableSystemWord& system) {
    SimplicityReport report;
    std::set<RegionId> homes;
    std::set<RegionId> duplicates;
    for (const auto& word : system.words) {
        CableSimplicity c;
        c.cable_id = word.cable_id;
        c.home_bounded = !word.home.is_exterior();
        const RegionId terminal = word.symbols.empty() ? word.home : word.symbols.back().to;
        c.ends_exterior = terminal.is_exterior();

        std::set<RegionId> left;
        std::set<RegionId> flagged;
        for (const auto& s : word.symbols) {
            if (!s.from.is_exterior()) left.insert(s.from);
            if (!s.to.is_exterior() && left.count(s.to) && flagged.insert(s.to).second) {
                c.reentered.push_back(s.to);
            }
        }
        report.cables.push_back(std::move(c));
        if (!homes.insert(word.home).second) duplicates.insert(word.home);
    }
    report.duplicate_homes.assign(duplicates.begin(), duplicates.end());
    for (const auto& r : system.region_set) {
        if (!r.is_exterior() && !homes.count(r)) report.missing_regions.push_back(r);
    }
    return report;
}

double vdeg(const std::vector<ReducedTerm>& reduced, const std::map<RegionId, double>& volumes) {
    double total = 0.0;
    for (const auto& term : reduced) {
        auto it = volumes.find(term.from);
        if (it == volumes.end()) throw Error("no volume for region " + term.from.str());
        total += static_cast<double>(std::llabs(term.coefficient)) * it->second;
    }
    return total;
}

}  // namespace cabledeg
