#pragma once

#include <bos/common/error.hpp>
#include <bos/common/log.hpp>
#include <bos/deck/deck.hpp>
#include <bos/deck/schema.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace bos {

struct ParseOptions {
    bool lenient = false; // unknown keywords: warn and skip instead of error
};

namespace deck_detail {

struct Token {
    std::string text;
    std::string file;
    int line = 0;
    bool quoted = false;
    bool starts_line = false;
    bool is_slash = false;
};

/// Line-oriented scanner: strips "--" comments, honors single quotes,
/// and implements the rule that everything after a record-terminating
/// slash on the same line is a comment.
inline void scan_text(const std::string& text, const std::string& file,
                      std::vector<Token>& out)
{
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        bool first_on_line = true;
        std::string cur;
        bool cur_quoted = false;
        bool in_quote = false;
        bool line_done = false;

        const auto flush = [&]() {
            if (!cur.empty() || cur_quoted) {
                Token t;
                t.text = cur;
                t.file = file;
                t.line = line_no;
                t.quoted = cur_quoted;
                t.starts_line = first_on_line;
                out.push_back(std::move(t));
                first_on_line = false;
                cur.clear();
                cur_quoted = false;
            }
        };

        for (std::size_t i = 0; i < line.size() && !line_done; ++i) {
            const char c = line[i];
            if (in_quote) {
                if (c == '\'') {
                    in_quote = false;
                } else {
                    cur += c;
                }
                continue;
            }
            switch (c) {
            case '\'':
                in_quote = true;
                cur_quoted = true;
                break;
            case '-':
                if (i + 1 < line.size() && line[i + 1] == '-') {
                    line_done = true;
                } else {
                    cur += c;
                }
                break;
            case '/': {
                flush();
                Token t;
                t.text = "/";
                t.file = file;
                t.line = line_no;
                t.is_slash = true;
                t.starts_line = first_on_line;
                out.push_back(std::move(t));
                line_done = true; // rest of the line is a comment
                break;
            }
            case ' ':
            case '\t':
            case '\r':
            case '\f':
            case '\v':
                flush();
                break;
            default:
                cur += c;
                break;
            }
        }
        if (in_quote) {
            throw DeckError(file, line_no, "unterminated quoted string");
        }
        flush();
    }
}

inline bool keyword_like(const Token& t)
{
    if (t.quoted || t.is_slash || t.text.empty() || t.text.size() > 8) {
        return false;
    }
    if (!std::isupper(static_cast<unsigned char>(t.text[0]))) {
        return false;
    }
    for (char c : t.text) {
        if (!std::isupper(static_cast<unsigned char>(c)) && !std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

/// Raw record entry before typing: a value or a default marker,
/// possibly produced by a repeat count.
struct RawEntry {
    std::string text;
    bool quoted = false;
    bool defaulted = false;
    std::string file;
    int line = 0;
};

inline constexpr long long max_repeat = 100000000; // guards n*v expansion

/// Expand a bare token into record entries, handling the n*value and
/// n* (default) forms.
inline void expand_token(const Token& t, std::vector<RawEntry>& out)
{
    const auto push = [&](std::string text, bool quoted, bool defaulted, long long count) {
        if (count <= 0) {
            throw DeckError(t.file, t.line, "repeat count must be positive in '" + t.text + "'");
        }
        if (count > max_repeat || static_cast<long long>(out.size()) + count > max_repeat) {
            throw DeckError(t.file, t.line, "repeat count too large in '" + t.text + "'");
        }
        RawEntry e;
        e.text = std::move(text);
        e.quoted = quoted;
        e.defaulted = defaulted;
        e.file = t.file;
        e.line = t.line;
        out.insert(out.end(), static_cast<std::size_t>(count), e);
    };

    if (t.quoted) {
        push(t.text, true, false, 1);
        return;
    }
    if (t.text == "*") {
        push({}, false, true, 1);
        return;
    }
    const auto star = t.text.find('*');
    if (star != std::string::npos && star > 0) {
        bool digits = true;
        for (std::size_t i = 0; i < star; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) {
                digits = false;
                break;
            }
        }
        if (digits) {
            errno = 0;
            const long long n = std::strtoll(t.text.substr(0, star).c_str(), nullptr, 10);
            if (errno == ERANGE) {
                throw DeckError(t.file, t.line, "repeat count out of range in '" + t.text + "'");
            }
            const std::string rest = t.text.substr(star + 1);
            if (rest.empty()) {
                push({}, false, true, n);
            } else {
                push(rest, false, false, n);
            }
            return;
        }
    }
    push(t.text, false, false, 1);
}

inline std::string upper(std::string s)
{
    for (char& c : s) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return s;
}

inline DeckItem type_entry(const RawEntry& e, DeckItem::Type type, Dim dim)
{
    DeckItem item;
    item.type = type;
    item.dim = dim;
    switch (type) {
    case DeckItem::Type::integer: {
        errno = 0;
        char* end = nullptr;
        item.ival = std::strtoll(e.text.c_str(), &end, 10);
        if (end == e.text.c_str() || *end != '\0' || errno == ERANGE) {
            throw DeckError(e.file, e.line, "expected an integer, got '" + e.text + "'");
        }
        break;
    }
    case DeckItem::Type::real: {
        errno = 0;
        char* end = nullptr;
        item.rval = std::strtod(e.text.c_str(), &end);
        if (end == e.text.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(item.rval)) {
            throw DeckError(e.file, e.line, "expected a number, got '" + e.text + "'");
        }
        break;
    }
    case DeckItem::Type::string:
        item.sval = e.quoted ? e.text : upper(e.text);
        break;
    }
    return item;
}

inline DeckItem default_item(const ItemSchema& is, const RawEntry& e, const std::string& kw)
{
    if (!is.has_default) {
        throw DeckError(e.file, e.line,
                        kw + ": item '" + is.name + "' is required and cannot be defaulted");
    }
    DeckItem item;
    item.type = is.type;
    item.dim = is.dim;
    item.defaulted = true;
    item.si_value = is.default_is_si;
    switch (is.type) {
    case DeckItem::Type::integer: item.ival = is.default_int; break;
    case DeckItem::Type::real: item.rval = is.default_real; break;
    case DeckItem::Type::string: item.sval = is.default_string; break;
    }
    return item;
}

class Parser {
public:
    Parser(const SchemaRegistry& registry, const ParseOptions& opts, RunLog* log)
        : registry_(registry), opts_(opts), log_(log)
    {}

    Deck parse_file(const std::string& path)
    {
        push_file(path);
        return run(path);
    }

    Deck parse_text(const std::string& text, const std::string& pseudo_path)
    {
        scan_text(text, pseudo_path, tokens_);
        return run(pseudo_path);
    }

private:
    Deck run(const std::string& top_file)
    {
        Deck deck;
        pos_ = 0;
        while (pos_ < tokens_.size()) {
            const Token& t = tokens_[pos_];
            if (!keyword_like(t)) {
                if (opts_.lenient) {
                    warn_skip(t);
                    continue;
                }
                throw DeckError(t.file, t.line, "expected a keyword, got '" + t.text + "'");
            }
            if (t.text == "END") {
                break;
            }
            if (t.text == "INCLUDE") {
                ++pos_;
                handle_include(t);
                continue;
            }
            if (!registry_.has(t.text)) {
                if (opts_.lenient) {
                    warn_skip(t);
                    continue;
                }
                throw DeckError(t.file, t.line, "unknown keyword '" + t.text + "'");
            }
            ++pos_;
            deck.keywords.push_back(read_keyword(t));
        }
        (void)top_file;
        return deck;
    }

    void warn_skip(const Token& t)
    {
        if (log_) {
            log_->warn(t.file + ":" + std::to_string(t.line) + ": skipping unknown keyword '"
                       + t.text + "'");
        }
        ++pos_;
        // resync: next registered keyword at the start of a line
        while (pos_ < tokens_.size()) {
            const Token& u = tokens_[pos_];
            if (u.starts_line && keyword_like(u)
                && (registry_.has(u.text) || u.text == "END" || u.text == "INCLUDE")) {
                break;
            }
            ++pos_;
        }
    }

    void handle_include(const Token& kw)
    {
        // one record: a single (usually quoted) path, then '/'
        std::vector<RawEntry> entries;
        read_raw_record(kw, entries);
        if (entries.size() != 1 || entries[0].defaulted) {
            throw DeckError(kw.file, kw.line, "INCLUDE expects exactly one path");
        }
        namespace fs = std::filesystem;
        fs::path base = fs::path(kw.file).parent_path();
        fs::path target = base / entries[0].text;

        std::error_code ec;
        fs::path canon = fs::weakly_canonical(target, ec);
        const std::string canon_str = ec ? target.string() : canon.string();
        if (++include_count_[canon_str] > max_include_repeat) {
            throw DeckError(kw.file, kw.line, "INCLUDE cycle involving '" + target.string() + "'");
        }

        std::ifstream is(target);
        if (!is) {
            throw DeckError(kw.file, kw.line, "cannot open INCLUDE file '" + target.string() + "'");
        }
        std::stringstream ss;
        ss << is.rdbuf();

        std::vector<Token> included;
        scan_text(ss.str(), target.string(), included);
        tokens_.insert(tokens_.begin() + static_cast<std::ptrdiff_t>(pos_),
                       included.begin(), included.end());
    }

    void push_file(const std::string& path)
    {
        std::ifstream is(path);
        if (!is) {
            throw DeckError(path, 0, "cannot open deck file");
        }
        std::stringstream ss;
        ss << is.rdbuf();
        scan_text(ss.str(), path, tokens_);
    }

    /// Collect raw entries of one record up to the terminating slash.
    void read_raw_record(const Token& kw, std::vector<RawEntry>& out)
    {
        while (pos_ < tokens_.size()) {
            const Token& t = tokens_[pos_];
            if (t.is_slash) {
                ++pos_;
                return;
            }
            expand_token(t, out);
            ++pos_;
        }
        throw DeckError(kw.file, kw.line, kw.text + ": unterminated record (missing '/')");
    }

    DeckKeyword read_keyword(const Token& kw)
    {
        const KeywordSchema& schema = registry_.get(kw.text);
        DeckKeyword out;
        out.name = kw.text;
        out.file = kw.file;
        out.line = kw.line;

        switch (schema.shape) {
        case KeywordSchema::Shape::flag:
            return out;
        case KeywordSchema::Shape::single: {
            out.records.push_back(read_record(kw, schema));
            return out;
        }
        case KeywordSchema::Shape::list: {
            out.list_shape = true;
            while (true) {
                if (pos_ >= tokens_.size()) {
                    throw DeckError(kw.file, kw.line,
                                    kw.text + ": missing terminating '/' record");
                }
                if (tokens_[pos_].is_slash) { // empty record terminates
                    ++pos_;
                    return out;
                }
                out.records.push_back(read_record(kw, schema));
            }
        }
        }
        return out;
    }

    DeckRecord read_record(const Token& kw, const KeywordSchema& schema)
    {
        const int line = pos_ < tokens_.size() ? tokens_[pos_].line : kw.line;
        std::vector<RawEntry> entries;
        read_raw_record(kw, entries);

        DeckRecord rec;
        rec.line = line;
        rec.items.reserve(entries.size());

        const std::size_t fixed = schema.items.size();
        for (std::size_t p = 0; p < entries.size(); ++p) {
            const RawEntry& e = entries[p];
            if (p < fixed) {
                const ItemSchema& is = schema.items[p];
                rec.items.push_back(e.defaulted ? default_item(is, e, kw.text)
                                                : type_entry(e, is.type, is.dim));
            } else if (schema.row_arity > 0) {
                if (e.defaulted) {
                    throw DeckError(e.file, e.line, kw.text + ": table entries cannot be defaulted");
                }
                const std::size_t col = (p - fixed) % static_cast<std::size_t>(schema.row_arity);
                const auto t = schema.row_is_string ? DeckItem::Type::string : DeckItem::Type::real;
                rec.items.push_back(type_entry(e, t, schema.row_dims[col]));
            } else {
                throw DeckError(e.file, e.line,
                                kw.text + ": too many items in record (item "
                                + std::to_string(p + 1) + ")");
            }
        }
        // trailing defaults for omitted fixed items
        for (std::size_t p = entries.size(); p < fixed; ++p) {
            const ItemSchema& is = schema.items[p];
            if (!is.has_default) {
                throw DeckError(kw.file, line,
                                kw.text + ": missing required item '" + is.name + "'");
            }
            RawEntry pseudo;
            pseudo.file = kw.file;
            pseudo.line = line;
            pseudo.defaulted = true;
            rec.items.push_back(default_item(is, pseudo, kw.text));
        }
        if (schema.row_arity > 0 && entries.size() > fixed
            && (entries.size() - fixed) % static_cast<std::size_t>(schema.row_arity) != 0) {
            throw DeckError(kw.file, line,
                            kw.text + ": table data is not a whole number of rows");
        }
        return rec;
    }

    // a file re-included this many times is assumed to be a cycle
    static constexpr int max_include_repeat = 100;

    const SchemaRegistry& registry_;
    ParseOptions opts_;
    RunLog* log_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::map<std::string, int> include_count_;
};

} // namespace deck_detail

/// Stage 1: text to keyword container. Comments are stripped, INCLUDE
/// files are inlined (cycles detected), repeat counts and default
/// markers are expanded, and items are coerced to their schema types.
/// All diagnostics carry file and line.
inline Deck parse_stage1(const std::string& path, const SchemaRegistry& registry,
                         const ParseOptions& opts = {}, RunLog* log = nullptr)
{
    deck_detail::Parser p(registry, opts, log);
    return p.parse_file(path);
}

/// Stage 1 from an in-memory string (used by tests and the fuzzer).
inline Deck parse_stage1_text(const std::string& text, const SchemaRegistry& registry,
                              const ParseOptions& opts = {}, RunLog* log = nullptr,
                              const std::string& pseudo_path = "<memory>")
{
    deck_detail::Parser p(registry, opts, log);
    return p.parse_text(text, pseudo_path);
}

} // namespace bos
