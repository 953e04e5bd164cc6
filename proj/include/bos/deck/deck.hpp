#pragma once

#include <bos/common/units.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace bos {

/// A typed item of a deck record. Defaults are already resolved; the
/// flag records that the value came from the keyword schema.
struct DeckItem {
    enum class Type { integer, real, string };

    Type type = Type::real;
    long long ival = 0;
    double rval = 0.0;
    std::string sval;
    Dim dim = Dim::none;
    bool defaulted = false;
    // schema defaults may be specified directly in SI; such values skip
    // the deck-unit conversion in stage 2
    bool si_value = false;

    static DeckItem of_int(long long v)
    {
        DeckItem it;
        it.type = Type::integer;
        it.ival = v;
        return it;
    }
    static DeckItem of_real(double v, Dim d = Dim::none)
    {
        DeckItem it;
        it.type = Type::real;
        it.rval = v;
        it.dim = d;
        return it;
    }
    static DeckItem of_string(std::string v)
    {
        DeckItem it;
        it.type = Type::string;
        it.sval = std::move(v);
        return it;
    }

    bool same_value(const DeckItem& o) const
    {
        if (type != o.type) {
            return false;
        }
        switch (type) {
        case Type::integer: return ival == o.ival;
        case Type::real: return rval == o.rval;
        case Type::string: return sval == o.sval;
        }
        return false;
    }
};

struct DeckRecord {
    std::vector<DeckItem> items;
    int line = 0;
};

struct DeckKeyword {
    std::string name;
    std::vector<DeckRecord> records;
    std::string file;
    int line = 0;
    // list-shaped keywords end with an empty terminating record in the
    // source; pretty_print must reproduce it
    bool list_shape = false;
};

/// Stage-1 parse result: an ordered container of keywords. Order is
/// preserved exactly as encountered (INCLUDE contents are inlined).
class Deck {
public:
    std::vector<DeckKeyword> keywords;

    bool has(const std::string& name) const { return find(name) != nullptr; }

    const DeckKeyword* find(const std::string& name) const
    {
        for (const auto& kw : keywords) {
            if (kw.name == name) {
                return &kw;
            }
        }
        return nullptr;
    }

    std::vector<const DeckKeyword*> all(const std::string& name) const
    {
        std::vector<const DeckKeyword*> out;
        for (const auto& kw : keywords) {
            if (kw.name == name) {
                out.push_back(&kw);
            }
        }
        return out;
    }
};

/// Render a deck back to text. Reparsing the output yields an item-wise
/// identical deck: reals are printed with full round-trip precision.
inline std::string pretty_print(const Deck& deck)
{
    std::string out;
    char buf[64];
    for (const auto& kw : deck.keywords) {
        out += kw.name;
        out += '\n';
        for (const auto& rec : kw.records) {
            out += ' ';
            for (const auto& item : rec.items) {
                out += ' ';
                switch (item.type) {
                case DeckItem::Type::integer:
                    std::snprintf(buf, sizeof buf, "%lld", item.ival);
                    out += buf;
                    break;
                case DeckItem::Type::real:
                    std::snprintf(buf, sizeof buf, "%.17g", item.rval);
                    out += buf;
                    break;
                case DeckItem::Type::string:
                    out += '\'';
                    out += item.sval;
                    out += '\'';
                    break;
                }
            }
            out += " /\n";
        }
        if (kw.list_shape) {
            out += "/\n";
        }
        out += '\n';
    }
    return out;
}

/// Item-wise equality ignoring formatting and provenance.
inline bool same_deck(const Deck& a, const Deck& b)
{
    if (a.keywords.size() != b.keywords.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.keywords.size(); ++k) {
        const auto& ka = a.keywords[k];
        const auto& kb = b.keywords[k];
        if (ka.name != kb.name || ka.records.size() != kb.records.size()) {
            return false;
        }
        for (std::size_t r = 0; r < ka.records.size(); ++r) {
            const auto& ra = ka.records[r].items;
            const auto& rb = kb.records[r].items;
            if (ra.size() != rb.size()) {
                return false;
            }
            for (std::size_t i = 0; i < ra.size(); ++i) {
                if (!ra[i].same_value(rb[i])) {
                    return false;
                }
            }
        }
    }
    return true;
}

} // namespace bos
