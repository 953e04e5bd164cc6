#pragma once

#include <bos/common/error.hpp>
#include <bos/common/units.hpp>
#include <bos/deck/deck.hpp>

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace bos {

/// Schema of one keyword item: name, type, dimension, optional default.
/// Defaults may be given in deck units or directly in SI ("defaultSI"),
/// which keeps unit-system-independent limits exact.
struct ItemSchema {
    std::string name;
    DeckItem::Type type = DeckItem::Type::real;
    Dim dim = Dim::none;
    bool has_default = false;
    bool default_is_si = false;
    double default_real = 0.0;
    long long default_int = 0;
    std::string default_string;
};

/// Keyword schema: section membership, record shape, fixed leading
/// items, and an optional trailing repeated row group (tables).
struct KeywordSchema {
    enum class Shape {
        flag,   // no data records
        single, // exactly one slash-terminated record
        list,   // records until an empty terminating record
    };

    std::string name;
    std::string section;
    Shape shape = Shape::single;
    std::vector<ItemSchema> items;
    // repeated row group after the fixed items; arity 0 when absent
    int row_arity = 0;
    std::vector<Dim> row_dims;
    bool row_is_string = false; // e.g. well-name lists in SUMMARY keywords
};

/// Registry of supported keywords, loaded from a JSON document. Adding a
/// keyword needs only a new schema entry (plus a stage-2 handler when it
/// is semantically active).
class SchemaRegistry {
public:
    SchemaRegistry() = default;

    static SchemaRegistry from_json_text(const std::string& text)
    {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("keyword schema registry: ") + e.what());
        }
        if (!doc.is_object()) {
            throw ConfigError("keyword schema registry: top level must be an object");
        }
        SchemaRegistry reg;
        for (const auto& [name, spec] : doc.items()) {
            reg.add(parse_keyword_schema(name, spec));
        }
        return reg;
    }

    void add(KeywordSchema schema)
    {
        if (schemas_.count(schema.name)) {
            throw ConfigError("duplicate keyword schema '" + schema.name + "'");
        }
        schemas_.emplace(schema.name, std::move(schema));
    }

    bool has(const std::string& name) const { return schemas_.count(name) != 0; }

    const KeywordSchema& get(const std::string& name) const
    {
        const auto it = schemas_.find(name);
        if (it == schemas_.end()) {
            throw ConfigError("no schema for keyword '" + name + "'");
        }
        return it->second;
    }

    std::size_t size() const { return schemas_.size(); }

    std::vector<std::string> keyword_names() const
    {
        std::vector<std::string> out;
        out.reserve(schemas_.size());
        for (const auto& [name, s] : schemas_) {
            out.push_back(name);
        }
        return out;
    }

private:
    static KeywordSchema parse_keyword_schema(const std::string& name, const nlohmann::json& spec)
    {
        if (name.empty() || name.size() > 8) {
            throw ConfigError("keyword name '" + name + "' must have 1..8 characters");
        }
        if (!spec.is_object()) {
            throw ConfigError("schema for '" + name + "' must be an object");
        }
        KeywordSchema ks;
        ks.name = name;
        ks.section = spec.value("section", std::string{});
        const std::string shape = spec.value("shape", std::string("single"));
        if (shape == "flag") {
            ks.shape = KeywordSchema::Shape::flag;
        } else if (shape == "single") {
            ks.shape = KeywordSchema::Shape::single;
        } else if (shape == "list") {
            ks.shape = KeywordSchema::Shape::list;
        } else {
            throw ConfigError("schema for '" + name + "': unknown shape '" + shape + "'");
        }
        if (spec.contains("items")) {
            for (const auto& item : spec.at("items")) {
                ks.items.push_back(parse_item_schema(name, item));
            }
        }
        if (spec.contains("row")) {
            const auto& row = spec.at("row");
            ks.row_arity = row.value("arity", 0);
            if (ks.row_arity <= 0) {
                throw ConfigError("schema for '" + name + "': row arity must be positive");
            }
            ks.row_is_string = row.value("type", std::string("real")) == "string";
            if (row.contains("dims")) {
                for (const auto& d : row.at("dims")) {
                    ks.row_dims.push_back(dim_from_name(d.get<std::string>()));
                }
            } else {
                ks.row_dims.assign(ks.row_arity, Dim::none);
            }
            if (static_cast<int>(ks.row_dims.size()) != ks.row_arity) {
                throw ConfigError("schema for '" + name + "': row dims do not match arity");
            }
        }
        return ks;
    }

    static ItemSchema parse_item_schema(const std::string& kw, const nlohmann::json& item)
    {
        ItemSchema is;
        is.name = item.value("name", std::string{});
        const std::string type = item.value("type", std::string("real"));
        if (type == "int") {
            is.type = DeckItem::Type::integer;
        } else if (type == "real") {
            is.type = DeckItem::Type::real;
        } else if (type == "string") {
            is.type = DeckItem::Type::string;
        } else {
            throw ConfigError("schema for '" + kw + "': unknown item type '" + type + "'");
        }
        is.dim = dim_from_name(item.value("dim", std::string("none")));
        if (item.contains("default")) {
            is.has_default = true;
            const auto& d = item.at("default");
            switch (is.type) {
            case DeckItem::Type::integer:
                is.default_int = d.get<long long>();
                break;
            case DeckItem::Type::real:
                is.default_real = d.get<double>();
                break;
            case DeckItem::Type::string:
                is.default_string = d.get<std::string>();
                break;
            }
        } else if (item.contains("defaultSI")) {
            if (is.type != DeckItem::Type::real) {
                throw ConfigError("schema for '" + kw + "': defaultSI only applies to reals");
            }
            is.has_default = true;
            is.default_is_si = true;
            is.default_real = item.at("defaultSI").get<double>();
        }
        return is;
    }

    std::map<std::string, KeywordSchema> schemas_;
};

} // namespace bos
