#pragma once

// JSON system descriptions. A document names a `kind` and the fields that
// kind needs; see docs/schemas/cifs_spec.schema.json.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cifs/digits.hpp"
#include "cifs/error.hpp"
#include "cifs/parabolic.hpp"
#include "cifs/pressure.hpp"
#include "cifs/spec.hpp"
#include "cifs/systems.hpp"
#include "cifs/validate.hpp"

namespace cifs {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline double num(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

inline double num_or(const Json& j, const char* key, double dflt) { return j.contains(key) ? num(j, key) : dflt; }

inline std::int64_t integer(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer()) throw ConfigError(std::string("field '") + key + "' must be an integer");
    return v.get<std::int64_t>();
}

inline std::int64_t integer_or(const Json& j, const char* key, std::int64_t dflt) {
    return j.contains(key) ? integer(j, key) : dflt;
}

inline std::vector<std::int64_t> integer_list(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_array()) throw ConfigError(std::string("field '") + key + "' must be an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& e : v) {
        if (!e.is_number_integer()) throw ConfigError(std::string("field '") + key + "' must be an array of integers");
        out.push_back(e.get<std::int64_t>());
    }
    return out;
}

inline std::vector<MapKind> similarity_list(const Json& j) {
    const Json& v = field(j, "maps");
    if (!v.is_array()) throw ConfigError("field 'maps' must be an array");
    std::vector<MapKind> out;
    for (const auto& m : v) out.emplace_back(Similarity{num(m, "ratio"), num(m, "offset")});
    return out;
}

inline DigitSet digit_set(const Json& j) {
    const Json& t = field(j, "type");
    if (!t.is_string()) throw ConfigError("digit set 'type' must be a string");
    const auto type = t.get<std::string>();
    if (type == "spaced") return DigitSet(SpacedDigits{num(j, "p"), integer_or(j, "first", 2)});
    if (type == "clustered") return DigitSet(ClusteredDigits{num(j, "alpha"), integer_or(j, "first_block", 1)});
    if (type == "full") return DigitSet(FullDigits{integer_or(j, "min", 2)});
    throw ConfigError("unknown digit set type '" + type + "'");
}

inline CloudKind cloud_kind(const Json& j) {
    if (!j.contains("cloud")) return CloudKind::limit_set;
    const Json& c = j.at("cloud");
    if (c == "limit_set") return CloudKind::limit_set;
    if (c == "fixed_points") return CloudKind::fixed_points;
    throw ConfigError("field 'cloud' must be \"limit_set\" or \"fixed_points\"");
}

}  // namespace detail

/// Build a system from a parsed JSON document and validate its parameters.
inline ReferenceSystem spec_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("system description must be a JSON object");
    const Json& k = detail::field(j, "kind");
    if (!k.is_string()) throw ConfigError("field 'kind' must be a string");
    const auto kind = k.get<std::string>();
    ReferenceSystem out;
    out.cloud = detail::cloud_kind(j);
    CifsSpec& s = out.spec;
    if (kind == "similarity_list") {
        s.explicit_maps = detail::similarity_list(j);
        if (j.contains("geometric_tail")) {
            const Json& g = j.at("geometric_tail");
            GeometricTail t{detail::num(g, "base"), detail::num_or(g, "scale", 1.0), detail::integer_or(g, "first", 1)};
            if (g.contains("offsets")) {
                if (g.at("offsets") == "packed") t.offsets = GeometricTail::Offsets::packed;
                else if (g.at("offsets") != "reciprocal") throw ConfigError("geometric tail offsets must be \"reciprocal\" or \"packed\"");
            }
            s.tails.emplace_back(t);
        }
        if (s.explicit_maps.empty() && s.tails.empty()) throw ConfigError("similarity_list needs at least one map");
    } else if (kind == "sharp_family") {
        s = build_sharp_family(detail::num(j, "p"), detail::num(j, "t"), detail::num(j, "h"));
    } else if (kind == "polynomial_tail") {
        if (j.contains("maps")) s.explicit_maps = detail::similarity_list(j);
        const Json& t = detail::field(j, "tail");
        s.tails.emplace_back(PolynomialTail{detail::num(t, "p"), detail::num(t, "t"), detail::num_or(t, "coef", 1.0),
                                            detail::integer_or(t, "first", 2)});
    } else if (kind == "gauss_digits") {
        std::vector<std::int64_t> digits;
        if (j.contains("digits")) digits = detail::integer_list(j, "digits");
        std::optional<DigitSet> tail;
        if (j.contains("infinite")) tail = detail::digit_set(j.at("infinite"));
        s = gauss_system(digits, tail);
    } else if (kind == "complex_gauss") {
        s = complex_gauss_system();
    } else if (kind == "parabolic") {
        const double q = detail::num(j, "q");
        if (j.contains("maps")) {
            auto branches = detail::similarity_list(j);
            branches.insert(branches.begin(), ParabolicBranch{q, 1});
            s = induce_parabolic(q, branches);
        } else {
            s = parabolic_system(q);
        }
    } else if (kind == "renyi_parabolic") {
        s = renyi_parabolic_spec(detail::integer_list(j, "digits"));
    } else {
        throw ConfigError("unknown system kind '" + kind + "'");
    }
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw ConfigError("field 'name' must be a string");
        s.name = j.at("name").get<std::string>();
    }
    detail::check_tail_parameters(s);
    return out;
}

inline ReferenceSystem spec_from_json_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    try {
        return spec_from_json(j);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("invalid system description: ") + e.what());
    }
}

inline ReferenceSystem load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return spec_from_json_text(os.str());
}

}  // namespace cifs
