#pragma once

// Ready-made systems: continued fractions with restricted digits (real and
// complex), parabolic systems, and the reference system behind each named
// formula family.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cifs/digits.hpp"
#include "cifs/error.hpp"
#include "cifs/formulas.hpp"
#include "cifs/parabolic.hpp"
#include "cifs/pressure.hpp"
#include "cifs/spec.hpp"

namespace cifs {

namespace detail {

inline bool digit_set_has_one(const DigitSet& d) { return d.at(0) == 1; }

/// The same digit set with 1 removed.
inline DigitSet without_one(const DigitSet& d) {
    return std::visit([](const auto& k) -> DigitSet {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SpacedDigits>) return DigitSet(SpacedDigits{k.p, k.first + 1});
        else if constexpr (std::is_same_v<T, FullDigits>) return DigitSet(FullDigits{k.min + 1});
        else return DigitSet(k);
    }, d.kind());
}

}  // namespace detail

/// Continued fractions with digits in `digits` (finite part) and, optionally,
/// an infinite digit set. The inverse Gauss branch of digit 1 is not a
/// contraction, so when 1 is a digit the system is recoded as
/// {S_b : b != 1} together with {S_1 o S_b : b a digit}; the recoded pair
/// [1, b] carries the label -b.
inline CifsSpec gauss_system(std::vector<std::int64_t> digits, const std::optional<DigitSet>& tail = std::nullopt) {
    std::sort(digits.begin(), digits.end());
    digits.erase(std::unique(digits.begin(), digits.end()), digits.end());
    for (const auto b : digits)
        if (b < 1) throw ConfigError("continued fraction digits must be >= 1");
    if (tail)
        digits.erase(std::remove_if(digits.begin(), digits.end(), [&](std::int64_t b) { return tail->index_of(b).has_value(); }),
                     digits.end());
    if (digits.empty() && !tail) throw ConfigError("continued fraction system needs at least one digit");
    const bool one = (!digits.empty() && digits.front() == 1) || (tail && detail::digit_set_has_one(*tail));
    CifsSpec s;
    s.name = "gauss-digits";
    for (const auto b : digits) {
        if (b == 1) continue;
        s.explicit_maps.emplace_back(GaussBranch{b});
        s.explicit_labels.push_back(b);
    }
    if (one) {
        for (const auto b : digits) {
            s.explicit_maps.emplace_back(Composite{{GaussBranch{1}, GaussBranch{b}}});
            s.explicit_labels.push_back(-b);
        }
        if (tail && detail::digit_set_has_one(*tail)) {
            s.explicit_maps.emplace_back(Composite{{GaussBranch{1}, GaussBranch{1}}});
            s.explicit_labels.push_back(-1);
        }
    }
    if (tail) {
        const DigitSet rest = detail::digit_set_has_one(*tail) ? detail::without_one(*tail) : *tail;
        s.tails.push_back(GaussTail{rest, false});
        if (one) s.tails.push_back(GaussTail{rest, true});
    }
    return s;
}

/// Complex continued fractions with every digit in N + Z i, recoded around
/// the digit 1 on the seed disc |z - 1/2| <= 1/2.
inline CifsSpec complex_gauss_system() {
    CifsSpec s;
    s.name = "complex-gauss";
    s.ambient_dim = 2;
    s.seed = Disc{Complex(0.5, 0.0), 0.5};
    s.tails.push_back(ComplexGaussTail{false});
    s.tails.push_back(ComplexGaussTail{true});
    return s;
}

/// Parabolic system on [0, 1]: the neutral branch x (1 + q x^q)^(-1/q) and one
/// similarity placed in the middle of the gap [S_1(1), 1].
inline CifsSpec parabolic_system(double q) {
    if (!(q > 0.0)) throw ConfigError("parabolic order q must be positive");
    const double s1 = std::pow(1.0 + q, -1.0 / q);
    const double len = 1.0 - s1;
    CifsSpec s = induce_parabolic(q, {ParabolicBranch{q, 1}, Similarity{len / 2.0, s1 + len / 4.0}});
    s.name = "parabolic";
    return s;
}

/// Which cloud of a reference system the family's formula describes.
enum class CloudKind { limit_set, fixed_points };

struct ReferenceSystem {
    CifsSpec spec;
    CloudKind cloud = CloudKind::limit_set;
};

/// A system realising a named family. Families whose formula is stated for
/// any digit set of a given shape use a canonical representative.
inline ReferenceSystem reference_system(const std::string& family, const std::map<std::string, double>& ps) {
    const auto get = [&](const char* k) { return detail::param(ps, k); };
    if (family == "sharp") return {build_sharp_family(get("p"), get("t"), get("h")), CloudKind::limit_set};
    if (family == "fp") {
        const double p = get("p");
        // the fixed points of any sharp system with t = p + 1 are {i^-p : i >= 2}
        return {build_sharp_family(p, p + 1.0, 0.5 * (1.0 / (p + 1.0) + 1.0)), CloudKind::fixed_points};
    }
    if (family == "ctd-spaced") return {gauss_system({}, DigitSet(SpacedDigits{get("p"), 2})), CloudKind::limit_set};
    if (family == "ctd-clustered") return {gauss_system({}, DigitSet(ClusteredDigits{get("alpha"), 1})), CloudKind::limit_set};
    if (family == "dense-cf") return {gauss_system({}, DigitSet(FullDigits{2})), CloudKind::limit_set};
    if (family == "complex-cf") return {complex_gauss_system(), CloudKind::limit_set};
    if (family == "parabolic") return {parabolic_system(get("q")), CloudKind::limit_set};
    if (family == "backwards-cf") return {renyi_parabolic_spec({2, 3}), CloudKind::limit_set};
    throw ConfigError("unknown family '" + family + "'");
}

/// True when the family's h is a property of its reference system and may be
/// computed instead of supplied.
inline bool family_h_is_derived(const std::string& family) {
    return family == "ctd-spaced" || family == "ctd-clustered" || family == "dense-cf" || family == "parabolic" ||
           family == "backwards-cf";
}

}  // namespace cifs
