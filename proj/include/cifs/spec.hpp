#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cifs/error.hpp"
#include "cifs/geometry.hpp"
#include "cifs/maps.hpp"
#include "cifs/tails.hpp"

namespace cifs {

/// A possibly infinite family of contractions of a seed domain: finitely many
/// explicit maps followed by zero or more infinite tails.
struct CifsSpec {
    std::string name = "cifs";
    int ambient_dim = 1;
    Region seed = Interval{0.0, 1.0};
    std::vector<MapKind> explicit_maps;
    /// User-facing labels of the explicit maps; defaults to 1..m.
    std::vector<std::int64_t> explicit_labels;
    std::vector<TailRule> tails;
    std::optional<Complex> anchor;

    [[nodiscard]] bool infinite() const { return !tails.empty(); }

    [[nodiscard]] Complex anchor_point() const {
        if (anchor) return *anchor;
        if (const auto* iv = std::get_if<Interval>(&seed)) return iv->lo;
        return std::get<Disc>(seed).center;
    }

    [[nodiscard]] std::int64_t explicit_label(std::size_t j) const {
        if (j < explicit_labels.size()) return explicit_labels[j];
        return static_cast<std::int64_t>(j) + 1;
    }

    /// Stable textual digest used to tag clouds built from this spec.
    [[nodiscard]] std::string digest() const {
        std::ostringstream os;
        os.precision(17);
        os << name << "|d" << ambient_dim << "|";
        for (std::size_t j = 0; j < explicit_maps.size(); ++j) os << explicit_label(j) << ":" << describe(explicit_maps[j]) << ";";
        for (const auto& t : tails) os << describe(t) << ";";
        const Complex a = anchor_point();
        os << "x0=" << a.real() << "," << a.imag();
        const std::string s = os.str();
        // FNV-1a
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        std::ostringstream hex;
        hex << std::hex << h;
        return hex.str();
    }
};

/// Letter of the (infinite) alphabet: stream 0 indexes explicit maps, stream
/// j >= 1 indexes ordinals of tail j - 1.
struct Letter {
    int stream = 0;
    std::int64_t k = 0;
    friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

inline MapKind resolve(const CifsSpec& spec, const Letter& l) {
    if (l.k < 0) throw DomainError("negative letter index");
    if (l.stream == 0) {
        if (static_cast<std::size_t>(l.k) >= spec.explicit_maps.size())
            throw DomainError("explicit map index " + std::to_string(l.k) + " out of range");
        return spec.explicit_maps[static_cast<std::size_t>(l.k)];
    }
    if (l.stream < 0 || static_cast<std::size_t>(l.stream) > spec.tails.size())
        throw DomainError("tail stream " + std::to_string(l.stream) + " does not exist");
    return tail_map(spec.tails[static_cast<std::size_t>(l.stream - 1)], l.k);
}

/// Translate user-facing labels (digits, indices i) into letters; explicit
/// maps take precedence over tails.
inline Word word_from_labels(const CifsSpec& spec, const std::vector<std::int64_t>& labels) {
    Word w;
    for (const auto lab : labels) {
        std::optional<Letter> found;
        for (std::size_t j = 0; j < spec.explicit_maps.size() && !found; ++j)
            if (spec.explicit_label(j) == lab) found = Letter{0, static_cast<std::int64_t>(j)};
        for (std::size_t s = 0; s < spec.tails.size() && !found; ++s)
            if (auto k = tail_ordinal(spec.tails[s], lab)) found = Letter{static_cast<int>(s) + 1, *k};
        if (!found) throw DomainError("label " + std::to_string(lab) + " is not in the alphabet");
        w.push_back(*found);
    }
    return w;
}

/// Composition S_{w_1} o ... o S_{w_n}, kept as a single Moebius matrix while
/// possible and as an explicit chain otherwise.
class Transform {
public:
    Transform() = default;

    /// this o m
    [[nodiscard]] Transform then(const MapKind& m) const {
        Transform r = *this;
        if (r.chain_.empty()) {
            if (auto mm = as_moebius(m)) {
                r.mob_ = mob_.compose(*mm);
                return r;
            }
        }
        r.chain_.push_back(m);
        return r;
    }

    [[nodiscard]] Complex operator()(Complex z) const {
        for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) z = apply_map(*it, z);
        return mob_(z);
    }
    [[nodiscard]] double operator()(double x) const { return (*this)(Complex(x, 0.0)).real(); }

    [[nodiscard]] Interval image(const Interval& x) const {
        Interval cur = x;
        for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) cur = cifs::image(*it, cur);
        return mob_.image(cur);
    }
    [[nodiscard]] Disc image(const Disc& x) const {
        if (!chain_.empty()) throw DomainError("planar cylinders require Moebius maps");
        return mob_.image(x);
    }
    [[nodiscard]] Region image(const Region& r) const {
        return std::visit([&](const auto& g) -> Region { return image(g); }, r);
    }

    /// Enclosure of |T'| over a region.
    [[nodiscard]] Interval deriv_range(const Interval& x) const {
        Interval acc{1.0, 1.0};
        Interval cur = x;
        for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) {
            const Interval d = cifs::deriv_range(*it, cur);
            acc = {acc.lo * d.lo, acc.hi * d.hi};
            cur = cifs::image(*it, cur);
        }
        const Interval d = mob_.deriv_range(cur);
        return {acc.lo * d.lo, acc.hi * d.hi};
    }
    [[nodiscard]] Interval deriv_range(const Disc& x) const {
        if (!chain_.empty()) throw DomainError("planar cylinders require Moebius maps");
        return mob_.deriv_range(x);
    }
    [[nodiscard]] Interval deriv_range(const Region& r) const {
        return std::visit([&](const auto& g) { return deriv_range(g); }, r);
    }

private:
    Moebius mob_;
    std::vector<MapKind> chain_;
};

inline Transform transform_of(const CifsSpec& spec, const Word& w) {
    Transform t;
    for (const auto& l : w) t = t.then(resolve(spec, l));
    return t;
}

/// S_w(x), applying the last letter first; the empty word is the identity.
inline Complex apply_word(const CifsSpec& spec, const Word& w, Complex x) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) x = apply_map(resolve(spec, *it), x);
    return x;
}

inline double apply_word(const CifsSpec& spec, const Word& w, double x) {
    return apply_word(spec, w, Complex(x, 0.0)).real();
}

struct Cylinder {
    Word word;
    Region region;
    double diameter = 0.0;
};

/// Image of the seed domain under S_w: exact endpoint images in 1-D, the exact
/// image disc of a Moebius word in 2-D.
inline Cylinder cylinder_of(const CifsSpec& spec, const Word& w) {
    Region r = spec.seed;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        const MapKind m = resolve(spec, *it);
        r = std::visit([&](const auto& g) -> Region { return image(m, g); }, r);
    }
    return {w, r, diameter(r)};
}

}  // namespace cifs
