#include "geoflow/fuchsian.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

/// Geodesic circle through two boundary points (orthogonal to the unit
/// circle).  The circle interior covers the boundary arc between them.
Wall geodesic_between(Complex p1, Complex p2, char letter = '0') {
    const double t1 = std::arg(p1);
    double t2 = std::arg(p2);
    // take the representation with |t2 - t1| < pi (arc shorter than half)
    while (t2 - t1 > std::numbers::pi) t2 -= 2.0 * std::numbers::pi;
    while (t1 - t2 > std::numbers::pi) t2 += 2.0 * std::numbers::pi;
    const double gamma = 0.5 * std::abs(t2 - t1);
    if (gamma < 1e-12 || gamma > 0.5 * std::numbers::pi - 1e-12)
        throw Error("degenerate geodesic between boundary points");
    const double mid = 0.5 * (t1 + t2);
    return Wall{letter, std::polar(1.0 / std::cos(gamma), mid), std::tan(gamma)};
}

/// Wall of the geodesic perpendicular to the ray at angle theta, crossing it
/// at Euclidean radius foot.
Wall perpendicular_wall(char letter, double theta, double foot) {
    const double c = 0.5 * (foot + 1.0 / foot);
    const double r = 0.5 * (1.0 / foot - foot);
    return Wall{letter, std::polar(c, theta), r};
}

std::string free_reduce(const std::string& word) {
    std::string out;
    for (char c : word) {
        if (!out.empty() && out.back() == FuchsianGroup::invert_letter(c))
            out.pop_back();
        else
            out.push_back(c);
    }
    return out;
}

std::string cyclic_reduce(std::string w) {
    w = free_reduce(w);
    while (w.size() >= 2 && w.front() == FuchsianGroup::invert_letter(w.back())) {
        w = w.substr(1, w.size() - 2);
        w = free_reduce(w);
    }
    return w;
}

std::string min_rotation_key(const std::string& w) {
    if (w.empty()) return w;
    std::string best = w;
    std::string rot = w;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

}  // namespace

char FuchsianGroup::invert_letter(char c) {
    return std::isupper(static_cast<unsigned char>(c))
               ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
               : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

std::string FuchsianGroup::invert_word(const std::string& word) {
    std::string out(word.rbegin(), word.rend());
    for (char& c : out) c = invert_letter(c);
    return out;
}

MobiusTransform FuchsianGroup::word_transform(const std::string& word) const {
    MobiusTransform g;
    for (char c : word) g = g * generator(c);
    g.set_label(word);
    return g;
}

int FuchsianGroup::wall_hit(Complex z) const {
    const auto& ws = walls();
    int best = -1;
    double depth = 0.0;  // pick the most deeply entered wall near vertices
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const double d = ws[i].signed_distance(z);
        if (d < depth) {
            depth = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

bool FuchsianGroup::in_core(Complex z) const {
    if (!in_fundamental_domain(z)) return false;
    for (const auto& gate : core_gates())
        if (gate.contains(z)) return false;
    return true;
}

std::pair<Complex, MobiusTransform> FuchsianGroup::project(Complex z, int max_iter) const {
    if (std::abs(z) >= 1.0) throw Error("projection requires a point of the open disk");
    MobiusTransform h;
    for (int it = 0; it < max_iter; ++it) {
        const int w = wall_hit(z);
        if (w < 0) return {z, h};
        const MobiusTransform step = generator(walls()[w].letter).inverse();
        z = step.apply(z);
        h = step * h;
    }
    throw MaxIterations("fundamental-domain projection did not resolve (point too close "
                        "to the limit set)");
}

std::vector<GeodesicClass> FuchsianGroup::enumerate_classes(int max_word_length) const {
    std::set<std::string> seen;
    std::vector<GeodesicClass> out;
    std::string letters;
    for (char c : alphabet()) {
        letters.push_back(c);
        letters.push_back(invert_letter(c));
    }

    std::string word;
    auto visit = [&](auto&& self) -> void {
        if (!word.empty()) {
            const std::string cyc = cyclic_reduce(word);
            if (!cyc.empty() && cyc.size() == word.size()) {
                const std::string key = canonical_class_word(word);
                if (!key.empty() && !seen.count(key)) {
                    seen.insert(key);
                    GeodesicClass cls;
                    cls.word = key;
                    cls.transform = word_transform(key);
                    if (cls.transform.is_hyperbolic()) {
                        cls.length = cls.transform.translation_length();
                        auto [rep, att] = cls.transform.axis_endpoints();
                        cls.axis_repelling = rep;
                        cls.axis_attracting = att;
                        out.push_back(std::move(cls));
                    }
                }
            }
        }
        if (static_cast<int>(word.size()) >= max_word_length) return;
        for (char c : letters) {
            if (!word.empty() && word.back() == invert_letter(c)) continue;
            word.push_back(c);
            self(self);
            word.pop_back();
        }
    };
    visit(visit);

    std::sort(out.begin(), out.end(), [](const GeodesicClass& x, const GeodesicClass& y) {
        if (x.length != y.length) return x.length < y.length;
        return x.word < y.word;
    });
    return out;
}

double FuchsianGroup::wall_separation() const {
    const auto& ws = walls();
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ws.size(); ++i)
        for (std::size_t j = i + 1; j < ws.size(); ++j)
            sep = std::min(sep, std::abs(ws[i].center - ws[j].center) - ws[i].radius -
                                    ws[j].radius);
    return sep;
}

double FuchsianGroup::min_displacement(Complex z, int safety_length) const {
    std::string letters;
    for (char c : alphabet()) {
        letters.push_back(c);
        letters.push_back(invert_letter(c));
    }
    double best = std::numeric_limits<double>::infinity();
    std::string word;
    auto visit = [&](auto&& self) -> void {
        if (!word.empty() && reduce_word(word).size() == word.size()) {
            const MobiusTransform g = word_transform(word);
            if (g.distance_to_identity() > 1e-9)
                best = std::min(best, hyperbolic_distance(z, g.apply(z)));
        }
        if (static_cast<int>(word.size()) >= safety_length) return;
        for (char c : letters) {
            if (!word.empty() && word.back() == invert_letter(c)) continue;
            word.push_back(c);
            self(self);
            word.pop_back();
        }
    };
    visit(visit);
    return best;
}

// ---------------------------------------------------------------------------
// Rank-2 Schottky group
// ---------------------------------------------------------------------------

SchottkyGroup::SchottkyGroup(double wall_foot) : foot_(wall_foot) {
    if (!(wall_foot > 0.0 && wall_foot < 1.0))
        throw Error("Schottky wall foot must lie in (0, 1)");
    length_ = 4.0 * std::atanh(wall_foot);
    gen_a_ = MobiusTransform::axis_translation(length_);
    gen_a_.set_label("a");
    const MobiusTransform rot = MobiusTransform::rotation(0.5 * std::numbers::pi);
    gen_b_ = rot * gen_a_ * rot.inverse();
    gen_b_.set_label("b");

    walls_ = {
        perpendicular_wall('a', 0.0, wall_foot),
        perpendicular_wall('A', std::numbers::pi, wall_foot),
        perpendicular_wall('b', 0.5 * std::numbers::pi, wall_foot),
        perpendicular_wall('B', 1.5 * std::numbers::pi, wall_foot),
    };
    if (wall_separation() <= 0.0)
        throw Error("Schottky pairing circles overlap; reduce the wall foot");

    // Convex-core gates: the axes of the four cyclic rotations of the
    // commutator bound the four funnel mouths.
    std::string w = "abAB";
    std::vector<Wall> found;
    for (int i = 0; i < 4; ++i) {
        const MobiusTransform g = word_transform(w);
        auto [rep, att] = g.axis_endpoints();
        found.push_back(geodesic_between(rep, att, 'g'));
        std::rotate(w.begin(), w.begin() + 1, w.end());
    }
    // Each gate must cover exactly one diagonal funnel direction and keep
    // the origin inside the core.
    for (int q = 0; q < 4; ++q) {
        const Complex dir = std::polar(1.0, (0.25 + 0.5 * q) * std::numbers::pi);
        int hits = 0;
        for (const auto& gate : found) {
            if (gate.contains(0.97 * dir)) {
                if (gate.contains(Complex(0.0, 0.0)))
                    throw Error("Schottky core gate contains the origin");
                gates_.push_back(gate);
                ++hits;
            }
        }
        if (hits != 1) throw Error("Schottky core gates do not tile the funnels");
    }
}

MobiusTransform SchottkyGroup::generator(char letter) const {
    switch (letter) {
        case 'a': return gen_a_;
        case 'A': return gen_a_.inverse();
        case 'b': return gen_b_;
        case 'B': return gen_b_.inverse();
        default: throw Error(std::string("unknown generator letter '") + letter + "'");
    }
}

std::string SchottkyGroup::reduce_word(const std::string& word) const {
    return free_reduce(word);
}

std::string SchottkyGroup::canonical_class_word(const std::string& word) const {
    const std::string w = cyclic_reduce(word);
    if (w.empty()) return w;
    const std::string k1 = min_rotation_key(w);
    const std::string k2 = min_rotation_key(invert_word(w));
    return std::min(k1, k2);
}

// ---------------------------------------------------------------------------
// Genus-2 octagon group
// ---------------------------------------------------------------------------

OctagonGroup::OctagonGroup() {
    // Regular octagon with vertex angle pi/4: center-to-side distance d with
    // cosh d = cot(pi/8) = 1 + sqrt(2).
    const double d = std::acosh(1.0 + std::sqrt(2.0));
    length_ = 2.0 * d;
    const double foot = std::tanh(0.5 * d);

    gens_.reserve(4);
    for (int k = 0; k < 4; ++k) {
        const MobiusTransform rot = MobiusTransform::rotation(0.25 * std::numbers::pi * k);
        MobiusTransform g = rot * MobiusTransform::axis_translation(length_) * rot.inverse();
        g.set_label(std::string(1, char('a' + k)));
        gens_.push_back(g);
    }
    for (int k = 0; k < 8; ++k) {
        const char letter = k < 4 ? char('a' + k) : char('A' + (k - 4));
        walls_.push_back(perpendicular_wall(letter, 0.25 * std::numbers::pi * k, foot));
    }

    // Relator of the opposite-side pairing; the constructor verifies that the
    // generator matrices close it up to sign.
    relator_ = "aBcDAbCd";
    {
        const MobiusTransform r = word_transform(relator_);
        const bool plus_id = r.distance_to_identity() < 1e-9;
        const bool minus_id =
            std::abs(r.alpha() + Complex(1.0, 0.0)) < 1e-9 && std::abs(r.beta()) < 1e-9;
        if (!plus_id && !minus_id) throw Error("octagon relator does not close");
    }
    std::string w = relator_;
    for (int i = 0; i < 8; ++i) {
        relator_rotations_.push_back(w);
        std::rotate(w.begin(), w.begin() + 1, w.end());
    }
    w = FuchsianGroup::invert_word(relator_);
    for (int i = 0; i < 8; ++i) {
        relator_rotations_.push_back(w);
        std::rotate(w.begin(), w.begin() + 1, w.end());
    }
}

MobiusTransform OctagonGroup::generator(char letter) const {
    if (letter >= 'a' && letter <= 'd') return gens_[letter - 'a'];
    if (letter >= 'A' && letter <= 'D') return gens_[letter - 'A'].inverse();
    throw Error(std::string("unknown generator letter '") + letter + "'");
}

std::string OctagonGroup::reduce_word(const std::string& word) const {
    // Dehn reduction: free reduction plus replacement of any subword covering
    // more than half of a relator rotation by the shorter complement.
    std::string w = free_reduce(word);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rel : relator_rotations_) {
            for (std::size_t len = 7; len >= 5; --len) {
                const std::string piece = rel.substr(0, len);
                const auto pos = w.find(piece);
                if (pos == std::string::npos) continue;
                const std::string tail = rel.substr(len);  // piece * tail == 1
                w = free_reduce(w.substr(0, pos) + invert_word(tail) + w.substr(pos + len));
                changed = true;
                break;
            }
            if (changed) break;
        }
    }
    return w;
}

std::string OctagonGroup::canonical_class_word(const std::string& word) const {
    // Conjugacy canonical form: close the cyclic word under rotation,
    // inversion, Dehn shortening and half-relator swaps; return the smallest
    // representative reached.
    std::string start = cyclic_reduce(reduce_word(word));
    if (start.empty()) return start;

    std::set<std::string> seen{start};
    std::vector<std::string> queue{start};
    std::string best = start;
    bool trivial = false;
    auto push = [&](std::string w) {
        w = cyclic_reduce(free_reduce(w));
        if (w.empty()) {
            trivial = true;
            return;
        }
        if (seen.insert(w).second) {
            queue.push_back(w);
            if (w.size() < best.size() || (w.size() == best.size() && w < best)) best = w;
        }
    };

    while (!queue.empty() && seen.size() < 4096 && !trivial) {
        std::string w = queue.back();
        queue.pop_back();
        // Skip words longer than the current best; shortening moves already
        // queued their reductions.
        if (w.size() > best.size()) continue;

        std::string rot = w;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            push(rot);
        }
        push(invert_word(w));

        // Relator moves on the cyclic word: scan subwords of the doubled word.
        const std::string dw = w + w;
        for (const auto& rel : relator_rotations_) {
            for (std::size_t len = 4; len <= std::min<std::size_t>(7, w.size()); ++len) {
                const std::string piece = rel.substr(0, len);
                auto pos = dw.find(piece);
                while (pos != std::string::npos && pos < w.size()) {
                    const std::string tail = rel.substr(len);
                    const std::string rest = dw.substr(pos + len, w.size() - len);
                    push(invert_word(tail) + rest);
                    pos = dw.find(piece, pos + 1);
                }
            }
        }
    }
    return trivial ? std::string() : best;
}

std::unique_ptr<FuchsianGroup> make_group(const std::string& kind, double wall_foot) {
    if (kind == "schottky") return std::make_unique<SchottkyGroup>(wall_foot);
    if (kind == "genus2") return std::make_unique<OctagonGroup>();
    throw ConfigError("unknown group kind '" + kind + "' (expected schottky | genus2)");
}

}  // namespace geoflow
