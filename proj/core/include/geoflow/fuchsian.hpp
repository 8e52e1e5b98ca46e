#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "geoflow/mobius.hpp"

namespace geoflow {

/// One geodesic wall of the fundamental domain, stored as its Euclidean
/// circle (orthogonal to the boundary circle).  A point strictly inside the
/// circle lies beyond the wall, i.e. in the tile letter * F (or deeper).
struct Wall {
    char letter;     // generator letter whose tile lies behind this wall
    Complex center;  // Euclidean circle center (|center| > 1)
    double radius;

    bool contains(Complex z) const { return std::norm(z - center) < radius * radius; }
    /// Signed Euclidean distance to the circle (negative inside).
    double signed_distance(Complex z) const {
        return std::abs(z - center) - radius;
    }
};

/// A conjugacy class of the group: an unoriented closed geodesic.
struct GeodesicClass {
    std::string word;  // canonical cyclically reduced representative
    MobiusTransform transform;
    double length = 0.0;
    Complex axis_repelling, axis_attracting;
};

/// Discrete group of disk isometries with a circle-sided fundamental domain.
class FuchsianGroup {
public:
    virtual ~FuchsianGroup() = default;

    virtual std::string kind() const = 0;
    /// Generator letters, lower case; inverses are upper case.
    virtual const std::string& alphabet() const = 0;
    virtual const std::vector<Wall>& walls() const = 0;
    /// Geodesics bounding the convex core inside the fundamental domain
    /// (empty when the quotient is compact).
    virtual const std::vector<Wall>& core_gates() const = 0;

    virtual MobiusTransform generator(char letter) const = 0;

    /// Canonical key of a conjugacy class (dedup under cyclic rotation,
    /// inversion and, for non-free groups, relator moves).
    virtual std::string canonical_class_word(const std::string& word) const = 0;

    /// Reduce a word to freely/Dehn-reduced form (not cyclically).
    virtual std::string reduce_word(const std::string& word) const = 0;

    static char invert_letter(char c);
    static std::string invert_word(const std::string& word);

    MobiusTransform word_transform(const std::string& word) const;

    /// Index of the wall whose circle contains z, or -1 when z is in the
    /// fundamental domain.
    int wall_hit(Complex z) const;
    bool in_fundamental_domain(Complex z) const { return wall_hit(z) < 0; }
    /// Inside the fundamental domain and not beyond any core gate.
    bool in_core(Complex z) const;

    /// Ping-pong projection to the fundamental domain: returns the
    /// representative and the deck transform h with h(z) = representative.
    /// Throws MaxIterations for points that do not resolve (limit set).
    std::pair<Complex, MobiusTransform> project(Complex z, int max_iter = 256) const;

    /// All conjugacy classes with (reduced) word length <= max_word_length,
    /// sorted by translation length, then word.
    std::vector<GeodesicClass> enumerate_classes(int max_word_length) const;

    /// Separation margin: smallest pairwise Euclidean gap between wall
    /// circles (sanity diagnostic; positive for valid ping-pong data).
    double wall_separation() const;

    /// Minimal hyperbolic displacement of a point under nontrivial group
    /// elements with words up to the safety length.
    double min_displacement(Complex z, int safety_length = 4) const;
};

/// Rank-2 classical Schottky group.  The four pairing walls are the
/// geodesics perpendicular to the +-real / +-imaginary axes at Euclidean
/// distance wall_foot from the center; generator a translates along the real
/// axis (attracting +1), generator b along the imaginary axis (attracting
/// +i), both with translation length 4 artanh(wall_foot).
class SchottkyGroup final : public FuchsianGroup {
public:
    explicit SchottkyGroup(double wall_foot = 0.6);

    std::string kind() const override { return "schottky"; }
    const std::string& alphabet() const override { return alphabet_; }
    const std::vector<Wall>& walls() const override { return walls_; }
    const std::vector<Wall>& core_gates() const override { return gates_; }
    MobiusTransform generator(char letter) const override;
    std::string canonical_class_word(const std::string& word) const override;
    std::string reduce_word(const std::string& word) const override;

    double generator_length() const { return length_; }

private:
    double foot_;
    double length_;
    std::string alphabet_ = "ab";
    std::vector<Wall> walls_;
    std::vector<Wall> gates_;
    MobiusTransform gen_a_, gen_b_;
};

/// Genus-2 surface group from the regular hyperbolic octagon with vertex
/// angles pi/4 and opposite sides identified by the four translations
/// through the center.  Census canonicalization uses the length-8 relator
/// with Dehn shortening and half-relator swaps.
class OctagonGroup final : public FuchsianGroup {
public:
    OctagonGroup();

    std::string kind() const override { return "genus2"; }
    const std::string& alphabet() const override { return alphabet_; }
    const std::vector<Wall>& walls() const override { return walls_; }
    const std::vector<Wall>& core_gates() const override { return gates_; }
    MobiusTransform generator(char letter) const override;
    std::string canonical_class_word(const std::string& word) const override;
    std::string reduce_word(const std::string& word) const override;

    const std::string& relator() const { return relator_; }
    double side_pairing_length() const { return length_; }

private:
    std::string alphabet_ = "abcd";
    std::vector<Wall> walls_;
    std::vector<Wall> gates_;  // empty: compact quotient
    std::vector<MobiusTransform> gens_;
    std::string relator_;
    double length_ = 0.0;
    std::vector<std::string> relator_rotations_;
};

std::unique_ptr<FuchsianGroup> make_group(const std::string& kind, double wall_foot = 0.6);

}  // namespace geoflow
