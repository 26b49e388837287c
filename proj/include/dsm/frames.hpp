#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dsm/errors.hpp"

namespace dsm {

class Frame;
using FramePtr = std::shared_ptr<const Frame>;

// Finite frame of discernment under Shafer's model: an ordered list of
// mutually exclusive atoms. Subsets of the power-set are bitmasks over the
// atom indices (bit i set <=> atom i included), so the whole power-set of a
// frame fits a machine word (size capped at 24 atoms).
//
// A product frame records its factor frames; its atom at index
//   i = d_0 + d_1*n_0 + d_2*n_0*n_1 + ...
// is the tuple whose k-th component is atom d_k of factor k. The first
// factor varies fastest, which reproduces the theta_1..theta_8 enumeration
// used by the bundled scenarios.
class Frame {
public:
    static constexpr std::size_t max_atoms = 24;

    // Plain frame from atom labels. Labels must be non-empty and unique,
    // 1 <= count <= max_atoms.
    static FramePtr make(std::vector<std::string> atoms);

    // Cartesian product of >= 2 factor frames. Atom labels default to
    // "(a,b,...)" tuples; atom_names, when given, overrides them (must match
    // the product size). The product size must stay within max_atoms.
    static FramePtr product(std::vector<FramePtr> factors,
                            std::vector<std::string> atom_names = {});

    std::size_t size() const { return atoms_.size(); }
    const std::vector<std::string>& atoms() const { return atoms_; }
    const std::string& atom(std::size_t i) const { return atoms_.at(i); }

    bool is_product() const { return !factors_.empty(); }
    const std::vector<FramePtr>& factors() const { return factors_; }

    // Identity token; subsets of distinct Frame objects never mix.
    std::uint64_t id() const { return id_; }

    // Index of an atom label, or size() if absent.
    std::size_t atom_index(std::string_view label) const;

    // Digit of product atom `atom` along factor k (requires is_product()).
    std::size_t factor_digit(std::size_t atom, std::size_t k) const;

private:
    Frame() = default;

    std::uint64_t id_ = 0;
    std::vector<std::string> atoms_;
    std::vector<FramePtr> factors_;
    std::vector<std::size_t> strides_; // per-factor stride, first factor = 1
};

// Element of the power-set of one frame, encoded as a bitmask.
// The empty mask is the empty set; the all-ones mask is total ignorance.
class Subset {
public:
    Subset(FramePtr frame, std::uint32_t bits);

    static Subset empty(FramePtr frame) { return {std::move(frame), 0}; }
    static Subset ignorance(FramePtr frame);
    static Subset atom(const FramePtr& frame, std::size_t index);
    static Subset of_atoms(const FramePtr& frame, const std::vector<std::size_t>& indices);

    const FramePtr& frame() const { return frame_; }
    std::uint32_t bits() const { return bits_; }

    std::size_t cardinality() const;
    bool is_empty() const { return bits_ == 0; }
    bool is_ignorance() const;
    bool contains_atom(std::size_t index) const { return (bits_ >> index) & 1u; }
    bool is_subset_of(const Subset& other) const;
    bool intersects(const Subset& other) const;

    Subset unite(const Subset& other) const;
    Subset intersect(const Subset& other) const;
    Subset complement() const;

    bool operator==(const Subset& other) const;
    bool operator!=(const Subset& other) const { return !(*this == other); }

    // "a+b+c" over atom labels; "{}" for the empty set.
    std::string to_string() const;

private:
    FramePtr frame_;
    std::uint32_t bits_ = 0;
};

// Cylindrical extension of `s` onto `target`: every target atom whose
// projection onto the source factors lies in `s`. The source frame must be a
// factor of `target`, or a product whose factors all appear among target's.
Subset cylinder_extend(const Subset& s, const FramePtr& target);

} // namespace dsm
