#include "dsm/frames.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <unordered_set>

namespace dsm {

namespace {

std::uint64_t next_frame_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

void check_same_frame(const Subset& a, const Subset& b) {
    if (a.frame()->id() != b.frame()->id())
        throw FrameError("subset operation across distinct frames");
}

} // namespace

FramePtr Frame::make(std::vector<std::string> atoms) {
    if (atoms.empty())
        throw FrameError("frame needs at least one atom");
    if (atoms.size() > max_atoms)
        throw FrameError("frame exceeds " + std::to_string(max_atoms) + " atoms");
    std::unordered_set<std::string_view> seen;
    for (const auto& a : atoms) {
        if (a.empty())
            throw FrameError("empty atom label");
        if (!seen.insert(a).second)
            throw FrameError("duplicate atom label '" + a + "'");
    }
    auto f = std::shared_ptr<Frame>(new Frame());
    f->id_ = next_frame_id();
    f->atoms_ = std::move(atoms);
    return f;
}

FramePtr Frame::product(std::vector<FramePtr> factors, std::vector<std::string> atom_names) {
    if (factors.size() < 2)
        throw FrameError("product frame needs at least two factors");
    std::size_t size = 1;
    for (const auto& fac : factors) {
        if (!fac)
            throw FrameError("null factor frame");
        size *= fac->size();
        if (size > max_atoms)
            throw FrameError("product frame exceeds " + std::to_string(max_atoms) + " atoms");
    }
    auto f = std::shared_ptr<Frame>(new Frame());
    f->id_ = next_frame_id();
    f->factors_ = std::move(factors);
    f->strides_.resize(f->factors_.size());
    std::size_t stride = 1;
    for (std::size_t k = 0; k < f->factors_.size(); ++k) {
        f->strides_[k] = stride;
        stride *= f->factors_[k]->size();
    }
    if (!atom_names.empty()) {
        if (atom_names.size() != size)
            throw FrameError("atom_names size does not match product size");
        f->atoms_ = std::move(atom_names);
        std::unordered_set<std::string_view> seen;
        for (const auto& a : f->atoms_) {
            if (a.empty())
                throw FrameError("empty atom label");
            if (!seen.insert(a).second)
                throw FrameError("duplicate atom label '" + a + "'");
        }
    } else {
        f->atoms_.reserve(size);
        for (std::size_t i = 0; i < size; ++i) {
            std::string label = "(";
            for (std::size_t k = 0; k < f->factors_.size(); ++k) {
                if (k)
                    label += ',';
                label += f->factors_[k]->atom((i / f->strides_[k]) % f->factors_[k]->size());
            }
            label += ')';
            f->atoms_.push_back(std::move(label));
        }
    }
    return f;
}

std::size_t Frame::atom_index(std::string_view label) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i] == label)
            return i;
    return atoms_.size();
}

std::size_t Frame::factor_digit(std::size_t atom, std::size_t k) const {
    return (atom / strides_.at(k)) % factors_.at(k)->size();
}

Subset::Subset(FramePtr frame, std::uint32_t bits) : frame_(std::move(frame)), bits_(bits) {
    if (!frame_)
        throw FrameError("subset needs a frame");
    if (bits_ >> frame_->size())
        throw FrameError("subset bits outside the frame");
}

Subset Subset::ignorance(FramePtr frame) {
    if (!frame)
        throw FrameError("subset needs a frame");
    const auto n = frame->size();
    return {std::move(frame), static_cast<std::uint32_t>((1u << n) - 1u)};
}

Subset Subset::atom(const FramePtr& frame, std::size_t index) {
    if (!frame || index >= frame->size())
        throw FrameError("atom index outside the frame");
    return {frame, static_cast<std::uint32_t>(1u << index)};
}

Subset Subset::of_atoms(const FramePtr& frame, const std::vector<std::size_t>& indices) {
    std::uint32_t bits = 0;
    for (auto i : indices) {
        if (!frame || i >= frame->size())
            throw FrameError("atom index outside the frame");
        bits |= 1u << i;
    }
    return {frame, bits};
}

std::size_t Subset::cardinality() const {
    return static_cast<std::size_t>(std::popcount(bits_));
}

bool Subset::is_ignorance() const {
    return bits_ == Subset::ignorance(frame_).bits();
}

bool Subset::is_subset_of(const Subset& other) const {
    check_same_frame(*this, other);
    return (bits_ & ~other.bits_) == 0;
}

bool Subset::intersects(const Subset& other) const {
    check_same_frame(*this, other);
    return (bits_ & other.bits_) != 0;
}

Subset Subset::unite(const Subset& other) const {
    check_same_frame(*this, other);
    return {frame_, bits_ | other.bits_};
}

Subset Subset::intersect(const Subset& other) const {
    check_same_frame(*this, other);
    return {frame_, bits_ & other.bits_};
}

Subset Subset::complement() const {
    const auto all = Subset::ignorance(frame_).bits();
    return {frame_, static_cast<std::uint32_t>(~bits_ & all)};
}

bool Subset::operator==(const Subset& other) const {
    return frame_->id() == other.frame_->id() && bits_ == other.bits_;
}

std::string Subset::to_string() const {
    if (bits_ == 0)
        return "{}";
    std::string out;
    for (std::size_t i = 0; i < frame_->size(); ++i) {
        if (!contains_atom(i))
            continue;
        if (!out.empty())
            out += '+';
        out += frame_->atom(i);
    }
    return out;
}

Subset cylinder_extend(const Subset& s, const FramePtr& target) {
    if (!target || !target->is_product())
        throw FrameError("cylinder extension target must be a product frame");
    const auto& src = s.frame();
    if (src->id() == target->id())
        return s;

    // Source factors, in source order.
    std::vector<FramePtr> src_factors =
        src->is_product() ? src->factors() : std::vector<FramePtr>{src};

    // Position of each source factor inside the target.
    std::vector<std::size_t> pos(src_factors.size());
    for (std::size_t k = 0; k < src_factors.size(); ++k) {
        std::size_t found = target->factors().size();
        for (std::size_t j = 0; j < target->factors().size(); ++j)
            if (target->factors()[j]->id() == src_factors[k]->id())
                found = j;
        if (found == target->factors().size())
            throw FrameError("source factors are not all factors of the target frame");
        pos[k] = found;
    }

    // Source atom index strides (first factor fastest, same convention).
    std::vector<std::size_t> src_strides(src_factors.size());
    std::size_t stride = 1;
    for (std::size_t k = 0; k < src_factors.size(); ++k) {
        src_strides[k] = stride;
        stride *= src_factors[k]->size();
    }

    std::uint32_t out = 0;
    for (std::size_t i = 0; i < target->size(); ++i) {
        std::size_t src_atom = 0;
        for (std::size_t k = 0; k < src_factors.size(); ++k)
            src_atom += target->factor_digit(i, pos[k]) * src_strides[k];
        if (s.contains_atom(src_atom))
            out |= 1u << i;
    }
    return {target, out};
}

} // namespace dsm
