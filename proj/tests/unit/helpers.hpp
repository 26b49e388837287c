#pragma once

#include <map>
#include <random>
#include <vector>

#include "dsm/fusion.hpp"
#include "dsm/mass.hpp"

// Shared fixtures: the three marginal frames, their product with the
// theta1..theta8 naming, and the four standard sources.
namespace vbied {

struct Fixture {
    dsm::FramePtr theta1, theta2, theta3, theta12, theta;
    dsm::Subset f1, f2, f3, it, t6, t8;

    Fixture()
        : theta1(dsm::Frame::make({"notA", "A"})),
          theta2(dsm::Frame::make({"notV", "V"})),
          theta3(dsm::Frame::make({"notB", "B"})),
          theta12(dsm::Frame::product({theta1, theta2})),
          theta(dsm::Frame::product({theta1, theta2, theta3},
                                    {"theta1", "theta2", "theta3", "theta4", "theta5", "theta6",
                                     "theta7", "theta8"})),
          f1(dsm::Subset::of_atoms(theta, {3, 7})),
          f2(dsm::Subset::of_atoms(theta, {5, 7})),
          f3(f1.complement()),
          it(dsm::Subset::ignorance(theta)),
          t6(dsm::Subset::atom(theta, 5)),
          t8(dsm::Subset::atom(theta, 7)) {}

    dsm::MassFunction source(std::map<std::uint32_t, double> focal) const {
        return dsm::MassFunction::make(theta, {focal.begin(), focal.end()});
    }

    // Table 1: m0(f1)=1; m1(f2)=.75,m1(It)=.25; m2(f1)=.3,m2(f3)=.7;
    // m3(f2)=.25,m3(It)=.75.
    std::vector<dsm::MassFunction> table1() const {
        return {source({{f1.bits(), 1.0}}),
                source({{f2.bits(), 0.75}, {it.bits(), 0.25}}),
                source({{f1.bits(), 0.3}, {f3.bits(), 0.7}}),
                source({{f2.bits(), 0.25}, {it.bits(), 0.75}})};
    }
};

} // namespace vbied

// Random corpora for the property suites.
namespace gen {

struct RandomBba {
    dsm::FramePtr frame;
    std::vector<dsm::MassFunction> sources;
};

inline dsm::MassFunction random_mass(std::mt19937_64& rng, const dsm::FramePtr& frame,
                                     std::size_t max_focals) {
    const std::uint32_t all = (1u << frame->size()) - 1u;
    std::uniform_int_distribution<std::uint32_t> subset_dist(1, all);
    std::uniform_real_distribution<double> mass_dist(0.05, 1.0);
    std::uniform_int_distribution<std::size_t> count_dist(1, max_focals);

    std::map<std::uint32_t, double> focal;
    const auto want = std::min<std::size_t>(count_dist(rng), all); // all = distinct subsets
    while (focal.size() < want)
        focal.emplace(subset_dist(rng), mass_dist(rng));
    double total = 0.0;
    for (const auto& [bits, v] : focal)
        total += v;
    dsm::MassFunction::FocalMap normalized;
    for (const auto& [bits, v] : focal)
        normalized[bits] = v / total;
    return dsm::MassFunction::make(frame, std::move(normalized));
}

inline RandomBba random_instance(std::mt19937_64& rng, std::size_t max_atoms,
                                 std::size_t max_sources, std::size_t max_focals) {
    std::uniform_int_distribution<std::size_t> atoms_dist(2, max_atoms);
    std::uniform_int_distribution<std::size_t> sources_dist(2, max_sources);
    const auto n = atoms_dist(rng);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back("a" + std::to_string(i));
    RandomBba out;
    out.frame = dsm::Frame::make(labels);
    const auto k = sources_dist(rng);
    for (std::size_t i = 0; i < k; ++i)
        out.sources.push_back(random_mass(rng, out.frame, max_focals));
    return out;
}

} // namespace gen
