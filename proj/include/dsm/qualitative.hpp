#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dsm/fusion.hpp"
#include "dsm/transforms.hpp"

namespace dsm {

// Equidistant label set L_0 .. L_{m+1} with L_0 = 0 and L_{m+1} = 1, so
// label L_i maps to i/(m+1) exactly. m counts the interior labels.
struct LabelSet {
    int interior = 1;

    int max_index() const { return interior + 1; }
    double value_of(double index) const;
    double index_of(double value) const;

    bool operator==(const LabelSet& o) const { return interior == o.interior; }
};

LabelSet make_label_set(int interior_labels);

// Real-indexed label under the equidistant mapping.
struct RefinedLabel {
    double index = 0.0;
    LabelSet set;

    double value() const { return set.value_of(index); }
    // "L1.08" style, two decimals (full precision stays in `index`).
    std::string to_string() const;
};

double label_to_number(const RefinedLabel& label);
RefinedLabel number_to_refined(double value, const LabelSet& set);

// Nearest integer label; an exact half rounds to the larger index.
int crude_round(const RefinedLabel& label);

// Label-valued bba: the numeric pipeline result plus its label views.
class QualitativeMassFunction {
public:
    QualitativeMassFunction(LabelSet set, MassFunction numeric)
        : set_(set), numeric_(std::move(numeric)) {}

    const LabelSet& labels() const { return set_; }
    const MassFunction& numeric() const { return numeric_; }

    // Refined index per focal element; qualitatively normalized
    // (indices sum to m+1) up to floating point.
    std::map<std::uint32_t, double> refined_indices() const;

    struct CrudeView {
        std::map<std::uint32_t, int> labels;
        bool normalized = false; // rounding may break the sum
    };
    CrudeView crude() const;

private:
    LabelSet set_;
    MassFunction numeric_;
};

// Label-valued probability distribution (for qDSmP).
class QualitativeDistribution {
public:
    QualitativeDistribution(LabelSet set, ProbabilityDistribution numeric)
        : set_(set), numeric_(std::move(numeric)) {}

    const LabelSet& labels() const { return set_; }
    const ProbabilityDistribution& numeric() const { return numeric_; }

    std::vector<double> refined_indices() const;
    std::vector<int> crude_labels() const;

private:
    LabelSet set_;
    ProbabilityDistribution numeric_;
};

// One source's label masses: integer label index per focal element.
using LabelMassMap = std::map<std::uint32_t, int>;

// Map labels to numbers, run the precise combination rule, keep the result
// with full precision behind its refined/crude label views. Every source
// must be qualitatively normalized: its label indices sum to exactly m+1.
QualitativeMassFunction qualitative_fuse(const FramePtr& frame,
                                         const std::vector<LabelMassMap>& sources,
                                         FusionRule rule, const LabelSet& set);

QualitativeDistribution qualitative_dsmp(const QualitativeMassFunction& m,
                                         double eps = kDefaultEpsilon);

// Refined-mode belief/plausibility of a hypothesis.
std::pair<RefinedLabel, RefinedLabel> qualitative_bel_pl(const QualitativeMassFunction& m,
                                                         const Subset& x);

} // namespace dsm
