#include "dsm/qualitative.hpp"

#include <cmath>
#include <cstdio>

namespace dsm {

LabelSet make_label_set(int interior_labels) {
    if (interior_labels < 1)
        throw MassError("label set needs at least one interior label");
    return {interior_labels};
}

double LabelSet::value_of(double index) const {
    if (!(index >= 0.0 && index <= max_index()))
        throw MassError("label index outside [0, m+1]");
    return index / max_index();
}

double LabelSet::index_of(double value) const {
    if (!(value >= 0.0 && value <= 1.0))
        throw MassError("label value outside [0, 1]");
    return value * max_index();
}

std::string RefinedLabel::to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "L%.2f", index);
    return buf;
}

double label_to_number(const RefinedLabel& label) {
    return label.value();
}

RefinedLabel number_to_refined(double value, const LabelSet& set) {
    return {set.index_of(value), set};
}

int crude_round(const RefinedLabel& label) {
    return static_cast<int>(std::floor(label.index + 0.5));
}

std::map<std::uint32_t, double> QualitativeMassFunction::refined_indices() const {
    std::map<std::uint32_t, double> out;
    for (const auto& [bits, v] : numeric_.focal())
        out[bits] = set_.index_of(v);
    return out;
}

QualitativeMassFunction::CrudeView QualitativeMassFunction::crude() const {
    CrudeView view;
    int sum = 0;
    for (const auto& [bits, index] : refined_indices()) {
        const int rounded = crude_round({index, set_});
        view.labels[bits] = rounded;
        sum += rounded;
    }
    view.normalized = sum == set_.max_index();
    return view;
}

std::vector<double> QualitativeDistribution::refined_indices() const {
    std::vector<double> out;
    out.reserve(numeric_.p.size());
    for (double v : numeric_.p)
        out.push_back(set_.index_of(v));
    return out;
}

std::vector<int> QualitativeDistribution::crude_labels() const {
    std::vector<int> out;
    for (double index : refined_indices())
        out.push_back(crude_round({index, set_}));
    return out;
}

QualitativeMassFunction qualitative_fuse(const FramePtr& frame,
                                         const std::vector<LabelMassMap>& sources,
                                         FusionRule rule, const LabelSet& set) {
    std::vector<MassFunction> numeric;
    numeric.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) {
        int sum = 0;
        MassFunction::FocalMap focal;
        for (const auto& [bits, index] : sources[i]) {
            if (index < 0 || index > set.max_index())
                throw MassError("source " + std::to_string(i) + ": label index outside the set");
            sum += index;
            if (index > 0)
                focal[bits] = set.value_of(index);
        }
        if (sum != set.max_index())
            throw MassError("source " + std::to_string(i) +
                            " is not qualitatively normalized (labels must sum to L_" +
                            std::to_string(set.max_index()) + ")");
        numeric.push_back(MassFunction::make(frame, std::move(focal)));
    }
    auto fused = detail::combine<double>(rule, numeric, {}, false).mass;
    return {set, std::move(fused)};
}

QualitativeDistribution qualitative_dsmp(const QualitativeMassFunction& m, double eps) {
    return {m.labels(), dsmp(m.numeric(), eps)};
}

std::pair<RefinedLabel, RefinedLabel> qualitative_bel_pl(const QualitativeMassFunction& m,
                                                         const Subset& x) {
    const auto bi = delta(m.numeric(), x);
    return {number_to_refined(bi.bel, m.labels()), number_to_refined(bi.pl, m.labels())};
}

} // namespace dsm
