#include "dsm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace dsm {

using nlohmann::json;

namespace {

int report_precision() {
    if (const char* env = std::getenv(kPrecisionEnvVar)) {
        const int p = std::atoi(env);
        if (p >= 1 && p <= 12)
            return p;
    }
    return kDefaultReportPrecision;
}

std::string fmt(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

std::string fmt(const Interval& v, int precision) {
    return "[" + fmt(v.lo, precision) + ", " + fmt(v.hi, precision) + "]";
}

IntervalMassFunction to_interval(const MassFunction& m) {
    IntervalMassFunction::FocalMap focal;
    for (const auto& [bits, v] : m.focal())
        focal[bits] = Interval(v);
    return IntervalMassFunction::make(m.frame(), std::move(focal), m.allow_empty());
}

template <class S>
BasicMassFunction<S> on_main_frame(const BasicMassFunction<S>& m, const FramePtr& main) {
    return m.frame()->id() == main->id() ? m : vacuous_extension(m, main);
}

LabelMassMap labels_on_main_frame(const LabelMassMap& labels, const FramePtr& frame,
                                  const FramePtr& main) {
    if (frame->id() == main->id())
        return labels;
    LabelMassMap out;
    for (const auto& [bits, idx] : labels)
        out[cylinder_extend(Subset(frame, bits), main).bits()] = idx;
    return out;
}

PipelineReport run_pipeline(const CompiledScenario& c, const ScenarioPipeline& p) {
    PipelineReport rep;
    rep.name = p.name;
    rep.rule = p.rule;
    rep.discount = p.discount;
    rep.sources = p.sources;
    const auto& main = c.main_frame;
    const double eps = c.scenario.epsilon;

    bool any_interval = false, any_label = false;
    for (const auto& sname : p.sources) {
        const auto& src = c.source(sname);
        any_interval |= src.kind == MassKind::IntervalValued;
        any_label |= src.kind == MassKind::Labelled;
    }
    if (any_label && (any_interval || p.sources.size() !=
                                          static_cast<std::size_t>(std::count_if(
                                              p.sources.begin(), p.sources.end(),
                                              [&](const auto& n) {
                                                  return c.source(n).kind == MassKind::Labelled;
                                              }))))
        throw ScenarioError("pipeline " + p.name + ": label sources cannot mix with numeric ones");
    rep.kind = any_label ? MassKind::Labelled
                         : (any_interval ? MassKind::IntervalValued : MassKind::Precise);

    if (rep.kind != MassKind::Precise && p.discount != ScenarioPipeline::Discount::None)
        throw ScenarioError("pipeline " + p.name + ": discounting applies to precise sources only");

    if (rep.kind == MassKind::Labelled) {
        if (!c.scenario.label_set)
            throw ScenarioError("pipeline " + p.name + ": label pipeline needs a label_set");
        const auto set = make_label_set(*c.scenario.label_set);
        std::vector<LabelMassMap> maps;
        for (const auto& sname : p.sources) {
            const auto& src = c.source(sname);
            maps.push_back(labels_on_main_frame(src.labels, src.frame, main));
        }
        if (maps.size() == 1) {
            MassFunction::FocalMap focal;
            for (const auto& [bits, idx] : maps.front())
                if (idx > 0)
                    focal[bits] = set.value_of(idx);
            rep.qualitative.emplace(set, MassFunction::make(main, std::move(focal)));
        } else {
            rep.qualitative.emplace(qualitative_fuse(main, maps, p.rule, set));
        }
        rep.qdsmp.emplace(qualitative_dsmp(*rep.qualitative, eps));
        rep.evaluations = evaluate(rep.qualitative->numeric(), c.hypotheses, eps);
        return rep;
    }

    if (rep.kind == MassKind::IntervalValued) {
        std::vector<IntervalMassFunction> sources;
        for (const auto& sname : p.sources) {
            const auto& src = c.source(sname);
            auto m = src.kind == MassKind::IntervalValued ? *src.interval
                                                          : to_interval(*src.precise);
            sources.push_back(on_main_frame(m, main));
        }
        if (sources.size() == 1) {
            rep.fused_interval = sources.front();
        } else {
            auto result = interval_fuse(p.rule, sources);
            rep.fused_interval = std::move(result.mass);
            rep.interval_ledger = std::move(result.ledger);
        }
        if (p.rule != FusionRule::Conjunctive || sources.size() == 1) {
            rep.dsmp_interval = interval_dsmp(*rep.fused_interval, eps);
            rep.interval_evaluations = evaluate(*rep.fused_interval, c.hypotheses, eps);
        }
        return rep;
    }

    std::vector<MassFunction> sources;
    for (const auto& sname : p.sources)
        sources.push_back(on_main_frame(*c.source(sname).precise, main));

    if (p.discount == ScenarioPipeline::Discount::Reliability) {
        for (std::size_t i = 0; i < sources.size(); ++i)
            sources[i] = reliability_discount(sources[i], c.source(p.sources[i]).alpha);
        rep.discounted_inputs = sources;
    }

    if (p.discount == ScenarioPipeline::Discount::Importance) {
        if (sources.size() < 2)
            throw ScenarioError("pipeline " + p.name + ": importance fusion needs >= 2 sources");
        std::vector<double> betas;
        for (std::size_t i = 0; i < sources.size(); ++i) {
            betas.push_back(c.source(p.sources[i]).beta);
            rep.discounted_inputs.push_back(importance_discount(sources[i], betas.back()));
        }
        auto result = importance_fuse(sources, betas, p.rule);
        rep.fused = std::move(result.fused);
        rep.prenormal_total = result.prenormal_total;
    } else if (sources.size() == 1) {
        rep.fused = sources.front();
    } else {
        auto result = fuse(p.rule, sources);
        rep.fused = std::move(result.mass);
        rep.ledger = std::move(result.ledger);
    }

    if (p.rule != FusionRule::Conjunctive || sources.size() == 1 ||
        p.discount == ScenarioPipeline::Discount::Importance) {
        rep.dsmp_dist = dsmp(*rep.fused, eps);
        rep.betp_dist = betp(*rep.fused);
        rep.dsmp_entropy = entropy(*rep.dsmp_dist);
        rep.dsmp_pic = pic(*rep.dsmp_dist);
        rep.betp_entropy = entropy(*rep.betp_dist);
        rep.betp_pic = pic(*rep.betp_dist);
        rep.evaluations = evaluate(*rep.fused, c.hypotheses, eps);
    }
    return rep;
}

} // namespace

DecisionReport run(const CompiledScenario& c) {
    DecisionReport r;
    r.scenario_name = c.scenario.name;
    r.frame = c.main_frame;
    r.epsilon = c.scenario.epsilon;
    for (const auto& p : c.scenario.pipelines)
        r.pipelines.push_back(run_pipeline(c, p));

    if (c.scenario.comparison) {
        std::vector<std::pair<std::string, MassFunction>> subsystems;
        for (const auto& pname : c.scenario.comparison->pipelines) {
            const auto it = std::find_if(r.pipelines.begin(), r.pipelines.end(),
                                         [&](const auto& pr) { return pr.name == pname; });
            if (it == r.pipelines.end() || !it->fused)
                throw ScenarioError("comparison needs the precise fused result of '" + pname +
                                    "'");
            subsystems.emplace_back(pname, *it->fused);
        }
        r.comparison = compare_subsystems(subsystems, c.hypotheses, c.scenario.comparison->key,
                                          c.scenario.epsilon);
    }
    return r;
}

std::string render_text(const DecisionReport& r) {
    const int prec = report_precision();
    std::ostringstream out;
    out << "scenario: " << r.scenario_name << "\n";
    out << "frame: " << r.frame->size() << " atoms";
    out << "\nepsilon: " << fmt(r.epsilon, 4) << "\n";

    const auto pad = [](const std::string& s, std::size_t w) {
        return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
    };
    std::size_t setw = 12;
    for (std::size_t i = 0; i < r.frame->size(); ++i)
        setw = std::max(setw, r.frame->atom(i).size() * r.frame->size());
    setw = std::min<std::size_t>(setw, 64);

    for (const auto& p : r.pipelines) {
        out << "\n== pipeline " << p.name << " | rule " << to_string(p.rule) << " | sources";
        for (const auto& s : p.sources)
            out << ' ' << s;
        out << " ==\n";

        if (!p.discounted_inputs.empty()) {
            out << "discounted inputs:\n";
            for (std::size_t i = 0; i < p.discounted_inputs.size(); ++i) {
                out << "  " << p.sources[i] << ":";
                for (const auto& [bits, v] : p.discounted_inputs[i].focal())
                    out << "  " << p.discounted_inputs[i].subset_of(bits).to_string() << "="
                        << fmt(v, prec);
                out << "\n";
            }
        }
        if (p.prenormal_total)
            out << "pre-normalization total mass: " << fmt(*p.prenormal_total, prec) << "\n";

        if (p.fused) {
            out << "fused masses (" << to_string(p.rule) << "):\n";
            for (const auto& [bits, v] : p.fused->focal())
                out << "  " << pad(p.fused->subset_of(bits).to_string(), setw) << " "
                    << fmt(v, prec) << "\n";
        }
        if (p.fused_interval) {
            out << "fused interval masses:\n";
            for (const auto& [bits, v] : p.fused_interval->focal())
                out << "  " << pad(p.fused_interval->subset_of(bits).to_string(), setw) << " "
                    << fmt(v, prec) << "\n";
        }
        if (p.qualitative) {
            const auto crude = p.qualitative->crude();
            out << "fused qualitative masses (value / refined / crude):\n";
            for (const auto& [bits, index] : p.qualitative->refined_indices()) {
                const auto sub = p.qualitative->numeric().subset_of(bits);
                out << "  " << pad(sub.to_string(), setw) << " "
                    << fmt(p.qualitative->numeric().mass_of(bits), prec) << "  "
                    << RefinedLabel{index, p.qualitative->labels()}.to_string() << "  L"
                    << crude.labels.at(bits) << "\n";
            }
            out << "  crude view " << (crude.normalized ? "is" : "is NOT")
                << " qualitatively normalized\n";
        }

        if (p.dsmp_dist && p.betp_dist) {
            out << "transforms:\n  " << pad("atom", setw) << " " << pad("dsmp", prec + 4) << " "
                << "betp\n";
            for (std::size_t i = 0; i < r.frame->size(); ++i)
                out << "  " << pad(r.frame->atom(i), setw) << " "
                    << pad(fmt(p.dsmp_dist->p[i], prec), prec + 4) << " "
                    << fmt(p.betp_dist->p[i], prec) << "\n";
            out << "  entropy: dsmp " << fmt(p.dsmp_entropy, prec) << " (PIC "
                << fmt(p.dsmp_pic, prec) << "), betp " << fmt(p.betp_entropy, prec) << " (PIC "
                << fmt(p.betp_pic, prec) << ")\n";
        }
        if (!p.dsmp_interval.empty()) {
            out << "interval dsmp (clamped):\n";
            for (std::size_t i = 0; i < r.frame->size(); ++i)
                out << "  " << pad(r.frame->atom(i), setw) << " "
                    << fmt(clamp_unit(p.dsmp_interval[i]), prec) << "\n";
        }
        if (p.qdsmp) {
            const auto refined = p.qdsmp->refined_indices();
            const auto crude = p.qdsmp->crude_labels();
            out << "qualitative dsmp (value / refined / crude):\n";
            for (std::size_t i = 0; i < r.frame->size(); ++i)
                out << "  " << pad(r.frame->atom(i), setw) << " "
                    << fmt(p.qdsmp->numeric().p[i], prec) << "  "
                    << RefinedLabel{refined[i], p.qdsmp->labels()}.to_string() << "  L" << crude[i]
                    << "\n";
        }

        if (!p.evaluations.empty()) {
            out << "hypotheses:\n  " << pad("name", 12) << " " << pad("bel", prec + 4) << " "
                << pad("pl", prec + 4) << " " << pad("delta", prec + 4) << " "
                << pad("dsmp", prec + 4) << " " << pad("betp", prec + 4)
                << " by_bel/by_pl/by_dsmp\n";
            for (const auto& e : p.evaluations)
                out << "  " << pad(e.name, 12) << " " << pad(fmt(e.bel, prec), prec + 4) << " "
                    << pad(fmt(e.pl, prec), prec + 4) << " " << pad(fmt(e.delta, prec), prec + 4)
                    << " " << pad(fmt(e.dsmp, prec), prec + 4) << " "
                    << pad(fmt(e.betp, prec), prec + 4) << " " << to_string(e.by_bel) << "/"
                    << to_string(e.by_pl) << "/" << to_string(e.by_dsmp) << "\n";
        }
        if (!p.interval_evaluations.empty()) {
            out << "hypotheses (interval ranges, clamped):\n";
            for (const auto& e : p.interval_evaluations)
                out << "  " << pad(e.name, 12) << " P in " << fmt(e.range, prec) << ", dsmp "
                    << fmt(e.dsmp, prec) << ", " << to_string(e.by_bel) << "/"
                    << to_string(e.by_pl) << "/" << to_string(e.by_dsmp) << "\n";
        }
        if (!p.ledger.empty() || !p.interval_ledger.empty())
            out << "conflict ledger: " << (p.ledger.size() + p.interval_ledger.size())
                << " conflicting tuples redistributed\n";
    }

    if (r.comparison) {
        const auto& c = *r.comparison;
        out << "\n== subsystem comparison (key hypothesis: " << c.key_hypothesis << ") ==\n";
        for (const auto& e : c.entries) {
            out << "  " << pad(e.name, 16);
            for (std::size_t i = 0; i < c.hypotheses.size(); ++i)
                out << " delta(" << c.hypotheses[i] << ")=" << fmt(e.delta_by_hypothesis[i], prec);
            out << " H(dsmp)=" << fmt(e.dsmp_entropy, prec) << "\n";
        }
        out << "  preferred: " << c.preferred;
        if (c.tie)
            out << " (tie)";
        if (c.criterion_conflict)
            out << " (criterion conflict: precision and informativeness disagree)";
        out << "\n";
    }
    return out.str();
}

namespace {

json focal_to_json(const MassFunction& m) {
    json out = json::object();
    for (const auto& [bits, v] : m.focal())
        out[m.subset_of(bits).to_string()] = v;
    return out;
}

json focal_to_json(const IntervalMassFunction& m) {
    json out = json::object();
    for (const auto& [bits, v] : m.focal())
        out[m.subset_of(bits).to_string()] = json::array({v.lo, v.hi});
    return out;
}

template <class S>
json ledger_to_json(const std::vector<ConflictLedgerEntry<S>>& ledger, const FramePtr& frame) {
    json out = json::array();
    for (const auto& e : ledger) {
        json ej;
        ej["tuple"] = json::array();
        for (const auto bits : e.tuple)
            ej["tuple"].push_back(Subset(frame, bits).to_string());
        if constexpr (std::is_same_v<S, double>) {
            ej["product"] = e.product;
            json shares = json::object();
            for (const auto& [bits, v] : e.shares)
                shares[Subset(frame, bits).to_string()] = v;
            ej["shares"] = std::move(shares);
        } else {
            ej["product"] = json::array({e.product.lo, e.product.hi});
            json shares = json::object();
            for (const auto& [bits, v] : e.shares)
                shares[Subset(frame, bits).to_string()] = json::array({v.lo, v.hi});
            ej["shares"] = std::move(shares);
        }
        out.push_back(std::move(ej));
    }
    return out;
}

} // namespace

std::string render_json(const DecisionReport& r) {
    json j;
    j["scenario"] = r.scenario_name;
    j["epsilon"] = r.epsilon;
    j["frame"] = r.frame->atoms();
    j["pipelines"] = json::array();
    for (const auto& p : r.pipelines) {
        json pj;
        pj["name"] = p.name;
        pj["rule"] = to_string(p.rule);
        pj["sources"] = p.sources;
        switch (p.kind) {
        case MassKind::Precise: pj["kind"] = "precise"; break;
        case MassKind::IntervalValued: pj["kind"] = "interval"; break;
        case MassKind::Labelled: pj["kind"] = "label"; break;
        }
        if (!p.discounted_inputs.empty()) {
            json dj = json::object();
            for (std::size_t i = 0; i < p.discounted_inputs.size(); ++i) {
                json sj = json::object();
                for (const auto& [bits, v] : p.discounted_inputs[i].focal())
                    sj[p.discounted_inputs[i].subset_of(bits).to_string()] = v;
                dj[p.sources[i]] = std::move(sj);
            }
            pj["discounted"] = std::move(dj);
        }
        if (p.prenormal_total)
            pj["prenormal_total"] = *p.prenormal_total;
        if (p.fused)
            pj["fused"] = focal_to_json(*p.fused);
        if (p.fused_interval)
            pj["fused_interval"] = focal_to_json(*p.fused_interval);
        if (p.qualitative) {
            pj["fused"] = focal_to_json(p.qualitative->numeric());
            json refined = json::object();
            for (const auto& [bits, index] : p.qualitative->refined_indices())
                refined[p.qualitative->numeric().subset_of(bits).to_string()] = index;
            pj["fused_refined"] = std::move(refined);
            const auto crude = p.qualitative->crude();
            json cj = json::object();
            for (const auto& [bits, label] : crude.labels)
                cj[p.qualitative->numeric().subset_of(bits).to_string()] =
                    "L" + std::to_string(label);
            pj["fused_crude"] = std::move(cj);
            pj["crude_normalized"] = crude.normalized;
        }
        if (p.dsmp_dist) {
            json dj = json::object(), bj = json::object();
            for (std::size_t i = 0; i < r.frame->size(); ++i) {
                dj[r.frame->atom(i)] = p.dsmp_dist->p[i];
                bj[r.frame->atom(i)] = p.betp_dist->p[i];
            }
            pj["dsmp"] = std::move(dj);
            pj["betp"] = std::move(bj);
            pj["dsmp_entropy"] = p.dsmp_entropy;
            pj["dsmp_pic"] = p.dsmp_pic;
            pj["betp_entropy"] = p.betp_entropy;
            pj["betp_pic"] = p.betp_pic;
        }
        if (!p.dsmp_interval.empty()) {
            json dj = json::object();
            for (std::size_t i = 0; i < r.frame->size(); ++i) {
                const auto v = clamp_unit(p.dsmp_interval[i]);
                dj[r.frame->atom(i)] = json::array({v.lo, v.hi});
            }
            pj["dsmp_interval"] = std::move(dj);
        }
        if (p.qdsmp) {
            const auto refined = p.qdsmp->refined_indices();
            const auto crude = p.qdsmp->crude_labels();
            json dj = json::object(), rj = json::object(), cj = json::object();
            for (std::size_t i = 0; i < r.frame->size(); ++i) {
                dj[r.frame->atom(i)] = p.qdsmp->numeric().p[i];
                rj[r.frame->atom(i)] = refined[i];
                cj[r.frame->atom(i)] = "L" + std::to_string(crude[i]);
            }
            pj["dsmp"] = std::move(dj);
            pj["dsmp_refined"] = std::move(rj);
            pj["dsmp_crude"] = std::move(cj);
        }
        if (!p.evaluations.empty()) {
            json ej = json::object();
            for (const auto& e : p.evaluations)
                ej[e.name] = {{"bel", e.bel},
                              {"pl", e.pl},
                              {"delta", e.delta},
                              {"dsmp", e.dsmp},
                              {"betp", e.betp},
                              {"by_bel", to_string(e.by_bel)},
                              {"by_pl", to_string(e.by_pl)},
                              {"by_dsmp", to_string(e.by_dsmp)}};
            pj["hypotheses"] = std::move(ej);
        }
        if (!p.interval_evaluations.empty()) {
            json ej = json::object();
            for (const auto& e : p.interval_evaluations)
                ej[e.name] = {{"bel", json::array({e.bel.lo, e.bel.hi})},
                              {"pl", json::array({e.pl.lo, e.pl.hi})},
                              {"range", json::array({e.range.lo, e.range.hi})},
                              {"dsmp", json::array({e.dsmp.lo, e.dsmp.hi})},
                              {"by_bel", to_string(e.by_bel)},
                              {"by_pl", to_string(e.by_pl)},
                              {"by_dsmp", to_string(e.by_dsmp)}};
            pj["hypotheses"] = std::move(ej);
        }
        if (!p.ledger.empty())
            pj["ledger"] = ledger_to_json(p.ledger, r.frame);
        if (!p.interval_ledger.empty())
            pj["ledger"] = ledger_to_json(p.interval_ledger, r.frame);
        j["pipelines"].push_back(std::move(pj));
    }
    if (r.comparison) {
        const auto& c = *r.comparison;
        json cj;
        cj["key"] = c.key_hypothesis;
        cj["preferred"] = c.preferred;
        cj["tie"] = c.tie;
        cj["criterion_conflict"] = c.criterion_conflict;
        json entries = json::object();
        for (const auto& e : c.entries) {
            json dj = json::object();
            for (std::size_t i = 0; i < c.hypotheses.size(); ++i)
                dj[c.hypotheses[i]] = e.delta_by_hypothesis[i];
            entries[e.name] = {{"delta", std::move(dj)}, {"dsmp_entropy", e.dsmp_entropy}};
        }
        cj["subsystems"] = std::move(entries);
        j["comparison"] = std::move(cj);
    }
    return j.dump(2) + "\n";
}

namespace {

struct Checker {
    const CompiledScenario& c;
    const PipelineReport& p;
    const ExpectedTables::Pipeline& exp;
    double base_tol;
    TableReport& out;

    double tol_for(const std::string& table) const {
        const auto it = exp.tolerances.find(table);
        return it != exp.tolerances.end() ? it->second : base_tol;
    }

    TableCheck& start(const std::string& table) {
        out.checks.push_back({p.name, table, 0.0, tol_for(table), 0, true, {}});
        return out.checks.back();
    }

    void note_dev(TableCheck& chk, const std::string& key, double dev, double got,
                  double want) {
        chk.max_deviation = std::max(chk.max_deviation, dev);
        if (dev > chk.tolerance) {
            chk.pass = false;
            chk.details.push_back(key + ": got " + std::to_string(got) + ", expected " +
                                  std::to_string(want));
        }
    }

    void check_fused(const std::map<std::string, double>& want, const MassFunction& got) {
        auto& chk = start("fused");
        auto remaining = got.focal();
        for (const auto& [expr, v] : want) {
            const auto sub = parse_subset_expr(got.frame(), expr);
            const double g = got.mass_of(sub.bits());
            remaining.erase(sub.bits());
            note_dev(chk, expr, std::abs(g - v), g, v);
        }
        for (const auto& [bits, g] : remaining)
            note_dev(chk, got.subset_of(bits).to_string() + " (unexpected)", std::abs(g), g, 0.0);
    }

    void check_fused_interval(const std::map<std::string, Interval>& want,
                              const IntervalMassFunction& got) {
        auto& chk = start("fused_interval");
        auto remaining = got.focal();
        for (const auto& [expr, v] : want) {
            const auto sub = parse_subset_expr(got.frame(), expr);
            const auto g = got.mass_of(sub.bits());
            remaining.erase(sub.bits());
            note_dev(chk, expr + ".lo", std::abs(g.lo - v.lo), g.lo, v.lo);
            note_dev(chk, expr + ".hi", std::abs(g.hi - v.hi), g.hi, v.hi);
        }
        for (const auto& [bits, g] : remaining)
            note_dev(chk, got.subset_of(bits).to_string() + " (unexpected)", g.hi, g.hi, 0.0);
    }

    void check_atoms(const std::string& table, const std::map<std::string, double>& want,
                     const std::vector<double>& got) {
        auto& chk = start(table);
        for (const auto& [atom, v] : want) {
            const auto idx = c.main_frame->atom_index(atom);
            if (idx == c.main_frame->size()) {
                chk.pass = false;
                chk.details.push_back("unknown atom '" + atom + "'");
                continue;
            }
            note_dev(chk, atom, std::abs(got[idx] - v), got[idx], v);
        }
    }

    void check_atom_intervals(const std::string& table,
                              const std::map<std::string, Interval>& want,
                              const std::vector<Interval>& got_unclamped) {
        auto& chk = start(table);
        for (const auto& [atom, v] : want) {
            const auto idx = c.main_frame->atom_index(atom);
            if (idx == c.main_frame->size()) {
                chk.pass = false;
                chk.details.push_back("unknown atom '" + atom + "'");
                continue;
            }
            const auto g = clamp_unit(got_unclamped[idx]);
            note_dev(chk, atom + ".lo", std::abs(g.lo - v.lo), g.lo, v.lo);
            note_dev(chk, atom + ".hi", std::abs(g.hi - v.hi), g.hi, v.hi);
        }
    }

    void check_exact(const std::string& key, const std::string& got, const std::string& want,
                     TableCheck& chk) {
        if (got != want) {
            chk.pass = false;
            ++chk.mismatches;
            chk.details.push_back(key + ": got " + got + ", expected " + want);
        }
    }

    void run() {
        if (!exp.fused.empty()) {
            const MassFunction* m = p.fused ? &*p.fused
                                            : (p.qualitative ? &p.qualitative->numeric() : nullptr);
            if (m)
                check_fused(exp.fused, *m);
            else
                start("fused").pass = false;
        }
        if (!exp.fused_interval.empty()) {
            if (p.fused_interval)
                check_fused_interval(exp.fused_interval, *p.fused_interval);
            else
                start("fused_interval").pass = false;
        }
        if (!exp.fused_refined.empty()) {
            auto& chk = start("fused_refined");
            if (!p.qualitative) {
                chk.pass = false;
            } else {
                const auto refined = p.qualitative->refined_indices();
                for (const auto& [expr, idx] : exp.fused_refined) {
                    const auto sub = parse_subset_expr(c.main_frame, expr);
                    const auto it = refined.find(sub.bits());
                    const double g = it == refined.end() ? 0.0 : it->second;
                    note_dev(chk, expr, std::abs(g - idx), g, idx);
                }
            }
        }
        if (!exp.fused_crude.empty()) {
            auto& chk = start("fused_crude");
            if (!p.qualitative) {
                chk.pass = false;
            } else {
                const auto crude = p.qualitative->crude();
                for (const auto& [expr, label] : exp.fused_crude) {
                    const auto sub = parse_subset_expr(c.main_frame, expr);
                    const auto it = crude.labels.find(sub.bits());
                    const int g = it == crude.labels.end() ? 0 : it->second;
                    check_exact(expr, "L" + std::to_string(g),
                                "L" + std::to_string(label), chk);
                }
                if (exp.crude_normalized && crude.normalized != *exp.crude_normalized) {
                    chk.pass = false;
                    chk.details.push_back("crude normalization flag mismatch");
                }
            }
        }
        if (!exp.dsmp.empty()) {
            if (p.dsmp_dist)
                check_atoms("dsmp", exp.dsmp, p.dsmp_dist->p);
            else if (p.qdsmp)
                check_atoms("dsmp", exp.dsmp, p.qdsmp->numeric().p);
            else
                start("dsmp").pass = false;
        }
        if (!exp.betp.empty()) {
            if (p.betp_dist)
                check_atoms("betp", exp.betp, p.betp_dist->p);
            else
                start("betp").pass = false;
        }
        if (!exp.dsmp_interval.empty()) {
            if (!p.dsmp_interval.empty())
                check_atom_intervals("dsmp_interval", exp.dsmp_interval, p.dsmp_interval);
            else
                start("dsmp_interval").pass = false;
        }
        if (!exp.dsmp_refined.empty()) {
            auto& chk = start("dsmp_refined");
            if (!p.qdsmp) {
                chk.pass = false;
            } else {
                const auto refined = p.qdsmp->refined_indices();
                for (const auto& [atom, idx] : exp.dsmp_refined) {
                    const auto i = c.main_frame->atom_index(atom);
                    note_dev(chk, atom, std::abs(refined[i] - idx), refined[i], idx);
                }
            }
        }
        if (!exp.dsmp_crude.empty()) {
            auto& chk = start("dsmp_crude");
            if (!p.qdsmp) {
                chk.pass = false;
            } else {
                const auto crude = p.qdsmp->crude_labels();
                for (const auto& [atom, label] : exp.dsmp_crude) {
                    const auto i = c.main_frame->atom_index(atom);
                    check_exact(atom, "L" + std::to_string(crude[i]),
                                "L" + std::to_string(label), chk);
                }
            }
        }
        if (exp.prenormal_total) {
            auto& chk = start("prenormal_total");
            chk.tolerance = 1e-9;
            const double g = p.prenormal_total.value_or(0.0);
            note_dev(chk, "total", std::abs(g - *exp.prenormal_total), g, *exp.prenormal_total);
        }
        if (!exp.discounted.empty()) {
            auto& chk = start("discounted");
            chk.tolerance = 1e-9;
            for (const auto& [sname, table] : exp.discounted) {
                const auto it = std::find(p.sources.begin(), p.sources.end(), sname);
                if (it == p.sources.end() || p.discounted_inputs.empty()) {
                    chk.pass = false;
                    chk.details.push_back("no discounted input for '" + sname + "'");
                    continue;
                }
                const auto& m = p.discounted_inputs[it - p.sources.begin()];
                for (const auto& [expr, v] : table) {
                    const auto sub = parse_subset_expr(c.main_frame, expr);
                    const double g = m.mass_of(sub.bits());
                    note_dev(chk, sname + "." + expr, std::abs(g - v), g, v);
                }
            }
        }
        if (!exp.hypotheses.empty()) {
            auto& chk = start("hypotheses");
            for (const auto& [hname, range] : exp.hypotheses) {
                double glo = 0.0, ghi = 0.0;
                bool found = false;
                for (const auto& e : p.evaluations)
                    if (e.name == hname) {
                        glo = e.bel;
                        ghi = e.pl;
                        found = true;
                    }
                for (const auto& e : p.interval_evaluations)
                    if (e.name == hname) {
                        glo = e.range.lo;
                        ghi = e.range.hi;
                        found = true;
                    }
                if (!found) {
                    chk.pass = false;
                    chk.details.push_back("no evaluation for hypothesis '" + hname + "'");
                    continue;
                }
                note_dev(chk, hname + ".bel", std::abs(glo - range.first), glo, range.first);
                note_dev(chk, hname + ".pl", std::abs(ghi - range.second), ghi, range.second);
            }
        }
        if (!exp.decisions.empty()) {
            auto& chk = start("decisions");
            for (const auto& [hname, crits] : exp.decisions) {
                const HypothesisEvaluation* pe = nullptr;
                const IntervalHypothesisEvaluation* ie = nullptr;
                for (const auto& e : p.evaluations)
                    if (e.name == hname)
                        pe = &e;
                for (const auto& e : p.interval_evaluations)
                    if (e.name == hname)
                        ie = &e;
                for (const auto& [crit, want] : crits) {
                    std::string got = "?";
                    if (pe)
                        got = crit == "by_bel" ? to_string(pe->by_bel)
                              : crit == "by_pl" ? to_string(pe->by_pl)
                                                : to_string(pe->by_dsmp);
                    else if (ie)
                        got = crit == "by_bel" ? to_string(ie->by_bel)
                              : crit == "by_pl" ? to_string(ie->by_pl)
                                                : to_string(ie->by_dsmp);
                    check_exact(hname + "." + crit, got, want, chk);
                }
            }
        }
    }
};

} // namespace

TableReport compare_tables(const CompiledScenario& c, const DecisionReport& r) {
    TableReport out;
    if (!c.scenario.expected)
        throw ScenarioError("scenario has no expected-values block");
    const auto& exp = *c.scenario.expected;
    for (const auto& [pname, pexp] : exp.pipelines) {
        const auto it = std::find_if(r.pipelines.begin(), r.pipelines.end(),
                                     [&](const auto& p) { return p.name == pname; });
        if (it == r.pipelines.end()) {
            out.checks.push_back({pname, "(pipeline)", 0.0, 0.0, 1, false,
                                  {"expected pipeline not present in the report"}});
            continue;
        }
        Checker{c, *it, pexp, exp.tolerance, out}.run();
    }
    if (exp.preferred) {
        TableCheck chk{"(comparison)", "preferred", 0.0, 0.0, 0, true, {}};
        if (!r.comparison || r.comparison->preferred != *exp.preferred) {
            chk.pass = false;
            chk.mismatches = 1;
            chk.details.push_back("preferred subsystem: got " +
                                  (r.comparison ? r.comparison->preferred : "(none)") +
                                  ", expected " + *exp.preferred);
        }
        out.checks.push_back(std::move(chk));
    }
    for (const auto& chk : out.checks)
        out.all_pass = out.all_pass && chk.pass;
    return out;
}

std::string render_table_report(const TableReport& t) {
    std::ostringstream out;
    std::string last_pipeline;
    for (const auto& chk : t.checks) {
        if (chk.pipeline != last_pipeline) {
            out << "pipeline " << chk.pipeline << ":\n";
            last_pipeline = chk.pipeline;
        }
        char devbuf[32];
        std::snprintf(devbuf, sizeof(devbuf), "%.3e", chk.max_deviation);
        out << "  " << chk.table << ": max deviation " << devbuf;
        if (chk.mismatches)
            out << ", " << chk.mismatches << " mismatches";
        out << " (tolerance ";
        std::snprintf(devbuf, sizeof(devbuf), "%.1e", chk.tolerance);
        out << devbuf << ") " << (chk.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& d : chk.details)
            out << "    " << d << "\n";
    }
    out << (t.all_pass ? "all tables within tolerance" : "TABLE MISMATCH beyond tolerance")
        << "\n";
    return out.str();
}

} // namespace dsm
