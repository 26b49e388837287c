#include "dsm/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dsm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw ScenarioError(msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

MassValue parse_mass_value(const json& v, const Scenario& s, const std::string& where) {
    if (v.is_number())
        return v.get<double>();
    if (v.is_array()) {
        if (v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            fail(where + ": interval mass must be a [lo, hi] pair");
        try {
            return Interval(v[0].get<double>(), v[1].get<double>());
        } catch (const MassError& e) {
            fail(where + ": " + e.what());
        }
    }
    if (v.is_string()) {
        const auto tok = v.get<std::string>();
        if (!s.label_set)
            fail(where + ": label mass '" + tok + "' needs a declared label_set");
        if (tok.size() < 2 || tok[0] != 'L')
            fail(where + ": malformed label token '" + tok + "'");
        int idx = 0;
        try {
            std::size_t used = 0;
            idx = std::stoi(tok.substr(1), &used);
            if (used + 1 != tok.size())
                throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            fail(where + ": malformed label token '" + tok + "'");
        }
        if (idx < 0 || idx > *s.label_set + 1)
            fail(where + ": label index outside L0..L" + std::to_string(*s.label_set + 1));
        return idx;
    }
    fail(where + ": mass must be a number, a [lo, hi] pair, or a label token");
}

std::string subset_key(const json& v, const std::string& where) {
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_array()) {
        std::string expr;
        for (const auto& item : v) {
            if (!item.is_string())
                fail(where + ": subset atom list must hold strings");
            if (!expr.empty())
                expr += '+';
            expr += item.get<std::string>();
        }
        return expr;
    }
    fail(where + ": subset must be an expression string or an atom list");
}

FusionRule parse_rule(const std::string& r, const std::string& where) {
    if (r == "pcr5")
        return FusionRule::PCR5;
    if (r == "pcr6")
        return FusionRule::PCR6;
    if (r == "conj" || r == "conjunctive")
        return FusionRule::Conjunctive;
    fail(where + ": unknown rule '" + r + "' (expected pcr5|pcr6|conj)");
}

ScenarioPipeline::Discount parse_discount(const std::string& d, const std::string& where) {
    if (d == "none")
        return ScenarioPipeline::Discount::None;
    if (d == "reliability")
        return ScenarioPipeline::Discount::Reliability;
    if (d == "importance")
        return ScenarioPipeline::Discount::Importance;
    fail(where + ": unknown discount '" + d + "' (expected none|reliability|importance)");
}

ExpectedTables parse_expected(const json& j, const Scenario& s) {
    ExpectedTables exp;
    exp.tolerance = j.value("tolerance", 1e-4);
    if (j.contains("preferred"))
        exp.preferred = j.at("preferred").get<std::string>();
    if (!j.contains("pipelines"))
        return exp;
    for (const auto& [pname, pj] : j.at("pipelines").items()) {
        ExpectedTables::Pipeline p;
        const auto where = "expected.pipelines." + pname;
        const auto load_doubles = [&](const char* key, std::map<std::string, double>& out) {
            if (!pj.contains(key))
                return;
            for (const auto& [k, v] : pj.at(key).items())
                out[k] = v.get<double>();
        };
        const auto load_intervals = [&](const char* key, std::map<std::string, Interval>& out) {
            if (!pj.contains(key))
                return;
            for (const auto& [k, v] : pj.at(key).items()) {
                const auto mv = parse_mass_value(v, s, where);
                if (const auto* iv = std::get_if<Interval>(&mv))
                    out[k] = *iv;
                else if (const auto* dv = std::get_if<double>(&mv))
                    out[k] = Interval(*dv);
                else
                    fail(where + ": expected interval value");
            }
        };
        const auto load_crude = [&](const char* key, std::map<std::string, int>& out) {
            if (!pj.contains(key))
                return;
            for (const auto& [k, v] : pj.at(key).items()) {
                const auto mv = parse_mass_value(v, s, where);
                if (const auto* lv = std::get_if<int>(&mv))
                    out[k] = *lv;
                else
                    fail(where + ": expected label token");
            }
        };
        load_doubles("fused", p.fused);
        load_intervals("fused_interval", p.fused_interval);
        load_doubles("fused_refined", p.fused_refined);
        load_crude("fused_crude", p.fused_crude);
        if (pj.contains("crude_normalized"))
            p.crude_normalized = pj.at("crude_normalized").get<bool>();
        load_doubles("dsmp", p.dsmp);
        load_doubles("betp", p.betp);
        load_intervals("dsmp_interval", p.dsmp_interval);
        load_doubles("dsmp_refined", p.dsmp_refined);
        load_crude("dsmp_crude", p.dsmp_crude);
        if (pj.contains("prenormal_total"))
            p.prenormal_total = pj.at("prenormal_total").get<double>();
        if (pj.contains("discounted"))
            for (const auto& [src, table] : pj.at("discounted").items())
                for (const auto& [k, v] : table.items())
                    p.discounted[src][k] = v.get<double>();
        if (pj.contains("hypotheses"))
            for (const auto& [k, v] : pj.at("hypotheses").items())
                p.hypotheses[k] = {v.at("bel").get<double>(), v.at("pl").get<double>()};
        if (pj.contains("decisions"))
            for (const auto& [k, v] : pj.at("decisions").items())
                for (const auto& [crit, verdict] : v.items())
                    p.decisions[k][crit] = verdict.get<std::string>();
        load_doubles("tolerances", p.tolerances);
        exp.pipelines[pname] = std::move(p);
    }
    return exp;
}

Scenario from_json(const json& j) {
    if (!j.is_object())
        fail("scenario document must be a JSON object");
    Scenario s;
    s.name = j.value("name", "scenario");
    if (!j.contains("frames") || !j.at("frames").is_array() || j.at("frames").empty())
        fail("scenario needs a non-empty 'frames' array");
    for (const auto& fj : j.at("frames")) {
        ScenarioFrameDecl d;
        d.name = fj.at("name").get<std::string>();
        if (fj.contains("atoms"))
            d.atoms = fj.at("atoms").get<std::vector<std::string>>();
        if (fj.contains("factors"))
            d.factors = fj.at("factors").get<std::vector<std::string>>();
        if (fj.contains("atom_names"))
            d.atom_names = fj.at("atom_names").get<std::vector<std::string>>();
        if (d.atoms.empty() == d.factors.empty())
            fail("frame '" + d.name + "' needs exactly one of 'atoms' or 'factors'");
        s.frames.push_back(std::move(d));
    }
    if (j.contains("frame"))
        s.main_frame = j.at("frame").get<std::string>();
    s.epsilon = j.value("epsilon", kDefaultEpsilon);
    if (!(s.epsilon >= 0.0))
        fail("epsilon must be non-negative");
    if (j.contains("label_set")) {
        s.label_set = j.at("label_set").get<int>();
        if (*s.label_set < 1)
            fail("label_set needs at least one interior label");
    }
    if (!j.contains("sources") || !j.at("sources").is_array() || j.at("sources").empty())
        fail("scenario needs a non-empty 'sources' array");
    for (const auto& sj : j.at("sources")) {
        ScenarioSource src;
        src.name = sj.at("name").get<std::string>();
        const auto where = "source " + src.name;
        src.frame = sj.value("frame", "");
        if (!sj.contains("masses"))
            fail(where + ": missing 'masses'");
        const auto& mj = sj.at("masses");
        if (mj.is_object()) {
            for (const auto& [k, v] : mj.items())
                src.masses.emplace_back(k, parse_mass_value(v, s, where));
        } else if (mj.is_array()) {
            for (const auto& entry : mj) {
                src.masses.emplace_back(subset_key(entry.at("set"), where),
                                        parse_mass_value(entry.at("mass"), s, where));
            }
        } else {
            fail(where + ": 'masses' must be an object or an array");
        }
        if (sj.contains("alpha"))
            src.alpha = sj.at("alpha").get<double>();
        if (sj.contains("beta"))
            src.beta = sj.at("beta").get<double>();
        s.sources.push_back(std::move(src));
    }
    if (!j.contains("pipelines") || !j.at("pipelines").is_array() || j.at("pipelines").empty())
        fail("scenario needs a non-empty 'pipelines' array");
    for (const auto& pj : j.at("pipelines")) {
        ScenarioPipeline p;
        p.name = pj.at("name").get<std::string>();
        const auto where = "pipeline " + p.name;
        p.sources = pj.at("sources").get<std::vector<std::string>>();
        if (p.sources.empty())
            fail(where + ": needs at least one source");
        p.rule = parse_rule(pj.value("rule", "pcr6"), where);
        p.discount = parse_discount(pj.value("discount", "none"), where);
        s.pipelines.push_back(std::move(p));
    }
    if (j.contains("hypotheses"))
        for (const auto& hj : j.at("hypotheses")) {
            ScenarioHypothesis h;
            h.name = hj.at("name").get<std::string>();
            h.set = subset_key(hj.at("set"), "hypothesis " + h.name);
            s.hypotheses.push_back(std::move(h));
        }
    if (j.contains("comparison")) {
        ScenarioComparison c;
        c.pipelines = j.at("comparison").at("pipelines").get<std::vector<std::string>>();
        c.key = j.at("comparison").at("key").get<std::string>();
        s.comparison = std::move(c);
    }
    if (j.contains("expected"))
        s.expected = parse_expected(j.at("expected"), s);
    return s;
}

} // namespace

Subset parse_subset_expr(const FramePtr& frame, const std::string& expr) {
    std::uint32_t bits = 0;
    std::stringstream ss(expr);
    std::string token;
    bool any = false;
    while (std::getline(ss, token, '+')) {
        token = trim(token);
        if (token.empty())
            fail("empty atom token in subset expression '" + expr + "'");
        any = true;
        if (token == "It" || token == "I_t") {
            bits |= Subset::ignorance(frame).bits();
            continue;
        }
        if (token == "{}") // the empty set (discounted-input tables)
            continue;
        const auto idx = frame->atom_index(token);
        if (idx == frame->size())
            fail("unknown atom '" + token + "' in subset expression '" + expr + "'");
        bits |= 1u << idx;
    }
    if (!any)
        fail("empty subset expression");
    return {frame, bits};
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ScenarioError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                            ": " + e.what());
    }
    try {
        auto s = from_json(j);
        compile(s); // full semantic validation
        return s;
    } catch (const json::exception& e) {
        throw ScenarioError(origin + ": " + e.what());
    } catch (const Error& e) {
        throw ScenarioError(origin + ": " + e.what());
    }
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

const CompiledScenario::Source& CompiledScenario::source(const std::string& name) const {
    const auto it = sources.find(name);
    if (it == sources.end())
        throw ScenarioError("unknown source '" + name + "'");
    return it->second;
}

Subset CompiledScenario::parse_subset(const std::string& expr) const {
    return parse_subset_expr(main_frame, expr);
}

CompiledScenario compile(const Scenario& s) {
    CompiledScenario c;
    c.scenario = s;

    for (const auto& d : s.frames) {
        if (c.frames.count(d.name))
            fail("duplicate frame '" + d.name + "'");
        try {
            if (!d.atoms.empty()) {
                if (!d.atom_names.empty())
                    fail("plain frames take 'atoms' only");
                c.frames[d.name] = Frame::make(d.atoms);
            } else {
                std::vector<FramePtr> factors;
                for (const auto& fname : d.factors) {
                    const auto it = c.frames.find(fname);
                    if (it == c.frames.end())
                        fail("factor '" + fname + "' must be declared before the product");
                    factors.push_back(it->second);
                }
                c.frames[d.name] = Frame::product(std::move(factors), d.atom_names);
            }
        } catch (const FrameError& e) {
            fail("frame '" + d.name + "': " + e.what());
        }
    }

    if (s.main_frame) {
        const auto it = c.frames.find(*s.main_frame);
        if (it == c.frames.end())
            fail("unknown main frame '" + *s.main_frame + "'");
        c.main_frame = it->second;
    } else if (c.frames.size() == 1) {
        c.main_frame = c.frames.begin()->second;
    } else {
        fail("several frames declared: pick one with a top-level \"frame\" key");
    }

    for (const auto& src : s.sources) {
        if (c.sources.count(src.name))
            fail("duplicate source '" + src.name + "'");
        CompiledScenario::Source out;
        out.name = src.name;
        out.frame = src.frame.empty() ? c.main_frame : nullptr;
        if (!out.frame) {
            const auto it = c.frames.find(src.frame);
            if (it == c.frames.end())
                fail("source " + src.name + ": unknown frame '" + src.frame + "'");
            out.frame = it->second;
        }

        bool has_interval = false, has_label = false, has_number = false;
        for (const auto& [expr, value] : src.masses) {
            if (std::holds_alternative<Interval>(value))
                has_interval = true;
            else if (std::holds_alternative<int>(value))
                has_label = true;
            else
                has_number = true;
        }
        if (has_label && (has_interval || has_number))
            fail("source " + src.name + ": label masses cannot mix with numeric masses");
        out.kind = has_label ? MassKind::Labelled
                             : (has_interval ? MassKind::IntervalValued : MassKind::Precise);

        try {
            if (out.kind == MassKind::Labelled) {
                if (!s.label_set)
                    fail("source " + src.name + ": label masses need a label_set");
                const auto set = make_label_set(*s.label_set);
                int sum = 0;
                for (const auto& [expr, value] : src.masses) {
                    const auto sub = parse_subset_expr(out.frame, expr);
                    if (sub.is_empty())
                        fail("label mass on the empty set");
                    const int idx = std::get<int>(value);
                    if (out.labels.count(sub.bits()))
                        fail("duplicate focal element '" + expr + "'");
                    out.labels[sub.bits()] = idx;
                    sum += idx;
                }
                if (sum != set.max_index())
                    fail("labels sum to L" + std::to_string(sum) + ", expected L" +
                         std::to_string(set.max_index()));
            } else if (out.kind == MassKind::IntervalValued) {
                IntervalMassFunction::FocalMap focal;
                for (const auto& [expr, value] : src.masses) {
                    const auto sub = parse_subset_expr(out.frame, expr);
                    const Interval v = std::holds_alternative<Interval>(value)
                                           ? std::get<Interval>(value)
                                           : Interval(std::get<double>(value));
                    if (focal.count(sub.bits()))
                        fail("duplicate focal element '" + expr + "'");
                    focal[sub.bits()] = v;
                }
                out.interval = IntervalMassFunction::make(out.frame, std::move(focal));
            } else {
                MassFunction::FocalMap focal;
                for (const auto& [expr, value] : src.masses) {
                    const auto sub = parse_subset_expr(out.frame, expr);
                    if (focal.count(sub.bits()))
                        fail("duplicate focal element '" + expr + "'");
                    focal[sub.bits()] = std::get<double>(value);
                }
                out.precise = MassFunction::make(out.frame, std::move(focal));
            }
        } catch (const Error& e) {
            fail("source " + src.name + ": " + e.what());
        }

        if (src.alpha) {
            if (!(*src.alpha >= 0.0 && *src.alpha <= 1.0))
                fail("source " + src.name + ": alpha outside [0,1]");
            out.alpha = *src.alpha;
        }
        if (src.beta) {
            if (!(*src.beta >= 0.0 && *src.beta <= 1.0))
                fail("source " + src.name + ": beta outside [0,1]");
            out.beta = *src.beta;
        }
        c.sources.emplace(out.name, std::move(out));
    }

    for (const auto& h : s.hypotheses) {
        try {
            c.hypotheses.emplace_back(h.name, parse_subset_expr(c.main_frame, h.set));
        } catch (const Error& e) {
            fail("hypothesis " + h.name + ": " + e.what());
        }
    }

    if (s.pipelines.empty())
        fail("scenario needs at least one pipeline");
    for (const auto& p : s.pipelines) {
        for (const auto& sname : p.sources)
            if (!c.sources.count(sname))
                fail("pipeline " + p.name + ": unknown source '" + sname + "'");
    }
    if (s.comparison) {
        for (const auto& pname : s.comparison->pipelines) {
            const auto found = std::any_of(s.pipelines.begin(), s.pipelines.end(),
                                           [&](const auto& p) { return p.name == pname; });
            if (!found)
                fail("comparison references unknown pipeline '" + pname + "'");
        }
        const auto found = std::any_of(c.hypotheses.begin(), c.hypotheses.end(),
                                       [&](const auto& h) { return h.name == s.comparison->key; });
        if (!found)
            fail("comparison references unknown hypothesis '" + s.comparison->key + "'");
    }
    return c;
}

std::string serialize_scenario(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["epsilon"] = s.epsilon;
    if (s.label_set)
        j["label_set"] = *s.label_set;
    if (s.main_frame)
        j["frame"] = *s.main_frame;
    j["frames"] = json::array();
    for (const auto& d : s.frames) {
        json fj;
        fj["name"] = d.name;
        if (!d.atoms.empty())
            fj["atoms"] = d.atoms;
        if (!d.factors.empty())
            fj["factors"] = d.factors;
        if (!d.atom_names.empty())
            fj["atom_names"] = d.atom_names;
        j["frames"].push_back(std::move(fj));
    }
    j["sources"] = json::array();
    for (const auto& src : s.sources) {
        json sj;
        sj["name"] = src.name;
        if (!src.frame.empty())
            sj["frame"] = src.frame;
        json mj = json::object();
        for (const auto& [expr, value] : src.masses) {
            if (const auto* d = std::get_if<double>(&value))
                mj[expr] = *d;
            else if (const auto* iv = std::get_if<Interval>(&value))
                mj[expr] = json::array({iv->lo, iv->hi});
            else
                mj[expr] = "L" + std::to_string(std::get<int>(value));
        }
        sj["masses"] = std::move(mj);
        if (src.alpha)
            sj["alpha"] = *src.alpha;
        if (src.beta)
            sj["beta"] = *src.beta;
        j["sources"].push_back(std::move(sj));
    }
    j["pipelines"] = json::array();
    for (const auto& p : s.pipelines) {
        json pj;
        pj["name"] = p.name;
        pj["sources"] = p.sources;
        pj["rule"] = to_string(p.rule);
        switch (p.discount) {
        case ScenarioPipeline::Discount::None: pj["discount"] = "none"; break;
        case ScenarioPipeline::Discount::Reliability: pj["discount"] = "reliability"; break;
        case ScenarioPipeline::Discount::Importance: pj["discount"] = "importance"; break;
        }
        j["pipelines"].push_back(std::move(pj));
    }
    if (!s.hypotheses.empty()) {
        j["hypotheses"] = json::array();
        for (const auto& h : s.hypotheses)
            j["hypotheses"].push_back({{"name", h.name}, {"set", h.set}});
    }
    if (s.comparison) {
        j["comparison"] = {{"pipelines", s.comparison->pipelines}, {"key", s.comparison->key}};
    }
    return j.dump(2) + "\n";
}

} // namespace dsm
