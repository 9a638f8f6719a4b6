// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
//
// JSON model format:
//   { "vertices": [...],
//     "transitions": [{"from","to","lo","hi","lo_strict","hi_strict"} | {"from","to","p"}],
//     "constraints": [[["u","v"],["x","y"]], ...],
//     "query": {"source","target","relation","threshold","epsilon"?} }
#include <array>
#include <set>

#include <json.hpp>

#include "aimc/error.hpp"
#include "aimc/model.hpp"

namespace aimc {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Rational rational_field(const json& obj, const char* key) {
    if (!obj.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    const json& v = obj.at(key);
    if (v.is_string()) {
        return Rational::parse(v.get<std::string>());
    }
    if (v.is_number_integer()) {
        return Rational(v.get<long long>());
    }
    throw ParseError(std::string("field '") + key + "' must be a rational string \"p/q\"");
}

bool bool_field(const json& obj, const char* key) {
    if (!obj.contains(key)) {
        return false;
    }
    if (!obj.at(key).is_boolean()) {
        throw ParseError(std::string("field '") + key + "' must be a boolean");
    }
    return obj.at(key).get<bool>();
}

std::string string_field(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_string()) {
        throw ParseError(std::string("missing or non-string field '") + key + "'");
    }
    return obj.at(key).get<std::string>();
}

const std::string& known_vertex(const std::set<std::string>& names, const std::string& name) {
    if (!names.contains(name)) {
        throw ModelError("unknown vertex '" + name + "'");
    }
    return name;
}

Relation parse_relation(const std::string& s) {
    if (s == "ge" || s == ">=") {
        return Relation::Ge;
    }
    if (s == "le" || s == "<=") {
        return Relation::Le;
    }
    throw ParseError("relation must be \"le\" or \"ge\", got \"" + s + "\"");
}

ordered_json interval_json(ordered_json obj, const Interval& iv) {
    if (iv.is_singleton()) {
        obj["p"] = iv.lo.str();
        return obj;
    }
    obj["lo"] = iv.lo.str();
    obj["hi"] = iv.hi.str();
    obj["lo_strict"] = iv.lo_strict;
    obj["hi_strict"] = iv.hi_strict;
    return obj;
}

} // namespace

ModelDocument parse_document(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("model must be a JSON object");
    }
    if (!doc.contains("vertices") || !doc.at("vertices").is_array()) {
        throw ParseError("missing 'vertices' array");
    }

    AimcModel::Builder builder;
    std::set<std::string> names;
    for (const json& v : doc.at("vertices")) {
        if (!v.is_string()) {
            throw ParseError("vertex identifiers must be strings");
        }
        if (!names.insert(v.get<std::string>()).second) {
            throw ModelError("duplicate vertex '" + v.get<std::string>() + "'");
        }
        builder.vertex(v.get<std::string>());
    }

    if (doc.contains("transitions")) {
        for (const json& t : doc.at("transitions")) {
            if (!t.is_object()) {
                throw ParseError("transition entries must be objects");
            }
            const std::string from = known_vertex(names, string_field(t, "from"));
            const std::string to = known_vertex(names, string_field(t, "to"));
            Interval iv;
            if (t.contains("p")) {
                iv = Interval::point(rational_field(t, "p"));
            } else {
                iv = {rational_field(t, "lo"), bool_field(t, "lo_strict"), rational_field(t, "hi"),
                      bool_field(t, "hi_strict")};
            }
            builder.transition(from, to, iv);
        }
    }

    if (doc.contains("constraints")) {
        for (const json& c : doc.at("constraints")) {
            if (!c.is_array() || c.size() != 2 || !c[0].is_array() || c[0].size() != 2 ||
                !c[1].is_array() || c[1].size() != 2) {
                throw ParseError("constraints must have the form [[\"u\",\"v\"],[\"x\",\"y\"]]");
            }
            std::array<std::string, 4> ends;
            for (int i = 0; i < 4; ++i) {
                const json& s = c[i / 2][i % 2];
                if (!s.is_string()) {
                    throw ParseError("constraint endpoints must be vertex names");
                }
                ends[i] = known_vertex(names, s.get<std::string>());
            }
            builder.tie(ends[0], ends[1], ends[2], ends[3]);
        }
    }

    ModelDocument out{builder.build(), std::nullopt};

    if (doc.contains("query") && !doc.at("query").is_null()) {
        const json& q = doc.at("query");
        Query query;
        query.source = out.model.index_of(string_field(q, "source"));
        query.target = out.model.index_of(string_field(q, "target"));
        query.relation = parse_relation(string_field(q, "relation"));
        query.threshold = rational_field(q, "threshold");
        if (q.contains("epsilon") && !q.at("epsilon").is_null()) {
            query.promise_gap = rational_field(q, "epsilon");
        }
        check_query(out.model, query);
        out.query = query;
    }
    return out;
}

AimcModel parse_model(std::string_view text) { return parse_document(text).model; }

std::string serialize(const AimcModel& model, const std::optional<Query>& query) {
    ordered_json doc;
    doc["vertices"] = model.vertices();
    ordered_json transitions = ordered_json::array();
    for (const auto& [e, iv] : model.transitions()) {
        ordered_json t;
        t["from"] = model.name(e.from);
        t["to"] = model.name(e.to);
        transitions.push_back(interval_json(std::move(t), iv));
    }
    doc["transitions"] = std::move(transitions);
    ordered_json constraints = ordered_json::array();
    for (const auto& [a, b] : model.constraints()) {
        constraints.push_back(ordered_json::array({ordered_json::array({model.name(a.from), model.name(a.to)}),
                                                   ordered_json::array({model.name(b.from), model.name(b.to)})}));
    }
    doc["constraints"] = std::move(constraints);
    if (query) {
        ordered_json q;
        q["source"] = model.name(query->source);
        q["target"] = model.name(query->target);
        q["relation"] = std::string(relation_name(query->relation));
        q["threshold"] = query->threshold.str();
        if (query->promise_gap) {
            q["epsilon"] = query->promise_gap->str();
        }
        doc["query"] = std::move(q);
    }
    return doc.dump(2) + "\n";
}

std::string serialize(const MarkovChain& chain) {
    ordered_json doc;
    doc["vertices"] = chain.vertices();
    ordered_json transitions = ordered_json::array();
    for (VertexId v = 0; v < chain.size(); ++v) {
        for (const auto& [to, p] : chain.row(v)) {
            transitions.push_back({{"from", chain.name(v)}, {"to", chain.name(to)}, {"p", p.str()}});
        }
    }
    doc["transitions"] = std::move(transitions);
    doc["constraints"] = ordered_json::array();
    return doc.dump(2) + "\n";
}

} // namespace aimc
