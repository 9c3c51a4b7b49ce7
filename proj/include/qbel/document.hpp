#pragma once

// JSON problem documents: one file describes a frame, its model, the label
// scale, the enrichment type, and any number of named sources. Mass maps
// use the same text syntaxes as the rest of the library ("A|B", "L2(0.7)",
// "L4(NM)"), so a document round-trips bit-exactly through the parsers.
//
// Schema by example:
//
//   {
//     "frame": ["A", "B"],
//     "model": "shafer",                    // or "free", or ["A&B", ...]
//     "scale": {"n": 5},                    // optional "names": [n+2 strings]
//     "enrichment": "numeric",              // or "none", or
//                                           // {"degrees": [...], "neutral": "O"}
//     "sources": {
//       "qm1": {"A": "L1(0.3)", "B": "L2(1.1)", "A|B": "L3(0.8)"},
//       "qm2": {"A": "L4(0.6)", "B": "L2(0.7)", "A|B": "L0(1)"}
//     }
//   }
//
// An optional "frame_limit" raises the default frame size cap of 4.

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qbel/belief.hpp"
#include "qbel/enrichment.hpp"
#include "qbel/errors.hpp"
#include "qbel/label.hpp"
#include "qbel/proposition.hpp"

namespace qbel {

struct ProblemDocument {
    Frame frame;
    Model model;
    LabelScale scale;
    EnrichmentSpec enrichment;
    std::vector<std::pair<std::string, QBBA>> sources;

    const QBBA* find_source(const std::string& name) const {
        for (const auto& [source_name, qbba] : sources)
            if (source_name == name) return &qbba;
        return nullptr;
    }
};

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline const ordered_json& require_field(const ordered_json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end())
        throw Error(std::string("document is missing the '") + name + "' field");
    return *it;
}

inline Frame load_frame(const ordered_json& j) {
    const ordered_json& atoms_json = require_field(j, "frame");
    if (!atoms_json.is_array() || atoms_json.empty())
        throw Error("'frame' must be a non-empty array of atom names");
    std::vector<std::string> atoms;
    for (const ordered_json& a : atoms_json) {
        if (!a.is_string()) throw Error("atom names must be strings");
        atoms.push_back(a.get<std::string>());
    }
    int limit = 4;
    if (j.contains("frame_limit")) {
        if (!j["frame_limit"].is_number_integer())
            throw Error("'frame_limit' must be an integer");
        limit = j["frame_limit"].get<int>();
    }
    if (static_cast<int>(atoms.size()) > limit && !j.contains("frame_limit"))
        throw Error("frame has more than 4 atoms; set 'frame_limit' to accept it");
    return Frame(std::move(atoms), limit);
}

inline Model load_model(const ordered_json& j, const Frame& frame) {
    const ordered_json& m = require_field(j, "model");
    if (m.is_string()) {
        std::string kind = m.get<std::string>();
        if (kind == "free") return Model::free();
        if (kind == "shafer") return Model::shafer();
        throw Error("unknown model '" + kind + "' (expected \"free\", \"shafer\" or a "
                    "list of empty intersections)");
    }
    if (!m.is_array())
        throw Error("'model' must be \"free\", \"shafer\" or an array");
    std::vector<Proposition> constraints;
    for (const ordered_json& c : m) {
        if (!c.is_string()) throw Error("model constraints must be proposition strings");
        constraints.push_back(parse_proposition(c.get<std::string>(), frame));
    }
    return Model::hybrid(constraints);
}

inline LabelScale load_scale(const ordered_json& j) {
    const ordered_json& s = require_field(j, "scale");
    if (s.is_number_integer()) return LabelScale(s.get<int>());
    if (!s.is_object() || !s.contains("n") || !s["n"].is_number_integer())
        throw Error("'scale' must be an integer n or an object with an integer 'n'");
    int n = s["n"].get<int>();
    if (!s.contains("names")) return LabelScale(n);
    std::vector<std::string> names;
    for (const ordered_json& name : s["names"]) {
        if (!name.is_string()) throw Error("scale names must be strings");
        names.push_back(name.get<std::string>());
    }
    return LabelScale(n, std::move(names));
}

inline EnrichmentSpec load_enrichment(const ordered_json& j) {
    const ordered_json& e = require_field(j, "enrichment");
    if (e.is_string()) {
        std::string kind = e.get<std::string>();
        if (kind == "none") return EnrichmentSpec::none();
        if (kind == "numeric") return EnrichmentSpec::numeric();
        throw Error("unknown enrichment '" + kind + "'");
    }
    if (!e.is_object() || !e.contains("degrees") || !e.contains("neutral"))
        throw Error("qualitative enrichment needs 'degrees' and 'neutral'");
    std::vector<std::string> degrees;
    for (const ordered_json& d : e["degrees"]) {
        if (!d.is_string()) throw Error("degree names must be strings");
        degrees.push_back(d.get<std::string>());
    }
    std::string neutral = e["neutral"].get<std::string>();
    for (std::size_t i = 0; i < degrees.size(); ++i)
        if (degrees[i] == neutral)
            return EnrichmentSpec::qualitative(QualitativeDegreeScale(degrees, i));
    throw Error("neutral degree '" + neutral + "' is not in the degree list");
}

} // namespace detail

inline ProblemDocument load_document_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw Error("document root must be a JSON object");
    Frame frame = detail::load_frame(j);
    Model model = detail::load_model(j, frame);
    LabelScale scale = detail::load_scale(j);
    EnrichmentSpec enrichment = detail::load_enrichment(j);

    const auto& sources_json = detail::require_field(j, "sources");
    if (!sources_json.is_object() || sources_json.empty())
        throw Error("'sources' must be a non-empty object of mass maps");

    ProblemDocument doc{frame, model, scale, enrichment, {}};
    const QualitativeDegreeScale* degrees =
        enrichment.kind() == EnrichmentKind::Qualitative ? &enrichment.degree_scale()
                                                         : nullptr;
    for (const auto& [name, masses] : sources_json.items()) {
        if (!masses.is_object())
            throw Error("source '" + name + "' must be an object of proposition: label");
        QBBA qbba(frame, model, scale, enrichment);
        for (const auto& [prop_text, label_json] : masses.items()) {
            if (!label_json.is_string())
                throw Error("mass values must be label strings");
            Proposition prop = parse_proposition(prop_text, frame);
            EnrichedLabel value =
                parse_enriched_label(label_json.get<std::string>(), scale, degrees);
            qbba.set_mass(std::move(prop), std::move(value));
        }
        doc.sources.emplace_back(name, std::move(qbba));
    }
    return doc;
}

inline ProblemDocument load_document_text(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("invalid JSON: ") + e.what());
    }
    return load_document_json(j);
}

/// Loads a problem document from disk. File-system failures throw
/// std::ios_base::failure; malformed content throws qbel::Error.
inline ProblemDocument load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::ios_base::failure("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_document_text(buffer.str());
}

} // namespace qbel
