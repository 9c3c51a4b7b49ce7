#pragma once

// Rendering of fusion results: fixed-width text tables (input rows, result
// row, conflict columns, and a quasi-normalization line) and a
// machine-readable JSON form that parses back into the same result data.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbel/belief.hpp"
#include "qbel/enrichment.hpp"
#include "qbel/fusion.hpp"
#include "qbel/proposition.hpp"

namespace qbel {

namespace detail {

// Column classes: singletons, then unions of singletons, then anything
// containing a proper intersection (where conflicts live).
inline int column_class(const Proposition& p) {
    if (p.is_empty()) return 3;
    bool all_single = true;
    for (std::uint32_t t : p.terms())
        if (std::popcount(t) > 1) all_single = false;
    if (all_single) return p.terms().size() == 1 ? 0 : 1;
    return 2;
}

inline bool column_less(const Proposition& a, const Proposition& b) {
    int ca = column_class(a), cb = column_class(b);
    if (ca != cb) return ca < cb;
    return a < b;
}

inline std::string result_row_name(FusionRule rule) {
    return rule == FusionRule::PCR5 ? "qmPCR5" : "qm12";
}

} // namespace detail

/// Fixed-width table: one column per proposition (inputs, fused masses and
/// conflict buckets), one row per named input source, then one result row
/// per fusion result, then a quasi-normalization line per result.
inline std::string render_table(std::span<const FusionResult> results,
                                const std::vector<std::pair<std::string, QBBA>>& inputs,
                                bool unicode = false) {
    std::vector<Proposition> columns;
    auto add_column = [&columns](const Proposition& p) {
        if (std::find(columns.begin(), columns.end(), p) == columns.end())
            columns.push_back(p);
    };
    for (const auto& [name, qbba] : inputs)
        for (const auto& [prop, value] : qbba.masses()) add_column(prop);
    for (const FusionResult& result : results) {
        for (const auto& [prop, value] : result.fused.masses()) add_column(prop);
        for (const auto& [prop, value] : result.conflict_masses) add_column(prop);
    }
    std::sort(columns.begin(), columns.end(), detail::column_less);

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{""};
    for (const Proposition& p : columns) header.push_back(to_string(p, unicode));
    rows.push_back(header);

    auto cell = [](const std::map<Proposition, EnrichedLabel>& masses, const Proposition& p,
                   const EnrichmentSpec& spec) -> std::string {
        auto it = masses.find(p);
        return it == masses.end() ? "" : render_mass(it->second, spec);
    };

    for (const auto& [name, qbba] : inputs) {
        std::vector<std::string> row{name};
        for (const Proposition& p : columns)
            row.push_back(cell(qbba.masses(), p, qbba.enrichment()));
        rows.push_back(row);
    }
    for (const FusionResult& result : results) {
        const EnrichmentSpec& spec = result.fused.enrichment();
        std::vector<std::string> result_row{detail::result_row_name(result.config.rule)};
        for (const Proposition& p : columns) {
            std::string value = cell(result.fused.masses(), p, spec);
            if (value.empty()) value = cell(result.conflict_masses, p, spec);
            result_row.push_back(value);
        }
        rows.push_back(result_row);
    }

    std::vector<std::size_t> widths(rows[0].size(), 0);
    for (const std::vector<std::string>& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());

    std::ostringstream os;
    for (const std::vector<std::string>& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += "  ";
            line += row[i] + std::string(widths[i] - row[i].size(), ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << "\n";
    }
    for (const FusionResult& result : results) {
        os << (results.size() > 1 ? detail::result_row_name(result.config.rule) + " " : "")
           << "quasi-normalized: " << (result.quasi_normalized ? "yes" : "no") << "\n";
    }
    return os.str();
}

inline std::string render_table(const FusionResult& result,
                                const std::vector<std::pair<std::string, QBBA>>& inputs,
                                bool unicode = false) {
    return render_table(std::span<const FusionResult>(&result, 1), inputs, unicode);
}

namespace detail {

inline nlohmann::ordered_json label_to_json(const EnrichedLabel& value) {
    nlohmann::ordered_json j;
    if (value.label.index().is_integer())
        j["index"] = value.label.index().numerator();
    else
        j["index"] = value.label.index().str();
    j["confidence"] = to_string(value.confidence);
    return j;
}

inline nlohmann::ordered_json masses_to_json(
    const std::map<Proposition, EnrichedLabel>& masses) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [prop, value] : masses) j[to_string(prop)] = label_to_json(value);
    return j;
}

} // namespace detail

inline nlohmann::ordered_json render_json(const FusionResult& result,
                                          bool include_trace = false) {
    nlohmann::ordered_json j;
    j["rule"] = result.config.rule == FusionRule::PCR5 ? "pcr5" : "conjunctive";
    j["approx"] = result.config.mode == ApproxMode::Deferred ? "deferred" : "stepwise";
    switch (result.config.combiner) {
    case CombinerChoice::Min: j["confidence"] = "min"; break;
    case CombinerChoice::Average: j["confidence"] = "average"; break;
    case CombinerChoice::Interval: j["confidence"] = "interval"; break;
    }
    j["fused"] = detail::masses_to_json(result.fused.masses());
    j["conflict"] = detail::masses_to_json(result.conflict_masses);
    j["quasi_normalized"] = result.quasi_normalized;

    nlohmann::ordered_json detail_json = nlohmann::ordered_json::array();
    for (const ConflictTransfer& t : result.conflict_detail) {
        nlohmann::ordered_json entry;
        entry["conflict"] = to_string(t.conflict);
        entry["left"] = to_string(t.left);
        entry["right"] = to_string(t.right);
        entry["product"] = to_string(t.product);
        entry["null_product"] = t.null_product;
        if (t.share_left) entry["share_left"] = to_string(*t.share_left);
        if (t.share_right) entry["share_right"] = to_string(*t.share_right);
        detail_json.push_back(entry);
    }
    j["conflict_detail"] = detail_json;
    if (include_trace) j["trace"] = result.trace;
    return j;
}

/// The fused/conflict masses and quasi-normalization flag recovered from
/// render_json() output; parsing a rendering yields the original data.
struct ParsedResult {
    std::map<Proposition, EnrichedLabel> fused;
    std::map<Proposition, EnrichedLabel> conflict;
    bool quasi_normalized = false;

    friend bool operator==(const ParsedResult& a, const ParsedResult& b) {
        return a.fused == b.fused && a.conflict == b.conflict &&
               a.quasi_normalized == b.quasi_normalized;
    }
};

inline ParsedResult parse_result_json(const nlohmann::ordered_json& j, const Frame& frame,
                                      const LabelScale& scale,
                                      const QualitativeDegreeScale* degrees = nullptr) {
    auto parse_masses = [&](const nlohmann::ordered_json& m) {
        std::map<Proposition, EnrichedLabel> out;
        for (const auto& [prop_text, value] : m.items()) {
            Proposition prop = parse_proposition(prop_text, frame);
            std::string index_text = value.at("index").is_string()
                                         ? value.at("index").get<std::string>()
                                         : value.at("index").dump();
            Rational index = Rational::parse(index_text);
            Label label = index.is_integer()
                              ? Label(scale, index.numerator())
                              : Label::exact(scale, index);
            std::size_t pos = 0;
            std::string conf_text = value.at("confidence").get<std::string>();
            Confidence conf = detail::parse_confidence_prefix(conf_text, pos, degrees);
            if (pos != conf_text.size())
                throw ParseError("trailing characters after confidence", pos + 1);
            out.emplace(std::move(prop), EnrichedLabel{std::move(label), std::move(conf)});
        }
        return out;
    };
    ParsedResult parsed;
    parsed.fused = parse_masses(j.at("fused"));
    parsed.conflict = parse_masses(j.at("conflict"));
    parsed.quasi_normalized = j.at("quasi_normalized").get<bool>();
    return parsed;
}

/// ParsedResult view of a FusionResult, for comparing against a parsed
/// rendering.
inline ParsedResult result_data(const FusionResult& result) {
    return ParsedResult{result.fused.masses(), result.conflict_masses,
                        result.quasi_normalized};
}

} // namespace qbel
