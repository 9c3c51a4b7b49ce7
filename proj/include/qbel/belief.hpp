#pragma once

// Qualitative and numeric basic belief assignments over a frame.
//
// A QBBA maps model-reduced propositions to enriched labels on one scale.
// There is no way to normalize label masses exactly, but a quasi-normal
// assignment — label indices summing to exactly n+1 — is the qualitative
// image of a numeric assignment summing to 1, and is what the fusion rules
// expect. Explicit null entries (L0 with some confidence) are legal and
// preserved; they contribute nothing to sums but appear in rendered
// output.
//
// Validation is diagnostic, not throwing: malformed assignments are
// representable so that callers can report every problem at once.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbel/enrichment.hpp"
#include "qbel/errors.hpp"
#include "qbel/label.hpp"
#include "qbel/proposition.hpp"
#include "qbel/rational.hpp"

namespace qbel {

enum class EnrichmentKind { None, Numeric, Qualitative };

/// Which confidence type a belief assignment carries. Kind None means the
/// labels are plain; internally their confidence is the neutral numeric
/// point and rendering omits it.
class EnrichmentSpec {
public:
    static EnrichmentSpec none() { return EnrichmentSpec(EnrichmentKind::None, std::nullopt); }
    static EnrichmentSpec numeric() {
        return EnrichmentSpec(EnrichmentKind::Numeric, std::nullopt);
    }
    static EnrichmentSpec qualitative(QualitativeDegreeScale scale) {
        return EnrichmentSpec(EnrichmentKind::Qualitative, std::move(scale));
    }

    EnrichmentKind kind() const { return kind_; }
    const QualitativeDegreeScale& degree_scale() const { return *degrees_; }

    Confidence neutral() const {
        if (kind_ == EnrichmentKind::Qualitative)
            return neutral_confidence(*degrees_);
        return neutral_numeric_confidence();
    }

    /// True when `c` carries the right kind of degree for this spec.
    bool admits(const Confidence& c) const {
        switch (kind_) {
        case EnrichmentKind::None:
            return c == neutral_numeric_confidence();
        case EnrichmentKind::Numeric:
            return c.low().is_numeric();
        case EnrichmentKind::Qualitative:
            return !c.low().is_numeric() && c.low().degree_scale() == *degrees_;
        }
        return false;
    }

    friend bool operator==(const EnrichmentSpec& a, const EnrichmentSpec& b) {
        if (a.kind_ != b.kind_) return false;
        if (a.kind_ != EnrichmentKind::Qualitative) return true;
        return *a.degrees_ == *b.degrees_;
    }
    friend bool operator!=(const EnrichmentSpec& a, const EnrichmentSpec& b) {
        return !(a == b);
    }

private:
    EnrichmentSpec(EnrichmentKind kind, std::optional<QualitativeDegreeScale> degrees)
        : kind_(kind), degrees_(std::move(degrees)) {}

    EnrichmentKind kind_;
    std::optional<QualitativeDegreeScale> degrees_;
};

class QBBA {
public:
    QBBA(Frame frame, Model model, LabelScale scale, EnrichmentSpec enrichment)
        : frame_(std::move(frame)), model_(std::move(model)), scale_(std::move(scale)),
          enrichment_(std::move(enrichment)) {}

    const Frame& frame() const { return frame_; }
    const Model& model() const { return model_; }
    const LabelScale& scale() const { return scale_; }
    const EnrichmentSpec& enrichment() const { return enrichment_; }

    /// Stores a mass verbatim; problems surface through validate().
    void set_mass(Proposition p, EnrichedLabel value) {
        masses_.insert_or_assign(std::move(p), std::move(value));
    }

    void set_mass(Proposition p, Label label) {
        set_mass(std::move(p), EnrichedLabel{std::move(label), enrichment_.neutral()});
    }

    const std::map<Proposition, EnrichedLabel>& masses() const { return masses_; }

    std::optional<EnrichedLabel> mass(const Proposition& p) const {
        auto it = masses_.find(p);
        if (it == masses_.end()) return std::nullopt;
        return it->second;
    }

    friend bool operator==(const QBBA& a, const QBBA& b) {
        return a.frame_ == b.frame_ && a.model_ == b.model_ && a.scale_ == b.scale_ &&
               a.enrichment_ == b.enrichment_ && a.masses_ == b.masses_;
    }

private:
    Frame frame_;
    Model model_;
    LabelScale scale_;
    EnrichmentSpec enrichment_;
    std::map<Proposition, EnrichedLabel> masses_;
};

/// Mass rendering: plain assignments show bare labels, enriched ones show
/// the confidence.
inline std::string render_mass(const EnrichedLabel& value, const EnrichmentSpec& spec) {
    if (spec.kind() == EnrichmentKind::None && value.confidence == spec.neutral())
        return to_string(value.label);
    return to_string(value);
}

struct Diagnostic {
    std::string code;
    std::string message;

    friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
        return a.code == b.code && a.message == b.message;
    }
};

/// Structural checks: empty or unreduced keys, labels off the declared
/// scale or outside [0, n+1], confidences of the wrong enrichment type.
inline std::vector<Diagnostic> validate(const QBBA& q) {
    std::vector<Diagnostic> out;
    for (const auto& [prop, value] : q.masses()) {
        const std::string where = to_string(prop);
        if (prop.frame() != q.frame()) {
            out.push_back({"frame-mismatch", "proposition " + where + " is not on the declared frame"});
            continue;
        }
        if (prop.is_empty())
            out.push_back({"mass-on-empty-set", "mass assigned to the empty proposition"});
        else if (reduce_under_model(prop, q.model()) != prop)
            out.push_back({"key-not-reduced",
                           "proposition " + where + " is empty or reducible under the model"});
        if (value.label.scale() != q.scale())
            out.push_back({"scale-mismatch", "label for " + where + " is not on the declared scale"});
        else if (value.label.index().is_negative() ||
                 value.label.index() > Rational(q.scale().top_index()))
            out.push_back({"index-out-of-range",
                           "label index for " + where + " lies outside [0, n+1]"});
        if (!q.enrichment().admits(value.confidence))
            out.push_back({"enrichment-mismatch",
                           "confidence for " + where + " does not match the declared enrichment"});
    }
    return out;
}

/// Exact label-index sum across all masses equals n+1. Confidences and
/// saturation play no part; an over-unity assignment fails even though a
/// saturating fold of its labels would reach L_max.
inline bool is_quasi_normalized(const QBBA& q) {
    Rational sum(0);
    for (const auto& [prop, value] : q.masses()) sum += value.label.index();
    return sum == Rational(q.scale().top_index());
}

namespace detail {

inline EnrichedLabel sum_masses(const QBBA& q, std::span<const EnrichedLabel> terms,
                                CombinerChoice how, ApproxMode mode) {
    if (terms.empty())
        return EnrichedLabel{Label(q.scale(), 0), q.enrichment().neutral()};
    return qe_sum(terms, how, mode);
}

} // namespace detail

/// Belief in `a`: the sum of masses on propositions below `a`. Stepwise
/// folds with saturation; deferred returns the exact, unapproximated sum.
inline EnrichedLabel qbelief(const QBBA& q, const Proposition& a, CombinerChoice how,
                             ApproxMode mode) {
    require_same_frame(q.frame(), a.frame());
    std::vector<EnrichedLabel> terms;
    for (const auto& [prop, value] : q.masses())
        if (is_subset(prop, a)) terms.push_back(value);
    return detail::sum_masses(q, terms, how, mode);
}

/// Plausibility of `a`: the sum of masses on propositions the model lets
/// intersect `a`.
inline EnrichedLabel qplausibility(const QBBA& q, const Proposition& a, CombinerChoice how,
                                   ApproxMode mode) {
    require_same_frame(q.frame(), a.frame());
    std::vector<EnrichedLabel> terms;
    for (const auto& [prop, value] : q.masses())
        if (intersects(prop, a, q.model())) terms.push_back(value);
    return detail::sum_masses(q, terms, how, mode);
}

/// Numeric basic belief assignment; constructor enforces the invariants
/// (canonical reduced keys, masses in [0,1] summing to exactly 1).
class NumericBBA {
public:
    NumericBBA(Frame frame, Model model, std::map<Proposition, Rational> masses)
        : frame_(std::move(frame)), model_(std::move(model)), masses_(std::move(masses)) {
        Rational sum(0);
        for (const auto& [prop, mass] : masses_) {
            require_same_frame(prop.frame(), frame_);
            if (prop.is_empty())
                throw Error("numeric bba cannot weight the empty proposition");
            if (reduce_under_model(prop, model_) != prop)
                throw Error("numeric bba key " + to_string(prop) +
                            " is not reduced under the model");
            if (mass.is_negative() || mass > Rational(1))
                throw Error("numeric mass outside [0,1] for " + to_string(prop));
            sum += mass;
        }
        if (sum != Rational(1))
            throw Error("numeric masses must sum to exactly 1 (got " + sum.str() + ")");
    }

    const Frame& frame() const { return frame_; }
    const Model& model() const { return model_; }
    const std::map<Proposition, Rational>& masses() const { return masses_; }

private:
    Frame frame_;
    Model model_;
    std::map<Proposition, Rational> masses_;
};

inline Rational bel(const NumericBBA& m, const Proposition& a) {
    require_same_frame(m.frame(), a.frame());
    Rational sum(0);
    for (const auto& [prop, mass] : m.masses())
        if (is_subset(prop, a)) sum += mass;
    return sum;
}

inline Rational pl(const NumericBBA& m, const Proposition& a) {
    require_same_frame(m.frame(), a.frame());
    Rational sum(0);
    for (const auto& [prop, mass] : m.masses())
        if (intersects(prop, a, m.model())) sum += mass;
    return sum;
}

/// Image of a QBBA under the label/number isomorphism: L_i maps to
/// i/(n+1) exactly; confidences travel separately. The numeric side sums
/// to 1 precisely when the input is quasi-normalized.
struct NumericImage {
    std::map<Proposition, Rational> masses;
    std::map<Proposition, Confidence> confidences;
};

inline NumericImage qbba_to_numeric(const QBBA& q) {
    NumericImage out;
    for (const auto& [prop, value] : q.masses()) {
        out.masses.emplace(prop, value.label.to_numeric());
        out.confidences.emplace(prop, value.confidence);
    }
    return out;
}

} // namespace qbel
