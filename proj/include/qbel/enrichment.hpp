#pragma once

// Enriched labels: a linguistic label paired with a confidence expressing
// how strongly the source supports it. Two kinds of support degree exist:
//
//   * numeric degrees in [0, inf) — 1 is neutral, below 1 discounts,
//     above 1 reinforces;
//   * qualitative degrees drawn from an ordered scale such as
//     NB < NM < NS < O < PS < PM < PB with a designated neutral element.
//
// Confidences are combined with one of three rules (average, minimum, or
// an interval spanning all inputs). The k-ary combiners act jointly on all
// inputs at once: the average of three degrees is their mean, not a fold
// of pairwise means, which keeps the non-associative average well defined.
//
// Labels and confidences never interact: the label half of every operator
// below is exactly the corresponding q-operator.

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qbel/errors.hpp"
#include "qbel/label.hpp"
#include "qbel/rational.hpp"

namespace qbel {

class QualitativeDegreeScale {
public:
    QualitativeDegreeScale(std::vector<std::string> degrees, std::size_t neutral) {
        if (degrees.empty())
            throw Error("degree scale must not be empty");
        if (neutral >= degrees.size())
            throw Error("neutral degree index outside the scale");
        for (std::size_t i = 0; i < degrees.size(); ++i) {
            validate_name(degrees[i]);
            for (std::size_t j = i + 1; j < degrees.size(); ++j)
                if (degrees[i] == degrees[j])
                    throw Error("duplicate degree name '" + degrees[i] + "'");
        }
        d_ = std::make_shared<const Data>(Data{std::move(degrees), neutral});
    }

    const std::vector<std::string>& degrees() const { return d_->degrees; }
    std::size_t neutral_position() const { return d_->neutral; }
    std::size_t size() const { return d_->degrees.size(); }

    std::optional<std::size_t> position_of(std::string_view name) const {
        for (std::size_t i = 0; i < d_->degrees.size(); ++i)
            if (d_->degrees[i] == name) return i;
        return std::nullopt;
    }

    friend bool operator==(const QualitativeDegreeScale& a,
                           const QualitativeDegreeScale& b) {
        return a.d_ == b.d_ ||
               (a.d_->degrees == b.d_->degrees && a.d_->neutral == b.d_->neutral);
    }
    friend bool operator!=(const QualitativeDegreeScale& a,
                           const QualitativeDegreeScale& b) {
        return !(a == b);
    }

private:
    struct Data {
        std::vector<std::string> degrees;
        std::size_t neutral;
    };

    static void validate_name(const std::string& name) {
        if (name.empty())
            throw Error("degree names must be non-empty");
        for (char c : name)
            if (c == '(' || c == ')' || c == ',' || c == '[' || c == ']' ||
                c == ' ' || c == '\t' || c == '-')
                throw Error("degree name '" + name + "' contains a reserved character");
    }

    std::shared_ptr<const Data> d_;
};

/// One support degree: a non-negative rational or a position on a
/// qualitative degree scale. Degrees of different kinds never mix.
class SupportDegree {
public:
    static SupportDegree numeric(Rational value) {
        if (value.is_negative())
            throw Error("numeric support degrees live in [0, inf)");
        return SupportDegree(std::move(value));
    }

    static SupportDegree qualitative(QualitativeDegreeScale scale, std::size_t position) {
        if (position >= scale.size())
            throw Error("degree position outside the scale");
        return SupportDegree(Qual{std::move(scale), position});
    }

    bool is_numeric() const { return std::holds_alternative<Rational>(v_); }

    const Rational& value() const { return std::get<Rational>(v_); }
    const QualitativeDegreeScale& degree_scale() const { return std::get<Qual>(v_).scale; }
    std::size_t position() const { return std::get<Qual>(v_).position; }

    friend bool operator==(const SupportDegree& a, const SupportDegree& b) {
        if (a.is_numeric() != b.is_numeric()) return false;
        if (a.is_numeric()) return a.value() == b.value();
        return a.degree_scale() == b.degree_scale() && a.position() == b.position();
    }
    friend bool operator!=(const SupportDegree& a, const SupportDegree& b) {
        return !(a == b);
    }

    friend bool operator<(const SupportDegree& a, const SupportDegree& b) {
        require_combinable(a, b);
        if (a.is_numeric()) return a.value() < b.value();
        return a.position() < b.position();
    }
    friend bool operator<=(const SupportDegree& a, const SupportDegree& b) {
        return !(b < a);
    }

    static void require_combinable(const SupportDegree& a, const SupportDegree& b) {
        if (a.is_numeric() != b.is_numeric())
            throw EnrichmentMismatchError("cannot mix numeric and qualitative degrees");
        if (!a.is_numeric() && a.degree_scale() != b.degree_scale())
            throw EnrichmentMismatchError("degrees are on different scales");
    }

private:
    struct Qual {
        QualitativeDegreeScale scale;
        std::size_t position;
    };

    explicit SupportDegree(Rational v) : v_(std::move(v)) {}
    explicit SupportDegree(Qual q) : v_(std::move(q)) {}

    std::variant<Rational, Qual> v_;
};

inline std::string to_string(const SupportDegree& d) {
    if (d.is_numeric()) return d.value().decimal_str();
    return d.degree_scale().degrees()[d.position()];
}

/// A point degree or a [low, high] interval of degrees; an interval whose
/// ends coincide normalizes back to a point.
class Confidence {
public:
    static Confidence point(SupportDegree d) { return Confidence(std::move(d), std::nullopt); }

    static Confidence interval(SupportDegree low, SupportDegree high) {
        SupportDegree::require_combinable(low, high);
        if (high < low)
            throw Error("confidence interval bounds out of order");
        if (low == high) return point(std::move(low));
        return Confidence(std::move(low), std::move(high));
    }

    bool is_interval() const { return high_.has_value(); }
    const SupportDegree& low() const { return low_; }
    const SupportDegree& high() const { return high_ ? *high_ : low_; }

    /// Optimistic interval summary; identity on points. Numeric only, since
    /// qualitative midpoints would need the position-averaging convention.
    SupportDegree midpoint() const {
        if (!is_interval()) return low_;
        if (low_.is_numeric())
            return SupportDegree::numeric((low_.value() + high_->value()) / Rational(2));
        Rational mean = (Rational(static_cast<long long>(low_.position())) +
                         Rational(static_cast<long long>(high_->position()))) /
                        Rational(2);
        return SupportDegree::qualitative(
            low_.degree_scale(),
            static_cast<std::size_t>(mean.round_half_away()));
    }

    friend bool operator==(const Confidence& a, const Confidence& b) {
        return a.low_ == b.low_ && a.high_ == b.high_;
    }
    friend bool operator!=(const Confidence& a, const Confidence& b) { return !(a == b); }

private:
    Confidence(SupportDegree low, std::optional<SupportDegree> high)
        : low_(std::move(low)), high_(std::move(high)) {}

    SupportDegree low_;
    std::optional<SupportDegree> high_;
};

inline std::string to_string(const Confidence& c) {
    if (!c.is_interval()) return to_string(c.low());
    return "[" + to_string(c.low()) + "," + to_string(c.high()) + "]";
}

inline std::ostream& operator<<(std::ostream& os, const Confidence& c) {
    return os << to_string(c);
}

enum class CombinerChoice { Average, Min, Interval };

namespace detail {

inline const SupportDegree& degree_min(const SupportDegree& a, const SupportDegree& b) {
    return b < a ? b : a;
}
inline const SupportDegree& degree_max(const SupportDegree& a, const SupportDegree& b) {
    return a < b ? b : a;
}

inline SupportDegree degree_mean(std::span<const SupportDegree> ds) {
    if (ds.front().is_numeric()) {
        Rational sum(0);
        for (const SupportDegree& d : ds) sum += d.value();
        return SupportDegree::numeric(sum / Rational(static_cast<long long>(ds.size())));
    }
    // Qualitative average: mean of scale positions, rounded half away
    // from zero back to a position.
    Rational sum(0);
    for (const SupportDegree& d : ds)
        sum += Rational(static_cast<long long>(d.position()));
    Rational mean = sum / Rational(static_cast<long long>(ds.size()));
    return SupportDegree::qualitative(ds.front().degree_scale(),
                                      static_cast<std::size_t>(mean.round_half_away()));
}

} // namespace detail

/// Joint k-ary confidence combination. Min takes the pointwise minimum
/// (for intervals: of lows and of highs), Average the endpoint-wise mean,
/// Interval the envelope [min of all ends, max of all ends].
inline Confidence combine_confidence(std::span<const Confidence> cs, CombinerChoice how) {
    if (cs.empty())
        throw Error("cannot combine zero confidences");
    for (std::size_t i = 1; i < cs.size(); ++i)
        SupportDegree::require_combinable(cs[0].low(), cs[i].low());
    if (cs.size() == 1) return cs[0];

    switch (how) {
    case CombinerChoice::Min: {
        SupportDegree lo = cs[0].low(), hi = cs[0].high();
        for (std::size_t i = 1; i < cs.size(); ++i) {
            lo = detail::degree_min(lo, cs[i].low());
            hi = detail::degree_min(hi, cs[i].high());
        }
        return Confidence::interval(std::move(lo), std::move(hi));
    }
    case CombinerChoice::Average: {
        std::vector<SupportDegree> lows, highs;
        lows.reserve(cs.size());
        highs.reserve(cs.size());
        for (const Confidence& c : cs) {
            lows.push_back(c.low());
            highs.push_back(c.high());
        }
        return Confidence::interval(detail::degree_mean(lows), detail::degree_mean(highs));
    }
    case CombinerChoice::Interval: {
        SupportDegree lo = cs[0].low(), hi = cs[0].high();
        for (std::size_t i = 1; i < cs.size(); ++i) {
            lo = detail::degree_min(lo, cs[i].low());
            hi = detail::degree_max(hi, cs[i].high());
        }
        return Confidence::interval(std::move(lo), std::move(hi));
    }
    }
    throw Error("unknown combiner");
}

inline Confidence combine_confidence(const Confidence& a, const Confidence& b,
                                     CombinerChoice how) {
    const Confidence cs[] = {a, b};
    return combine_confidence(std::span<const Confidence>(cs, 2), how);
}

/// A label together with the confidence its source attached to it.
struct EnrichedLabel {
    Label label;
    Confidence confidence;

    friend bool operator==(const EnrichedLabel& a, const EnrichedLabel& b) {
        return a.label == b.label && a.confidence == b.confidence;
    }
    friend bool operator!=(const EnrichedLabel& a, const EnrichedLabel& b) {
        return !(a == b);
    }
};

inline Confidence neutral_numeric_confidence() {
    return Confidence::point(SupportDegree::numeric(Rational(1)));
}

inline Confidence neutral_confidence(const QualitativeDegreeScale& scale) {
    return Confidence::point(
        SupportDegree::qualitative(scale, scale.neutral_position()));
}

inline EnrichedLabel plain(Label l) {
    return EnrichedLabel{std::move(l), neutral_numeric_confidence()};
}

// ---- qe-operators: q-operator on the labels, combiner on the confidences.

inline EnrichedLabel qe_add(const EnrichedLabel& a, const EnrichedLabel& b,
                            CombinerChoice how, ApproxMode mode) {
    return {q_add(a.label, b.label, mode),
            combine_confidence(a.confidence, b.confidence, how)};
}

/// Joint variadic sum: labels folded with q_add, confidences combined in
/// one k-ary step over all inputs.
inline EnrichedLabel qe_sum(std::span<const EnrichedLabel> terms, CombinerChoice how,
                            ApproxMode mode) {
    if (terms.empty())
        throw Error("cannot sum zero enriched labels");
    Label sum = terms[0].label;
    std::vector<Confidence> cs;
    cs.reserve(terms.size());
    cs.push_back(terms[0].confidence);
    for (std::size_t i = 1; i < terms.size(); ++i) {
        sum = q_add(sum, terms[i].label, mode);
        cs.push_back(terms[i].confidence);
    }
    return {std::move(sum), combine_confidence(cs, how)};
}

inline EnrichedLabel qe_mul(const EnrichedLabel& a, const EnrichedLabel& b,
                            CombinerChoice how, ApproxMode mode) {
    return {q_mul(a.label, b.label, mode),
            combine_confidence(a.confidence, b.confidence, how)};
}

inline EnrichedLabel qe_mul_min(const EnrichedLabel& a, const EnrichedLabel& b,
                                CombinerChoice how) {
    return {q_mul_min(a.label, b.label),
            combine_confidence(a.confidence, b.confidence, how)};
}

/// Scalar multiplication carries the confidence through unchanged.
inline EnrichedLabel qe_scalar_mul(const Rational& s, const EnrichedLabel& a) {
    return {q_scalar_mul(s, a.label), a.confidence};
}

inline EnrichedLabel qe_div_internal(const EnrichedLabel& a, const EnrichedLabel& b,
                                     CombinerChoice how, ApproxMode mode) {
    return {q_div_internal(a.label, b.label, mode),
            combine_confidence(a.confidence, b.confidence, how)};
}

/// Exact ratio of two enriched labels, tagged with the combined confidence.
struct SupportedRatio {
    Rational value;
    Confidence confidence;

    friend bool operator==(const SupportedRatio& a, const SupportedRatio& b) {
        return a.value == b.value && a.confidence == b.confidence;
    }
};

inline SupportedRatio qe_div_external(const EnrichedLabel& a, const EnrichedLabel& b,
                                      CombinerChoice how) {
    return {q_div_external(a.label, b.label),
            combine_confidence(a.confidence, b.confidence, how)};
}

inline EnrichedLabel qe_sub(const EnrichedLabel& a, const EnrichedLabel& b,
                            CombinerChoice how, ApproxMode mode) {
    return {q_sub(a.label, b.label, mode),
            combine_confidence(a.confidence, b.confidence, how)};
}

/// "L2(0.7)", "L4(NM)", "L3([0.3,0.6])". Plain labels should render
/// through an EnrichmentSpec-aware caller that drops the "(1)".
inline std::string to_string(const EnrichedLabel& e) {
    return to_string(e.label) + "(" + to_string(e.confidence) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const EnrichedLabel& e) {
    return os << to_string(e);
}

namespace detail {

inline SupportDegree parse_degree_prefix(std::string_view text, std::size_t& pos,
                                         const QualitativeDegreeScale* degrees) {
    if (degrees) {
        std::size_t best = 0;
        std::size_t best_pos = 0;
        for (std::size_t i = 0; i < degrees->size(); ++i) {
            const std::string& name = degrees->degrees()[i];
            if (text.substr(pos, name.size()) == name && name.size() > best) {
                best = name.size();
                best_pos = i;
            }
        }
        if (best > 0) {
            pos += best;
            return SupportDegree::qualitative(*degrees, best_pos);
        }
        throw ParseError("expected qualitative degree", pos + 1);
    }
    return SupportDegree::numeric(Rational::parse_prefix(text, pos));
}

inline Confidence parse_confidence_prefix(std::string_view text, std::size_t& pos,
                                          const QualitativeDegreeScale* degrees) {
    if (pos < text.size() && text[pos] == '[') {
        ++pos;
        SupportDegree lo = parse_degree_prefix(text, pos, degrees);
        if (pos >= text.size() || text[pos] != ',')
            throw ParseError("expected ',' in confidence interval", pos + 1);
        ++pos;
        SupportDegree hi = parse_degree_prefix(text, pos, degrees);
        if (pos >= text.size() || text[pos] != ']')
            throw ParseError("expected ']' in confidence interval", pos + 1);
        ++pos;
        return Confidence::interval(std::move(lo), std::move(hi));
    }
    return Confidence::point(parse_degree_prefix(text, pos, degrees));
}

} // namespace detail

/// Inverse of to_string(EnrichedLabel). A missing "(confidence)" suffix
/// yields the neutral numeric confidence (a plain, Type-0 label); pass the
/// degree scale to parse qualitative confidences.
inline EnrichedLabel parse_enriched_label(std::string_view text, const LabelScale& scale,
                                          const QualitativeDegreeScale* degrees = nullptr) {
    std::size_t pos = 0;
    Label l = detail::parse_label_prefix(text, pos, scale);
    if (pos == text.size())
        return plain(std::move(l));
    if (text[pos] != '(')
        throw ParseError("expected '(' before confidence", pos + 1);
    ++pos;
    Confidence c = detail::parse_confidence_prefix(text, pos, degrees);
    if (pos >= text.size() || text[pos] != ')')
        throw ParseError("expected ')' after confidence", pos + 1);
    ++pos;
    if (pos != text.size())
        throw ParseError("trailing characters after enriched label", pos + 1);
    return {std::move(l), std::move(c)};
}

} // namespace qbel
