#pragma once

// Shared builders and random generators for the unit and acceptance
// suites. Framework-free so both can include it.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qbel/qbel.hpp"

namespace support {

using namespace qbel;

inline Rational num(long long p, long long q = 1) { return Rational(p, q); }

inline Confidence conf(long long p, long long q = 1) {
    return Confidence::point(SupportDegree::numeric(Rational(p, q)));
}

inline Confidence conf_interval(const Rational& lo, const Rational& hi) {
    return Confidence::interval(SupportDegree::numeric(lo), SupportDegree::numeric(hi));
}

inline EnrichedLabel el(const LabelScale& scale, long long k, long long cp, long long cq = 1) {
    return EnrichedLabel{Label(scale, k), conf(cp, cq)};
}

inline QualitativeDegreeScale degree_scale_x() {
    return QualitativeDegreeScale({"NB", "NM", "NS", "O", "PS", "PM", "PB"}, 3);
}

inline Confidence dconf(const QualitativeDegreeScale& x, const std::string& name) {
    return Confidence::point(SupportDegree::qualitative(x, *x.position_of(name)));
}

inline Frame frame_ab() { return Frame({"A", "B"}); }
inline Frame frame_abc() { return Frame({"A", "B", "C"}); }

inline Proposition prop(const std::string& text, const Frame& frame) {
    return parse_proposition(text, frame);
}

// The two-source numeric-confidence example: Shafer model on {A, B},
// scale n = 5, Type-1 confidences, minimum combiner.
struct NumericConfidenceExample {
    Frame frame = frame_ab();
    Model model = Model::shafer();
    LabelScale scale{5};
    QBBA qm1{frame, model, scale, EnrichmentSpec::numeric()};
    QBBA qm2{frame, model, scale, EnrichmentSpec::numeric()};

    NumericConfidenceExample() {
        qm1.set_mass(prop("A", frame), el(scale, 1, 3, 10));
        qm1.set_mass(prop("B", frame), el(scale, 2, 11, 10));
        qm1.set_mass(prop("A|B", frame), el(scale, 3, 4, 5));
        qm2.set_mass(prop("A", frame), el(scale, 4, 3, 5));
        qm2.set_mass(prop("B", frame), el(scale, 2, 7, 10));
        qm2.set_mass(prop("A|B", frame), el(scale, 0, 1));
    }
};

// The same frame with Type-2 (qualitative) confidences.
struct QualitativeConfidenceExample {
    Frame frame = frame_ab();
    Model model = Model::shafer();
    LabelScale scale{5};
    QualitativeDegreeScale x = degree_scale_x();
    QBBA qm1{frame, model, scale, EnrichmentSpec::qualitative(x)};
    QBBA qm2{frame, model, scale, EnrichmentSpec::qualitative(x)};

    QualitativeConfidenceExample() {
        qm1.set_mass(prop("A", frame), EnrichedLabel{Label(scale, 1), dconf(x, "NB")});
        qm1.set_mass(prop("B", frame), EnrichedLabel{Label(scale, 2), dconf(x, "PS")});
        qm1.set_mass(prop("A|B", frame), EnrichedLabel{Label(scale, 3), dconf(x, "NS")});
        qm2.set_mass(prop("A", frame), EnrichedLabel{Label(scale, 4), dconf(x, "NM")});
        qm2.set_mass(prop("B", frame), EnrichedLabel{Label(scale, 2), dconf(x, "NS")});
        qm2.set_mass(prop("A|B", frame), EnrichedLabel{Label(scale, 0), dconf(x, "O")});
    }
};

// ---- randomness ---------------------------------------------------------

using Rng = std::mt19937_64;

inline long long rand_int(Rng& rng, long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

inline Rational rand_rational(Rng& rng, long long max_abs_num = 20, long long max_den = 9) {
    return Rational(rand_int(rng, -max_abs_num, max_abs_num), rand_int(rng, 1, max_den));
}

inline Rational rand_nonneg_rational(Rng& rng, long long max_num = 20, long long max_den = 9) {
    return Rational(rand_int(rng, 0, max_num), rand_int(rng, 1, max_den));
}

inline Label rand_mass_label(Rng& rng, const LabelScale& scale) {
    return Label(scale, rand_int(rng, 0, scale.top_index()));
}

inline Label rand_deferred_label(Rng& rng, const LabelScale& scale) {
    return Label::exact(scale, rand_rational(rng, 3 * scale.top_index(), 9));
}

inline Confidence rand_numeric_confidence(Rng& rng) {
    Rational a = rand_nonneg_rational(rng, 15, 10);
    if (rand_int(rng, 0, 3) == 0) {
        Rational b = rand_nonneg_rational(rng, 15, 10);
        return Confidence::interval(SupportDegree::numeric(a < b ? a : b),
                                    SupportDegree::numeric(a < b ? b : a));
    }
    return Confidence::point(SupportDegree::numeric(a));
}

inline Confidence rand_qual_confidence(Rng& rng, const QualitativeDegreeScale& x) {
    auto d = [&] {
        return SupportDegree::qualitative(
            x, static_cast<std::size_t>(rand_int(rng, 0, static_cast<long long>(x.size()) - 1)));
    };
    if (rand_int(rng, 0, 3) == 0) {
        SupportDegree a = d(), b = d();
        return Confidence::interval(a < b ? a : b, a < b ? b : a);
    }
    return Confidence::point(d());
}

inline Proposition rand_proposition(Rng& rng, const Frame& frame, bool allow_empty = false) {
    std::uint32_t universe = (std::uint32_t{1} << frame.size()) - 1;
    std::size_t tries = static_cast<std::size_t>(rand_int(rng, allow_empty ? 0 : 1, 3));
    std::vector<std::uint32_t> terms;
    for (std::size_t i = 0; i < tries; ++i)
        terms.push_back(static_cast<std::uint32_t>(rand_int(rng, 1, universe)));
    if (terms.empty()) return Proposition::empty(frame);
    return Proposition::from_terms(frame, std::move(terms));
}

/// Random expression text exercising the full grammar, including
/// redundant parentheses and absorbable shapes.
inline std::string rand_prop_text(Rng& rng, const Frame& frame, int depth = 0) {
    long long pick = rand_int(rng, 0, depth >= 3 ? 1 : 5);
    auto atom = [&] {
        return frame.atom_name(
            static_cast<std::size_t>(rand_int(rng, 0, static_cast<long long>(frame.size()) - 1)));
    };
    switch (pick) {
    case 0:
    case 1:
        return atom();
    case 2:
        return rand_prop_text(rng, frame, depth + 1) + "&" + rand_prop_text(rng, frame, depth + 1);
    case 3:
        return rand_prop_text(rng, frame, depth + 1) + "|" + rand_prop_text(rng, frame, depth + 1);
    case 4:
        return "(" + rand_prop_text(rng, frame, depth + 1) + ")";
    default:
        return atom() + (rand_int(rng, 0, 1) ? "&" : "|") + "(" +
               rand_prop_text(rng, frame, depth + 1) + ")";
    }
}

/// Random quasi-normalized plain QBBA: label indices form a composition of
/// n+1 over distinct model-reduced propositions.
inline QBBA rand_quasi_normalized_qbba(Rng& rng, const Frame& frame, const Model& model,
                                       const LabelScale& scale) {
    std::vector<Proposition> pool = enumerate_hyper_power_set(frame, model);
    std::vector<Proposition> keys;
    for (const Proposition& p : pool)
        if (!p.is_empty()) keys.push_back(p);

    QBBA q(frame, model, scale, EnrichmentSpec::none());
    long long remaining = scale.top_index();
    std::size_t picks = static_cast<std::size_t>(
        rand_int(rng, 1, static_cast<long long>(std::min<std::size_t>(keys.size(), 4))));
    std::vector<Proposition> chosen;
    for (std::size_t i = 0; i < picks; ++i) {
        Proposition p = keys[static_cast<std::size_t>(
            rand_int(rng, 0, static_cast<long long>(keys.size()) - 1))];
        bool seen = false;
        for (const Proposition& c : chosen) seen = seen || c == p;
        if (!seen) chosen.push_back(p);
    }
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        long long share = i + 1 == chosen.size()
                              ? remaining
                              : rand_int(rng, 0, remaining);
        remaining -= share;
        q.set_mass(chosen[i], Label(scale, share));
    }
    return q;
}

} // namespace support
