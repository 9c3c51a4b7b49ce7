#pragma once

// Two-source fusion of belief assignments: the conjunctive rule and PCR5.
//
// Conjunctive fusion multiplies every pair of focal elements and collects
// the products on the (model-reduced) intersections. Products whose
// intersection the model declares empty land in conflict buckets, keyed by
// the un-reduced intersection so results can show an explicit A&B column.
//
// PCR5 then gives each conflicting product back to the two propositions
// that produced it, proportionally to their masses. A product that is
// already the null label is returned as L0 with the combined confidence to
// both sides; otherwise the share of X out of the product P = qm(X)qm(Y)
// is qm(X)P/(qm(X)+qm(Y)), evaluated as a single exact index expression
//
//     i * i * j / ((n+1) * (i + j))
//
// rounded once in deferred mode, or via the per-step rounded chain
// X * (P / (X + Y)) in stepwise mode.
//
// Confidence bookkeeping: a conjunctive bucket combines the confidences of
// every factor that flowed into it, jointly in one k-ary step; a PCR5
// bucket combines the conjunctive bucket's confidence with each share's
// confidence, again jointly. A share combines the factor confidences of
// its defining expression (numerator and denominator).
//
// Only two-source fusion is defined. The rules are not associative, so
// combining more sources means folding explicitly and accepting the order
// dependence.

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qbel/belief.hpp"
#include "qbel/enrichment.hpp"
#include "qbel/errors.hpp"
#include "qbel/label.hpp"
#include "qbel/proposition.hpp"
#include "qbel/rational.hpp"

namespace qbel {

enum class FusionRule { Conjunctive, PCR5 };

struct FusionConfig {
    FusionRule rule = FusionRule::Conjunctive;
    ApproxMode mode = ApproxMode::Stepwise;
    CombinerChoice combiner = CombinerChoice::Min;
};

/// One conflicting product and what became of it. `left` comes from the
/// first source, `right` from the second; shares are present when PCR5
/// proportionalized the product back.
struct ConflictTransfer {
    Proposition conflict;
    Proposition left;
    Proposition right;
    EnrichedLabel product;
    bool null_product = false;
    std::optional<EnrichedLabel> share_left;
    std::optional<EnrichedLabel> share_right;
    std::optional<Rational> share_left_exact;
    std::optional<Rational> share_right_exact;

    friend bool operator==(const ConflictTransfer& a, const ConflictTransfer& b) {
        return a.conflict == b.conflict && a.left == b.left && a.right == b.right &&
               a.product == b.product && a.null_product == b.null_product &&
               a.share_left == b.share_left && a.share_right == b.share_right &&
               a.share_left_exact == b.share_left_exact &&
               a.share_right_exact == b.share_right_exact;
    }
};

struct FusionResult {
    FusionConfig config;
    QBBA fused;
    std::map<Proposition, EnrichedLabel> conflict_masses;
    std::vector<ConflictTransfer> conflict_detail;
    /// Bucket indices before the final rounding: exact rational sums in
    /// deferred mode, the saturated integer folds in stepwise mode.
    std::map<Proposition, Rational> exact_indices;
    bool quasi_normalized = false;
    std::vector<std::string> trace;
};

namespace detail {

struct Contribution {
    Proposition left;
    Proposition right;
    EnrichedLabel left_value;
    EnrichedLabel right_value;
    Label product_label;   // evaluated in the configured mode
    Rational product_exact; // exact product index i*j/(n+1)
    Confidence product_confidence;
};

struct Bucket {
    std::vector<Contribution> contributions;
};

struct BucketSets {
    std::map<Proposition, Bucket> survivors;
    std::map<Proposition, Bucket> conflicts;
};

/// Pairwise product scan shared by both rules: every product lands on the
/// model-reduced intersection, or in a conflict bucket keyed by the
/// un-reduced intersection when the model empties it.
inline BucketSets collect_buckets(const QBBA& q1, const QBBA& q2, const FusionConfig& cfg) {
    const Rational top(q1.scale().top_index());
    BucketSets out;
    for (const auto& [p1, v1] : q1.masses()) {
        for (const auto& [p2, v2] : q2.masses()) {
            Proposition inter = prop_intersect(p1, p2);
            Proposition reduced = reduce_under_model(inter, q1.model());
            Contribution c{
                p1,
                p2,
                v1,
                v2,
                q_mul(v1.label, v2.label, cfg.mode),
                v1.label.index() * v2.label.index() / top,
                combine_confidence(v1.confidence, v2.confidence, cfg.combiner)};
            if (reduced.is_empty())
                out.conflicts[inter].contributions.push_back(std::move(c));
            else
                out.survivors[reduced].contributions.push_back(std::move(c));
        }
    }
    return out;
}

/// The null test is mode-consistent: per-step rounding judges the rounded
/// product, deferred evaluation the exact index.
inline bool product_is_null(const FusionConfig& cfg, const Contribution& c) {
    return cfg.mode == ApproxMode::Stepwise ? c.product_label.index().is_zero()
                                            : c.product_exact.is_zero();
}

inline void require_fusable(const QBBA& q1, const QBBA& q2) {
    if (q1.frame() != q2.frame())
        throw InputMismatchError("sources are defined on different frames");
    if (q1.model() != q2.model())
        throw InputMismatchError("sources use different models");
    if (q1.scale() != q2.scale())
        throw InputMismatchError("sources use different label scales");
    if (q1.enrichment() != q2.enrichment())
        throw InputMismatchError("sources use different enrichment types");
}

/// Folds contribution product labels in order with q_add, then rounds
/// once. In stepwise mode the fold already saturates per step and the
/// final rounding is a no-op.
inline Label fold_labels(const LabelScale& scale, const std::vector<Label>& labels,
                         ApproxMode mode, Rational& pre_rounding_index) {
    Label sum = labels.empty() ? Label(scale, 0) : labels.front();
    for (std::size_t i = 1; i < labels.size(); ++i)
        sum = q_add(sum, labels[i], mode);
    pre_rounding_index = sum.index();
    return approximate(sum, IndexClamp::NonNegative);
}

inline std::string bucket_formula(const std::string& name, const Proposition& key,
                                  const Bucket& bucket, const EnrichmentSpec& spec) {
    std::ostringstream os;
    os << name << "(" << key << ") = ";
    for (std::size_t i = 0; i < bucket.contributions.size(); ++i) {
        if (i) os << " + ";
        os << "qm1(" << bucket.contributions[i].left << ")*qm2("
           << bucket.contributions[i].right << ")";
    }
    os << " = ";
    for (std::size_t i = 0; i < bucket.contributions.size(); ++i) {
        if (i) os << " + ";
        os << render_mass(bucket.contributions[i].left_value, spec) << "*"
           << render_mass(bucket.contributions[i].right_value, spec);
    }
    os << " = ";
    for (std::size_t i = 0; i < bucket.contributions.size(); ++i) {
        if (i) os << " + ";
        os << render_mass(EnrichedLabel{bucket.contributions[i].product_label,
                                        bucket.contributions[i].product_confidence},
                          spec);
    }
    return os.str();
}

} // namespace detail

/// Conjunctive combination of two sources sharing frame, model, scale and
/// enrichment type.
inline FusionResult conjunctive_fuse(const QBBA& q1, const QBBA& q2,
                                     const FusionConfig& cfg) {
    detail::require_fusable(q1, q2);
    const LabelScale& scale = q1.scale();
    const Rational top(scale.top_index());
    auto [survivors, conflicts] = detail::collect_buckets(q1, q2, cfg);

    FusionResult result{cfg,
                        QBBA(q1.frame(), q1.model(), scale, q1.enrichment()),
                        {},
                        {},
                        {},
                        false,
                        {}};

    auto finalize = [&](const Proposition& key, const detail::Bucket& bucket,
                        const std::string& trace_name) -> EnrichedLabel {
        std::vector<Label> labels;
        std::vector<Confidence> factors;
        for (const detail::Contribution& c : bucket.contributions) {
            labels.push_back(c.product_label);
            factors.push_back(c.left_value.confidence);
            factors.push_back(c.right_value.confidence);
        }
        Rational pre(0);
        Label folded = detail::fold_labels(scale, labels, cfg.mode, pre);
        result.exact_indices.emplace(key, pre);
        EnrichedLabel out{folded, combine_confidence(factors, cfg.combiner)};

        std::ostringstream os;
        os << detail::bucket_formula(trace_name, key, bucket, q1.enrichment()) << " = ";
        if (cfg.mode == ApproxMode::Deferred && !pre.is_integer())
            os << "L{" << pre << "}(" << out.confidence << ") ~ ";
        os << render_mass(out, q1.enrichment());
        result.trace.push_back(os.str());
        return out;
    };

    for (const auto& [key, bucket] : survivors)
        result.fused.set_mass(key, finalize(key, bucket, "qm12"));
    for (const auto& [key, bucket] : conflicts) {
        result.conflict_masses.emplace(key, finalize(key, bucket, "qm12"));
        for (const detail::Contribution& c : bucket.contributions)
            result.conflict_detail.push_back(ConflictTransfer{
                key, c.left, c.right,
                EnrichedLabel{c.product_label, c.product_confidence},
                detail::product_is_null(cfg, c),
                std::nullopt, std::nullopt, std::nullopt, std::nullopt});
    }

    Rational out_sum(0);
    for (const auto& [key, value] : result.fused.masses()) out_sum += value.label.index();
    for (const auto& [key, value] : result.conflict_masses) out_sum += value.label.index();
    result.quasi_normalized = out_sum == top;
    return result;
}

/// PCR5: conjunctive buckets plus proportional redistribution of every
/// conflicting product back to its two parents; conflict buckets end at
/// the null label with neutral confidence.
inline FusionResult pcr5_fuse(const QBBA& q1, const QBBA& q2, const FusionConfig& cfg) {
    detail::require_fusable(q1, q2);
    const LabelScale& scale = q1.scale();
    const Rational top(scale.top_index());
    auto [survivors, conflicts] = detail::collect_buckets(q1, q2, cfg);

    FusionResult result{cfg,
                        QBBA(q1.frame(), q1.model(), scale, q1.enrichment()),
                        {},
                        {},
                        {},
                        false,
                        {}};

    // Redistribution targets: label terms and confidences appended to a
    // proposition's bucket by the conflict walk below.
    std::map<Proposition, std::vector<Label>> extra_labels;
    std::map<Proposition, std::vector<Confidence>> extra_confidences;

    for (const auto& [key, bucket] : conflicts) {
        for (const detail::Contribution& c : bucket.contributions) {
            ConflictTransfer transfer{key,
                                      c.left,
                                      c.right,
                                      EnrichedLabel{c.product_label, c.product_confidence},
                                      false,
                                      std::nullopt,
                                      std::nullopt,
                                      std::nullopt,
                                      std::nullopt};
            const Rational& i = c.left_value.label.index();
            const Rational& j = c.right_value.label.index();
            bool is_null = detail::product_is_null(cfg, c);
            std::ostringstream os;
            os << "conflict " << key << ": qm1(" << c.left << ")*qm2(" << c.right
               << ") = " << render_mass(transfer.product, q1.enrichment());
            if (is_null) {
                transfer.null_product = true;
                if (i.is_zero() && j.is_zero()) {
                    // Nothing was actually put in conflict by either side.
                    os << ": both masses null, nothing to redistribute";
                } else {
                    EnrichedLabel null_share{Label(scale, 0), c.product_confidence};
                    transfer.share_left = null_share;
                    transfer.share_right = null_share;
                    transfer.share_left_exact = Rational(0);
                    transfer.share_right_exact = Rational(0);
                    extra_labels[c.left].push_back(null_share.label);
                    extra_confidences[c.left].push_back(null_share.confidence);
                    extra_labels[c.right].push_back(null_share.label);
                    extra_confidences[c.right].push_back(null_share.confidence);
                    os << ": null product, " << render_mass(null_share, q1.enrichment())
                       << " to " << c.left << " and " << c.right;
                }
            } else {
                Rational denom = i + j;
                if (denom.is_zero())
                    throw DegenerateProportionError(
                        "conflicting masses for " + to_string(c.left) + " and " +
                        to_string(c.right) + " cancel; shares are undefined");
                Rational share_left_exact = i * i * j / (top * denom);
                Rational share_right_exact = j * i * j / (top * denom);

                Label share_left_label(scale, 0);
                Label share_right_label(scale, 0);
                if (cfg.mode == ApproxMode::Deferred) {
                    share_left_label = approximate(Label::exact(scale, share_left_exact),
                                                   IndexClamp::NonNegative);
                    share_right_label = approximate(Label::exact(scale, share_right_exact),
                                                    IndexClamp::NonNegative);
                } else {
                    // Per-step rounded chain X * (P / (X + Y)).
                    Label sum = q_add(c.left_value.label, c.right_value.label, cfg.mode);
                    Label quot = q_div_internal(c.product_label, sum, cfg.mode);
                    share_left_label = q_mul(c.left_value.label, quot, cfg.mode);
                    share_right_label = q_mul(c.right_value.label, quot, cfg.mode);
                }

                // Share confidences: every factor of the defining
                // expression, numerator then denominator.
                const Confidence& cl = c.left_value.confidence;
                const Confidence& cr = c.right_value.confidence;
                const Confidence left_factors[] = {cl, cl, cr, cl, cr};
                const Confidence right_factors[] = {cr, cl, cr, cl, cr};
                Confidence share_left_conf = combine_confidence(left_factors, cfg.combiner);
                Confidence share_right_conf = combine_confidence(right_factors, cfg.combiner);

                transfer.share_left = EnrichedLabel{share_left_label, share_left_conf};
                transfer.share_right = EnrichedLabel{share_right_label, share_right_conf};
                transfer.share_left_exact = share_left_exact;
                transfer.share_right_exact = share_right_exact;
                extra_labels[c.left].push_back(share_left_label);
                extra_confidences[c.left].push_back(share_left_conf);
                extra_labels[c.right].push_back(share_right_label);
                extra_confidences[c.right].push_back(share_right_conf);
                os << ": share " << render_mass(*transfer.share_left, q1.enrichment())
                   << " to " << c.left << ", share "
                   << render_mass(*transfer.share_right, q1.enrichment()) << " to "
                   << c.right;
            }
            result.trace.push_back(os.str());
            result.conflict_detail.push_back(std::move(transfer));
        }
    }

    // Stage 2: finalize target buckets = conjunctive part + shares.
    std::map<Proposition, detail::Bucket> all_targets = survivors;
    for (const auto& [key, labels] : extra_labels)
        all_targets.try_emplace(key); // share-only targets

    for (const auto& [key, bucket] : all_targets) {
        std::vector<Label> labels;
        std::vector<Confidence> conj_factors;
        for (const detail::Contribution& c : bucket.contributions) {
            labels.push_back(c.product_label);
            conj_factors.push_back(c.left_value.confidence);
            conj_factors.push_back(c.right_value.confidence);
        }

        std::vector<Confidence> terms;
        std::ostringstream os;
        os << "qmPCR5(" << key << ") = ";
        if (!conj_factors.empty()) {
            terms.push_back(combine_confidence(conj_factors, cfg.combiner));
            Rational conj_pre(0);
            Label conj_folded = detail::fold_labels(scale, labels, cfg.mode, conj_pre);
            labels.clear();
            if (cfg.mode == ApproxMode::Deferred) {
                // Keep the conjunctive part exact; only shares were rounded.
                labels.push_back(Label::exact(scale, conj_pre));
                os << "L{" << conj_pre << "}(" << terms.back() << ")";
            } else {
                labels.push_back(conj_folded);
                os << render_mass(EnrichedLabel{conj_folded, terms.back()}, q1.enrichment());
            }
        }
        auto extra_it = extra_labels.find(key);
        if (extra_it != extra_labels.end()) {
            const std::vector<Confidence>& confs = extra_confidences[key];
            for (std::size_t k = 0; k < extra_it->second.size(); ++k) {
                labels.push_back(extra_it->second[k]);
                terms.push_back(confs[k]);
                os << (labels.size() > 1 || !conj_factors.empty() ? " + " : "")
                   << render_mass(EnrichedLabel{extra_it->second[k], confs[k]},
                                  q1.enrichment());
            }
        }

        Rational pre(0);
        Label folded = detail::fold_labels(scale, labels, cfg.mode, pre);
        result.exact_indices.emplace(key, pre);
        EnrichedLabel out{folded, combine_confidence(terms, cfg.combiner)};
        os << " = " << render_mass(out, q1.enrichment());
        result.trace.push_back(os.str());
        result.fused.set_mass(key, out);
    }

    // Conflict buckets are fully redistributed.
    for (const auto& [key, bucket] : conflicts) {
        result.conflict_masses.emplace(
            key, EnrichedLabel{Label(scale, 0), q1.enrichment().neutral()});
        result.exact_indices.emplace(key, Rational(0));
    }

    Rational out_sum(0);
    for (const auto& [key, value] : result.fused.masses()) out_sum += value.label.index();
    for (const auto& [key, value] : result.conflict_masses) out_sum += value.label.index();
    result.quasi_normalized = out_sum == top;
    return result;
}

inline FusionResult fuse(const QBBA& q1, const QBBA& q2, const FusionConfig& cfg) {
    return cfg.rule == FusionRule::PCR5 ? pcr5_fuse(q1, q2, cfg)
                                        : conjunctive_fuse(q1, q2, cfg);
}

// ---- numeric rules (the quantitative originals, used as an oracle) -----

struct NumericConflictTransfer {
    Proposition conflict;
    Proposition left;
    Proposition right;
    Rational product;
    Rational share_left;
    Rational share_right;

    friend bool operator==(const NumericConflictTransfer& a,
                           const NumericConflictTransfer& b) {
        return a.conflict == b.conflict && a.left == b.left && a.right == b.right &&
               a.product == b.product && a.share_left == b.share_left &&
               a.share_right == b.share_right;
    }
};

struct NumericFusionResult {
    std::map<Proposition, Rational> fused;
    std::map<Proposition, Rational> conflict_masses;
    std::vector<NumericConflictTransfer> conflict_detail;

    Rational total() const {
        Rational sum(0);
        for (const auto& [prop, mass] : fused) sum += mass;
        for (const auto& [prop, mass] : conflict_masses) sum += mass;
        return sum;
    }

    friend bool operator==(const NumericFusionResult& a, const NumericFusionResult& b) {
        return a.fused == b.fused && a.conflict_masses == b.conflict_masses &&
               a.conflict_detail == b.conflict_detail;
    }
};

namespace detail {
inline void require_fusable(const NumericBBA& m1, const NumericBBA& m2) {
    if (m1.frame() != m2.frame())
        throw InputMismatchError("sources are defined on different frames");
    if (m1.model() != m2.model())
        throw InputMismatchError("sources use different models");
}
} // namespace detail

inline NumericFusionResult numeric_conjunctive(const NumericBBA& m1, const NumericBBA& m2) {
    detail::require_fusable(m1, m2);
    NumericFusionResult result;
    for (const auto& [p1, v1] : m1.masses()) {
        for (const auto& [p2, v2] : m2.masses()) {
            Rational product = v1 * v2;
            if (product.is_zero()) continue;
            Proposition inter = prop_intersect(p1, p2);
            Proposition reduced = reduce_under_model(inter, m1.model());
            if (reduced.is_empty()) {
                auto [it, inserted] = result.conflict_masses.emplace(inter, product);
                if (!inserted) it->second += product;
                result.conflict_detail.push_back(
                    NumericConflictTransfer{inter, p1, p2, product, Rational(0), Rational(0)});
            } else {
                auto [it, inserted] = result.fused.emplace(reduced, product);
                if (!inserted) it->second += product;
            }
        }
    }
    return result;
}

inline NumericFusionResult numeric_pcr5(const NumericBBA& m1, const NumericBBA& m2) {
    NumericFusionResult result = numeric_conjunctive(m1, m2);
    for (NumericConflictTransfer& transfer : result.conflict_detail) {
        Rational a = m1.masses().at(transfer.left);
        Rational b = m2.masses().at(transfer.right);
        Rational denom = a + b;
        if (denom.is_zero()) continue; // both masses zero means zero product
        transfer.share_left = a * transfer.product / denom;
        transfer.share_right = b * transfer.product / denom;
        auto add = [&result](const Proposition& p, const Rational& share) {
            auto [it, inserted] = result.fused.emplace(p, share);
            if (!inserted) it->second += share;
        };
        add(transfer.left, transfer.share_left);
        add(transfer.right, transfer.share_right);
    }
    for (auto& [key, mass] : result.conflict_masses) mass = Rational(0);
    return result;
}

} // namespace qbel
