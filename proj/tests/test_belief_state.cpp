#include <catch2/catch.hpp>

#include "support.hpp"

using namespace qbel;
using support::Rng;
using support::prop;

namespace {
bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
    for (const Diagnostic& d : ds)
        if (d.code == code) return true;
    return false;
}
} // namespace

TEST_CASE("well-formed assignments validate cleanly") {
    support::NumericConfidenceExample ex;
    CHECK(validate(ex.qm1).empty());
    CHECK(validate(ex.qm2).empty());
}

TEST_CASE("validation diagnostics") {
    support::NumericConfidenceExample ex;
    QBBA bad(ex.frame, ex.model, ex.scale, EnrichmentSpec::numeric());

    bad.set_mass(Proposition::empty(ex.frame), support::el(ex.scale, 1, 1));
    bad.set_mass(prop("A&B", ex.frame), support::el(ex.scale, 1, 1)); // empty under Shafer
    bad.set_mass(prop("A", ex.frame),
                 EnrichedLabel{Label::exact(ex.scale, Rational(7)), support::conf(1)});
    bad.set_mass(prop("B", ex.frame),
                 EnrichedLabel{Label::exact(ex.scale, Rational(-1)), support::conf(1)});
    QualitativeDegreeScale x = support::degree_scale_x();
    bad.set_mass(prop("A|B", ex.frame),
                 EnrichedLabel{Label(ex.scale, 1), support::dconf(x, "O")});

    std::vector<Diagnostic> ds = validate(bad);
    CHECK(has_code(ds, "mass-on-empty-set"));
    CHECK(has_code(ds, "key-not-reduced"));
    CHECK(has_code(ds, "index-out-of-range"));
    CHECK(has_code(ds, "enrichment-mismatch"));

    QBBA wrong_scale(ex.frame, ex.model, ex.scale, EnrichmentSpec::numeric());
    LabelScale other(3);
    wrong_scale.set_mass(prop("A", ex.frame),
                         EnrichedLabel{Label(other, 1), support::conf(1)});
    CHECK(has_code(validate(wrong_scale), "scale-mismatch"));
}

TEST_CASE("quasi-normalization is an exact index sum") {
    support::NumericConfidenceExample ex;
    CHECK(is_quasi_normalized(ex.qm1)); // 1+2+3 = 6
    CHECK(is_quasi_normalized(ex.qm2)); // 4+2+0 = 6

    QBBA over(ex.frame, ex.model, ex.scale, EnrichmentSpec::none());
    over.set_mass(prop("A", ex.frame), Label(ex.scale, 4));
    over.set_mass(prop("B", ex.frame), Label(ex.scale, 4));
    CHECK_FALSE(is_quasi_normalized(over)); // 8 != 6, saturation must not mask it

    QBBA deferred(ex.frame, ex.model, ex.scale, EnrichmentSpec::none());
    deferred.set_mass(prop("A", ex.frame), Label::exact(ex.scale, Rational(5, 2)));
    deferred.set_mass(prop("B", ex.frame), Label::exact(ex.scale, Rational(7, 2)));
    CHECK(is_quasi_normalized(deferred));
}

TEST_CASE("qualitative belief and plausibility") {
    support::NumericConfidenceExample ex;
    Proposition a = prop("A", ex.frame);

    EnrichedLabel belief = qbelief(ex.qm1, a, CombinerChoice::Min, ApproxMode::Stepwise);
    CHECK(belief == support::el(ex.scale, 1, 3, 10)); // only A itself is below A

    EnrichedLabel plausibility =
        qplausibility(ex.qm1, a, CombinerChoice::Min, ApproxMode::Stepwise);
    CHECK(plausibility == support::el(ex.scale, 4, 3, 10)); // A and A|B intersect A

    EnrichedLabel total =
        qbelief(ex.qm1, prop("A|B", ex.frame), CombinerChoice::Min, ApproxMode::Deferred);
    CHECK(total.label.index() == Rational(6)); // quasi-normalized total mass

    EnrichedLabel nothing =
        qbelief(ex.qm1, prop("A&B", ex.frame), CombinerChoice::Min, ApproxMode::Stepwise);
    CHECK(nothing.label == Label(ex.scale, 0));

    Frame other({"X", "Y"});
    CHECK_THROWS_AS(qbelief(ex.qm1, prop("X", other), CombinerChoice::Min,
                            ApproxMode::Stepwise),
                    FrameMismatchError);
}

TEST_CASE("belief is monotone and bounded by plausibility") {
    Rng rng(43);
    Frame frame = support::frame_abc();
    LabelScale scale(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Model& model = trial % 2 ? Model::free() : Model::shafer();
        QBBA q = support::rand_quasi_normalized_qbba(rng, frame, model, scale);
        // Total ignorance is above every focal element, so its belief is the
        // whole (quasi-normalized) mass.
        EnrichedLabel everything =
            qbelief(q, total_ignorance(frame), CombinerChoice::Min, ApproxMode::Deferred);
        CHECK(everything.label.index() == Rational(scale.top_index()));
        for (const Proposition& a : enumerate_hyper_power_set(frame, model)) {
            EnrichedLabel bel_a = qbelief(q, a, CombinerChoice::Min, ApproxMode::Deferred);
            EnrichedLabel pl_a =
                qplausibility(q, a, CombinerChoice::Min, ApproxMode::Deferred);
            CHECK(bel_a.label.index() <= pl_a.label.index());
            for (const Proposition& b : enumerate_hyper_power_set(frame, model)) {
                if (is_subset(a, b)) {
                    EnrichedLabel bel_b =
                        qbelief(q, b, CombinerChoice::Min, ApproxMode::Deferred);
                    CHECK(bel_a.label.index() <= bel_b.label.index());
                }
            }
        }
    }
}

TEST_CASE("numeric belief and plausibility") {
    Frame frame = support::frame_ab();
    Model model = Model::shafer();
    std::map<Proposition, Rational> masses{{prop("A", frame), Rational(3, 5)},
                                           {prop("B", frame), Rational(3, 10)},
                                           {prop("A|B", frame), Rational(1, 10)}};
    NumericBBA m(frame, model, masses);
    CHECK(bel(m, prop("A", frame)) == Rational(3, 5));
    CHECK(pl(m, prop("A", frame)) == Rational(7, 10));
    CHECK(bel(m, prop("A|B", frame)) == Rational(1));
}

TEST_CASE("numeric assignments enforce their invariants") {
    Frame frame = support::frame_ab();
    Model model = Model::shafer();
    CHECK_THROWS_AS(NumericBBA(frame, model,
                               {{prop("A", frame), Rational(1, 2)}}),
                    Error); // sums to 1/2
    CHECK_THROWS_AS(NumericBBA(frame, model,
                               {{Proposition::empty(frame), Rational(1)}}),
                    Error);
    CHECK_THROWS_AS(NumericBBA(frame, model,
                               {{prop("A&B", frame), Rational(1)}}),
                    Error); // not reduced under Shafer
    CHECK_THROWS_AS(NumericBBA(frame, model,
                               {{prop("A", frame), Rational(3, 2)},
                                {prop("B", frame), Rational(-1, 2)}}),
                    Error);
}

TEST_CASE("numeric image of a qualitative assignment") {
    support::NumericConfidenceExample ex;
    NumericImage image = qbba_to_numeric(ex.qm1);
    CHECK(image.masses.at(prop("A", ex.frame)) == Rational(1, 6));
    CHECK(image.masses.at(prop("B", ex.frame)) == Rational(2, 6));
    CHECK(image.masses.at(prop("A|B", ex.frame)) == Rational(3, 6));
    CHECK(image.confidences.at(prop("A", ex.frame)) == support::conf(3, 10));

    NumericImage image2 = qbba_to_numeric(ex.qm2);
    CHECK(image2.masses.at(prop("A|B", ex.frame)) == Rational(0));

    QBBA null_masses(ex.frame, ex.model, ex.scale, EnrichmentSpec::none());
    null_masses.set_mass(prop("A", ex.frame), Label(ex.scale, 0));
    NumericImage zeros = qbba_to_numeric(null_masses);
    CHECK(zeros.masses.at(prop("A", ex.frame)) == Rational(0));
}

TEST_CASE("quasi-normalized assignments map to unit-total numeric masses") {
    Rng rng(47);
    Frame frame = support::frame_ab();
    LabelScale scale(5);
    for (int trial = 0; trial < 100; ++trial) {
        QBBA q = support::rand_quasi_normalized_qbba(rng, frame, Model::shafer(), scale);
        REQUIRE(is_quasi_normalized(q));
        NumericImage image = qbba_to_numeric(q);
        Rational total(0);
        for (const auto& [p, mass] : image.masses) total += mass;
        CHECK(total == Rational(1));
    }
}

TEST_CASE("explicit null masses are preserved but inert") {
    support::NumericConfidenceExample ex;
    // qm2 carries an explicit L0(1) on A|B.
    CHECK(ex.qm2.mass(prop("A|B", ex.frame)).has_value());
    CHECK(ex.qm2.mass(prop("A|B", ex.frame))->label == Label(ex.scale, 0));
    EnrichedLabel belief =
        qbelief(ex.qm2, prop("A|B", ex.frame), CombinerChoice::Min, ApproxMode::Stepwise);
    CHECK(belief.label == Label(ex.scale, 6));
    // The explicit null entry participates in the confidence combination.
    CHECK(belief.confidence == support::conf(3, 5));
}
