#pragma once

// Linguistic label scales and the arithmetic defined on them.
//
// A scale holds n inner labels plus the two extremes, L0..L(n+1), totally
// ordered and mapped onto the rationals by L_i = i/(n+1). Every operator
// below is built on that isomorphism and comes in two evaluation modes:
//
//   * Stepwise: round the index to the nearest integer after each
//     operation (the cheap, lossy mode),
//   * Deferred: carry the exact rational index through an entire
//     expression and round once at the very end.
//
// A Label therefore stores an exact rational index plus an `approximated`
// flag; deferred intermediates may leave [0, n+1] and only the final
// approximate() call pulls them back into range. Signed labels (-L2, the
// image of subtraction) share the same representation with a negative
// index.
//
// Label equality compares scale and exact index; the `approximated` flag
// is evaluation state, not identity.

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qbel/errors.hpp"
#include "qbel/rational.hpp"

namespace qbel {

enum class ApproxMode { Stepwise, Deferred };

/// Clamp domain used by approximate(): signed results (differences,
/// scalar products) live in [-(n+1), n+1], masses in [0, n+1].
enum class IndexClamp { Signed, NonNegative };

class LabelScale {
public:
    /// Unnamed scale with `inner_count` labels strictly between the
    /// extremes (so indices run 0..inner_count+1). Requires inner_count >= 2.
    explicit LabelScale(int inner_count)
        : LabelScale(inner_count, std::vector<std::string>{}) {}

    /// Named scale; `names` must hold exactly inner_count+2 distinct
    /// display strings for L0..L(n+1).
    LabelScale(int inner_count, std::vector<std::string> names) {
        if (inner_count < 2)
            throw Error("label scale needs at least 2 inner labels");
        if (!names.empty()) {
            if (static_cast<int>(names.size()) != inner_count + 2)
                throw Error("label scale names must cover L0..L(n+1)");
            for (std::size_t i = 0; i < names.size(); ++i) {
                validate_name(names[i]);
                for (std::size_t j = i + 1; j < names.size(); ++j)
                    if (names[i] == names[j])
                        throw Error("duplicate label name '" + names[i] + "'");
            }
        }
        d_ = std::make_shared<const Data>(Data{inner_count, std::move(names)});
    }

    int inner_count() const { return d_->n; }

    /// Index of L_max, i.e. n+1.
    int top_index() const { return d_->n + 1; }

    bool has_names() const { return !d_->names.empty(); }
    const std::vector<std::string>& names() const { return d_->names; }

    friend bool operator==(const LabelScale& a, const LabelScale& b) {
        return a.d_ == b.d_ || (a.d_->n == b.d_->n && a.d_->names == b.d_->names);
    }
    friend bool operator!=(const LabelScale& a, const LabelScale& b) {
        return !(a == b);
    }

private:
    struct Data {
        int n;
        std::vector<std::string> names;
    };

    static void validate_name(const std::string& name) {
        if (name.empty())
            throw Error("label names must be non-empty");
        for (char c : name)
            if (c == '(' || c == ')' || c == ',' || c == '[' || c == ']' ||
                c == ' ' || c == '\t' || c == '-' || c == '{' || c == '}')
                throw Error("label name '" + name + "' contains a reserved character");
        if (name.size() >= 2 && name[0] == 'L' &&
            (name[1] == '{' || (name[1] >= '0' && name[1] <= '9')))
            throw Error("label name '" + name + "' collides with index syntax");
    }

    std::shared_ptr<const Data> d_;
};

class Label {
public:
    /// Approximated label L_k (or -L|k| for negative k); |k| <= n+1.
    Label(LabelScale scale, long long k)
        : scale_(std::move(scale)), index_(k), approximated_(true) {
        if (k > scale_.top_index() || k < -scale_.top_index())
            throw Error("label index " + std::to_string(k) + " outside this scale");
    }

    /// Unapproximated label carrying an exact rational index; the index may
    /// lie outside [0, n+1] (deferred intermediates do).
    static Label exact(LabelScale scale, Rational index) {
        Label l(std::move(scale));
        l.index_ = std::move(index);
        l.approximated_ = false;
        return l;
    }

    const LabelScale& scale() const { return scale_; }
    const Rational& index() const { return index_; }
    bool approximated() const { return approximated_; }

    bool is_null() const { return index_.is_zero(); }

    Rational to_numeric() const {
        return index_ / Rational(scale_.top_index());
    }

    friend bool operator==(const Label& a, const Label& b) {
        return a.scale_ == b.scale_ && a.index_ == b.index_;
    }
    friend bool operator!=(const Label& a, const Label& b) { return !(a == b); }

    /// Total order on one scale; comparing across scales throws.
    friend bool operator<(const Label& a, const Label& b) {
        if (a.scale_ != b.scale_)
            throw ScaleMismatchError("cannot order labels from different scales");
        return a.index_ < b.index_;
    }
    friend bool operator<=(const Label& a, const Label& b) { return !(b < a); }

private:
    explicit Label(LabelScale scale) : scale_(std::move(scale)), index_(0), approximated_(false) {}

    friend Label approximate(const Label&, IndexClamp);

    LabelScale scale_;
    Rational index_;
    bool approximated_;
};

inline void require_same_scale(const Label& a, const Label& b) {
    if (a.scale() != b.scale())
        throw ScaleMismatchError("labels are on different scales");
}

/// Rounds the index to the nearest integer (ties away from zero) and
/// clamps into the scale. Idempotent and monotone in the index.
inline Label approximate(const Label& a, IndexClamp clamp = IndexClamp::Signed) {
    long long k = a.index().round_half_away();
    long long top = a.scale().top_index();
    long long lo = clamp == IndexClamp::Signed ? -top : 0;
    if (k > top) k = top;
    if (k < lo) k = lo;
    return Label(a.scale(), k);
}

namespace detail {
// Any deferred operand keeps the whole operation exact; callers decide
// when to approximate (the "one approximation at the very end" discipline).
inline bool defer(ApproxMode mode, const Label& a, const Label& b) {
    return mode == ApproxMode::Deferred || !a.approximated() || !b.approximated();
}
} // namespace detail

/// Saturating label addition: exact index sum, clamped at L_max when
/// evaluated stepwise.
inline Label q_add(const Label& a, const Label& b, ApproxMode mode) {
    require_same_scale(a, b);
    Label sum = Label::exact(a.scale(), a.index() + b.index());
    return detail::defer(mode, a, b) ? sum : approximate(sum);
}

/// Label product via the isomorphism: index i*j/(n+1).
inline Label q_mul(const Label& a, const Label& b, ApproxMode mode) {
    require_same_scale(a, b);
    Rational idx = a.index() * b.index() / Rational(a.scale().top_index());
    Label prod = Label::exact(a.scale(), idx);
    return detail::defer(mode, a, b) ? prod : approximate(prod);
}

/// Coarse product approximation L_min{i,j}; defined on approximated labels.
inline Label q_mul_min(const Label& a, const Label& b) {
    require_same_scale(a, b);
    if (!a.approximated() || !b.approximated())
        throw Error("q_mul_min is defined on approximated labels only");
    const Rational& m = a.index() < b.index() ? a.index() : b.index();
    return Label(a.scale(), m.round_half_away());
}

/// Scalar multiple s*L_i. An approximated input is rounded back to the
/// scale (negative results become signed labels); a deferred input stays
/// exact.
inline Label q_scalar_mul(const Rational& s, const Label& a) {
    Label scaled = Label::exact(a.scale(), s * a.index());
    return a.approximated() ? approximate(scaled) : scaled;
}

/// Division as an internal operator: index (i/j)*(n+1), saturating to
/// L_max when the rounded result reaches past the scale.
inline Label q_div_internal(const Label& a, const Label& b, ApproxMode mode) {
    require_same_scale(a, b);
    if (b.index().is_zero())
        throw DivideByZeroLabelError("division by the null label");
    Rational idx = a.index() / b.index() * Rational(a.scale().top_index());
    Label quot = Label::exact(a.scale(), idx);
    return detail::defer(mode, a, b) ? quot : approximate(quot);
}

/// Division as an external operator: the exact ratio i/j, which the scale
/// itself cannot represent.
inline Rational q_div_external(const Label& a, const Label& b) {
    require_same_scale(a, b);
    if (b.index().is_zero())
        throw DivideByZeroLabelError("division by the null label");
    return a.index() / b.index();
}

/// Signed subtraction: L_{i-j} when i >= j, -L_{j-i} otherwise.
inline Label q_sub(const Label& a, const Label& b, ApproxMode mode) {
    require_same_scale(a, b);
    Label diff = Label::exact(a.scale(), a.index() - b.index());
    return detail::defer(mode, a, b) ? diff : approximate(diff);
}

inline Rational to_numeric(const Label& a) { return a.to_numeric(); }

inline Label from_numeric(const Rational& x, const LabelScale& scale) {
    return Label::exact(scale, x * Rational(scale.top_index()));
}

/// Display form: "L3" (or the scale name) for approximated labels, "-L2"
/// for negative ones, "L{8/3}" for deferred rational indices.
inline std::string to_string(const Label& a) {
    std::string out;
    Rational idx = a.index();
    if (idx.is_negative()) {
        out += '-';
        idx = -idx;
    }
    if (a.approximated()) {
        long long k = idx.round_half_away();
        if (a.scale().has_names() && !a.index().is_negative())
            return a.scale().names()[static_cast<std::size_t>(k)];
        out += "L" + std::to_string(k);
    } else {
        out += "L{" + idx.str() + "}";
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Label& a) {
    return os << to_string(a);
}

namespace detail {
inline Label parse_label_prefix(std::string_view text, std::size_t& pos,
                                const LabelScale& scale) {
    const std::size_t start = pos;
    bool negative = false;
    if (pos < text.size() && text[pos] == '-') {
        negative = true;
        ++pos;
    }
    if (pos >= text.size())
        throw ParseError("expected label", start + 1);

    // Scale names take precedence over the generic L<k> syntax.
    if (scale.has_names()) {
        std::size_t best = 0;
        long long best_index = -1;
        for (std::size_t i = 0; i < scale.names().size(); ++i) {
            const std::string& name = scale.names()[i];
            if (text.substr(pos, name.size()) == name && name.size() > best) {
                best = name.size();
                best_index = static_cast<long long>(i);
            }
        }
        if (best_index >= 0) {
            pos += best;
            return Label(scale, negative ? -best_index : best_index);
        }
    }

    if (text[pos] != 'L')
        throw ParseError("expected label", pos + 1);
    ++pos;
    if (pos < text.size() && text[pos] == '{') {
        ++pos;
        Rational idx = Rational::parse_prefix(text, pos);
        if (pos >= text.size() || text[pos] != '}')
            throw ParseError("expected '}' after label index", pos + 1);
        ++pos;
        return Label::exact(scale, negative ? -idx : idx);
    }
    if (pos >= text.size() || text[pos] < '0' || text[pos] > '9')
        throw ParseError("expected label index", pos + 1);
    long long k = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        k = k * 10 + (text[pos] - '0');
        if (k > scale.top_index())
            throw ParseError("label index outside the scale", start + 1);
        ++pos;
    }
    return Label(scale, negative ? -k : k);
}
} // namespace detail

/// Inverse of to_string() for a known scale.
inline Label parse_label(std::string_view text, const LabelScale& scale) {
    std::size_t pos = 0;
    Label l = detail::parse_label_prefix(text, pos, scale);
    if (pos != text.size())
        throw ParseError("trailing characters after label", pos + 1);
    return l;
}

} // namespace qbel
