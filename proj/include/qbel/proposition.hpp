#pragma once

// Frames of discernment and canonical propositions over them.
//
// A proposition is an element of the frame's hyper-power set: any
// composition of the atoms under union and intersection. The canonical
// form used throughout is an absorption-reduced union of intersections —
// an antichain of generator sets, each generator set a non-empty subset of
// atoms stored as a bitmask. This normal form is unique in the free
// distributive lattice, so structural equality is semantic equality.
//
// Integrity-constraint models (free / Shafer / hybrid) decide which
// intersections are empty; reduce_under_model() maps a free-form
// proposition into the constrained lattice.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qbel/errors.hpp"

namespace qbel {

class Frame {
public:
    static constexpr int kMaxAtoms = 12;

    /// `limit` caps the number of atoms accepted (default 4, the largest
    /// frame whose free hyper-power set stays desk-sized at 167 elements).
    explicit Frame(std::vector<std::string> atoms, int limit = 4) {
        if (atoms.empty())
            throw Error("a frame needs at least one atom");
        if (limit < 1) throw Error("frame limit must be positive");
        if (static_cast<int>(atoms.size()) > limit)
            throw FrameTooLargeError("frame exceeds its atom limit of " +
                                     std::to_string(limit));
        if (static_cast<int>(atoms.size()) > kMaxAtoms)
            throw FrameTooLargeError("frame exceeds the supported atom count");
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            validate_atom(atoms[i]);
            for (std::size_t j = i + 1; j < atoms.size(); ++j)
                if (atoms[i] == atoms[j])
                    throw Error("duplicate atom '" + atoms[i] + "'");
        }
        d_ = std::make_shared<const Data>(Data{std::move(atoms), limit});
    }

    std::size_t size() const { return d_->atoms.size(); }
    int limit() const { return d_->limit; }
    const std::vector<std::string>& atoms() const { return d_->atoms; }
    const std::string& atom_name(std::size_t i) const { return d_->atoms[i]; }

    int atom_index(std::string_view name) const {
        for (std::size_t i = 0; i < d_->atoms.size(); ++i)
            if (d_->atoms[i] == name) return static_cast<int>(i);
        return -1;
    }

    friend bool operator==(const Frame& a, const Frame& b) {
        return a.d_ == b.d_ || a.d_->atoms == b.d_->atoms;
    }
    friend bool operator!=(const Frame& a, const Frame& b) { return !(a == b); }

private:
    struct Data {
        std::vector<std::string> atoms;
        int limit;
    };

    static void validate_atom(const std::string& name) {
        if (name.empty())
            throw Error("atom names must be non-empty");
        if (name == "EMPTY")
            throw Error("'EMPTY' is reserved for the empty proposition");
        for (char c : name)
            if (c == '&' || c == '|' || c == '(' || c == ')' || c == ' ' ||
                c == '\t' || c == '\n' || c == '\r' || c == '!' || c == '~' ||
                c == ',' || c == ':' || c == '"')
                throw Error("atom name '" + name + "' contains a reserved character");
    }

    std::shared_ptr<const Data> d_;
};

inline void require_same_frame(const Frame& a, const Frame& b) {
    if (a != b) throw FrameMismatchError("propositions are on different frames");
}

namespace detail {
// Canonical ordering of generator sets: fewer atoms first, then by mask.
inline bool term_less(std::uint32_t a, std::uint32_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return a < b;
}
} // namespace detail

class Proposition {
public:
    static Proposition empty(Frame frame) { return Proposition(std::move(frame), {}); }

    static Proposition atom(const Frame& frame, std::string_view name) {
        int i = frame.atom_index(name);
        if (i < 0) throw Error("unknown atom '" + std::string(name) + "'");
        return Proposition(frame, {std::uint32_t{1} << i});
    }

    /// Builds the canonical form of an arbitrary union of intersections:
    /// absorption drops every generator set that contains another.
    static Proposition from_terms(Frame frame, std::vector<std::uint32_t> terms) {
        std::uint32_t universe =
            frame.size() == 32 ? ~std::uint32_t{0}
                               : (std::uint32_t{1} << frame.size()) - 1;
        for (std::uint32_t t : terms) {
            if (t == 0) throw Error("generator sets must be non-empty");
            if ((t & ~universe) != 0) throw Error("generator set outside the frame");
        }
        std::vector<std::uint32_t> keep;
        for (std::uint32_t t : terms) {
            bool absorbed = false;
            for (std::uint32_t other : terms)
                if (other != t && (t & other) == other) {
                    // t is a strict superset: its intersection is contained
                    // in other's, so the union absorbs it.
                    absorbed = true;
                    break;
                }
            if (!absorbed && std::find(keep.begin(), keep.end(), t) == keep.end())
                keep.push_back(t);
        }
        std::sort(keep.begin(), keep.end(), detail::term_less);
        return Proposition(std::move(frame), std::move(keep));
    }

    const Frame& frame() const { return frame_; }
    bool is_empty() const { return terms_.empty(); }
    const std::vector<std::uint32_t>& terms() const { return terms_; }

    friend bool operator==(const Proposition& a, const Proposition& b) {
        return a.frame_ == b.frame_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Proposition& a, const Proposition& b) {
        return !(a == b);
    }

    /// Deterministic total order: term count first, then termwise.
    friend bool operator<(const Proposition& a, const Proposition& b) {
        if (a.terms_.size() != b.terms_.size())
            return a.terms_.size() < b.terms_.size();
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i] != b.terms_[i])
                return detail::term_less(a.terms_[i], b.terms_[i]);
        return false;
    }

private:
    Proposition(Frame frame, std::vector<std::uint32_t> terms)
        : frame_(std::move(frame)), terms_(std::move(terms)) {}

    Frame frame_;
    std::vector<std::uint32_t> terms_;
};

inline Proposition prop_union(const Proposition& p, const Proposition& q) {
    require_same_frame(p.frame(), q.frame());
    std::vector<std::uint32_t> terms = p.terms();
    terms.insert(terms.end(), q.terms().begin(), q.terms().end());
    return Proposition::from_terms(p.frame(), std::move(terms));
}

inline Proposition prop_intersect(const Proposition& p, const Proposition& q) {
    require_same_frame(p.frame(), q.frame());
    if (p.is_empty() || q.is_empty()) return Proposition::empty(p.frame());
    // (U_i a_i) n (U_j b_j) = U_ij (a_i n b_j); generator sets merge by union.
    std::vector<std::uint32_t> terms;
    terms.reserve(p.terms().size() * q.terms().size());
    for (std::uint32_t a : p.terms())
        for (std::uint32_t b : q.terms())
            terms.push_back(a | b);
    return Proposition::from_terms(p.frame(), std::move(terms));
}

/// Integrity constraints: which intersections of atoms are declared empty.
class Model {
public:
    enum class Kind { Free, Shafer, Hybrid };

    static Model free() { return Model(Kind::Free, {}); }
    static Model shafer() { return Model(Kind::Shafer, {}); }

    /// Hybrid model from a list of pure-intersection propositions declared
    /// empty (e.g. A&B). Union constraints are rejected.
    static Model hybrid(std::span<const Proposition> empty_propositions) {
        if (empty_propositions.empty())
            return free();
        std::vector<std::uint32_t> masks;
        for (const Proposition& p : empty_propositions) {
            require_same_frame(p.frame(), empty_propositions[0].frame());
            if (p.terms().size() != 1)
                throw Error("model constraints must be pure intersections");
            std::uint32_t mask = p.terms()[0];
            if (std::popcount(mask) < 2)
                throw Error("a single atom cannot be declared empty");
            masks.push_back(mask);
        }
        // Keep only minimal constraints; a superset intersection is
        // already empty by inclusion.
        std::vector<std::uint32_t> minimal;
        for (std::uint32_t m : masks) {
            bool redundant = false;
            for (std::uint32_t other : masks)
                if (other != m && (m & other) == other) { redundant = true; break; }
            if (!redundant && std::find(minimal.begin(), minimal.end(), m) == minimal.end())
                minimal.push_back(m);
        }
        std::sort(minimal.begin(), minimal.end(), detail::term_less);
        return Model(Kind::Hybrid, std::move(minimal));
    }

    Kind kind() const { return kind_; }
    const std::vector<std::uint32_t>& constraints() const { return constraints_; }

    /// True when the generator set `mask` denotes an empty intersection.
    bool term_is_empty(std::uint32_t mask) const {
        switch (kind_) {
        case Kind::Free: return false;
        case Kind::Shafer: return std::popcount(mask) >= 2;
        case Kind::Hybrid:
            for (std::uint32_t c : constraints_)
                if ((mask & c) == c) return true;
            return false;
        }
        return false;
    }

    friend bool operator==(const Model& a, const Model& b) {
        return a.kind_ == b.kind_ && a.constraints_ == b.constraints_;
    }
    friend bool operator!=(const Model& a, const Model& b) { return !(a == b); }

private:
    Model(Kind kind, std::vector<std::uint32_t> constraints)
        : kind_(kind), constraints_(std::move(constraints)) {}

    Kind kind_;
    std::vector<std::uint32_t> constraints_;
};

/// Drops every generator set the model declares empty; Empty when none
/// survive.
inline Proposition reduce_under_model(const Proposition& p, const Model& model) {
    if (model.kind() == Model::Kind::Free || p.is_empty()) return p;
    std::vector<std::uint32_t> keep;
    for (std::uint32_t t : p.terms())
        if (!model.term_is_empty(t)) keep.push_back(t);
    return Proposition::from_terms(p.frame(), std::move(keep));
}

/// Lattice order on canonical propositions: p is below q iff every
/// generator set of p contains some generator set of q. Callers working
/// under a model pass model-reduced propositions.
inline bool is_subset(const Proposition& p, const Proposition& q) {
    require_same_frame(p.frame(), q.frame());
    for (std::uint32_t tp : p.terms()) {
        bool covered = false;
        for (std::uint32_t tq : q.terms())
            if ((tp & tq) == tq) { covered = true; break; }
        if (!covered) return false;
    }
    return true;
}

inline bool intersects(const Proposition& p, const Proposition& q, const Model& model) {
    return !reduce_under_model(prop_intersect(p, q), model).is_empty();
}

// ---- text form -------------------------------------------------------

/// Canonical rendering: generator atoms joined with '&', terms joined with
/// '|' ('&' binds tighter, so no parentheses are ever needed); the empty
/// proposition renders as "EMPTY". `unicode` switches to the set symbols.
inline std::string to_string(const Proposition& p, bool unicode = false) {
    if (p.is_empty()) return unicode ? "∅" : "EMPTY";
    const char* and_sym = unicode ? "∩" : "&";
    const char* or_sym = unicode ? "∪" : "|";
    std::string out;
    for (std::size_t i = 0; i < p.terms().size(); ++i) {
        if (i > 0) out += or_sym;
        std::uint32_t t = p.terms()[i];
        bool first = true;
        for (std::size_t a = 0; a < p.frame().size(); ++a)
            if (t & (std::uint32_t{1} << a)) {
                if (!first) out += and_sym;
                out += p.frame().atom_name(a);
                first = false;
            }
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Proposition& p) {
    return os << to_string(p);
}

namespace detail {

class PropositionParser {
public:
    PropositionParser(std::string_view text, const Frame& frame)
        : text_(text), frame_(frame) {}

    Proposition parse() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("empty proposition", 1);
        if (text_.substr(pos_, 5) == "EMPTY") {
            pos_ += 5;
            skip_ws();
            if (pos_ != text_.size())
                throw ParseError("trailing characters after 'EMPTY'", pos_ + 1);
            return Proposition::empty(frame_);
        }
        Proposition p = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected character", pos_ + 1);
        return p;
    }

private:
    Proposition parse_expr() {
        Proposition p = parse_term();
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == '|') {
            ++pos_;
            p = prop_union(p, parse_term());
            skip_ws();
        }
        return p;
    }

    Proposition parse_term() {
        Proposition p = parse_factor();
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == '&') {
            ++pos_;
            p = prop_intersect(p, parse_factor());
            skip_ws();
        }
        return p;
    }

    Proposition parse_factor() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("expected atom or '('", pos_ + 1);
        char c = text_[pos_];
        if (c == '!' || c == '~')
            throw ParseError("complement is not representable here", pos_ + 1);
        if (c == '(') {
            ++pos_;
            Proposition p = parse_expr();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw ParseError("expected ')'", pos_ + 1);
            ++pos_;
            return p;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && !is_delimiter(text_[pos_])) ++pos_;
        if (pos_ == start)
            throw ParseError("expected atom or '('", pos_ + 1);
        std::string_view name = text_.substr(start, pos_ - start);
        if (frame_.atom_index(name) < 0)
            throw ParseError("unknown atom '" + std::string(name) + "'", start + 1);
        return Proposition::atom(frame_, name);
    }

    static bool is_delimiter(char c) {
        return c == '&' || c == '|' || c == '(' || c == ')' || c == ' ' ||
               c == '\t' || c == '!' || c == '~';
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
            ++pos_;
    }

    std::string_view text_;
    const Frame& frame_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses `expr := term ('|' term)* ; term := factor ('&' factor)* ;
/// factor := atom | '(' expr ')'` into canonical form (intersection
/// distributes over union, absorption applies).
inline Proposition parse_proposition(std::string_view text, const Frame& frame) {
    return detail::PropositionParser(text, frame).parse();
}

namespace detail {

// Recursively extends an antichain with masks from `candidates[from..]`
// that are inclusion-incomparable with everything chosen so far. Every
// node of the recursion is a valid antichain, so the cost is proportional
// to the output.
inline void extend_antichains(const std::vector<std::uint32_t>& candidates,
                              std::size_t from, std::vector<std::uint32_t>& chosen,
                              std::vector<std::vector<std::uint32_t>>& out) {
    for (std::size_t i = from; i < candidates.size(); ++i) {
        std::uint32_t m = candidates[i];
        bool comparable = false;
        for (std::uint32_t c : chosen)
            if ((m & c) == c || (m & c) == m) { comparable = true; break; }
        if (comparable) continue;
        chosen.push_back(m);
        out.push_back(chosen);
        extend_antichains(candidates, i + 1, chosen, out);
        chosen.pop_back();
    }
}

} // namespace detail

/// All distinct propositions over the frame (the empty one included),
/// reduced under the model, in canonical order. Refuses frames above the
/// frame's own limit or the hard cap of 5 atoms.
inline std::vector<Proposition> enumerate_hyper_power_set(const Frame& frame,
                                                          const Model& model) {
    constexpr std::size_t kHardCap = 5;
    if (frame.size() > static_cast<std::size_t>(frame.limit()) || frame.size() > kHardCap)
        throw FrameTooLargeError("frame too large to enumerate its hyper-power set");

    std::vector<std::uint32_t> candidates;
    std::uint32_t universe = (std::uint32_t{1} << frame.size()) - 1;
    for (std::uint32_t m = 1; m <= universe; ++m) candidates.push_back(m);

    std::vector<std::vector<std::uint32_t>> antichains;
    antichains.push_back({}); // the empty proposition
    std::vector<std::uint32_t> chosen;
    detail::extend_antichains(candidates, 0, chosen, antichains);

    std::set<Proposition> distinct;
    for (std::vector<std::uint32_t>& terms : antichains)
        distinct.insert(
            reduce_under_model(Proposition::from_terms(frame, std::move(terms)), model));
    return std::vector<Proposition>(distinct.begin(), distinct.end());
}

/// The join of all atoms (total ignorance), reduced trivially under any
/// model.
inline Proposition total_ignorance(const Frame& frame) {
    std::vector<std::uint32_t> terms;
    for (std::size_t i = 0; i < frame.size(); ++i)
        terms.push_back(std::uint32_t{1} << i);
    return Proposition::from_terms(frame, std::move(terms));
}

} // namespace qbel
