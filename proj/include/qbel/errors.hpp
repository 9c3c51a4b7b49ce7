#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbel {

/// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Labels built on different scales were mixed in one operation.
struct ScaleMismatchError : Error {
    using Error::Error;
};

/// Propositions from different frames were mixed in one operation.
struct FrameMismatchError : Error {
    using Error::Error;
};

/// Division by the null label L0.
struct DivideByZeroLabelError : Error {
    using Error::Error;
};

/// Confidence degrees of different kinds (or on different degree scales)
/// were combined.
struct EnrichmentMismatchError : Error {
    using Error::Error;
};

/// Two belief assignments with incompatible frame/model/scale/enrichment
/// were passed to a fusion rule.
struct InputMismatchError : Error {
    using Error::Error;
};

/// Proportional conflict redistribution hit a zero denominator with a
/// non-zero conflicting product.
struct DegenerateProportionError : Error {
    using Error::Error;
};

/// Hyper-power-set enumeration was requested for a frame above the
/// configured (or hard) size cap.
struct FrameTooLargeError : Error {
    using Error::Error;
};

/// Text input could not be parsed. `position` is the 1-based column of the
/// offending character within the parsed string.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t pos)
        : Error(what + " (column " + std::to_string(pos) + ")"), position(pos) {}

    std::size_t position;
};

} // namespace qbel
