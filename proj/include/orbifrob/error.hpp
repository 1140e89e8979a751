/**
 * @file error.hpp
 * @brief Exception hierarchy shared by all orbifrob components.
 */
#ifndef ORBIFROB_ERROR_HPP
#define ORBIFROB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace orbifrob {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed textual input (polynomial grammar, group element syntax, JSON shape).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

/// Structurally invalid mathematical input (non-invertible exponent matrix,
/// non-unit coefficients, phases outside the symmetry group, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error("validation error: " + msg) {}
};

/// A Milnor/Jacobian construction met a non-isolated singularity
/// (infinite-dimensional quotient where a finite one was required).
class NonIsolatedError : public Error {
public:
    explicit NonIsolatedError(const std::string& msg) : Error("non-isolated singularity: " + msg) {}
};

/// A quantum differential-operator formula was asked to divide by (eps - 1)
/// with eps == 1, where the closed form degenerates.
class SingularTwistError : public Error {
public:
    explicit SingularTwistError(const std::string& msg) : Error("singular twist: " + msg) {}
};

/// The cochain rewriting engine met a word outside the admissible family it
/// can normalise.  The message carries a printable trace of the word.
class UnsupportedWordError : public Error {
public:
    explicit UnsupportedWordError(const std::string& msg) : Error("unsupported word: " + msg) {}
};

/// An operation that only makes sense for a nontrivial group element
/// (e.g. a twisted Hessian) was invoked on the identity.
class IdentityElementError : public Error {
public:
    explicit IdentityElementError(const std::string& msg) : Error("identity element: " + msg) {}
};

/// The homotopy-retraction cup oracle only lands in the identity sector;
/// it was asked to produce a class in a nontrivial sector.
class NonIdentityTargetError : public Error {
public:
    explicit NonIdentityTargetError(const std::string& msg)
        : Error("non-identity target sector: " + msg) {}
};

/// A deformed-complex operation needs the distinguished central element
/// (the curving / potential) but the algebra was built without one.
class MissingCurvingError : public Error {
public:
    explicit MissingCurvingError(const std::string& msg) : Error("missing curving: " + msg) {}
};

/// A group action handed to a twisted construction fails to preserve the
/// structure it must fix (algebra product, unit, or curving).
class NotInvariantError : public Error {
public:
    explicit NotInvariantError(const std::string& msg) : Error("not invariant: " + msg) {}
};

} // namespace orbifrob

#endif
