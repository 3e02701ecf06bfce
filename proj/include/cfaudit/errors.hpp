#ifndef CFAUDIT_ERRORS_HPP
#define CFAUDIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cfaudit {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ill-formed input file or document (bad syntax, wrong type, unknown key).
struct ParseError : Error {
    using Error::Error;
};

/// A model invariant is violated where a valid model is required.
struct ModelError : Error {
    using Error::Error;
};

/// Bad query: unknown variable, value outside a domain, impossible evidence,
/// mismatched domains, out-of-range parameter.
struct QueryError : Error {
    using Error::Error;
};

} // namespace cfaudit

#endif
