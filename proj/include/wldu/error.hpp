#ifndef WLDU_ERROR_HPP
#define WLDU_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wldu {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed container (bad magic, unsupported version, inconsistent header).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Stream or file ended before the declared payload was complete.
class TruncatedError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Frames, fields or planes whose shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid or contradictory configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace wldu

#endif
