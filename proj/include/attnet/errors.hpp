#pragma once

#include <stdexcept>
#include <string>

namespace attnet {

// Base class for every contract violation raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ShapeMismatch : public Error { public: using Error::Error; };
class NonFinite : public Error { public: using Error::Error; };
class BadAxis : public Error { public: using Error::Error; };
class DegenerateOutput : public Error { public: using Error::Error; };
class BadLabel : public Error { public: using Error::Error; };
class BadReduction : public Error { public: using Error::Error; };
class BadKernel : public Error { public: using Error::Error; };
class BadChannelCount : public Error { public: using Error::Error; };
class BadDepth : public Error { public: using Error::Error; };
class EmptyDataset : public Error { public: using Error::Error; };
class StaleCache : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class CheckpointError : public Error { public: using Error::Error; };

// Dataset parsing failure; carries the 1-based data-row index.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long row)
        : Error(msg + " (row " + std::to_string(row) + ")"), row_(row) {}
    long row() const noexcept { return row_; }

private:
    long row_;
};

}  // namespace attnet
