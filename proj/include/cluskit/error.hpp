// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_ERROR_HPP
#define CLUSKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cluskit {

// Base class for all cluskit errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// File or stream access failed (CLI exit code 1).
class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error(msg) {}
};

// Input text could not be parsed; carries the offending line number
// when one is known (CLI exit code 2).
class parse_error : public error {
public:
    parse_error(const std::string& msg, int line)
        : error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    explicit parse_error(const std::string& msg) : error(msg), line_(0) {}
    int line() const { return line_; }

private:
    int line_;
};

// A domain invariant or precondition was violated (CLI exit code 2).
class validation_error : public error {
public:
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// Numerically ill-posed input, e.g. non-PSD matrix beyond tolerance
// (CLI exit code 3).
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& msg) : error(msg) {}
};

} // namespace cluskit

#endif
