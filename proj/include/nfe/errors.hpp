#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nfe {

// Text/binary input that does not conform to one of the file formats.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Text parse failure carrying the 1-based line number of the offending line.
class ParseError : public FormatError {
public:
    ParseError(std::size_t line, const std::string& msg)
        : FormatError("line " + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Enrollment center falls outside the codebook's support sphere.
class OutOfSupportError : public std::runtime_error {
public:
    explicit OutOfSupportError(const std::string& msg) : std::runtime_error(msg) {}
};

// Enrollment cannot produce a sketch (e.g. an uncorrectable block in the
// binary scheme). The caller may retry with a different layout.
class EnrollmentError : public std::runtime_error {
public:
    explicit EnrollmentError(const std::string& msg) : std::runtime_error(msg) {}
};

// Username already present in the record store.
class DuplicateUserError : public std::runtime_error {
public:
    explicit DuplicateUserError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nfe
