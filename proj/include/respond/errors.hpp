#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace respond {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input that could not be read at all (bad token, bad number, ...).
struct ParseError : Error {
    explicit ParseError(const std::string& msg, std::vector<std::string> rows = {})
        : Error(msg), offending_rows(std::move(rows)) {}
    std::vector<std::string> offending_rows;
};

// Well-formed input that breaks a domain invariant.
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg, std::vector<std::string> rows = {})
        : Error(msg), offending_rows(std::move(rows)) {}
    std::vector<std::string> offending_rows;
};

// Patient cannot be assessed for response (no measurable disease at baseline).
struct NotEvaluable : Error {
    explicit NotEvaluable(const std::string& patient_id)
        : Error("patient " + patient_id + " is not evaluable for response"),
          patient_id(patient_id) {}
    std::string patient_id;
};

struct EmptyPopulation : Error {
    using Error::Error;
};

// An estimand spec was handed to the wrong derivation.
struct SpecMismatch : Error {
    using Error::Error;
};

// km_fit received competing-event codes; use aj_fit instead.
struct CompetingCodePresent : Error {
    using Error::Error;
};

struct InvalidConfig : Error {
    using Error::Error;
};

struct UnsupportedConfig : Error {
    using Error::Error;
};

}  // namespace respond
