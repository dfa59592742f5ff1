#pragma once

#include <stdexcept>
#include <string>

namespace minimal2 {

// Contract violation by the caller (bad modulus, non-invertible input, ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configured resource limit was hit. Never swallowed: searches abort.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// A computation contradicted a claim it was asked to verify.
class VerificationFailure : public Error {
public:
    using Error::Error;
};

}  // namespace minimal2
