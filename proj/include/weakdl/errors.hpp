#pragma once

#include <stdexcept>
#include <string>

namespace weakdl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPrime : Error { using Error::Error; };
struct NotADivisor : Error { using Error::Error; };
struct BadFactorization : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct PointNotOnCurve : Error { using Error::Error; };
struct BadEncoding : Error { using Error::Error; };
struct WrongSubgroup : Error { using Error::Error; };
struct UnknownCurve : Error { using Error::Error; };
struct IdentityInput : Error { using Error::Error; };
struct IdentityPoint : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace weakdl
