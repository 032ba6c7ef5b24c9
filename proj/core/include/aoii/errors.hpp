#pragma once

#include <stdexcept>
#include <string>

namespace aoii {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotStochastic : public Error {
public:
    using Error::Error;
};

class NegativeEntry : public Error {
public:
    using Error::Error;
};

class NotIrreducible : public Error {
public:
    using Error::Error;
};

/// A linear system that must be solvable (e.g. I - A for an absorbing chain)
/// is numerically singular.
class SingularSystem : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

/// q_jj = 1: the source never leaves state j, so cycle-j never ends.
class DegenerateSource : public Error {
public:
    using Error::Error;
};

class TruncationHorizonRequired : public Error {
public:
    using Error::Error;
};

class HorizonTooSmall : public Error {
public:
    using Error::Error;
};

class GridTooLarge : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class UnknownPreset : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

} // namespace aoii
