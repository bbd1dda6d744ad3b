#pragma once

#include <stdexcept>
#include <string>

namespace fvote {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGraph : public Error {
public:
    using Error::Error;
};

class InvalidParam : public Error {
public:
    using Error::Error;
};

class RetryExhausted : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, long max_iter)
        : Error(what), max_iter_(max_iter) {}
    long max_iter() const noexcept { return max_iter_; }

private:
    long max_iter_;
};

class Disconnected : public Error {
public:
    using Error::Error;
};

class NotSmooth : public Error {
public:
    using Error::Error;
};

class Unclassifiable : public Error {
public:
    using Error::Error;
};

class InsufficientCells : public Error {
public:
    using Error::Error;
};

class NoPhaseIISteps : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace fvote
