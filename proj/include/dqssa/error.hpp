#pragma once

#include <stdexcept>
#include <string>

namespace dqssa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Inner implicit-Euler iteration did not reach the residual tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(double t, double residual)
        : Error("implicit step did not converge at t = " + std::to_string(t) +
                " (residual " + std::to_string(residual) + ")"),
          t_(t), residual_(residual) {}

    double time() const noexcept { return t_; }
    double residual() const noexcept { return residual_; }

private:
    double t_;
    double residual_;
};

class NonFinite : public Error {
public:
    explicit NonFinite(double t)
        : Error("non-finite state at t = " + std::to_string(t)), t_(t) {}

    double time() const noexcept { return t_; }

private:
    double t_;
};

class HistoryLookupError : public Error {
public:
    using Error::Error;
};

class NoOscillation : public Error {
public:
    using Error::Error;
};

class IrregularPeriod : public Error {
public:
    using Error::Error;
};

class MissingChannel : public Error {
public:
    using Error::Error;
};

class WindowOutOfRange : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnknownKey : public ParseError {
public:
    UnknownKey(std::size_t line, const std::string& key)
        : ParseError(line, "unknown key '" + key + "'"), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace dqssa
