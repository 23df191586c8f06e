#pragma once

#include <stdexcept>
#include <string>

namespace wfg {

// Base class; `exit_code()` maps onto the CLI contract (1 computation, 2 config).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual int exit_code() const { return 1; }
};

class InvalidSignal : public Error { using Error::Error; };
class GridError : public Error { using Error::Error; };
class KindError : public Error { using Error::Error; };
class OutOfBox : public Error { using Error::Error; };
class UnsupportedSymbol : public Error { using Error::Error; };
class OrderTooHigh : public Error { using Error::Error; };
class EstimatorError : public Error { using Error::Error; };

class RegionTooLarge : public Error {
public:
    RegionTooLarge(double h, const std::string& what) : Error(what), h_(h) {}
    double h() const { return h_; }
private:
    double h_;
};

class EmptyShell : public Error {
public:
    EmptyShell(int index, double radius, const std::string& what)
        : Error(what), index_(index), radius_(radius) {}
    int index() const { return index_; }
    double radius() const { return radius_; }
private:
    int index_;
    double radius_;
};

class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 2; }
};

}  // namespace wfg
