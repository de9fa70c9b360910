#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lvharvest {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Stable machine-readable name, used by the CLI error JSON.
    virtual const char* kind() const noexcept { return "Error"; }
};

#define LVHARVEST_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                        \
    public:                                                            \
        using Error::Error;                                            \
        const char* kind() const noexcept override { return #Name; }  \
    }

/// A hypothesis of the model's results (e.g. Delta > 0) does not hold.
LVHARVEST_DEFINE_ERROR(AssumptionViolation);
/// The ergodic yield formula was requested outside the coexistence regime.
LVHARVEST_DEFINE_ERROR(RegimeError);
LVHARVEST_DEFINE_ERROR(InvalidConfig);
LVHARVEST_DEFINE_ERROR(EmptyWindow);
LVHARVEST_DEFINE_ERROR(DegenerateInput);
LVHARVEST_DEFINE_ERROR(EmptyFeasible);
LVHARVEST_DEFINE_ERROR(ParseError);
LVHARVEST_DEFINE_ERROR(ValidationError);

#undef LVHARVEST_DEFINE_ERROR

/// A simulated state became NaN or infinite.
class NonFinite : public Error {
public:
    NonFinite(const std::string& what, std::size_t step, std::size_t path = npos)
        : Error(what), step_(step), path_(path) {}
    const char* kind() const noexcept override { return "NonFinite"; }
    std::size_t step() const noexcept { return step_; }
    /// Index of the failing path inside an ensemble, npos for single runs.
    std::size_t path() const noexcept { return path_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t step_;
    std::size_t path_;
};

}  // namespace lvharvest
