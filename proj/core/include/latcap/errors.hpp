#pragma once

#include <stdexcept>
#include <string>

namespace latcap {

// Process exit codes reused as error categories: 2 config, 3 budget, 4 numeric.
enum class Errc : int {
    ok = 0,
    config = 2,
    budget = 3,
    numeric = 4,
    selftest = 5,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(Errc::config, what) {}
};
struct BudgetError : Error {
    explicit BudgetError(const std::string& what) : Error(Errc::budget, what) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(Errc::numeric, what) {}
};

// Always-on invariant check; never compiled out.
#define LATCAP_REQUIRE(cond, msg)                                             \
    do {                                                                      \
        if (!(cond)) throw ::latcap::NumericError(std::string("invariant: ") + (msg)); \
    } while (0)

}  // namespace latcap
