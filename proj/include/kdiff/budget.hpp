#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace kdiff {

// Thrown when an input file or argument cannot even be parsed; distinct from
// mathematical violations, which are reported in result structs, never thrown.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
    BudgetExceeded() : std::runtime_error("enumeration budget exceeded") {}
};

// Step counter shared by every enumerative search in one verdict computation.
// Exhaustion aborts the computation with an explicit indeterminate outcome;
// no search ever degrades into a guess.
class Budget {
public:
    explicit Budget(std::int64_t steps) : remaining_(steps) {}

    void spend(std::int64_t n = 1) {
        remaining_ -= n;
        if (remaining_ < 0) throw BudgetExceeded();
    }
    std::int64_t remaining() const { return remaining_; }

private:
    std::int64_t remaining_;
};

constexpr std::int64_t kDefaultBudget = 10'000'000;

// KDIFF_BUDGET overrides the built-in default; an explicit --budget flag
// overrides both (handled by the caller).
inline std::int64_t default_budget() {
    if (const char* env = std::getenv("KDIFF_BUDGET")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return kDefaultBudget;
}

// Three-valued verdict: searches capped by a Budget may be inconclusive.
enum class Tri { yes, no, unknown };

inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        default: return "unknown";
    }
}

}  // namespace kdiff
