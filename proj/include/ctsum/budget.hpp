#pragma once

#include <string>
#include <string_view>

namespace ctsum {

enum class BudgetUnit { words, bytes };

// Summary length limit. DUC'02/'03 use 100 words, DUC'04 665 bytes,
// Multi-News 264 words.
struct Budget {
    BudgetUnit unit = BudgetUnit::words;
    long limit = 100;

    static Budget words(long n) { return {BudgetUnit::words, n}; }
    static Budget bytes(long n) { return {BudgetUnit::bytes, n}; }

    bool operator==(const Budget&) const = default;
};

std::string_view unit_name(BudgetUnit unit);
BudgetUnit parse_budget_unit(std::string_view name);

}  // namespace ctsum
