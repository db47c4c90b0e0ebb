#pragma once
// The numbered acceptance checks, shared by the acceptance test and `frobkit verify-all`.

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace acceptance {

enum class Profile { Quick, Full };

struct Result {
    int id = 0;
    std::string title;
    bool checks_pass = false;
    double seconds = 0, budget = 0;
    bool within_budget = true;
    std::string detail;
    nlohmann::json data;
    bool pass() const { return checks_pass && within_budget; }
    std::string line() const;
    nlohmann::json to_json() const;
};

// only: criterion ids to run (all when empty); on_result is called as each finishes
std::vector<Result> run(Profile profile, const std::vector<int>& only = {},
                        const std::function<void(const Result&)>& on_result = {});

// budgets only bind in the full profile
double budget_seconds(int id);

}  // namespace acceptance
