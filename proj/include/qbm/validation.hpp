// validation.hpp - oracle checks and the acceptance criteria, shared by the CLI and tests

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qbm {

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus s);
CheckStatus check_status_from_string(const std::string& s);

struct CheckResult {
    std::string name;
    int criterion = 0;  // 1..8 for acceptance criteria, 0 for module checks
    CheckStatus status = CheckStatus::Skipped;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string oracle;
    std::string detail;
    double seconds = 0.0;

    bool operator==(const CheckResult&) const = default;
};

struct ValidationReport {
    std::string level;
    std::vector<CheckResult> checks;

    bool passed() const;  // no check failed; skipped checks do not count
    nlohmann::json to_json() const;
    static ValidationReport from_json(const nlohmann::json& j);
    bool operator==(const ValidationReport&) const;
};

enum class ValidationLevel { Fast, Full };

ValidationLevel validation_level_from_string(const std::string& s);

// Acceptance criterion k in 1..8.
CheckResult run_criterion(int k);

// Per-module oracle checks; heavy ones come back as Skipped at the fast level.
std::vector<CheckResult> module_checks(ValidationLevel level);

// Module checks followed by every acceptance criterion exactly once. At the
// fast level the closed-form oracle matrix is listed as skipped.
ValidationReport run_validation(ValidationLevel level);

}  // namespace qbm
