#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pencil {

struct SourceLoc {
    int line = 0;
    int column = 0;

    bool operator==(const SourceLoc&) const = default;
    bool operator<(const SourceLoc& o) const {
        return line != o.line ? line < o.line : column < o.column;
    }
};

inline std::string to_string(const SourceLoc& loc) {
    return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

enum class Severity { Error, Warning };

/// A user-facing finding: either a syntax problem or a coding-rule
/// violation. Codes are listed in docs/diagnostics.md.
struct Diagnostic {
    std::string code;
    Severity severity = Severity::Error;
    std::string message;
    SourceLoc loc;
    std::optional<SourceLoc> related;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

/// Operational failure (bad pragma, missing summary, budget blown, ...).
/// Carries the same machine codes the diagnostics do.
class PencilError : public std::runtime_error {
  public:
    PencilError(std::string code, const std::string& message, SourceLoc loc = {})
        : std::runtime_error(code + ": " + message), code_(std::move(code)), loc_(loc) {}

    const std::string& code() const { return code_; }
    SourceLoc loc() const { return loc_; }

  private:
    std::string code_;
    SourceLoc loc_;
};

}  // namespace pencil
