#pragma once

#include <stdexcept>
#include <string>

namespace symfun {

/// Library error with a short machine-readable code ("psi-zero", "domain",
/// "invalid-input", "size", ...). The message is a single human-readable line.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

inline void require(bool condition, const char* code, const std::string& message) {
    if (!condition) throw Error(code, message);
}

}  // namespace symfun
