#pragma once

#include "insights/clock.hpp"
#include "insights/error.hpp"
#include "insights/http.hpp"
#include "insights/llm.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace insights::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitBackend = 3;
/// Unexpected failures outside the documented contract.
inline constexpr int kExitInternal = 1;

/// Seams for tests. Unset members fall back to the real network, wall clock
/// and process environment.
struct Environment {
    std::function<std::shared_ptr<http::Transport>(std::chrono::milliseconds)> transport;
    Clock* clock = nullptr;
    std::function<std::optional<std::string>(const std::string&)> getenv;
    /// Replaces the backend chosen by `--backend` when set.
    std::function<std::unique_ptr<llm::CompletionBackend>()> backend;
};

/// Exit code for an error kind: 2 for input and configuration problems, 3 for
/// backend and network failures.
int exit_code_for(ErrorKind kind) noexcept;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env = {});

} // namespace insights::cli
