#pragma once

// Deeply recursive evaluations run on a thread with a large stack.

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <type_traits>

namespace mfl {

inline constexpr std::size_t kDefaultStackBytes = std::size_t{1} << 30;

/// Runs `body` to completion on a fresh thread with `stack_bytes` of stack.
/// Exceptions are rethrown in the caller.
void run_on_big_stack(const std::function<void()>& body,
                      std::size_t stack_bytes = kDefaultStackBytes);

template <typename F>
auto with_big_stack(F&& f, std::size_t stack_bytes = kDefaultStackBytes) {
  using R = std::invoke_result_t<F&>;
  if constexpr (std::is_void_v<R>) {
    run_on_big_stack([&] { f(); }, stack_bytes);
  } else {
    std::optional<R> out;
    run_on_big_stack([&] { out.emplace(f()); }, stack_bytes);
    return std::move(*out);
  }
}

}  // namespace mfl
