#pragma once

#include <functional>
#include <optional>

#include "vanhove/error.hpp"

// Kind of the vanhove::Error raised by fn, if any.
inline std::optional<vanhove::ErrorKind> error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const vanhove::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}
