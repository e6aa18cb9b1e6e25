#pragma once

#include <string>
#include <utility>
#include <variant>

#include "segdiff/error.hpp"

namespace segdiff {

// A value that could not be computed, with the reason kept for reports.
struct Unavailable {
  std::string reason;
};

template <class T>
class Maybe {
 public:
  Maybe(T value) : state_(std::move(value)) {}
  Maybe(Unavailable u) : state_(std::move(u)) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!ok()) throw DataError("unavailable", reason());
    return std::get<T>(state_);
  }
  T& value() {
    if (!ok()) throw DataError("unavailable", reason());
    return std::get<T>(state_);
  }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }

  const std::string& reason() const {
    static const std::string kEmpty;
    return ok() ? kEmpty : std::get<Unavailable>(state_).reason;
  }

 private:
  std::variant<T, Unavailable> state_;
};

}  // namespace segdiff
