#pragma once

#include <memory>
#include <utility>

namespace hddl {

/// Heap-allocated value with value semantics: copies deep-copy, equality
/// compares the pointees. Used to hold a recursive member by value.
template <class T> class Box {
public:
  Box() = default;
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box &other)
      : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
  Box(Box &&) noexcept = default;
  Box &operator=(const Box &other) {
    if (this != &other)
      ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
    return *this;
  }
  Box &operator=(Box &&) noexcept = default;

  explicit operator bool() const noexcept { return ptr_ != nullptr; }
  T &operator*() { return *ptr_; }
  const T &operator*() const { return *ptr_; }
  T *operator->() { return ptr_.get(); }
  const T *operator->() const { return ptr_.get(); }

  friend bool operator==(const Box &a, const Box &b) {
    if (!a.ptr_ || !b.ptr_)
      return !a.ptr_ && !b.ptr_;
    return *a.ptr_ == *b.ptr_;
  }

private:
  std::unique_ptr<T> ptr_;
};

} // namespace hddl
