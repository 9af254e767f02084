#pragma once

#include <functional>

#include "doctest.h"
#include "fracres/error.hpp"

inline fracres::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const fracres::Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return fracres::ErrorKind::io;
}
