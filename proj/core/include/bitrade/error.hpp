// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace bitrade {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or a literal was violated.
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

/// An enumeration would exceed its profile budget.
class InstanceTooLarge : public Error
{
public:
  using Error::Error;
};

}  // namespace bitrade
