// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace aimc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text: JSON, rationals, DIMACS, polynomial files.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// A model, chain or query that violates a structural precondition.
class ModelError : public Error {
  public:
    using Error::Error;
};

/// An algorithm was called outside its domain (wrong structure class,
/// missing slack edge, budget exceeded, ...).
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// Failure to run or talk to an external solver process.
class SolverError : public Error {
  public:
    using Error::Error;
};

} // namespace aimc
