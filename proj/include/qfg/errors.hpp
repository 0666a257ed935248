// Copyright 2026 The qfg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QFG_ERRORS_HPP
#define QFG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qfg {

/// Base class of all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or axis mismatch (non-square matrix, incompatible contraction pair, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument (repeated axis, out-of-range index or value, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation
/// (non-Hermitian matrix to an eigendecomposition, non-unitary where required).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured resource guard (intermediate tensor size, enumeration count) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A variable would be attached to more than two factor ports.
class NormalityError : public Error {
 public:
  using Error::Error;
};

/// Graph lacks the structure an operation requires (e.g. no conjugate mirror registry).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an event of probability zero, or collapsing onto a null outcome.
class NullConditionError : public Error {
 public:
  using Error::Error;
};

/// A syndrome whose effective channel is identically zero.
class ImpossibleSyndromeError : public Error {
 public:
  using Error::Error;
};

/// The sampling target |f| vanishes everywhere.
class DegenerateTargetError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity violated an invariant that the construction guarantees;
/// indicates a bug in a builder, not in user input.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfg

#endif  // QFG_ERRORS_HPP
