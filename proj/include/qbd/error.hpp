// Copyright 2026 The qbd Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbd {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
   public:
    using Error::Error;
};

/// A Fock-space truncation cannot represent the requested state.
class TruncationError : public Error {
   public:
    using Error::Error;
};

/// A numerical procedure did not reach its accuracy target.
class ConvergenceError : public Error {
   public:
    explicit ConvergenceError(const std::string &what, std::size_t suggested_dim = 0)
        : Error(what), suggested_dim_(suggested_dim) {
    }

    /// Truncation dimension that would pass, or 0 when not applicable.
    std::size_t suggested_dim() const noexcept {
        return suggested_dim_;
    }

   private:
    std::size_t suggested_dim_;
};

/// A root scan finished without locating a crossing.
class NotFoundError : public Error {
   public:
    NotFoundError(const std::string &what, double scanned_max) : Error(what), scanned_max_(scanned_max) {
    }

    double scanned_max() const noexcept {
        return scanned_max_;
    }

   private:
    double scanned_max_;
};

}  // namespace qbd
