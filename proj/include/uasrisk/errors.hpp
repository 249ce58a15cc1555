// Copyright (c) 2026 The uasrisk Authors.
// All rights reserved.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UASRISK_ERRORS_HPP
#define UASRISK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace uasrisk {

/// Base class for all errors raised by this library.  Errors deriving from
/// Error represent invalid input, configuration, or data; anything else
/// escaping the library is an internal fault.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid polygon or geometric degeneracy.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// A numeric precondition was violated (non-finite input, empty domain, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.  Carries the file and the line / feature locus.
class ParseError : public Error {
public:
    ParseError(std::string file, long locus, const std::string& message)
        : Error(file + ":" + std::to_string(locus) + ": " + message),
          file_(std::move(file)),
          locus_(locus) {}

    const std::string& file() const noexcept { return file_; }
    long locus() const noexcept { return locus_; }

private:
    std::string file_;
    long locus_;
};

/// Invalid configuration value or unknown key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Datasets that must agree do not (unknown cell ids, mismatched cell sets).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Infeasible sampling design (delta not representable on the level grid).
class DesignError : public Error {
public:
    using Error::Error;
};

/// A model evaluation produced a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

}  // namespace uasrisk

#endif  // UASRISK_ERRORS_HPP
