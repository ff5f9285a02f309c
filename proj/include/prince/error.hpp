/*
 *   Copyright 2026 The prince authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PRINCE_ERROR_HPP
#define PRINCE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace prince {

enum class ErrorCode {
    InvalidArgument,
    Io,
    ParseError,
    TypeConflict,
    UnknownEndpoint,
    NegativeWeight,
    DuplicateEdge,
    DuplicateNode,
    UnknownNode,
    NonStochasticSimilarity,
    NotAnAction,
    NotAUser,
    NoConvergence,
    CandidateIsNeighbor,
    NoActions,
    NoEligibleItems,
    TooManyActions,
    InfeasibleParams,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library surfaces as this exception; `code()` is
/// what the C layer maps to a status value.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure carrying the 1-based line number of the offending input.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + reason),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace prince

#endif  // PRINCE_ERROR_HPP
