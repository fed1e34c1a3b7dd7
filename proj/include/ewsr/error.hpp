// SPDX-License-Identifier: Apache-2.0
//
// ewsr-gap: expected weighted sum rate vs. massive-MIMO surrogate gap analysis
// Copyright (C) 2026 The ewsr-gap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef EWSR_ERROR_HPP
#define EWSR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ewsr
{

// Base of every exception thrown by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define EWSR_DEFINE_ERROR(name)                      \
    class name : public error                        \
    {                                                \
    public:                                          \
        explicit name(const std::string &what)       \
            : error(std::string(#name ": ") + what) {} \
    }

EWSR_DEFINE_ERROR(not_hermitian);
EWSR_DEFINE_ERROR(not_positive_definite);
EWSR_DEFINE_ERROR(indefinite_matrix);
EWSR_DEFINE_ERROR(no_convergence);
EWSR_DEFINE_ERROR(dimension_mismatch);
EWSR_DEFINE_ERROR(domain_error);
EWSR_DEFINE_ERROR(index_out_of_range);
EWSR_DEFINE_ERROR(degenerate_spectrum);
EWSR_DEFINE_ERROR(unsupported_case);
EWSR_DEFINE_ERROR(validation_error);
EWSR_DEFINE_ERROR(io_error);

#undef EWSR_DEFINE_ERROR

// Scenario document could not be parsed; carries the 1-based line (0 if unknown)
// and the JSON path of the offending field.
class parse_error : public error
{
public:
    parse_error(const std::string &what, std::size_t line, std::string field)
        : error("parse_error: " + what + (line ? " (line " + std::to_string(line) + ")" : std::string()) +
                (field.empty() ? std::string() : " [" + field + "]")),
          line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string &field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

} // namespace ewsr

#endif // EWSR_ERROR_HPP
