// Copyright 2026 The geo Authors
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

#include <stdexcept>
#include <string>

namespace geo {

/// Which process exit code a failure maps to at the command line.
enum class ErrorClass {
    validation = 1,  ///< bad input, domain violation, unsupported request
    numerical = 2,   ///< conditioning / rounding / eigensolver failure
};

class GeoError : public std::runtime_error {
   public:
    GeoError(std::string kind, const std::string &what, ErrorClass cls)
        : std::runtime_error(what), kind_(std::move(kind)), cls_(cls) {
    }
    const std::string &kind() const noexcept {
        return kind_;
    }
    ErrorClass error_class() const noexcept {
        return cls_;
    }

   private:
    std::string kind_;
    ErrorClass cls_;
};

#define GEO_DEFINE_ERROR(Name, Class)                                  \
    class Name : public GeoError {                                     \
       public:                                                         \
        explicit Name(const std::string &what)                         \
            : GeoError(#Name, what, ErrorClass::Class) {               \
        }                                                              \
    };

GEO_DEFINE_ERROR(UsageError, validation)
GEO_DEFINE_ERROR(DomainError, validation)
GEO_DEFINE_ERROR(DimensionMismatch, validation)
GEO_DEFINE_ERROR(UnsupportedFamily, validation)
GEO_DEFINE_ERROR(OrthogonalLink, validation)
GEO_DEFINE_ERROR(RejectionOverflow, validation)
GEO_DEFINE_ERROR(UnsupportedReportKind, validation)
GEO_DEFINE_ERROR(NumericalError, numerical)
GEO_DEFINE_ERROR(ConditioningError, numerical)
GEO_DEFINE_ERROR(NoisePanic, numerical)

#undef GEO_DEFINE_ERROR

}  // namespace geo
