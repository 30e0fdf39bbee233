// Copyright 2026 The sideband-mixer Authors
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

#ifndef SIDEBAND_ERRORS_HPP
#define SIDEBAND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sideband {

/// Broad error classes. The numeric values double as CLI exit codes.
enum class ErrorClass : int {
    kConfig = 2,
    kConvergence = 3,
    kIo = 4,
};

/// Base of every error raised by the library.
class Error : public std::runtime_error {
   public:
    Error(const char *name, ErrorClass cls, const std::string &message)
        : std::runtime_error(message), name_(name), cls_(cls) {
    }
    const char *name() const noexcept {
        return name_;
    }
    ErrorClass error_class() const noexcept {
        return cls_;
    }

   private:
    const char *name_;
    ErrorClass cls_;
};

#define SIDEBAND_DEFINE_ERROR(NAME, CLS)                                          \
    class NAME : public Error {                                                    \
       public:                                                                     \
        explicit NAME(const std::string &message) : Error(#NAME, CLS, message) { \
        }                                                                          \
    };

SIDEBAND_DEFINE_ERROR(CommensurabilityError, ErrorClass::kConfig)
SIDEBAND_DEFINE_ERROR(UnitError, ErrorClass::kConfig)
SIDEBAND_DEFINE_ERROR(SchemaError, ErrorClass::kConfig)
SIDEBAND_DEFINE_ERROR(GridTooCoarse, ErrorClass::kConfig)
SIDEBAND_DEFINE_ERROR(ToleranceNotMet, ErrorClass::kConvergence)
SIDEBAND_DEFINE_ERROR(NoConvergence, ErrorClass::kConvergence)
SIDEBAND_DEFINE_ERROR(TailNotDecayed, ErrorClass::kConvergence)
SIDEBAND_DEFINE_ERROR(FlatResponse, ErrorClass::kConvergence)
SIDEBAND_DEFINE_ERROR(IoError, ErrorClass::kIo)

#undef SIDEBAND_DEFINE_ERROR

}  // namespace sideband

#endif
