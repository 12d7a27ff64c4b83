// Copyright 2026 The seedlen Authors
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

#ifndef SEEDLEN_ERRORS_H
#define SEEDLEN_ERRORS_H

#include <stdexcept>
#include <string>

namespace seedlen {

/// An argument lies outside the domain of the function it was passed to.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The requested target cannot be met within the configured search space.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An emitted document does not match its declared schema.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace seedlen

#endif
