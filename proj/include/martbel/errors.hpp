/*
 * Copyright 2026 The martbel authors
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

#ifndef MARTBEL_ERRORS_HPP
#define MARTBEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace martbel {

/// Base class of all domain errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidMass : Error {
    using Error::Error;
};
struct NotACapacity : Error {
    using Error::Error;
};
struct NotBelief : Error {
    using Error::Error;
};
struct TooLarge : Error {
    using Error::Error;
};
struct NotViable : Error {
    using Error::Error;
};
struct DegenerateRate : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct NoUpperPrices : Error {
    using Error::Error;
};
struct EpsOutOfRange : Error {
    using Error::Error;
};
struct NotEquivalent : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct NotConverged : Error {
    using Error::Error;
};

}  // namespace martbel

#endif  // MARTBEL_ERRORS_HPP
