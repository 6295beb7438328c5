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

#ifndef MARTBEL_RATIONAL_HPP
#define MARTBEL_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace martbel {

/// Exact rational number with arbitrary-precision integer parts.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses "p", "-p" or "p/q" (q > 0 after normalization).
inline Rat parse_rational(std::string_view text) {
    if (text.empty()) {
        throw ParseError("empty rational literal");
    }
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rat(Int(std::string(text)));
        }
        Int num{std::string(text.substr(0, slash))};
        Int den{std::string(text.substr(slash + 1))};
        if (den == 0) {
            throw ParseError("zero denominator in rational literal: " + std::string(text));
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
        return Rat(num, den);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed rational literal: " + std::string(text));
    }
}

/// Renders as "p/q", or just "p" when the denominator is one.
inline std::string to_string(const Rat& value) {
    if (denominator(value) == 1) {
        return numerator(value).str();
    }
    return numerator(value).str() + "/" + denominator(value).str();
}

/// Renders with a caller-chosen denominator when the value divides evenly
/// into it, e.g. hint 105 turns 1/7 into "15/105". Falls back to the
/// canonical form otherwise.
inline std::string to_string_with_denominator(const Rat& value, const Int& hint) {
    if (hint > 0) {
        Rat scaled = value * hint;
        if (denominator(scaled) == 1) {
            return numerator(scaled).str() + "/" + hint.str();
        }
    }
    return to_string(value);
}

inline double to_double(const Rat& value) { return value.convert_to<double>(); }

}  // namespace martbel

#endif  // MARTBEL_RATIONAL_HPP
