// Copyright 2026 The fourierqml Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fourierqml/errors.hpp"

namespace fourierqml::jsonutil {

/// Throws ParseError when `obj` is not an object or has a key outside `allowed`.
inline void require_keys_within(const nlohmann::json &obj,
                                std::initializer_list<std::string_view> allowed,
                                std::string_view where) {
    if (!obj.is_object()) {
        throw ParseError(std::string(where) + ": expected a JSON object");
    }
    for (const auto &item : obj.items()) {
        bool known = false;
        for (const auto key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ParseError(std::string(where) + ": unknown field '" + item.key() + "'");
        }
    }
}

/// Required field of type T; ParseError names the missing or mistyped field.
template <class T>
T get(const nlohmann::json &obj, const char *key, std::string_view where) {
    if (!obj.contains(key)) {
        throw ParseError(std::string(where) + ": missing field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string(where) + ": field '" + key + "': " + e.what());
    }
}

template <class T>
T get_or(const nlohmann::json &obj, const char *key, T fallback, std::string_view where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return get<T>(obj, key, where);
}

inline void require_version(const nlohmann::json &obj, std::string_view expected) {
    const auto version = get<std::string>(obj, "version", expected);
    if (version != expected) {
        throw ParseError("expected version '" + std::string(expected) + "', got '" +
                         version + "'");
    }
}

} // namespace fourierqml::jsonutil
