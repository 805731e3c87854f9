// Copyright 2026 The fgqc Authors
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

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgqc/errors.hpp"

namespace fgqc {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class ConfigError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Typed access to one JSON object of the experiment config.
///
/// Every read records the value actually used (given or default) into a
/// resolved tree; finish() rejects keys that were never read.
class ConfigReader {
 public:
  ConfigReader(const Json* node, Json* resolved, std::string path)
      : node_(node), resolved_(resolved), path_(std::move(path)) {
    if (node_ != nullptr && !node_->is_object()) fail("", "must be an object");
    *resolved_ = Json::object();
  }

  double number(const std::string& key, double fallback) {
    const Json* v = take(key);
    double out = fallback;
    if (v != nullptr) {
      if (!v->is_number()) fail(key, "must be a number");
      out = v->get<double>();
    }
    (*resolved_)[key] = out;
    return out;
  }

  long long integer(const std::string& key, long long fallback, long long min = 0) {
    const Json* v = take(key);
    long long out = fallback;
    if (v != nullptr) {
      if (!v->is_number_integer()) fail(key, "must be an integer");
      out = v->get<long long>();
    }
    if (out < min) fail(key, "must be >= " + std::to_string(min));
    (*resolved_)[key] = out;
    return out;
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    const Json* v = take(key);
    std::uint64_t out = fallback;
    if (v != nullptr) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
        fail(key, "must be a non-negative integer");
      out = v->get<std::uint64_t>();
    }
    (*resolved_)[key] = out;
    return out;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const Json* v = take(key);
    std::string out = fallback;
    if (v != nullptr) {
      if (!v->is_string()) fail(key, "must be a string");
      out = v->get<std::string>();
    }
    (*resolved_)[key] = out;
    return out;
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    const Json* v = take(key);
    std::vector<double> out = fallback;
    if (v != nullptr) {
      if (!v->is_array()) fail(key, "must be an array of numbers");
      out.clear();
      for (const Json& e : *v) {
        if (!e.is_number()) fail(key, "must be an array of numbers");
        out.push_back(e.get<double>());
      }
    }
    (*resolved_)[key] = out;
    return out;
  }

  std::vector<std::string> texts(const std::string& key, const std::vector<std::string>& fallback) {
    const Json* v = take(key);
    std::vector<std::string> out = fallback;
    if (v != nullptr) {
      if (!v->is_array()) fail(key, "must be an array of strings");
      out.clear();
      for (const Json& e : *v) {
        if (!e.is_string()) fail(key, "must be an array of strings");
        out.push_back(e.get<std::string>());
      }
    }
    (*resolved_)[key] = out;
    return out;
  }

  bool has(const std::string& key) const { return node_ != nullptr && node_->contains(key); }

  // Nested object; absent means all defaults.
  ConfigReader child(const std::string& key) {
    const Json* v = take(key);
    return ConfigReader(v, &(*resolved_)[key], qualified(key));
  }

  void finish() const {
    if (node_ == nullptr) return;
    for (const auto& item : node_->items())
      if (!seen_.contains(item.key())) fail(item.key(), "unknown key");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    throw ConfigError("config: " + (key.empty() ? path_ : qualified(key)) + " " + why);
  }

 private:
  const Json* take(const std::string& key) {
    seen_.insert(key);
    if (node_ == nullptr) return nullptr;
    const auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json* node_;
  Json* resolved_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace fgqc
