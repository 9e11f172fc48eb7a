/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace evtree {

// Bad command usage (invalid flag combinations, malformed run specs).
// CLI maps this to exit code 1.
struct usage_error : std::runtime_error {
  explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown for unreadable/unwritable files. CLI maps this to exit code 2.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown for malformed input content (bad JSON, schema violations).
// Messages name the offending file/line where known. Exit code 3.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when data violates a documented invariant (duplicate ids,
// mismatched vector lengths, s > f windows, ...). Exit code 3.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a referenced entity (vertex id, ...) does not exist.
struct not_found_error : std::runtime_error {
  explicit not_found_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace evtree
