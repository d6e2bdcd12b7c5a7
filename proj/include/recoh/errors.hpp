/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef RECOH_ERRORS_HPP
#define RECOH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace recoh {

// Malformed input files (bad JSON, wrong shapes, missing fields).
class parse_error : public std::runtime_error {
public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Inputs that parse but violate a declared invariant (non-PSD state,
// incomplete Kraus set, mismatched dimensions, bad arguments).
class validation_error : public std::runtime_error {
public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested object exceeds the configured maximum total dimension.
class capacity_error : public std::runtime_error {
public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// A post-selection branch with vanishing probability cannot be normalized.
class degenerate_branch_error : public std::runtime_error {
public:
  explicit degenerate_branch_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace recoh

#endif
