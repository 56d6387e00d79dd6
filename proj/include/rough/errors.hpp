#pragma once

#include <stdexcept>
#include <string>

namespace rough {

// A computation would exceed a hard resource limit (e.g. materializing a cycle
// that only fits in streamed form). The message names the limit and the way out.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// A persisted artifact (cycle cache file, scan checkpoint) is damaged:
// bad magic, truncated payload, checksum mismatch, inconsistent header.
class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

// A persisted artifact is intact but describes a different object than the
// one requested (e.g. cache file for another prime).
class IdentityError : public std::runtime_error {
 public:
  explicit IdentityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rough
