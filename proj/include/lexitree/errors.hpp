#pragma once

#include <stdexcept>
#include <string>

namespace lexitree {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two values for one overwriting feature at a single node.
class OverwriteConflict : public Error {
 public:
  OverwriteConflict(std::string feature, std::string existing, std::string incoming)
      : Error("overwrite conflict on '" + feature + "': '" + existing + "' vs '" + incoming + "'"),
        feature_(std::move(feature)),
        existing_(std::move(existing)),
        incoming_(std::move(incoming)) {}

  const std::string& feature() const noexcept { return feature_; }
  const std::string& existing_value() const noexcept { return existing_; }
  const std::string& new_value() const noexcept { return incoming_; }

 private:
  std::string feature_;
  std::string existing_;
  std::string incoming_;
};

class PathOutOfRange : public Error {
 public:
  using Error::Error;
};

class UnexpandedAlternatives : public Error {
 public:
  UnexpandedAlternatives()
      : Error("tree still contains alternative groups; expand them first") {}
};

class InvalidRegistry : public Error {
 public:
  using Error::Error;
};

class UnknownFeature : public Error {
 public:
  explicit UnknownFeature(const std::string& feature)
      : Error("feature '" + feature + "' has no element in the encoding profile"), feature_(feature) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

}  // namespace lexitree
