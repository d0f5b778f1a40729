#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qls {

/// Input outside a formula's domain (non-positive mass, invalid geometry, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Population leaked into the highest retained Fock level.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double edge_population)
      : std::runtime_error(what), edge_population_(edge_population) {}
  double edge_population() const { return edge_population_; }

 private:
  double edge_population_;
};

/// Configuration does not match the schema. `path` is a JSON pointer.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace qls
