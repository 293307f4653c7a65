#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtcurate {

// Base for every domain failure surfaced by the toolkit. The CLI maps these
// to exit status 1; anything else is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input row. `row` is 1-based; 0 when the failure is not tied to a row.
class FormatError : public Error {
 public:
  FormatError(std::string source, std::size_t row, const std::string& what)
      : Error(source + (row ? ":" + std::to_string(row) : std::string()) + ": " + what),
        source_(std::move(source)),
        row_(row) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t row() const noexcept { return row_; }

 private:
  std::string source_;
  std::size_t row_;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(const std::string& id) : Error("duplicate line id: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class MissingPredictionError : public Error {
 public:
  MissingPredictionError(const std::string& model, std::vector<std::string> ids)
      : Error(describe(model, ids)), model_(model), ids_(std::move(ids)) {}

  const std::string& model() const noexcept { return model_; }
  const std::vector<std::string>& line_ids() const noexcept { return ids_; }

 private:
  static std::string describe(const std::string& model, const std::vector<std::string>& ids) {
    std::string s = "missing prediction for model '" + model + "' on " +
                    std::to_string(ids.size()) + " line(s):";
    std::size_t shown = 0;
    for (const auto& id : ids) {
      if (++shown > 20) {
        s += " ...";
        break;
      }
      s += " " + id;
    }
    return s;
  }

  std::string model_;
  std::vector<std::string> ids_;
};

class UnknownKeyError : public Error {
 public:
  using Error::Error;
};

}  // namespace gtcurate
