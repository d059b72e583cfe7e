#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace okl::harness {

/// One CSV field: text, an integer, or a float rendered with %.17g.
class Cell {
 public:
  Cell(std::string s) : text_(std::move(s)) {}
  Cell(const char* s) : text_(s) {}
  Cell(double v);
  Cell(int v) : text_(std::to_string(v)) {}
  Cell(long v) : text_(std::to_string(v)) {}
  Cell(long long v) : text_(std::to_string(v)) {}
  Cell(unsigned long v) : text_(std::to_string(v)) {}
  Cell(unsigned long long v) : text_(std::to_string(v)) {}
  Cell(bool v) : text_(v ? "true" : "false") {}
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

/// Comma-separated rows with a header, LF line endings. Fields containing
/// commas or quotes are quoted.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);
  void row(std::initializer_list<Cell> cells);
  void row(const std::vector<Cell>& cells);
  std::size_t width() const noexcept { return width_; }

 private:
  void emit(const std::vector<std::string>& fields);
  std::ostream& out_;
  std::size_t width_;
};

}  // namespace okl::harness
