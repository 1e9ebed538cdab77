#pragma once

#include "owl/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace owlreg {

/// Malformed input text or file (exit code 2).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Headerless numeric CSV; every row must have the same number of fields.
owl::Matrix parse_matrix_csv(std::string_view text, const std::string& what = "input");
owl::Matrix read_matrix_csv(const std::filesystem::path& path);

/// A vector stored either as one column or as one row.
owl::Vector parse_vector_csv(std::string_view text, const std::string& what = "input");
owl::Vector read_vector_csv(const std::filesystem::path& path);

double parse_double(std::string_view field, const std::string& what);
long long parse_integer(std::string_view field, const std::string& what);

/// Shortest round-trip-safe form with 17 significant digits.
std::string format_double(double v);

/// One row, comma separated.
std::string format_row(const owl::VectorRef& v);

void write_matrix_csv(std::ostream& out, const owl::MatrixRef& m);
void write_vector_csv(std::ostream& out, const owl::VectorRef& v);
void write_matrix_csv(const std::filesystem::path& path, const owl::MatrixRef& m);
void write_vector_csv(const std::filesystem::path& path, const owl::VectorRef& v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace owlreg
