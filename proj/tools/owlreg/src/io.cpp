#include "owlreg/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace owlreg {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field, const std::string& what) {
  const std::string_view t = trim(field);
  double v = 0.0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(what + ": cannot parse '" + std::string(t) + "' as a number");
  }
  return v;
}

long long parse_integer(std::string_view field, const std::string& what) {
  const std::string_view t = trim(field);
  long long v = 0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(what + ": cannot parse '" + std::string(t) + "' as an integer");
  }
  return v;
}

namespace {

std::vector<std::vector<double>> parse_rows(std::string_view text, const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(
          parse_double(rest.substr(0, comma), what + " line " + std::to_string(line_no)));
      if (comma == std::string_view::npos) {
        break;
      }
      rest = rest.substr(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(what + " line " + std::to_string(line_no) + ": expected " +
                       std::to_string(rows.front().size()) + " fields, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(what + ": no data");
  }
  return rows;
}

}  // namespace

owl::Matrix parse_matrix_csv(std::string_view text, const std::string& what) {
  const auto rows = parse_rows(text, what);
  owl::Matrix m(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

owl::Vector parse_vector_csv(std::string_view text, const std::string& what) {
  const owl::Matrix m = parse_matrix_csv(text, what);
  if (m.cols() == 1) {
    return m.col(0);
  }
  if (m.rows() == 1) {
    return m.row(0).transpose();
  }
  throw ParseError(what + ": expected a single row or a single column");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << text;
}

owl::Matrix read_matrix_csv(const std::filesystem::path& path) {
  return parse_matrix_csv(read_text_file(path), path.string());
}

owl::Vector read_vector_csv(const std::filesystem::path& path) {
  return parse_vector_csv(read_text_file(path), path.string());
}

std::string format_double(double v) {
  if (v == 0.0) {
    return "0";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_row(const owl::VectorRef& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += format_double(v[i]);
  }
  return out;
}

void write_matrix_csv(std::ostream& out, const owl::MatrixRef& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << format_row(m.row(i).transpose()) << '\n';
  }
}

void write_vector_csv(std::ostream& out, const owl::VectorRef& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << format_double(v[i]) << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const owl::MatrixRef& m) {
  std::ostringstream ss;
  write_matrix_csv(ss, m);
  write_text_file(path, ss.str());
}

void write_vector_csv(const std::filesystem::path& path, const owl::VectorRef& v) {
  std::ostringstream ss;
  write_vector_csv(ss, v);
  write_text_file(path, ss.str());
}

}  // namespace owlreg
