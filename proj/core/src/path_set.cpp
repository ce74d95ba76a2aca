#include "nestedot/path_set.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "nestedot/error.hpp"

namespace nestedot {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

enum class FieldStatus { Ok, NotNumeric, NonFinite };

FieldStatus parse_field(std::string_view field, double& out) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return FieldStatus::NotNumeric;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  if (ec == std::errc::result_out_of_range) return FieldStatus::NonFinite;
  if (ec != std::errc() || ptr != end) return FieldStatus::NotNumeric;
  if (!std::isfinite(out)) return FieldStatus::NonFinite;
  return FieldStatus::Ok;
}

}  // namespace

PathSet::PathSet(std::size_t n_samples, std::size_t t_steps, std::size_t dim,
                 std::vector<double> values)
    : n_samples_(n_samples), t_steps_(t_steps), dim_(dim), values_(std::move(values)) {
  if (n_samples_ == 0) throw Error(ErrorCode::EmptyInput, "path set needs at least one sample");
  if (t_steps_ == 0 || dim_ == 0)
    throw Error(ErrorCode::InvalidArgument, "t_steps and dim must be positive");
  if (values_.size() != n_samples_ * t_steps_ * dim_)
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(n_samples_ * t_steps_ * dim_) + " values, got " +
                    std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "path values must be finite");
}

PathSet load_csv(std::istream& in, std::size_t t_steps, std::size_t dim) {
  if (t_steps == 0 || dim == 0)
    throw Error(ErrorCode::InvalidArgument, "t_steps and dim must be positive");
  const std::size_t width = t_steps * dim;
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool seen_content = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;

    const bool first_content = !seen_content;
    seen_content = true;

    std::size_t fields = 0;
    std::size_t start = 0;
    const std::size_t row_begin = values.size();
    while (true) {
      std::size_t comma = view.find(',', start);
      std::string_view field =
          view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      double v = 0.0;
      switch (parse_field(field, v)) {
        case FieldStatus::Ok:
          values.push_back(v);
          break;
        case FieldStatus::NonFinite:
          throw Error(ErrorCode::NonFiniteValue, "non-finite value '" + std::string(trim(field)) + "'",
                      line_no);
        case FieldStatus::NotNumeric:
          if (first_content && fields == 0) {
            values.resize(row_begin);
            goto next_line;  // header
          }
          throw Error(ErrorCode::MalformedRow, "non-numeric field '" + std::string(trim(field)) + "'",
                      line_no);
      }
      ++fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields != width)
      throw Error(ErrorCode::MalformedRow,
                  "expected " + std::to_string(width) + " fields, got " + std::to_string(fields),
                  line_no);
    ++rows;
  next_line:;
  }
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read failure");
  if (rows == 0) throw Error(ErrorCode::EmptyInput, "no data rows");
  return PathSet(rows, t_steps, dim, std::move(values));
}

PathSet load_csv_file(const std::filesystem::path& file, std::size_t t_steps, std::size_t dim) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + file.string());
  return load_csv(in, t_steps, dim);
}

void save_csv(const PathSet& paths, std::ostream& out) {
  char buf[64];
  std::string line;
  for (std::size_t i = 0; i < paths.n_samples(); ++i) {
    line.clear();
    auto row = paths.path(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) line.push_back(',');
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), row[k]);
      line.append(buf, ptr);
    }
    line.push_back('\n');
    out << line;
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failure");
}

void save_csv_file(const PathSet& paths, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + file.string() + " for writing");
  save_csv(paths, out);
}

}  // namespace nestedot
