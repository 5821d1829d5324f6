#include "optrec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "optrec/errors.hpp"

namespace optrec {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf" || text == "Infinity") return std::numeric_limits<double>::infinity();
  if (text == "-inf" || text == "-Infinity") return -std::numeric_limits<double>::infinity();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw ArgumentError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  line += '\n';
  return line;
}

SampleSet<> read_samples_csv(std::istream& in, double alpha, Metric metric) {
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("sample CSV is empty");
  const auto header = split_fields(line);
  const std::size_t cols = header.size();
  if (cols < 3 || header[cols - 2] != "y" || header[cols - 1] != "eps") {
    throw ArgumentError("sample CSV header must be x_1,...,x_d,y,eps");
  }
  const std::size_t d = cols - 2;
  for (std::size_t i = 0; i < d; ++i) {
    if (header[i] != "x_" + std::to_string(i + 1)) throw ArgumentError("sample CSV header must be x_1,...,x_d,y,eps");
  }
  std::vector<double> flat;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != cols) {
      throw ArgumentError("sample CSV line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                          " fields");
    }
    for (const auto f : fields) flat.push_back(parse_number(f));
    ++rows;
  }
  if (rows == 0) throw ArgumentError("sample CSV has no data rows");
  const auto M = Eigen::Index(rows);
  const auto D = Eigen::Index(d);
  PointSet<> x(D, M);
  Vector<> y(M), e(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const double* row = flat.data() + std::size_t(m) * cols;
    for (Eigen::Index i = 0; i < D; ++i) x(i, m) = row[i];
    y(m) = row[d];
    e(m) = row[d + 1];
  }
  return SampleSet<>(std::move(x), std::move(y), std::move(e), alpha, Domain(metric, D));
}

SampleSet<> read_samples_csv_file(const std::string& path, double alpha, Metric metric) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open sample file '" + path + "'");
  return read_samples_csv(in, alpha, metric);
}

void write_samples_csv(std::ostream& out, const SampleSet<>& s) {
  std::vector<std::string> fields;
  for (Eigen::Index i = 0; i < s.dim(); ++i) fields.push_back("x_" + std::to_string(i + 1));
  fields.push_back("y");
  fields.push_back("eps");
  out << csv_line(fields);
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    fields.clear();
    for (Eigen::Index i = 0; i < s.dim(); ++i) fields.push_back(format_number(s.sites()(i, m)));
    fields.push_back(format_number(s.values()(m)));
    fields.push_back(format_number(s.eps()(m)));
    out << csv_line(fields);
  }
}

}  // namespace optrec
