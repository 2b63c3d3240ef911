#include "repglm/data.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace repglm {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, Index line_no) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0') || errno == ERANGE)
    throw io_error("line " + std::to_string(line_no) + ": malformed numeric field '" + s + "'");
  return v;
}

std::int64_t parse_label(const std::string& s, Index line_no) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(begin, &end, 10);
  if (end == begin || (end && *end != '\0') || errno == ERANGE)
    throw io_error("line " + std::to_string(line_no) + ": malformed key field '" + s + "'");
  return v;
}

void write_double(std::FILE* f, double v) {
  // %.17g round-trips any double exactly, so re-reading a file reproduces
  // the in-memory values bit for bit.
  std::fprintf(f, "%.17g", v);
}

}  // namespace

int Dataset::column(const std::string& name) const {
  for (std::size_t j = 0; j < column_names.size(); ++j)
    if (column_names[j] == name) return static_cast<int>(j);
  return -1;
}

const KeyColumn* Dataset::key(const std::string& name) const {
  for (const auto& k : keys)
    if (k.name == name) return &k;
  return nullptr;
}

WeightedData unit_weights(const Dataset& data) {
  WeightedData w;
  w.X = data.X;
  w.y = data.y;
  w.w = Vector::Ones(data.n_rows());
  return w;
}

Dataset read_csv_dataset(const std::string& path, bool add_intercept) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw io_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto header = split_line(line);
  if (header.empty() || header[0] != "y")
    throw io_error(path + ": header must start with 'y'");

  std::vector<std::string> cov_names;
  std::vector<std::string> key_names;
  for (std::size_t j = 1; j < header.size(); ++j) {
    if (header[j].rfind("key:", 0) == 0) {
      key_names.push_back(header[j].substr(4));
    } else {
      if (!key_names.empty())
        throw io_error(path + ": key columns must come after all covariate columns");
      cov_names.push_back(header[j]);
    }
  }
  const std::size_t n_cov = cov_names.size();
  const std::size_t n_key = key_names.size();
  const std::size_t n_fields = 1 + n_cov + n_key;

  std::vector<double> ys;
  std::vector<double> xs;
  std::vector<std::vector<std::int64_t>> keys(n_key);
  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != n_fields)
      throw io_error("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(n_fields) + " fields, got " + std::to_string(fields.size()));
    ys.push_back(parse_double(fields[0], line_no));
    for (std::size_t j = 0; j < n_cov; ++j) xs.push_back(parse_double(fields[1 + j], line_no));
    for (std::size_t j = 0; j < n_key; ++j)
      keys[j].push_back(parse_label(fields[1 + n_cov + j], line_no));
  }

  const Index n = static_cast<Index>(ys.size());
  Dataset data;
  data.y = Eigen::Map<Vector>(ys.data(), n);
  const Index p = static_cast<Index>(n_cov) + (add_intercept ? 1 : 0);
  data.X.resize(n, p);
  for (Index i = 0; i < n; ++i) {
    Index j0 = 0;
    if (add_intercept) data.X(i, j0++) = 1.0;
    for (std::size_t j = 0; j < n_cov; ++j)
      data.X(i, j0 + static_cast<Index>(j)) = xs[static_cast<std::size_t>(i) * n_cov + j];
  }
  if (add_intercept) data.column_names.push_back("intercept");
  for (auto& nm : cov_names) data.column_names.push_back(std::move(nm));
  for (std::size_t j = 0; j < n_key; ++j)
    data.keys.push_back(KeyColumn{key_names[j], std::move(keys[j])});
  return data;
}

void write_csv_dataset(const std::string& path, const Dataset& data) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot open " + path + " for writing");

  const bool drop_intercept =
      !data.column_names.empty() && data.column_names[0] == "intercept";
  const Index j0 = drop_intercept ? 1 : 0;

  std::fputs("y", f);
  for (Index j = j0; j < data.n_cols(); ++j)
    std::fprintf(f, ",%s", data.column_names[static_cast<std::size_t>(j)].c_str());
  for (const auto& k : data.keys) std::fprintf(f, ",key:%s", k.name.c_str());
  std::fputc('\n', f);

  for (Index i = 0; i < data.n_rows(); ++i) {
    write_double(f, data.y(i));
    for (Index j = j0; j < data.n_cols(); ++j) {
      std::fputc(',', f);
      write_double(f, data.X(i, j));
    }
    for (const auto& k : data.keys)
      std::fprintf(f, ",%lld", static_cast<long long>(k.labels[static_cast<std::size_t>(i)]));
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace repglm
