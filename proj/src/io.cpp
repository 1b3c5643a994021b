#include "stationplot/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stationplot {
namespace {

std::string read_whole_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw DataError("read failure: " + path.string());
  }
  return buf.str();
}

// Trims ASCII whitespace (including a stray CR from CRLF files) from both
// ends of a line.
std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits on commas without any quoting rules; the ingest formats here are
// plain numeric tables.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(std::string_view token, double& out) {
  token = trim(token);
  if (token.empty()) {
    return false;
  }
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_long(std::string_view token, long long& out) {
  token = trim(token);
  if (token.empty()) {
    return false;
  }
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::filesystem::path> sorted_regular_files(
    const std::filesystem::path& directory) {
  if (!std::filesystem::is_directory(directory)) {
    throw DataError("not a directory: " + directory.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file()) {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw DataError("no files in directory: " + directory.string());
  }
  std::sort(files.begin(), files.end(),
            [](const std::filesystem::path& a, const std::filesystem::path& b) {
              return a.filename().string() < b.filename().string();
            });
  return files;
}

}  // namespace

Signal load_bonn_record(const std::filesystem::path& path, const std::string& label,
                        WarningSink* warnings) {
  const std::string text = read_whole_file(path);
  std::vector<double> values;
  values.reserve(kBonnRecordLength);
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (nl == std::string::npos ? text.size() : nl) - pos);
    pos = (nl == std::string::npos) ? text.size() : nl + 1;
    ++line_no;
    std::string_view token = trim(line);
    if (token.empty()) {
      continue;  // blank lines (including a trailing one) carry no samples
    }
    long long v = 0;
    if (!parse_long(token, v)) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected an integer amplitude, got \"" +
                      std::string(token) + "\"");
    }
    values.push_back(static_cast<double>(v));
  }
  if (values.empty()) {
    throw DataError(path.string() + ": empty record");
  }
  if (static_cast<int>(values.size()) != kBonnRecordLength) {
    warn(warnings, path.string() + ": record has " +
                       std::to_string(values.size()) + " samples, expected " +
                       std::to_string(kBonnRecordLength));
  }
  Signal sig;
  sig.samples = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
  sig.sample_rate = kBonnSampleRateHz;
  sig.label = label;
  sig.source_id = path.filename().string();
  return sig;
}

std::string bonn_record_to_text(const Signal& signal) {
  std::string out;
  out.reserve(static_cast<std::size_t>(signal.samples.size()) * 6);
  char buf[32];
  for (Eigen::Index i = 0; i < signal.samples.size(); ++i) {
    const double v = signal.samples[i];
    const long long r = std::llround(v);
    if (static_cast<double>(r) != v) {
      throw ValidationError("bonn_record_to_text: sample " + std::to_string(i) +
                            " is not integral");
    }
    const int n = std::snprintf(buf, sizeof buf, "%lld\n", r);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

Signal load_csv_record(const std::filesystem::path& path, const std::string& label,
                       int column, double sample_rate) {
  if (column < 0) {
    throw ValidationError("load_csv_record: column must be >= 0");
  }
  const std::string text = read_whole_file(path);
  std::vector<double> values;
  std::size_t pos = 0;
  int line_no = 0;
  bool header_checked = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (nl == std::string::npos ? text.size() : nl) - pos);
    pos = (nl == std::string::npos) ? text.size() : nl + 1;
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    auto fields = split_fields(line);
    if (static_cast<std::size_t>(column) >= fields.size()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": column " + std::to_string(column) + " out of range (" +
                      std::to_string(fields.size()) + " fields)");
    }
    double v = 0.0;
    if (!parse_double(fields[static_cast<std::size_t>(column)], v)) {
      // The first non-numeric row is treated as a header; any later one is
      // an error.
      if (!header_checked && values.empty()) {
        header_checked = true;
        continue;
      }
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected a number in column " + std::to_string(column) +
                      ", got \"" +
                      std::string(trim(fields[static_cast<std::size_t>(column)])) +
                      "\"");
    }
    header_checked = true;
    values.push_back(v);
  }
  if (values.empty()) {
    throw DataError(path.string() + ": no numeric rows");
  }
  Signal sig;
  sig.samples = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
  sig.sample_rate = sample_rate;
  sig.label = label;
  sig.source_id = path.filename().string();
  return sig;
}

std::vector<Signal> load_set(const std::filesystem::path& directory,
                             const std::string& label, WarningSink* warnings) {
  std::vector<Signal> set;
  for (const auto& path : sorted_regular_files(directory)) {
    set.push_back(load_bonn_record(path, label, warnings));
  }
  return set;
}

std::vector<Signal> load_set_csv(const std::filesystem::path& directory,
                                 const std::string& label, int column,
                                 double sample_rate) {
  std::vector<Signal> set;
  for (const auto& path : sorted_regular_files(directory)) {
    set.push_back(load_csv_record(path, label, column, sample_rate));
  }
  return set;
}

}  // namespace stationplot
