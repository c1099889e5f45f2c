#include "qasurv/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qasurv/errors.hpp"

namespace qasurv {

namespace {

void append_double(std::string& line, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, ptr);
}

[[noreturn]] void bad_line(const std::string& source, std::size_t line_no,
                           const std::string& what) {
  throw InvalidInputError(source + ":" + std::to_string(line_no) + ": " + what);
}

template <typename T>
T parse_number(const std::string& field, const std::string& source,
               std::size_t line_no, const char* name) {
  T value{};
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    bad_line(source, line_no, std::string("bad ") + name + " '" + field + "'");
  }
  return value;
}

bool parse_bool(const std::string& field, const std::string& source,
                std::size_t line_no, const char* name) {
  if (field == "0") return false;
  if (field == "1") return true;
  bad_line(source, line_no, std::string("bad ") + name + " '" + field + "'");
}

}  // namespace

void write_feature_csv(std::ostream& out, const std::vector<FeatureRow>& rows) {
  std::string line;
  out << kFeatureCsvHeader << '\n';
  for (const auto& row : rows) {
    line.clear();
    line += std::to_string(row.question_id);
    line += ',';
    line += row.site;
    line += ',';
    char tbuf[48];
    std::snprintf(tbuf, sizeof(tbuf), "%.4f", row.tanswer);
    line += tbuf;
    line += ',';
    line += row.solved ? '1' : '0';
    line += ',';
    line += std::to_string(row.bodylength);
    line += ',';
    line += std::to_string(row.titlelength);
    line += ',';
    line += row.hasexample ? '1' : '0';
    line += ',';
    line += std::to_string(row.tagscount);
    line += ',';
    line += std::to_string(row.sumpeople);
    line += ',';
    append_double(line, row.zscore);
    line += '\n';
    out << line;
  }
}

void write_feature_csv_file(const std::string& path,
                            const std::vector<FeatureRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  write_feature_csv(out, rows);
  out.flush();
  if (!out) throw InvalidInputError("failed writing " + path);
}

std::vector<FeatureRow> read_feature_csv(std::istream& in,
                                         const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidInputError(source_name + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kFeatureCsvHeader) {
    throw InvalidInputError(source_name + ": unexpected header '" + line + "'");
  }

  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fields.clear();
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 10) {
      bad_line(source_name, line_no, "expected 10 fields, got " +
                                         std::to_string(fields.size()));
    }
    FeatureRow row;
    row.question_id =
        parse_number<long long>(fields[0], source_name, line_no, "question_id");
    row.site = fields[1];
    if (row.site.empty()) bad_line(source_name, line_no, "empty site");
    row.tanswer = parse_number<double>(fields[2], source_name, line_no, "tanswer");
    row.solved = parse_bool(fields[3], source_name, line_no, "solved");
    row.bodylength =
        parse_number<long>(fields[4], source_name, line_no, "bodylength");
    row.titlelength =
        parse_number<long>(fields[5], source_name, line_no, "titlelength");
    row.hasexample =
        parse_bool(fields[6], source_name, line_no, "hasexample");
    row.tagscount =
        parse_number<long>(fields[7], source_name, line_no, "tagscount");
    row.sumpeople =
        parse_number<long>(fields[8], source_name, line_no, "sumpeople");
    row.zscore = parse_number<double>(fields[9], source_name, line_no, "zscore");
    if (!(row.tanswer > 0.0)) bad_line(source_name, line_no, "tanswer must be > 0");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FeatureRow> read_feature_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path);
  return read_feature_csv(in, path);
}

}  // namespace qasurv
