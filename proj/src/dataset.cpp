#include "rulescore/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "rulescore/error.hpp"

namespace rulescore {

Dataset::Dataset(std::string name, Schema schema, std::vector<std::vector<double>> columns,
                 std::string target_name, TaskKind task, std::vector<double> target,
                 std::vector<std::string> classes)
    : name_(std::move(name)),
      schema_(std::move(schema)),
      columns_(std::move(columns)),
      target_name_(std::move(target_name)),
      task_(task),
      target_(std::move(target)),
      classes_(std::move(classes)) {
  if (schema_.size() != columns_.size()) {
    throw Error(ErrorCode::SchemaError, "schema and column count differ");
  }
  for (const auto& col : columns_) {
    if (col.size() != target_.size()) {
      throw Error(ErrorCode::LengthMismatch, "all columns must have equal length");
    }
  }
}

std::vector<FeatureValue> Dataset::observation(std::size_t i) const {
  std::vector<FeatureValue> x;
  x.reserve(columns_.size());
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    const FeatureInfo& info = schema_.features[f];
    if (info.kind == FeatureKind::Continuous) {
      x.emplace_back(columns_[f][i]);
    } else {
      x.emplace_back(info.levels[static_cast<std::size_t>(columns_[f][i])]);
    }
  }
  return x;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    cols[f].reserve(indices.size());
    for (std::size_t i : indices) cols[f].push_back(columns_[f].at(i));
  }
  std::vector<double> y;
  y.reserve(indices.size());
  for (std::size_t i : indices) y.push_back(target_.at(i));
  return Dataset(name_, schema_, std::move(cols), target_name_, task_, std::move(y), classes_);
}

Dataset Dataset::with_column(std::size_t f, std::vector<double> values) const {
  Dataset out = *this;
  if (values.size() != rows()) throw Error(ErrorCode::LengthMismatch, "replacement column length");
  out.columns_.at(f) = std::move(values);
  return out;
}

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // source line of each row
};

CsvTable tokenize(const std::string& text, char delim, const std::string& source) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
    bool blank = record.size() == 1 && record[0].empty();
    if (!blank) {
      if (table.header.empty()) {
        table.header = std::move(record);
      } else {
        table.rows.push_back(std::move(record));
        table.lines.push_back(record_line);
      }
    }
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (field_started && !field.empty()) {
        throw Error(ErrorCode::ParseError,
                    fmt::format("{}: line {}: stray quote inside unquoted field", source, line));
      }
      in_quotes = true;
      field_started = true;
    } else if (c == delim) {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\r') {
      // CRLF; bare CR is ignored as well.
    } else if (c == '\n') {
      end_record();
      ++line;
      record_line = line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: unterminated quoted field", source));
  }
  if (field_started || !record.empty()) end_record();
  return table;
}

std::optional<double> to_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool is_missing(const std::string& s) {
  auto first = s.find_first_not_of(' ');
  if (first == std::string::npos) return true;
  auto last = s.find_last_not_of(' ');
  return s.substr(first, last - first + 1) == "NA";
}

struct Coded {
  std::vector<double> codes;
  std::vector<std::string> levels;
};

Coded encode(const std::vector<std::string>& raw) {
  Coded out;
  out.levels = sort_labels(raw);
  std::unordered_map<std::string, double> index;
  for (std::size_t i = 0; i < out.levels.size(); ++i) index[out.levels[i]] = static_cast<double>(i);
  out.codes.reserve(raw.size());
  for (const auto& s : raw) out.codes.push_back(index.at(s));
  return out;
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& options, const std::string& name) {
  CsvTable table = tokenize(text, options.delimiter, name);
  if (table.header.empty()) throw Error(ErrorCode::ParseError, fmt::format("{}: missing header row", name));
  const std::size_t ncols = table.header.size();

  const std::string target = options.target.empty() ? table.header.back() : options.target;
  auto target_it = std::find(table.header.begin(), table.header.end(), target);
  if (target_it == table.header.end()) {
    throw Error(ErrorCode::UnknownTarget, fmt::format("{}: target column '{}' not found in header", name, target));
  }
  const auto target_col = static_cast<std::size_t>(target_it - table.header.begin());
  for (const auto& declared : options.categorical) {
    if (std::find(table.header.begin(), table.header.end(), declared) == table.header.end()) {
      throw Error(ErrorCode::SchemaError,
                  fmt::format("{}: declared categorical column '{}' not found", name, declared));
    }
  }
  if (table.rows.empty()) throw Error(ErrorCode::EmptyData, fmt::format("{}: no data rows", name));

  std::vector<std::vector<std::string>> cells(ncols);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != ncols) {
      throw Error(ErrorCode::ParseError, fmt::format("{}: line {}: expected {} fields, found {}", name,
                                                     table.lines[r], ncols, row.size()));
    }
    for (std::size_t c = 0; c < ncols; ++c) {
      if (is_missing(row[c])) {
        throw Error(ErrorCode::MissingValues, fmt::format("{}: missing value at line {}, column '{}'",
                                                          name, table.lines[r], table.header[c]));
      }
      cells[c].push_back(row[c]);
    }
  }

  auto all_numeric = [](const std::vector<std::string>& col) {
    return std::all_of(col.begin(), col.end(), [](const std::string& s) { return to_number(s).has_value(); });
  };
  auto declared_categorical = [&](const std::string& col) {
    return std::find(options.categorical.begin(), options.categorical.end(), col) != options.categorical.end();
  };

  Schema schema;
  std::vector<std::vector<double>> columns;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (c == target_col) continue;
    FeatureInfo info;
    info.name = table.header[c];
    if (!declared_categorical(info.name) && all_numeric(cells[c])) {
      std::vector<double> values;
      values.reserve(cells[c].size());
      for (const auto& s : cells[c]) values.push_back(*to_number(s));
      columns.push_back(std::move(values));
    } else {
      info.kind = FeatureKind::Categorical;
      Coded coded = encode(cells[c]);
      info.levels = std::move(coded.levels);
      columns.push_back(std::move(coded.codes));
    }
    schema.features.push_back(std::move(info));
  }

  const auto& ycells = cells[target_col];
  TaskKind task = options.task.value_or(all_numeric(ycells) && !declared_categorical(target)
                                            ? TaskKind::Regression
                                            : TaskKind::Classification);
  std::vector<double> y;
  std::vector<std::string> classes;
  if (task == TaskKind::Regression) {
    for (std::size_t r = 0; r < ycells.size(); ++r) {
      auto v = to_number(ycells[r]);
      if (!v) {
        throw Error(ErrorCode::ParseError, fmt::format("{}: line {}: non-numeric regression target '{}'",
                                                       name, table.lines[r], ycells[r]));
      }
      y.push_back(*v);
    }
  } else {
    Coded coded = encode(ycells);
    y = std::move(coded.codes);
    classes = std::move(coded.levels);
  }

  std::string dataset_name = std::filesystem::path(name).stem().string();
  return Dataset(dataset_name, std::move(schema), std::move(columns), target, task, std::move(y),
                 std::move(classes));
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("{}: cannot open file", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options, path);
}

}  // namespace rulescore
