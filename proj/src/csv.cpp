#include "famd/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "famd/error.hpp"

namespace famd {

namespace {

bool next_record(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

std::string context(std::size_t line_no, std::size_t field) {
  return "line " + std::to_string(line_no) + ", column " + std::to_string(field + 1);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quote on line " + std::to_string(line_no));
  fields.push_back(std::move(cur));
  return fields;
}

std::string quote_csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

MixedDataset read_typed_csv(std::istream& in, const std::string& na_token) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_record(in, line, line_no)) throw ParseError("empty input: missing header row");
  const auto names = split_csv_line(line, line_no);
  if (!next_record(in, line, line_no)) throw ParseError("missing kinds row (cont|cat) after header");
  const auto kinds = split_csv_line(line, line_no);
  if (kinds.size() != names.size())
    throw ParseError("kinds row has " + std::to_string(kinds.size()) + " fields, header has " +
                     std::to_string(names.size()));

  std::vector<Column> cols(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    cols[k].name = names[k];
    if (kinds[k] == "cont")
      cols[k].kind = Kind::Continuous;
    else if (kinds[k] == "cat")
      cols[k].kind = Kind::Categorical;
    else
      throw ParseError("unknown kind '" + kinds[k] + "' at " + context(line_no, k) + " (expected cont or cat)");
  }

  while (next_record(in, line, line_no)) {
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != cols.size())
      throw ParseError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto& f = fields[k];
      if (cols[k].kind == Kind::Categorical) {
        cols[k].labels.push_back(f == na_token ? std::nullopt : std::optional<std::string>(f));
        continue;
      }
      if (f == na_token) {
        cols[k].numbers.emplace_back();
        continue;
      }
      double v = 0.0;
      const auto* end = f.data() + f.size();
      auto [ptr, ec] = std::from_chars(f.data(), end, v);
      if (ec != std::errc() || ptr != end)
        throw ParseError("cannot parse '" + f + "' as a number at " + context(line_no, k));
      cols[k].numbers.emplace_back(v);
    }
  }
  try {
    return MixedDataset(std::move(cols));
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
}

MixedDataset read_typed_csv_file(const std::string& path, const std::string& na_token) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_typed_csv(in, na_token);
}

void write_typed_csv(std::ostream& out, const MixedDataset& ds, const std::string& na_token) {
  for (std::size_t k = 0; k < ds.n_cols(); ++k) out << (k ? "," : "") << quote_csv_field(ds.column(k).name);
  out << '\n';
  for (std::size_t k = 0; k < ds.n_cols(); ++k) out << (k ? "," : "") << to_string(ds.column(k).kind);
  out << '\n';
  for (std::size_t i = 0; i < ds.n_rows(); ++i) {
    for (std::size_t k = 0; k < ds.n_cols(); ++k) {
      if (k) out << ',';
      const auto& c = ds.column(k);
      if (c.is_missing(i))
        out << na_token;
      else if (c.kind == Kind::Continuous)
        out << format_number(*c.numbers[i]);
      else
        out << quote_csv_field(*c.labels[i]);
    }
    out << '\n';
  }
}

void write_typed_csv_file(const std::string& path, const MixedDataset& ds, const std::string& na_token) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_typed_csv(out, ds, na_token);
}

CellMask read_mask_csv(std::istream& in, const MixedDataset& like) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_record(in, line, line_no)) throw ParseError("empty mask file");
  const auto names = split_csv_line(line, line_no);
  if (names.size() != like.n_cols()) throw ParseError("mask header does not match dataset columns");
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] != like.column(k).name) throw ParseError("mask column '" + names[k] + "' does not match dataset");

  CellMask mask(like.n_rows(), like.n_cols());
  std::size_t row = 0;
  while (next_record(in, line, line_no)) {
    if (row >= like.n_rows()) throw ParseError("mask has more rows than the dataset");
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != like.n_cols()) throw ParseError("wrong field count on mask line " + std::to_string(line_no));
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (fields[k] == "1")
        mask.set(row, k);
      else if (fields[k] != "0")
        throw ParseError("mask entry must be 0 or 1 at " + context(line_no, k));
    }
    ++row;
  }
  if (row != like.n_rows()) throw ParseError("mask has fewer rows than the dataset");
  return mask;
}

void write_mask_csv(std::ostream& out, const MixedDataset& like, const CellMask& mask) {
  for (std::size_t k = 0; k < like.n_cols(); ++k) out << (k ? "," : "") << quote_csv_field(like.column(k).name);
  out << '\n';
  for (std::size_t i = 0; i < mask.rows(); ++i) {
    for (std::size_t k = 0; k < mask.cols(); ++k) out << (k ? "," : "") << (mask(i, k) ? '1' : '0');
    out << '\n';
  }
}

void write_fuzzy_csv(std::ostream& out, const MixedDataset& ds, const FuzzyIndicator& fz) {
  bool first = true;
  for (const auto& b : fz.layout.blocks) {
    const auto& name = ds.column(b.variable).name;
    if (b.kind == Kind::Continuous) {
      out << (first ? "" : ",") << quote_csv_field(name);
      first = false;
      continue;
    }
    for (const auto& cat : b.categories) {
      out << (first ? "" : ",") << quote_csv_field(name + "=" + cat);
      first = false;
    }
  }
  out << '\n';
  for (Eigen::Index i = 0; i < fz.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < fz.values.cols(); ++j) out << (j ? "," : "") << format_number(fz.values(i, j));
    out << '\n';
  }
}

}  // namespace famd
