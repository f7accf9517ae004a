#include "rapidip/mps.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rapidip/error.hpp"

namespace rapidip {

namespace {

enum class Section { Start, Name, ObjSense, Rows, Columns, Rhs, Ranges, Bounds, Sos, Endata };

std::optional<Section> section_from(std::string_view word) {
  if (word == "NAME") return Section::Name;
  if (word == "OBJSENSE") return Section::ObjSense;
  if (word == "ROWS") return Section::Rows;
  if (word == "COLUMNS") return Section::Columns;
  if (word == "RHS") return Section::Rhs;
  if (word == "RANGES") return Section::Ranges;
  if (word == "BOUNDS") return Section::Bounds;
  if (word == "SOS") return Section::Sos;
  if (word == "ENDATA") return Section::Endata;
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_free(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view fixed_field(std::string_view line, std::size_t first, std::size_t last) {
  // 1-based inclusive column range
  if (line.size() < first) return {};
  return trim(line.substr(first - 1, std::min(line.size(), last) - (first - 1)));
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

struct RowData {
  std::string name;
  char sense;
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
  std::optional<double> range;
};

struct ColData {
  std::string name;
  double objective = 0.0;
  bool integer = false;
  double lower = 0.0;
  double upper = kInf;
  bool bounds_seen = false;
};

class MpsReader {
 public:
  MpsReader(std::string source, MpsFormat format) : format_(format) {
    diag_.source = std::move(source);
  }

  ParsedModel parse(std::string_view text);

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& msg) const {
    throw Error(code, diag_.source + ":" + std::to_string(line_) + ": " + msg);
  }
  void warn(std::string msg) { diag_.warnings.push_back({line_, std::move(msg)}); }

  double number(std::string_view token) const;
  std::vector<std::string_view> fields(std::string_view line) const;
  void header(std::string_view line);
  void data(std::string_view line);
  void rows_line(const std::vector<std::string_view>& t);
  void columns_line(const std::vector<std::string_view>& t);
  void rhs_line(const std::vector<std::string_view>& t, bool ranges);
  void bounds_line(const std::vector<std::string_view>& t);
  int column(std::string_view name);
  Instance build() const;

  MpsFormat format_;
  ParseDiagnostics diag_;
  std::size_t line_ = 0;
  Section section_ = Section::Start;
  std::string name_;
  bool maximize_ = false;
  bool in_integer_block_ = false;
  bool warned_sos_ = false;

  std::string objective_row_;
  double objective_rhs_ = 0.0;
  std::unordered_set<std::string> free_rows_;
  std::unordered_map<std::string, int> row_index_;
  std::vector<RowData> rows_;
  std::unordered_map<std::string, int> col_index_;
  std::vector<ColData> cols_;
};

double MpsReader::number(std::string_view token) const {
  std::string_view s = token;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || std::isnan(value))
    fail(ErrorCode::NonNumericField, "expected a number, got '" + std::string(token) + "'");
  if (value >= 1e30) return kInf;
  if (value <= -1e30) return -kInf;
  return value;
}

std::vector<std::string_view> MpsReader::fields(std::string_view line) const {
  if (format_ == MpsFormat::Free) return split_free(line);
  const std::string_view f1 = fixed_field(line, 2, 3);
  const std::string_view f2 = fixed_field(line, 5, 12);
  const std::string_view f3 = fixed_field(line, 15, 22);
  const std::string_view f4 = fixed_field(line, 25, 36);
  const std::string_view f5 = fixed_field(line, 40, 47);
  const std::string_view f6 = fixed_field(line, 50, 61);
  std::vector<std::string_view> out;
  switch (section_) {
    case Section::Rows:
      out = {f1, f2};
      break;
    case Section::Bounds:
      out = {f1, f2, f3};
      if (!f4.empty()) out.push_back(f4);
      break;
    case Section::Columns:
    case Section::Rhs:
    case Section::Ranges:
      out = {f2, f3, f4};
      if (section_ == Section::Columns && f2.empty()) out.erase(out.begin());
      if (!f5.empty() || !f6.empty()) {
        out.push_back(f5);
        out.push_back(f6);
      }
      break;
    default:
      return split_free(line);
  }
  return out;
}

void MpsReader::header(std::string_view line) {
  const auto tokens = split_free(line);
  const auto sec = section_from(upper(tokens.front()));
  if (!sec) fail(ErrorCode::MalformedSection, "unknown section '" + std::string(tokens.front()) + "'");
  if (*sec <= section_ && !(section_ == Section::Start))
    fail(ErrorCode::MalformedSection, "section " + std::string(tokens.front()) + " out of order");
  if (*sec > Section::Rows && *sec != Section::Endata && section_ < Section::Rows)
    fail(ErrorCode::MalformedSection, "section " + std::string(tokens.front()) + " before ROWS");
  section_ = *sec;
  switch (*sec) {
    case Section::Name:
      if (tokens.size() > 1) name_ = std::string(tokens[1]);
      break;
    case Section::ObjSense:
      if (tokens.size() > 1) {
        const std::string s = upper(tokens[1]);
        if (s == "MAX" || s == "MAXIMIZE") maximize_ = true;
        else if (s != "MIN" && s != "MINIMIZE")
          fail(ErrorCode::MalformedSection, "unknown objective sense '" + std::string(tokens[1]) + "'");
      }
      break;
    case Section::Rhs:
    case Section::Ranges:
    case Section::Bounds:
      if (tokens.size() > 1) warn("text after section keyword ignored");
      break;
    case Section::Sos:
      if (!warned_sos_) warn("SOS section ignored");
      warned_sos_ = true;
      break;
    default:
      break;
  }
}

void MpsReader::rows_line(const std::vector<std::string_view>& t) {
  if (t.size() < 2 || t[0].empty() || t[1].empty())
    fail(ErrorCode::MalformedSection, "ROWS entry needs a type and a name");
  const std::string type = upper(t[0]);
  const std::string name(t[1]);
  if (row_index_.count(name) || name == objective_row_ || free_rows_.count(name))
    fail(ErrorCode::MalformedSection, "duplicate row '" + name + "'");
  if (type == "N") {
    if (objective_row_.empty()) {
      objective_row_ = name;
    } else {
      free_rows_.insert(name);
      warn("extra free row '" + name + "' ignored");
    }
    return;
  }
  if (type != "L" && type != "G" && type != "E")
    fail(ErrorCode::MalformedSection, "unknown row type '" + std::string(t[0]) + "'");
  row_index_.emplace(name, static_cast<int>(rows_.size()));
  rows_.push_back({name, type[0], {}, 0.0, std::nullopt});
}

int MpsReader::column(std::string_view name) {
  const std::string key(name);
  auto it = col_index_.find(key);
  if (it != col_index_.end()) return it->second;
  const int j = static_cast<int>(cols_.size());
  col_index_.emplace(key, j);
  ColData col;
  col.name = key;
  col.integer = in_integer_block_;
  if (in_integer_block_) col.upper = 1.0;
  cols_.push_back(col);
  return j;
}

void MpsReader::columns_line(const std::vector<std::string_view>& t) {
  if (t.size() >= 3 && t[1] == "'MARKER'") {
    const std::string kind = upper(t[2]);
    if (kind == "'INTORG'") in_integer_block_ = true;
    else if (kind == "'INTEND'") in_integer_block_ = false;
    else fail(ErrorCode::MalformedSection, "unknown marker " + std::string(t[2]));
    return;
  }
  if (t.size() != 3 && t.size() != 5)
    fail(ErrorCode::MalformedSection, "COLUMNS entry needs a column and one or two row/value pairs");
  const int j = column(t[0]);
  for (std::size_t k = 1; k + 1 < t.size(); k += 2) {
    const std::string row(t[k]);
    const double value = number(t[k + 1]);
    if (!std::isfinite(value)) fail(ErrorCode::NonNumericField, "infinite coefficient");
    if (row == objective_row_) {
      cols_[j].objective += value;
    } else if (auto it = row_index_.find(row); it != row_index_.end()) {
      if (value != 0.0) rows_[it->second].terms.emplace_back(j, value);
    } else if (!free_rows_.count(row)) {
      fail(ErrorCode::UnknownRowReference, "unknown row '" + row + "'");
    }
  }
}

void MpsReader::rhs_line(const std::vector<std::string_view>& t, bool ranges) {
  // Set name is optional: pairs start at 0 with an even count, at 1 otherwise.
  std::size_t first = t.size() % 2 == 0 ? 0 : 1;
  if (t.size() < 2 || t.size() > 5)
    fail(ErrorCode::MalformedSection, std::string(ranges ? "RANGES" : "RHS") + " entry malformed");
  for (std::size_t k = first; k + 1 < t.size(); k += 2) {
    const std::string row(t[k]);
    const double value = number(t[k + 1]);
    if (row == objective_row_) {
      if (ranges) fail(ErrorCode::MalformedSection, "range on the objective row");
      objective_rhs_ = value;
      continue;
    }
    auto it = row_index_.find(row);
    if (it == row_index_.end()) {
      if (free_rows_.count(row)) continue;
      fail(ErrorCode::UnknownRowReference, "unknown row '" + row + "'");
    }
    if (ranges) rows_[it->second].range = value;
    else rows_[it->second].rhs = value;
  }
}

void MpsReader::bounds_line(const std::vector<std::string_view>& t) {
  if (t.empty()) return;
  const std::string type = upper(t[0]);
  const bool valueless = type == "FR" || type == "MI" || type == "PL" || type == "BV";
  std::size_t need = valueless ? 2 : 3;
  std::size_t col_pos;
  if (t.size() == need) col_pos = 1;
  else if (t.size() == need + 1) col_pos = 2;
  else if (valueless && t.size() == need + 2) col_pos = 2;  // BV entries sometimes carry a value
  else fail(ErrorCode::MalformedSection, "BOUNDS entry malformed");

  const std::string name(t[col_pos]);
  auto it = col_index_.find(name);
  if (it == col_index_.end()) fail(ErrorCode::UnknownColumnReference, "unknown column '" + name + "'");
  ColData& col = cols_[it->second];
  const double value = valueless ? 0.0 : number(t[col_pos + 1]);

  if (type == "SC") {
    warn("semi-continuous bound on '" + name + "' ignored");
    return;
  }
  if (!col.bounds_seen && (col.integer || type == "LI" || type == "UI")) {
    col.upper = kInf;
  }
  col.bounds_seen = true;
  if (type == "UP") {
    col.upper = value;
    if (value < 0.0 && col.lower == 0.0) {
      col.lower = -kInf;
      warn("negative upper bound on '" + name + "' with zero lower bound: lower set to -inf");
    }
  } else if (type == "LO") {
    col.lower = value;
  } else if (type == "FX") {
    col.lower = value;
    col.upper = value;
  } else if (type == "FR") {
    col.lower = -kInf;
    col.upper = kInf;
  } else if (type == "MI") {
    col.lower = -kInf;
  } else if (type == "PL") {
    col.upper = kInf;
  } else if (type == "BV") {
    col.integer = true;
    col.lower = 0.0;
    col.upper = 1.0;
  } else if (type == "LI") {
    col.integer = true;
    col.lower = value;
  } else if (type == "UI") {
    col.integer = true;
    col.upper = value;
  } else {
    fail(ErrorCode::MalformedSection, "unknown bound type '" + std::string(t[0]) + "'");
  }
}

void MpsReader::data(std::string_view line) {
  const auto t = fields(line);
  if (t.empty()) return;
  switch (section_) {
    case Section::Start:
      fail(ErrorCode::MalformedSection, "data before the first section");
    case Section::Name:
      fail(ErrorCode::MalformedSection, "unexpected data in NAME section");
    case Section::ObjSense: {
      const std::string s = upper(t[0]);
      if (s == "MAX" || s == "MAXIMIZE") maximize_ = true;
      else if (s != "MIN" && s != "MINIMIZE")
        fail(ErrorCode::MalformedSection, "unknown objective sense '" + std::string(t[0]) + "'");
      return;
    }
    case Section::Rows: return rows_line(t);
    case Section::Columns: return columns_line(t);
    case Section::Rhs: return rhs_line(t, false);
    case Section::Ranges: return rhs_line(t, true);
    case Section::Bounds: return bounds_line(t);
    case Section::Sos: return;
    case Section::Endata: return;
  }
}

ParsedModel MpsReader::parse(std::string_view text) {
  std::size_t pos = 0;
  while (pos <= text.size() && section_ != Section::Endata) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '*') continue;
    if (!std::isspace(static_cast<unsigned char>(line.front()))) {
      header(line);
    } else {
      data(line);
    }
    if (end == text.size()) break;
  }
  if (section_ != Section::Endata) warn("missing ENDATA");
  if (objective_row_.empty() && !rows_.empty()) warn("no objective row; objective is zero");
  return {build(), diag_};
}

Instance MpsReader::build() const {
  InstanceBuilder b;
  b.set_name(name_);
  const double sign = maximize_ ? -1.0 : 1.0;
  for (const ColData& col : cols_) {
    b.add_variable(sign * col.objective, col.lower, col.upper, col.integer, col.name);
  }
  for (const RowData& row : rows_) {
    double lo = -kInf, hi = kInf;
    switch (row.sense) {
      case 'L': hi = row.rhs; break;
      case 'G': lo = row.rhs; break;
      default: lo = hi = row.rhs; break;
    }
    if (row.range) {
      const double r = std::abs(*row.range);
      if (row.sense == 'L') lo = row.rhs - r;
      else if (row.sense == 'G') hi = row.rhs + r;
      else if (*row.range >= 0.0) hi = row.rhs + r;
      else lo = row.rhs - r;
    }
    b.add_ranged_row(row.terms, lo, hi, row.name);
  }
  // The objective row's RHS is the negated constant term.
  b.set_objective_offset(sign * -objective_rhs_);
  b.set_maximize(maximize_);
  return b.build();
}

std::string format_number(double v) {
  if (v == kInf) return "1e30";
  if (v == -kInf) return "-1e30";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ParsedModel parse_mps(std::string_view text, std::string source, MpsFormat format) {
  MpsReader reader(std::move(source), format);
  return reader.parse(text);
}

ParsedModel read_mps_file(const std::string& path, MpsFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_mps(ss.str(), path, format);
}

std::string to_mps(const Instance& instance) {
  const std::size_t n = instance.num_vars();
  const std::size_t m = instance.num_rows();
  const double sign = instance.maximize() ? -1.0 : 1.0;

  std::vector<std::string> row_names(m);
  std::unordered_set<std::string> used{"obj"};
  for (std::size_t i = 0; i < m; ++i) {
    std::string name = instance.row(i).name;
    if (name.empty() || used.count(name) || name.find_first_of(" \t") != std::string::npos)
      name = "r" + std::to_string(i);
    while (used.count(name)) name += "_";
    used.insert(name);
    row_names[i] = name;
  }
  std::vector<std::string> col_names(n);
  std::unordered_set<std::string> used_cols;
  for (std::size_t j = 0; j < n; ++j) {
    std::string name = instance.var_name(j);
    if (name.empty() || used_cols.count(name) || name.find_first_of(" \t") != std::string::npos)
      name = "c" + std::to_string(j);
    while (used_cols.count(name)) name += "_";
    used_cols.insert(name);
    col_names[j] = name;
  }

  std::vector<std::vector<std::pair<std::size_t, double>>> by_col(n);
  for (std::size_t i = 0; i < m; ++i) {
    const Row& row = instance.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) by_col[row.index[k]].emplace_back(i, row.coef[k]);
  }

  std::ostringstream os;
  os << "NAME " << (instance.name().empty() ? "model" : instance.name()) << "\n";
  if (instance.maximize()) os << "OBJSENSE\n    MAX\n";
  os << "ROWS\n N  obj\n";
  for (std::size_t i = 0; i < m; ++i) os << " L  " << row_names[i] << "\n";
  os << "COLUMNS\n";
  bool in_block = false;
  int marker = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const bool integer = instance.is_integer(j);
    if (integer != in_block) {
      os << "    MARKER" << marker++ << " 'MARKER' " << (integer ? "'INTORG'" : "'INTEND'") << "\n";
      in_block = integer;
    }
    const double c = sign * instance.objective()[j];
    // Every column gets at least one entry so it is declared.
    if (c != 0.0 || by_col[j].empty()) os << "    " << col_names[j] << " obj " << format_number(c) << "\n";
    for (const auto& [i, a] : by_col[j]) {
      os << "    " << col_names[j] << " " << row_names[i] << " " << format_number(a) << "\n";
    }
  }
  if (in_block) os << "    MARKER" << marker << " 'MARKER' 'INTEND'\n";
  os << "RHS\n";
  const double obj_rhs = -sign * instance.objective_offset();
  if (obj_rhs != 0.0) os << "    rhs obj " << format_number(obj_rhs) << "\n";
  for (std::size_t i = 0; i < m; ++i) {
    if (instance.row(i).rhs != 0.0)
      os << "    rhs " << row_names[i] << " " << format_number(instance.row(i).rhs) << "\n";
  }
  os << "BOUNDS\n";
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = instance.lower()[j];
    const double hi = instance.upper()[j];
    const std::string& name = col_names[j];
    if (lo == hi) {
      os << " FX bnd " << name << " " << format_number(lo) << "\n";
      continue;
    }
    if (lo == -kInf && hi == kInf) {
      os << " FR bnd " << name << "\n";
      continue;
    }
    if (lo == -kInf) os << " MI bnd " << name << "\n";
    else os << " LO bnd " << name << " " << format_number(lo) << "\n";
    if (hi == kInf) os << " PL bnd " << name << "\n";
    else os << " UP bnd " << name << " " << format_number(hi) << "\n";
  }
  os << "ENDATA\n";
  return os.str();
}

void write_mps(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << to_mps(instance);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace rapidip
