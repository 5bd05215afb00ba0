#include "grs/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "number_format.hpp"

namespace grs::cli {

namespace {

struct Value {
  enum class Kind { Number, String, Bool, List } kind = Kind::Number;
  std::string text;  // raw token for numbers, contents for strings
  double number = 0.0;
  bool flag = false;
  std::vector<Value> items;
  int column = 0;
};

class LineParser {
 public:
  LineParser(const std::string& line, int line_no, const std::string& source)
      : s_(line), line_(line_no), source_(source) {}

  [[noreturn]] void fail(std::size_t pos, const std::string& msg) const {
    std::ostringstream os;
    os << source_ << ":" << line_ << ":" << pos + 1 << ": " << msg;
    throw ConfigError(os.str());
  }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r'))
      ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  std::string key() {
    skip_space();
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '_' || s_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) fail(start, "expected a key");
    return s_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::size_t position() const { return pos_; }

  Value value() {
    skip_space();
    Value v;
    v.column = static_cast<int>(pos_) + 1;
    if (pos_ >= s_.size()) fail(pos_, "expected a value");
    const char c = s_[pos_];
    if (c == '[') {
      ++pos_;
      v.kind = Value::Kind::List;
      skip_space();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        v.items.push_back(value());
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        expect(']');
        return v;
      }
    }
    if (c == '"') {
      const auto start = ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') ++pos_;
      if (pos_ >= s_.size()) fail(start - 1, "unterminated string");
      v.kind = Value::Kind::String;
      v.text = s_.substr(start, pos_ - start);
      ++pos_;
      return v;
    }
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != ' ' &&
           s_[pos_] != '\t' && s_[pos_] != '#' && s_[pos_] != '\r')
      ++pos_;
    v.text = s_.substr(start, pos_ - start);
    if (v.text == "true" || v.text == "false") {
      v.kind = Value::Kind::Bool;
      v.flag = v.text == "true";
      return v;
    }
    const char* first = v.text.data();
    const char* last = first + v.text.size();
    if (!v.text.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v.number);
    if (v.text.empty() || res.ec != std::errc{} || res.ptr != last) {
      fail(start, "invalid value '" + v.text + "'");
    }
    return v;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
  const std::string& source_;
};

struct Located {
  Value value;
  int line = 0;
};

class FieldReader {
 public:
  FieldReader(std::string key, const Located& loc, const std::string& source)
      : key_(std::move(key)), loc_(loc), source_(source) {}

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << source_ << ":" << loc_.line << ": field " << key_ << ": " << msg;
    throw ConfigError(os.str());
  }

  double number(const Value& v) const {
    if (v.kind != Value::Kind::Number) fail("expected a number");
    if (!std::isfinite(v.number)) fail("value must be finite");
    return v.number;
  }
  double number() const { return number(loc_.value); }

  long long integer(const Value& v) const {
    if (v.kind != Value::Kind::Number) fail("expected an integer");
    long long out = 0;
    const auto res = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.text.data() + v.text.size())
      fail("expected an integer, got '" + v.text + "'");
    return out;
  }
  long long integer() const { return integer(loc_.value); }

  std::uint64_t unsigned_integer() const {
    const auto& v = loc_.value;
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
    if (v.kind != Value::Kind::Number || res.ec != std::errc{} ||
        res.ptr != v.text.data() + v.text.size())
      fail("expected a non-negative integer");
    return out;
  }

  bool boolean() const {
    if (loc_.value.kind != Value::Kind::Bool) fail("expected true or false");
    return loc_.value.flag;
  }

  std::string string() const {
    if (loc_.value.kind != Value::Kind::String) fail("expected a quoted string");
    return loc_.value.text;
  }

  const std::vector<Value>& list(const Value& v) const {
    if (v.kind != Value::Kind::List) fail("expected a bracketed list");
    return v.items;
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& item : list(loc_.value)) out.push_back(number(item));
    return out;
  }

  std::vector<int> integers() const {
    std::vector<int> out;
    for (const auto& item : list(loc_.value)) out.push_back(static_cast<int>(integer(item)));
    return out;
  }

  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> out;
    for (const auto& row : list(loc_.value)) {
      std::vector<double> r;
      for (const auto& item : list(row)) r.push_back(number(item));
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  std::string key_;
  const Located& loc_;
  const std::string& source_;
};

using Setter = std::function<void(const FieldReader&, RunConfig&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"knowledge.f0", [](const FieldReader& r, RunConfig& c) { c.f0 = r.numbers(); }},
      {"knowledge.G0", [](const FieldReader& r, RunConfig& c) { c.G0 = r.matrix(); }},
      {"knowledge.Lf", [](const FieldReader& r, RunConfig& c) { c.Lf = r.number(); }},
      {"knowledge.LG", [](const FieldReader& r, RunConfig& c) { c.LG = r.number(); }},
      {"grid.lower", [](const FieldReader& r, RunConfig& c) { c.grid_lower = r.numbers(); }},
      {"grid.upper", [](const FieldReader& r, RunConfig& c) { c.grid_upper = r.numbers(); }},
      {"grid.counts", [](const FieldReader& r, RunConfig& c) { c.grid_counts = r.integers(); }},
      {"reach.horizons",
       [](const FieldReader& r, RunConfig& c) {
         c.horizons = r.numbers();
         if (c.horizons.empty()) r.fail("at least one horizon is required");
       }},
      {"reach.x0", [](const FieldReader& r, RunConfig& c) { c.x0 = r.numbers(); }},
      {"reach.union", [](const FieldReader& r, RunConfig& c) { c.union_horizons = r.boolean(); }},
      {"solver.cfl", [](const FieldReader& r, RunConfig& c) { c.cfl = r.number(); }},
      {"solver.seed_time", [](const FieldReader& r, RunConfig& c) { c.seed_time = r.number(); }},
      {"velocity.x", [](const FieldReader& r, RunConfig& c) { c.velocity_x = r.numbers(); }},
      {"velocity.samples",
       [](const FieldReader& r, RunConfig& c) { c.velocity_samples = static_cast<int>(r.integer()); }},
      {"velocity.refute_samples",
       [](const FieldReader& r, RunConfig& c) { c.refute_samples = static_cast<int>(r.integer()); }},
      {"velocity.directions",
       [](const FieldReader& r, RunConfig& c) { c.directions = static_cast<int>(r.integer()); }},
      {"run.seed", [](const FieldReader& r, RunConfig& c) { c.seed = r.unsigned_integer(); }},
      {"run.output_dir", [](const FieldReader& r, RunConfig& c) { c.output_dir = r.string(); }},
  };
  return table;
}

[[noreturn]] void invalid(const std::string& source, const std::string& field,
                          const std::string& msg) {
  throw ConfigError(source + ": field " + field + ": " + msg);
}

void validate(const RunConfig& c, const std::set<std::string>& present,
              const std::string& source) {
  for (const char* key : {"knowledge.f0", "knowledge.G0", "knowledge.Lf", "knowledge.LG"}) {
    if (!present.count(key)) invalid(source, key, "missing required key");
  }
  const auto n = c.f0.size();
  if (n == 0) invalid(source, "knowledge.f0", "must not be empty");
  if (c.G0.size() != n) invalid(source, "knowledge.G0", "must have as many rows as f0");
  for (const auto& row : c.G0) {
    if (row.size() != n) invalid(source, "knowledge.G0", "must be square");
  }
  if (c.Lf < 0.0) invalid(source, "knowledge.Lf", "must be >= 0");
  if (c.LG < 0.0) invalid(source, "knowledge.LG", "must be >= 0");
  try {
    (void)c.knowledge();
  } catch (const Error& e) {
    invalid(source, "knowledge.G0", e.what());
  }

  const int grid_keys = static_cast<int>(present.count("grid.lower")) +
                        static_cast<int>(present.count("grid.upper")) +
                        static_cast<int>(present.count("grid.counts"));
  if (grid_keys != 0 && grid_keys != 3) {
    invalid(source, "grid", "grid.lower, grid.upper and grid.counts go together");
  }
  if (grid_keys == 3) {
    if (c.grid_counts.size() != n || c.grid_lower.size() != n || c.grid_upper.size() != n) {
      invalid(source, "grid", "bounds and counts must match the state dimension");
    }
    try {
      (void)c.grid();
    } catch (const Error& e) {
      invalid(source, "grid", e.what());
    }
  }
  for (std::size_t i = 0; i < c.horizons.size(); ++i) {
    if (c.horizons[i] < 0.0 || (i > 0 && c.horizons[i] < c.horizons[i - 1])) {
      invalid(source, "reach.horizons", "must be non-negative and ascending");
    }
  }
  if (!c.x0.empty() && c.x0.size() != n) invalid(source, "reach.x0", "dimension mismatch");
  if (!c.velocity_x.empty() && c.velocity_x.size() != n) {
    invalid(source, "velocity.x", "dimension mismatch");
  }
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) invalid(source, "solver.cfl", "must lie in (0, 1]");
  if (c.seed_time && !(*c.seed_time >= 0.0)) invalid(source, "solver.seed_time", "must be >= 0");
  if (c.velocity_samples < 0) invalid(source, "velocity.samples", "must be >= 0");
  if (c.refute_samples < 1) invalid(source, "velocity.refute_samples", "must be >= 1");
  if (c.directions < 8) invalid(source, "velocity.directions", "must be >= 8");
  if (c.output_dir.empty() || c.output_dir.find('"') != std::string::npos) {
    invalid(source, "run.output_dir", "must be a non-empty path without quotes");
  }
}

std::string list_text(const std::vector<double>& xs) {
  return "[" + detail::join(xs, ", ") + "]";
}

std::string list_text(const std::vector<int>& xs) {
  return "[" + detail::join(xs, ", ") + "]";
}

}  // namespace

KnowledgeBundle RunConfig::knowledge() const {
  const auto n = static_cast<Eigen::Index>(f0.size());
  Vector f = Eigen::Map<const Vector>(f0.data(), n);
  Matrix G(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(G0[i].size()) != n) throw InvalidArgument("G0 not square");
    for (Eigen::Index j = 0; j < n; ++j) G(i, j) = G0[i][j];
  }
  return KnowledgeBundle(f, G, Lf, LG);
}

Grid RunConfig::grid() const {
  if (!has_grid()) throw ConfigError("configuration has no grid section");
  return Grid(grid_lower, grid_upper, grid_counts);
}

Vector RunConfig::start_state() const {
  if (x0.empty()) return Vector::Zero(static_cast<Eigen::Index>(f0.size()));
  return Eigen::Map<const Vector>(x0.data(), static_cast<Eigen::Index>(x0.size()));
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig config;
  std::set<std::string> present;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    LineParser p(line, line_no, source);
    if (p.at_end()) continue;
    const auto key_pos = p.position();
    const std::string key = p.key();
    const auto it = setters().find(key);
    if (it == setters().end()) p.fail(key_pos, "unknown key '" + key + "'");
    if (present.count(key)) p.fail(key_pos, "duplicate key '" + key + "'");
    p.expect('=');
    Located loc{p.value(), line_no};
    if (!p.at_end()) p.fail(p.position(), "unexpected trailing characters");
    it->second(FieldReader(key, loc, source), config);
    present.insert(key);
  }
  validate(config, present, source);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "knowledge.f0 = " << list_text(c.f0) << "\n";
  os << "knowledge.G0 = [";
  for (std::size_t i = 0; i < c.G0.size(); ++i) os << (i ? ", " : "") << list_text(c.G0[i]);
  os << "]\n";
  os << "knowledge.Lf = " << detail::format_double(c.Lf) << "\n";
  os << "knowledge.LG = " << detail::format_double(c.LG) << "\n";
  if (c.has_grid()) {
    os << "grid.lower = " << list_text(c.grid_lower) << "\n";
    os << "grid.upper = " << list_text(c.grid_upper) << "\n";
    os << "grid.counts = " << list_text(c.grid_counts) << "\n";
  }
  if (!c.horizons.empty()) os << "reach.horizons = " << list_text(c.horizons) << "\n";
  if (!c.x0.empty()) os << "reach.x0 = " << list_text(c.x0) << "\n";
  os << "reach.union = " << (c.union_horizons ? "true" : "false") << "\n";
  os << "solver.cfl = " << detail::format_double(c.cfl) << "\n";
  if (c.seed_time) os << "solver.seed_time = " << detail::format_double(*c.seed_time) << "\n";
  if (!c.velocity_x.empty()) os << "velocity.x = " << list_text(c.velocity_x) << "\n";
  os << "velocity.samples = " << c.velocity_samples << "\n";
  os << "velocity.refute_samples = " << c.refute_samples << "\n";
  os << "velocity.directions = " << c.directions << "\n";
  os << "run.seed = " << c.seed << "\n";
  os << "run.output_dir = \"" << c.output_dir << "\"\n";
  return os.str();
}

void apply_grid_scale(RunConfig& config, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("grid scale must be > 0");
  for (int& count : config.grid_counts) {
    count = static_cast<int>(std::lround((count - 1) * scale)) + 1;
  }
}

}  // namespace grs::cli
