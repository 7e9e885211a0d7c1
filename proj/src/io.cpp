#include "pettyfn/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pettyfn {

using nlohmann::json;

namespace {

// Semantic problem tied to a key; located in the text by parse_descriptor.
struct FieldError : ParseError {
  std::string key;
  FieldError(const std::string& k, const std::string& what) : ParseError(what, 0, 0), key(k) {}
};

[[noreturn]] void bad(const std::string& key, const std::string& what) { throw FieldError(key, what); }

std::pair<int, int> position(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i < offset; ++i)
    if (text[i] == '\n') ++line, start = i + 1;
  return {line, static_cast<int>(offset - start) + 1};
}

const json& field(const json& j, const std::string& key) {
  if (!j.is_object()) bad(key, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(key, "missing field '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& key) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  if (!j.is_number()) bad(key, "field '" + key + "' must be a number");
  return j.get<double>();
}

double number_field(const json& j, const std::string& key) { return number(field(j, key), key); }

double number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? number(j.at(key), key) : fallback;
}

int int_field(const json& j, const std::string& key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) bad(key, "field '" + key + "' must be an integer");
  return v.get<int>();
}

std::string string_field(const json& j, const std::string& key) {
  const json& v = field(j, key);
  if (!v.is_string()) bad(key, "field '" + key + "' must be a string");
  return v.get<std::string>();
}

Vec vector(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) bad(key, "field '" + key + "' must be a non-empty array of numbers");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = number(j[i], key);
  return v;
}

std::vector<Vec> points(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) bad(key, "field '" + key + "' must be a non-empty array of points");
  std::vector<Vec> out;
  for (const json& p : j) {
    out.push_back(vector(p, key));
    if (out.back().size() != out.front().size()) bad(key, "points in '" + key + "' differ in dimension");
  }
  return out;
}

json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(number_json(v[i]));
  return a;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double positive_or(const json& j, const std::string& key, double fallback) {
  const double v = number_or(j, key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) bad(key, "field '" + key + "' must be a positive number");
  return v;
}

}  // namespace

std::string ParseError::diagnostic() const {
  if (line_ <= 0) return std::string("config: ") + what();
  return std::to_string(line_) + ":" + std::to_string(column_) + ": " + what();
}

int Descriptor::dim() const { return is_body() ? body().dim() : function().dim(); }

namespace {

int dim_or(const json& j, int default_dim) {
  if (!j.contains("dim")) return default_dim;
  const int n = int_field(j, "dim");
  if (n < 1 || n > 8) bad("dim", "dimension must be in [1, 8]");
  return n;
}

std::vector<Vec> cube_vertices(int n, double w) {
  std::vector<Vec> v;
  for (int m = 0; m < (1 << n); ++m) {
    Vec x(n);
    for (int d = 0; d < n; ++d) x[d] = (m >> d) & 1 ? w : -w;
    v.push_back(x);
  }
  return v;
}

std::vector<Vec> simplex_vertices(int n) {
  std::vector<Vec> v;
  for (int i = 0; i < n; ++i) {
    Vec x = Vec::Constant(n, -1.0);
    x[i] = n;
    v.push_back(x);
  }
  v.push_back(Vec::Constant(n, -1.0));
  return v;
}

bool is_body_type(const std::string& t) {
  for (const char* k : {"polytope", "ball", "zonotope", "scaled", "cube", "simplex"})
    if (t == k) return true;
  return false;
}

}  // namespace

ConvexBody body_from_json(const json& j, int default_dim) {
  const std::string kind = string_field(j, "type");
  try {
    if (kind == "polytope") return ConvexBody::polytope(points(field(j, "vertices"), "vertices"));
    if (kind == "ball") return ConvexBody::ball(dim_or(j, default_dim), positive_or(j, "radius", 1.0));
    if (kind == "zonotope") return ConvexBody::zonotope(points(field(j, "generators"), "generators"));
    if (kind == "scaled")
      return ConvexBody::scaled(body_from_json(field(j, "body"), default_dim), positive_or(j, "factor", 1.0));
    if (kind == "cube") {
      const int n = dim_or(j, default_dim);
      if (n > 4) bad("dim", "cube dimension must be at most 4");
      return ConvexBody::polytope(cube_vertices(n, positive_or(j, "half_width", 1.0)));
    }
    if (kind == "simplex") {
      const int n = dim_or(j, default_dim);
      if (n > 4) bad("dim", "simplex dimension must be at most 4");
      return ConvexBody::polytope(simplex_vertices(n));
    }
  } catch (const Error& e) {
    bad("type", e.what());
  }
  bad("type", "unknown body type '" + kind + "'");
}

GridFn grid_from_json(const json& j) {
  const json& box = field(j, "box");
  const Vec lo = vector(field(box, "lo"), "lo"), hi = vector(field(box, "hi"), "hi");
  const json& sh = field(j, "shape");
  if (!sh.is_array()) bad("shape", "field 'shape' must be an array of integers");
  std::vector<int> shape;
  for (const json& s : sh) {
    if (!s.is_number_integer()) bad("shape", "field 'shape' must be an array of integers");
    shape.push_back(s.get<int>());
  }
  if (lo.size() != hi.size() || static_cast<int>(shape.size()) != lo.size())
    bad("shape", "lo, hi and shape must have the same length");
  const json& vals = field(j, "values");
  if (!vals.is_array()) bad("values", "field 'values' must be an array");
  GridFn g;
  g.box = Box{lo, hi};
  g.shape = shape;
  for (const json& v : vals) g.values.push_back(number(v, "values"));
  std::size_t expected = 1;
  for (int s : shape) expected *= static_cast<std::size_t>(std::max(s, 0));
  if (g.values.size() != expected)
    bad("values", "expected " + std::to_string(expected) + " values, got " + std::to_string(g.values.size()));
  return g;
}

LogConcaveFn function_from_json(const json& j, int default_dim) {
  const std::string kind = string_field(j, "type");
  const double a = positive_or(j, "amplitude", 1.0);
  try {
    if (kind == "indicator") return LogConcaveFn::indicator(body_from_json(field(j, "body"), default_dim), a);
    if (kind == "exp_gauge") return LogConcaveFn::exp_gauge(body_from_json(field(j, "body"), default_dim), a);
    if (kind == "gaussian") {
      if (j.contains("covariance")) {
        const std::vector<Vec> rows = points(j.at("covariance"), "covariance");
        const int n = static_cast<int>(rows.size());
        Mat c(n, n);
        for (int i = 0; i < n; ++i) {
          if (rows[i].size() != n) bad("covariance", "covariance must be square");
          c.row(i) = rows[i].transpose();
        }
        return LogConcaveFn::gaussian(c, a);
      }
      return LogConcaveFn::gaussian(dim_or(j, default_dim), positive_or(j, "sigma", 1.0), a);
    }
    if (kind == "radial") {
      const json& prof = j.contains("profile") ? j.at("profile") : j;
      if (!prof.is_object()) bad("profile", "field 'profile' must be an object");
      return LogConcaveFn::radial(dim_or(j, default_dim), number_field(prof, "p"), positive_or(prof, "scale", 1.0), a);
    }
    if (kind == "grid_potential") return LogConcaveFn::grid(grid_from_json(field(j, "phi")), a);
    if (kind == "half_gaussian") {
      const bool p = j.contains("polar") && j.at("polar").is_boolean() && j.at("polar").get<bool>();
      return LogConcaveFn::half_gaussian(p).with_amplitude(a);
    }
    if (kind == "zero") return LogConcaveFn::zero(dim_or(j, default_dim));
  } catch (const Error& e) {
    bad("type", e.what());
  }
  bad("type", "unknown function type '" + kind + "'");
}

Descriptor parse_descriptor(const std::string& text, int default_dim) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = position(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    const std::size_t colon = msg.find(": ", msg.find("column"));
    msg = colon == std::string::npos ? "invalid JSON" : "invalid JSON: " + msg.substr(colon + 2);
    throw ParseError(msg, line, col);
  }
  try {
    if (!j.is_object()) throw FieldError("", "descriptor must be a JSON object");
    if (!j.contains("type")) throw FieldError("", "descriptor needs a 'type' field");
    Descriptor d{j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "",
                 ConvexBody::ball(1, 1.0)};
    if (is_body_type(string_field(j, "type")))
      d.value = body_from_json(j, default_dim);
    else
      d.value = function_from_json(j, default_dim);
    return d;
  } catch (const FieldError& e) {
    std::size_t at = 0;
    if (!e.key.empty()) {
      const std::size_t k = text.find("\"" + e.key + "\"");
      if (k != std::string::npos) at = k;
    } else {
      at = text.find_first_not_of(" \t\r\n");
      if (at == std::string::npos) at = 0;
    }
    const auto [line, col] = position(text, at);
    throw ParseError(e.what(), line, col);
  }
}

Descriptor load_descriptor(const std::string& path_or_inline, int default_dim) {
  const std::size_t first = path_or_inline.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_inline[first] == '{') return parse_descriptor(path_or_inline, default_dim);
  std::ifstream in(path_or_inline);
  if (!in) throw ParseError("cannot open '" + path_or_inline + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_descriptor(ss.str(), default_dim);
  } catch (const ParseError& e) {
    throw ParseError(path_or_inline + ": " + e.what(), e.line(), e.column());
  }
}

json to_json(const ConvexBody& body) {
  switch (body.kind()) {
    case ConvexBody::Kind::Polytope: {
      json v = json::array();
      for (const Vec& p : body.vertices()) v.push_back(vec_json(p));
      return {{"type", "polytope"}, {"vertices", v}};
    }
    case ConvexBody::Kind::Ball: return {{"type", "ball"}, {"dim", body.dim()}, {"radius", body.radius()}};
    case ConvexBody::Kind::Zonotope: {
      json g = json::array();
      for (const Vec& p : body.generators()) g.push_back(vec_json(p));
      return {{"type", "zonotope"}, {"generators", g}};
    }
    case ConvexBody::Kind::Scaled:
      return {{"type", "scaled"}, {"factor", body.factor()}, {"body", to_json(body.inner())}};
  }
  return {};
}

json to_json(const GridFn& g) {
  json vals = json::array();
  for (double v : g.values) vals.push_back(number_json(v));
  return {{"box", {{"lo", vec_json(g.box.lo)}, {"hi", vec_json(g.box.hi)}}}, {"shape", g.shape}, {"values", vals}};
}

json to_json(const LogConcaveFn& f) {
  json j;
  switch (f.kind()) {
    case LogConcaveFn::Kind::Indicator: j = {{"type", "indicator"}, {"body", to_json(f.as<Indicator>().body)}}; break;
    case LogConcaveFn::Kind::ExpGauge: j = {{"type", "exp_gauge"}, {"body", to_json(f.as<ExpGauge>().body)}}; break;
    case LogConcaveFn::Kind::Gaussian: {
      const Mat& c = f.as<Gaussian>().covariance;
      json rows = json::array();
      for (int i = 0; i < c.rows(); ++i) rows.push_back(vec_json(c.row(i).transpose()));
      j = {{"type", "gaussian"}, {"covariance", rows}};
      break;
    }
    case LogConcaveFn::Kind::Radial: {
      const Radial& r = f.as<Radial>();
      j = {{"type", "radial"}, {"dim", r.dim}, {"profile", {{"p", r.p}, {"scale", r.scale}}}};
      break;
    }
    case LogConcaveFn::Kind::GridPotential:
      j = {{"type", "grid_potential"}, {"phi", to_json(f.as<GridPotential>().phi)}};
      break;
    case LogConcaveFn::Kind::HalfGaussian: j = {{"type", "half_gaussian"}, {"polar", f.as<HalfGaussian>().polar}}; break;
    case LogConcaveFn::Kind::Zero: j = {{"type", "zero"}, {"dim", f.dim()}}; break;
  }
  if (f.amplitude() != 1.0) j["amplitude"] = f.amplitude();
  return j;
}

json to_json(const VerificationReport& r) {
  return {{"name", r.name},
          {"subject", r.subject},
          {"lhs", number_json(r.lhs)},
          {"rhs", number_json(r.rhs)},
          {"ratio", number_json(r.ratio)},
          {"direction", to_string(r.direction)},
          {"tolerance", number_json(r.tolerance)},
          {"pass", r.pass},
          {"error_estimate", number_json(r.error_estimate)},
          {"equality_case", r.equality_case},
          {"equality_tolerance", number_json(r.equality_tolerance)},
          {"status", to_string(r.status)},
          {"reason", r.reason},
          {"detail", r.detail}};
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  try {
    r.name = j.at("name").get<std::string>();
    r.subject = j.at("subject").get<std::string>();
    r.lhs = number_from_json(j.at("lhs"));
    r.rhs = number_from_json(j.at("rhs"));
    r.ratio = number_from_json(j.at("ratio"));
    r.direction = direction_from_string(j.at("direction").get<std::string>());
    r.tolerance = number_from_json(j.at("tolerance"));
    r.pass = j.at("pass").get<bool>();
    r.error_estimate = number_from_json(j.at("error_estimate"));
    r.equality_case = j.at("equality_case").get<bool>();
    r.equality_tolerance = number_from_json(j.at("equality_tolerance"));
    r.status = status_from_string(j.at("status").get<std::string>());
    r.reason = j.at("reason").get<std::string>();
    r.detail = j.at("detail").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what(), 0, 0);
  }
  return r;
}

json to_json(const FalsifyTable& t) {
  json rows = json::array();
  for (const FalsifyRow& r : t.rows)
    rows.push_back({{"t", number_json(r.t)}, {"log_t", r.log_t}, {"quantity", number_json(r.quantity)},
                    {"exceeds", r.exceeds}});
  return {{"dim", t.dim}, {"threshold", number_json(t.threshold)}, {"monotone", t.monotone},
          {"exceeded", t.exceeded}, {"rows", rows}};
}

std::string format_table(const std::vector<VerificationReport>& reports) {
  std::vector<std::vector<std::string>> cells{
      {"check", "subject", "lhs", "rhs", "ratio", "dir", "tol", "eq", "status", "error"}};
  for (const auto& r : reports)
    cells.push_back({r.name, r.subject, fmt(r.lhs), fmt(r.rhs), fmt(r.ratio), to_string(r.direction),
                     fmt(r.tolerance), r.equality_case ? "yes" : "no",
                     r.status == Status::Skipped ? "skipped (" + r.reason + ")" : to_string(r.status),
                     fmt(r.error_estimate)});
  std::vector<std::size_t> width(cells[0].size(), 0);
  auto display = [](const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n;
  };
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], display(row[i]));
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - display(row[i]) + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::string format_table(const FalsifyTable& t) {
  std::string out = "t                 log_t             (1-log t)^(n-1)   exceeds " + fmt(t.threshold) + "\n";
  char buf[160];
  for (const FalsifyRow& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%-17.10g %-17.10g %-17.10g %s\n", r.t, r.log_t, r.quantity,
                  r.exceeds ? "yes" : "no");
    out += buf;
  }
  out += std::string("n=") + std::to_string(t.dim) + ", monotone: " + (t.monotone ? "yes" : "no") +
         ", exceeds threshold: " + (t.exceeded ? "yes" : "no") + "\n";
  return out;
}

double parse_log_t(const std::string& token) {
  std::string s;
  for (char c : token)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto to_double = [&](const std::string& x) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(x, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != x.size()) throw ParseError("bad t value '" + token + "'", 1, 1);
    return v;
  };
  if (s.rfind("exp(", 0) == 0 && s.size() > 5 && s.back() == ')') return to_double(s.substr(4, s.size() - 5));
  if (s.rfind("e^", 0) == 0) return to_double(s.substr(2));
  const double t = to_double(s);
  if (!(t > 0.0) || !std::isfinite(t)) throw ParseError("t must be positive: '" + token + "'", 1, 1);
  return std::log(t);
}

}  // namespace pettyfn
