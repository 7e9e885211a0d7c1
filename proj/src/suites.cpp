#include "pettyfn/suites.hpp"

#include <cstdio>

#include "pettyfn/random.hpp"

namespace pettyfn {
namespace {

ConvexBody cube(int n) {
  std::vector<Vec> v;
  for (int m = 0; m < (1 << n); ++m) {
    Vec x(n);
    for (int d = 0; d < n; ++d) x[d] = (m >> d) & 1 ? 1.0 : -1.0;
    v.push_back(x);
  }
  return ConvexBody::polytope(v);
}

ConvexBody centred_simplex(int n) {
  std::vector<Vec> v;
  for (int i = 0; i < n; ++i) {
    Vec x = Vec::Constant(n, -1.0);
    x[i] = n;
    v.push_back(x);
  }
  v.push_back(Vec::Constant(n, -1.0));
  return ConvexBody::polytope(v);
}

ConvexBody corner_simplex(int n) {
  std::vector<Vec> v{Vec::Zero(n)};
  for (int i = 0; i < n; ++i) v.push_back(Vec::Unit(n, i));
  return ConvexBody::polytope(v);
}

ConvexBody cross_polytope(int n) {
  std::vector<Vec> v;
  for (int i = 0; i < n; ++i)
    for (double s : {-1.0, 1.0}) v.push_back(s * Vec::Unit(n, i));
  return ConvexBody::polytope(v);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string vec_text(const Vec& v) {
  std::string s = "(";
  for (int i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

std::string verdict_text(const IntegrabilityVerdict& v) {
  std::string s;
  switch (v.status) {
    case Integrability::Integrable: s = "integrable"; break;
    case Integrability::NotIntegrable: s = "NOT integrable"; break;
    case Integrability::ZeroFunction: s = "zero function"; break;
    case Integrability::Inconclusive: s = "inconclusive"; break;
  }
  if (v.witness) s += ", witness direction " + vec_text(v.witness->direction);
  return s;
}

void require_dim(int n, int lo) {
  if (n < lo || n > 4) throw ParseError("--dim must be in [" + std::to_string(lo) + ", 4]", 0, 0);
}

std::vector<Descriptor> load_inputs(const SuiteConfig& c) {
  std::vector<Descriptor> out;
  for (const std::string& in : c.inputs) out.push_back(load_descriptor(in, c.dim));
  return out;
}

std::string descriptor_name(const Descriptor& d, std::size_t i) {
  if (!d.name.empty()) return d.name;
  return std::string(d.is_body() ? to_string(d.body().kind()) : to_string(d.function().kind())) + "#" +
         std::to_string(i);
}

std::vector<NamedBody> bodies_for(const SuiteConfig& c) {
  if (c.inputs.empty()) {
    require_dim(c.dim, 2);
    return body_zoo(c.dim);
  }
  std::vector<NamedBody> out;
  const auto ds = load_inputs(c);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!ds[i].is_body()) throw ParseError("suite '" + c.suite + "' needs body descriptors", 0, 0);
    out.push_back({descriptor_name(ds[i], i), ds[i].body()});
  }
  return out;
}

std::vector<NamedFunction> functions_for(const SuiteConfig& c) {
  if (c.inputs.empty()) {
    require_dim(c.dim, 2);
    return function_zoo(c.dim);
  }
  std::vector<NamedFunction> out;
  const auto ds = load_inputs(c);
  for (std::size_t i = 0; i < ds.size(); ++i)
    out.push_back({descriptor_name(ds[i], i),
                   ds[i].is_body() ? LogConcaveFn::indicator(ds[i].body()) : ds[i].function()});
  return out;
}

void append(std::vector<VerificationReport>& out, std::vector<VerificationReport> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

void suite_identities(const SuiteConfig& c, SuiteResult& r) {
  for (const auto& b : bodies_for(c)) append(r.reports, check_body_identities(b.body, c.spec, b.name));
}

void suite_theorem(const SuiteConfig& c, SuiteResult& r) {
  for (const auto& f : functions_for(c)) r.reports.push_back(check_theorem_polar(f.f, c.spec, f.name));
}

void suite_zhang_petty(const SuiteConfig& c, SuiteResult& r) {
  std::vector<NamedBody> bodies = bodies_for(c);
  if (c.inputs.empty()) bodies.push_back({"corner-simplex", corner_simplex(c.dim)});
  for (const auto& b : bodies) {
    r.reports.push_back(check_corollary_surface(b.body, c.spec, b.name));
    append(r.reports, check_petty_zhang(b.body, c.spec, b.name));
  }
}

void suite_functional(const SuiteConfig& c, SuiteResult& r) {
  for (const auto& f : functions_for(c)) {
    IntegrationSpec spec = c.spec;
    spec.method = c.method.value_or(f.f.dim() == 2 ? Method::Tensor : Method::MonteCarlo);
    append(r.reports, check_functional_petty_zhang(f.f, spec, f.name));
    r.reports.push_back(check_integral_volume(f.f, c.spec, f.name));
  }
}

void suite_entropic(const SuiteConfig& c, SuiteResult& r) {
  if (!c.inputs.empty()) {
    // a = inf of f over sampled points of B, so the precondition holds by construction.
    for (const auto& f : functions_for(c)) {
      const int n = f.f.dim();
      CounterRng rng(c.spec.seed, 99);
      double a = kInf;
      for (int i = 0; i < 1000; ++i)
        a = std::min(a, eval(f.f, rng.unit_vector(n) * std::pow(rng.next_uniform(), 1.0 / n)));
      if (!(a > 0.0)) {
        r.reports.push_back(skipped_report("entropic-gradient-bound", f.name, "f vanishes somewhere on B"));
        continue;
      }
      r.reports.push_back(check_entropic_bound(f.f, a, c.spec, f.name));
    }
    return;
  }
  const int n = c.dim;
  require_dim(n, 2);
  const double e = std::exp(1.0);
  const ConvexBody b = ConvexBody::ball(n, 1.0);
  r.reports.push_back(check_entropic_bound(LogConcaveFn::indicator(b), 1.0, c.spec, "indicator(ball)"));
  r.reports.push_back(check_entropic_bound(LogConcaveFn::indicator(b, e), e, c.spec, "e*indicator(ball)"));
  r.reports.push_back(check_entropic_bound(LogConcaveFn::gaussian(n, 1.0), std::exp(-0.5), c.spec, "gaussian"));
  r.reports.push_back(check_entropic_bound(LogConcaveFn::exp_gauge(b), 1.0 / e, c.spec, "exp_gauge(ball)"));
  r.reports.push_back(check_entropic_bound(LogConcaveFn::indicator(cube(n)), 1.0, c.spec, "indicator(cube)"));
}

void suite_integrability(const SuiteConfig& c, SuiteResult& r) {
  for (const auto& f : functions_for(c)) append(r.reports, check_integrability(f.f, c.spec, f.name));
  if (c.inputs.empty()) append(r.reports, check_integrability(LogConcaveFn::half_gaussian(), c.spec, "half_gaussian"));
}

void suite_falsify(const SuiteConfig& c, SuiteResult& r) {
  require_dim(c.dim, 2);
  std::vector<double> lt = c.log_t;
  if (lt.empty()) lt = {0.0, -1.0, -3.0, -9.0, -99.0};
  FalsifyTable t = falsify_log_bound(lt, c.dim, c.threshold);
  r.reports.push_back(falsification_report(t));
  r.tables.push_back(std::move(t));
}

void suite_describe(const SuiteConfig& c, SuiteResult& r) {
  if (c.inputs.empty()) throw ParseError("describe needs --input", 0, 0);
  for (const Descriptor& d : load_inputs(c)) r.descriptions.push_back(describe(d, c.spec));
}

using SuiteFn = void (*)(const SuiteConfig&, SuiteResult&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"identities", suite_identities}, {"theorem", suite_theorem},        {"zhang-petty", suite_zhang_petty},
      {"functional", suite_functional}, {"entropic", suite_entropic},      {"integrability", suite_integrability},
      {"falsify-fz52", suite_falsify},  {"describe", suite_describe},
  };
  return r;
}

}  // namespace

std::vector<NamedBody> body_zoo(int n) {
  return {{"ball", ConvexBody::ball(n, 1.0)},
          {n == 2 ? "square" : "cube", cube(n)},
          {"simplex", centred_simplex(n)},
          {"cross-polytope", cross_polytope(n)}};
}

std::vector<NamedFunction> function_zoo(int n) {
  Mat cov = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) cov(i, i) = 2.0 - 1.2 * i / std::max(1, n - 1);
  cov(0, 1) = cov(1, 0) = 0.6;
  std::vector<NamedFunction> z{{"gaussian", LogConcaveFn::gaussian(n, 1.0)},
                               {"gaussian-anisotropic", LogConcaveFn::gaussian(cov)},
                               {"radial-p1.5", LogConcaveFn::radial(n, 1.5, 0.8)}};
  for (const auto& b : body_zoo(n)) {
    if (b.name == "cross-polytope") continue;
    z.push_back({"indicator(" + b.name + ")", LogConcaveFn::indicator(b.body)});
    z.push_back({"exp_gauge(" + b.name + ")", LogConcaveFn::exp_gauge(b.body)});
  }
  if (n == 2) {
    const Box box{Vec::Constant(2, -8.0), Vec::Constant(2, 8.0)};
    z.push_back({"grid-quadratic", LogConcaveFn::grid(GridFn::sample(box, {129, 129}, [](const Vec& x) {
                   return 0.5 * x[0] * x[0] + 0.1 * x[0] * x[1] + 0.25 * x[1] * x[1];
                 }))});
  }
  return z;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    v.push_back("all");
    return v;
  }();
  return names;
}

int SuiteResult::exit_code() const {
  for (const auto& r : reports)
    if (r.status == Status::Failed) return 1;
  return 0;
}

std::string SuiteResult::render(const std::string& format) const {
  if (format == "json") {
    nlohmann::json j;
    j["reports"] = nlohmann::json::array();
    for (const auto& r : reports) j["reports"].push_back(to_json(r));
    if (!tables.empty()) {
      j["falsification"] = nlohmann::json::array();
      for (const auto& t : tables) j["falsification"].push_back(to_json(t));
    }
    if (!descriptions.empty()) j["descriptions"] = descriptions;
    return j.dump(2) + "\n";
  }
  std::string out;
  for (const auto& d : descriptions) out += d + "\n";
  for (const auto& t : tables) out += format_table(t) + "\n";
  if (!reports.empty()) out += format_table(reports);
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& r : reports) (r.status == Status::Passed ? passed : r.status == Status::Failed ? failed : skipped)++;
  if (!reports.empty())
    out += std::to_string(passed) + " passed, " + std::to_string(failed) + " failed, " + std::to_string(skipped) +
           " skipped\n";
  return out;
}

SuiteResult run_suite(const SuiteConfig& config) {
  if (config.format != "json" && config.format != "table")
    throw ParseError("--format must be json or table", 0, 0);
  SuiteResult result;
  bool found = false;
  const bool body_inputs = !config.inputs.empty() && load_descriptor(config.inputs.front(), config.dim).is_body();
  for (const auto& [name, fn] : registry()) {
    const bool selected = config.suite == name || (config.suite == "all" && name != "describe");
    if (!selected) continue;
    found = true;
    // Under "all", body-only suites are skipped for function inputs.
    const bool body_suite = name == "identities" || name == "zhang-petty";
    if (config.suite == "all" && body_suite && !config.inputs.empty() && !body_inputs) continue;
    fn(config, result);
  }
  if (!found) throw ParseError("unknown suite '" + config.suite + "'", 0, 0);
  if (config.tolerance_scale != 1.0) {
    for (auto& r : result.reports) {
      if (r.name == "falsification-unbounded") continue;
      r.tolerance *= config.tolerance_scale;
      r.equality_tolerance *= config.tolerance_scale;
      grade(r);
    }
  }
  return result;
}

std::string describe(const Descriptor& d, const IntegrationSpec& spec) {
  std::string s;
  if (!d.name.empty()) s += "name: " + d.name + "\n";
  if (d.is_body()) {
    const ConvexBody& k = d.body();
    const int n = k.dim();
    s += std::string("body ") + to_string(k.kind()) + " (n=" + std::to_string(n) + ")\n";
    s += "volume " + fmt(volume(k)) + " (n=" + std::to_string(n) + ")\n";
    if (n >= 2) {
      s += "surface area " + fmt(total_surface_area(k)) + "\n";
    }
    s += "origin inradius " + fmt(origin_inradius(k)) + "\n";
    return s;
  }
  const LogConcaveFn& f = d.function();
  s += std::string("function ") + to_string(f.kind()) + " (n=" + std::to_string(f.dim()) + ")\n";
  s += "‖f‖_1 = " + fmt(l1_norm(f, spec)) + "\n";
  s += "f: " + verdict_text(is_integrable(f)) + "\n";
  try {
    s += "polar: " + verdict_text(is_integrable(polar(f))) + "\n";
  } catch (const Error& e) {
    s += std::string("polar: not representable (") + e.what() + ")\n";
  }
  return s;
}

}  // namespace pettyfn
