#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pettyfn/suites.hpp"

using namespace pettyfn;

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = std::min(s.find(',', start), s.size());
    if (end > start) out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Petty projection inequalities for log-concave functions"};
  SuiteConfig config;
  std::string positional;
  std::string method;
  std::string t_list;
  int nodes = 0;
  std::uint64_t samples = config.spec.samples;
  std::uint64_t seed = 0;

  std::string suites;
  for (const auto& s : suite_names()) suites += (suites.empty() ? "" : ", ") + s;
  app.add_option("suite_name", positional, "Suite to run (" + suites + ")");
  app.add_option("--suite", config.suite, "Suite to run (" + suites + ")");
  app.add_option("--input", config.inputs, "Descriptor file or inline JSON (repeatable)");
  app.add_option("--dim", config.dim, "Dimension for the default zoo");
  app.add_option("--method", method, "Double-integral method: tensor or mc");
  app.add_option("--nodes", nodes, "Sphere rule size (0 = default)");
  app.add_option("--samples", samples, "Monte-Carlo sample count");
  app.add_option("--seed", seed, "Seed (PETTYFN_SEED overrides)");
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--out", config.out, "Write output to this path");
  app.add_option("--tolerance-scale", config.tolerance_scale, "Multiply every tolerance")->check(CLI::PositiveNumber);
  app.add_option("--t", t_list, "Comma-separated t values for falsify-fz52, e.g. 1,exp(-9)");
  app.add_option("--threshold", config.threshold, "Threshold for falsify-fz52");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!positional.empty()) config.suite = positional;
    if (const char* env = std::getenv("PETTYFN_SEED")) {
      try {
        seed = std::stoull(env);
      } catch (const std::exception&) {
        throw ParseError(std::string("PETTYFN_SEED is not an unsigned integer: ") + env, 0, 0);
      }
    }
    config.spec.seed = seed;
    config.spec.samples = samples;
    config.spec.sphere_nodes = nodes;
    if (!method.empty()) {
      try {
        config.method = method_from_string(method);
      } catch (const std::exception& e) {
        throw ParseError(e.what(), 0, 0);
      }
      config.spec.method = *config.method;
    }
    for (const std::string& tok : split_commas(t_list)) config.log_t.push_back(parse_log_t(tok));

    const SuiteResult result = run_suite(config);
    const std::string text = result.render(config.format);
    if (config.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(config.out);
      if (!out) throw ParseError("cannot write " + config.out, 0, 0);
      out << text;
    }
    return result.exit_code();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.diagnostic() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
