// tqms: example tables, kernel norms and verification suites.
//
//   tqms verify  --suite all
//   tqms example --example depolarizing --n 2 --t-stop 5 --format json
//   tqms kernel  --chain hypercube --n 3 --log-grid --t-start 0.01

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tqms/examples.hpp"
#include "tqms/verify.hpp"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kCheckFailed = 1, kBadInput = 2, kResourceLimit = 3 };

struct Config {
  std::string command;
  std::string suite = "all";
  std::string example;
  std::string chain = "complete";
  std::string group_file;
  std::vector<double> rates;
  std::size_t n = 2;
  std::size_t d = 2;
  std::size_t probes = 8;
  tqms::TimeGrid grid;
  std::vector<double> eps = {0.1};
  std::uint64_t seed = 1;
  std::string format;
  std::string out;
  bool bits = false;
};

/// Values from a JSON config file; flags given on the command line win.
void apply_config_file(const std::string& path, Config& c, const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  const json j = json::parse(in);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  auto take = [&](const char* key, const char* flag, auto& field) {
    if (j.contains(key) && app.count(flag) == 0) j.at(key).get_to(field);
  };
  if (j.contains("command") && c.command.empty()) j.at("command").get_to(c.command);
  take("suite", "--suite", c.suite);
  take("example", "--example", c.example);
  take("chain", "--chain", c.chain);
  take("group_file", "--group-file", c.group_file);
  take("rates", "--rates", c.rates);
  take("n", "--n", c.n);
  take("d", "--d", c.d);
  take("probes", "--probes", c.probes);
  take("eps", "--eps", c.eps);
  take("seed", "--seed", c.seed);
  if (j.contains("t_grid")) {
    const json& g = j.at("t_grid");
    if (g.contains("start") && app.count("--t-start") == 0) g.at("start").get_to(c.grid.start);
    if (g.contains("stop") && app.count("--t-stop") == 0) g.at("stop").get_to(c.grid.stop);
    if (g.contains("points") && app.count("--t-points") == 0) g.at("points").get_to(c.grid.points);
    if (g.contains("spacing") && app.count("--log-grid") == 0) {
      const std::string s = g.at("spacing");
      if (s != "linear" && s != "log") throw std::invalid_argument("t_grid.spacing must be linear or log");
      c.grid.log_spacing = s == "log";
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.contains("format") && app.count("--format") == 0) o.at("format").get_to(c.format);
    if (o.contains("path") && app.count("--out") == 0) o.at("path").get_to(c.out);
  }
  if (j.contains("unit") && app.count("--bits") == 0) {
    const std::string u = j.at("unit");
    if (u != "ebits" && u != "bits") throw std::invalid_argument("unit must be ebits or bits");
    c.bits = u == "bits";
  }
}

std::string number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json json_number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

/// Display-time unit conversion of capacity cells.
tqms::Table in_unit(tqms::Table t, bool bits) {
  if (!bits) return t;
  const double f = 1.0 / std::log(2.0);
  for (auto& row : t.rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      if (t.is_capacity[c]) row[c] *= f;
  for (const auto& k : t.capacity_notes) t.notes[k] = t.notes[k].get<double>() * f;
  return t;
}

std::string render(const tqms::Table& t, const std::string& format, bool bits) {
  std::ostringstream os;
  if (format == "csv") {
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << number(row[c]);
      os << '\n';
    }
    return os.str();
  }
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (double x : row) r.push_back(json_number(x));
    rows.push_back(r);
  }
  json j = {{"name", t.name}, {"unit", bits ? "bits" : "ebits"}, {"columns", t.columns}, {"rows", rows},
            {"notes", t.notes}};
  os << j.dump(2) << '\n';
  return os.str();
}

std::string render(const std::vector<tqms::CheckRecord>& recs, const std::string& format, const Config& c) {
  std::ostringstream os;
  if (format == "csv") {
    os << "suite,name,passed,slack,detail\n";
    for (const auto& r : recs)
      os << r.suite << ',' << r.name << ',' << (r.passed ? "true" : "false") << ',' << number(r.slack) << ",\""
         << r.detail << "\"\n";
    return os.str();
  }
  bool all = true;
  json checks = json::array();
  for (const auto& r : recs) {
    all = all && r.passed;
    checks.push_back(tqms::to_json(r));
  }
  os << json{{"suite", c.suite}, {"seed", c.seed}, {"passed", all}, {"checks", checks}}.dump(2) << '\n';
  return os.str();
}

void emit(const std::string& text, const Config& c) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write '" + c.out + "'");
  f << text;
}

tqms::ClassicalGenerator kernel_generator(const Config& c) {
  if (!c.group_file.empty()) {
    std::ifstream in(c.group_file);
    if (!in) throw std::invalid_argument("cannot open group file '" + c.group_file + "'");
    const auto g = tqms::group_from_json(json::parse(in));
    if (c.rates.empty()) return tqms::uniform_walk(g);
    if (c.rates.size() != g.order) throw std::invalid_argument("--rates must list one rate per group element");
    return tqms::build_generator(g, c.rates);
  }
  if (c.chain == "hypercube") return tqms::hypercube_chain(c.n);
  if (c.chain == "circle") return tqms::circle_chain(c.n);
  if (c.chain == "complete") return tqms::complete_chain(c.n);
  if (c.chain == "transpositions") return tqms::transposition_chain(c.n);
  throw std::invalid_argument("unknown chain '" + c.chain + "'");
}

int run(const Config& c) {
  if (c.command == "verify") {
    const auto recs = tqms::run_suite(c.suite, c.seed);
    emit(render(recs, c.format.empty() ? "json" : c.format, c), c);
    int status = kOk;
    for (const auto& r : recs)
      if (!r.passed) {
        std::cerr << "check failed: " << r.suite << '/' << r.name << " (slack " << number(r.slack) << ")\n";
        status = kCheckFailed;
      }
    return status;
  }
  if (c.command == "example") {
    if (c.example.empty()) throw std::invalid_argument("example: --example NAME required");
    tqms::ExampleParams p;
    p.n = c.n;
    p.d = c.d;
    p.eps = c.eps;
    p.seed = c.seed;
    p.probes = c.probes;
    p.grid = c.grid;
    emit(render(in_unit(tqms::example_table(c.example, p), c.bits), c.format.empty() ? "csv" : c.format, c.bits), c);
    return kOk;
  }
  if (c.command == "kernel") {
    c.grid.validate();
    emit(render(tqms::kernel_table(kernel_generator(c), c.grid), c.format.empty() ? "csv" : c.format, false), c);
    return kOk;
  }
  throw std::invalid_argument("no command given (verify, example or kernel)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transferred quantum Markov semigroups: examples, kernels and checks"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Config c;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override it");
  app.add_option("--out", c.out, "write output to PATH instead of stdout");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", c.seed, "random seed");
  app.add_flag("--bits", c.bits, "report capacities in bits instead of e-bits");
  app.add_option("--suite", c.suite, "verification suite")
      ->check(CLI::IsMember({"all", "transference", "entropy", "capacities", "montecarlo"}));
  app.add_option("--example", c.example, "example table")->check(CLI::IsMember(tqms::example_names()));
  app.add_option("--n", c.n, "size parameter (qubits, dimension, chain size)");
  app.add_option("--d", c.d, "local dimension for swap");
  app.add_option("--probes", c.probes, "probe states for trace distances");
  app.add_option("--t-start", c.grid.start, "first time");
  app.add_option("--t-stop", c.grid.stop, "last time");
  app.add_option("--t-points", c.grid.points, "number of times");
  app.add_flag("--log-grid", c.grid.log_spacing, "logarithmic time spacing");
  app.add_option("--eps", c.eps, "threshold list")->delimiter(',');
  app.add_option("--chain", c.chain, "hypercube, circle, complete or transpositions");
  app.add_option("--group-file", c.group_file, "JSON Cayley table for the kernel command");
  app.add_option("--rates", c.rates, "jump rates, one per group element")->delimiter(',');
  auto* verify = app.add_subcommand("verify", "run property suites");
  auto* example = app.add_subcommand("example", "print an example table");
  auto* kernel = app.add_subcommand("kernel", "classical kernel norms along a time grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    for (auto* s : {verify, example, kernel})
      if (s->parsed()) c.command = s->get_name();
    if (!config_path.empty()) apply_config_file(config_path, c, app);
    for (double e : c.eps)
      if (!(e > 0)) throw std::invalid_argument("--eps entries must be positive");
    if (!c.format.empty() && c.format != "csv" && c.format != "json")
      throw std::invalid_argument("format must be csv or json");
    return run(c);
  } catch (const tqms::resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const tqms::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const json::exception& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::logic_error& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kBadInput;
  }
}
