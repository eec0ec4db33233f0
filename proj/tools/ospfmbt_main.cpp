// Command-line front end: generate test suites from the reference model,
// run them against an in-process (optionally mutated) target, summarize
// detection matrices, and inspect suites and verdict reports.
//
// Exit codes: 0 all tests passed, 1 at least one failure, 2 no failures but
// at least one inconclusive verdict, 3 usage or I/O error.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ospfmbt/adapter.hpp"
#include "ospfmbt/model.hpp"
#include "ospfmbt/mutant.hpp"
#include "ospfmbt/testgen.hpp"
#include "ospfmbt/topology.hpp"

namespace fs = std::filesystem;
using namespace ospfmbt;

namespace {

// ---------------------------------------------------------------------------
// Topology specs
// ---------------------------------------------------------------------------

// Inverse of ConcreteTopology::fingerprint: "n5;p0-1;p1-2;N1,3,4".
ConcreteTopology parse_fingerprint(const std::string& spec) {
  ConcreteTopology t;
  std::istringstream is(spec);
  std::string tok;
  bool have_n = false;
  while (std::getline(is, tok, ';')) {
    if (tok.empty()) throw std::invalid_argument("topology spec: empty field");
    if (tok[0] == 'n') {
      t.n = std::stoi(tok.substr(1));
      have_n = true;
    } else if (tok[0] == 'p') {
      auto dash = tok.find('-');
      if (dash == std::string::npos)
        throw std::invalid_argument("topology spec: bad p2p field " + tok);
      P2pLink l;
      l.a = std::stoi(tok.substr(1, dash - 1));
      l.b = std::stoi(tok.substr(dash + 1));
      t.p2p.push_back(l);
    } else if (tok[0] == 'N') {
      Net net;
      std::istringstream ms(tok.substr(1));
      std::string m;
      while (std::getline(ms, m, ',')) net.members.push_back(std::stoi(m));
      t.nets.push_back(net);
    } else {
      throw std::invalid_argument("topology spec: unknown field " + tok);
    }
  }
  if (!have_n) throw std::invalid_argument("topology spec: missing router count");
  t.validate();
  return t;
}

using TopoSpec = std::variant<ConcreteTopology, SymbolicTopology>;

// "line:N", "sym:n=N,m=M", a fingerprint, or "@file" with either format.
TopoSpec parse_topo_spec(const std::string& raw) {
  std::string spec = raw;
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream f(spec.substr(1));
    if (!f) throw std::runtime_error("cannot open topology file " + spec.substr(1));
    std::ostringstream os;
    os << f.rdbuf();
    std::string text = os.str();
    if (text.find("routers:") != std::string::npos) {
      ConcreteTopology t = ConcreteTopology::from_text(text);
      t.validate();
      return t;
    }
    while (!text.empty() && (text.back() == '\n' || text.back() == ' '))
      text.pop_back();
    spec = text;
  }
  if (spec.rfind("line:", 0) == 0) {
    ConcreteTopology t;
    t.n = std::stoi(spec.substr(5));
    for (int i = 0; i + 1 < t.n; ++i) t.p2p.push_back(P2pLink{i, i + 1});
    t.validate();
    return t;
  }
  if (spec.rfind("sym:", 0) == 0) {
    SymbolicTopology st;
    std::istringstream is(spec.substr(4));
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (tok.rfind("n=", 0) == 0)
        st.n = std::stoi(tok.substr(2));
      else if (tok.rfind("m=", 0) == 0)
        st.m = std::stoi(tok.substr(2));
      else
        throw std::invalid_argument("topology spec: unknown family field " + tok);
    }
    if (st.n < 2) throw std::invalid_argument("topology spec: family needs n >= 2");
    return st;
  }
  return parse_fingerprint(spec);
}

std::string topo_spec_string(const TopoSpec& ts) {
  if (const auto* c = std::get_if<ConcreteTopology>(&ts)) return c->fingerprint();
  const auto& s = std::get<SymbolicTopology>(ts);
  return "sym:n=" + std::to_string(s.n) + ",m=" + std::to_string(s.m);
}

// ---------------------------------------------------------------------------
// Generation specs (round-trip through the manifest config string)
// ---------------------------------------------------------------------------

struct GenSpec {
  std::string mode = "depth1";  // depth1 | extension | prefix | naive
  std::string topo;
  int depth = 2;
  int prefix_len = 3;
  uint64_t seed = 1;
  size_t max_paths = GenLimits{}.max_paths;
  size_t max_tests = GenLimits{}.max_total_tests;
};

std::string generator_name(const GenSpec& g) {
  if (g.mode == "depth1" && g.topo.rfind("sym:", 0) == 0) return "depth1-symbolic";
  return g.mode;
}

std::string config_string(const GenSpec& g) {
  std::ostringstream os;
  os << "mode=" << g.mode << " topo=" << g.topo;
  if (g.mode == "extension" || g.mode == "naive") os << " depth=" << g.depth;
  if (g.mode == "prefix") os << " len=" << g.prefix_len;
  os << " max_paths=" << g.max_paths;
  if (g.max_tests != SIZE_MAX) os << " max_tests=" << g.max_tests;
  return os.str();
}

GenSpec parse_config_string(const std::string& config, uint64_t seed) {
  std::map<std::string, std::string> kv;
  std::istringstream is(config);
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("manifest config: bad token " + tok);
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  GenSpec g;
  g.seed = seed;
  if (!kv.count("mode") || !kv.count("topo"))
    throw std::runtime_error("manifest config: missing mode or topo");
  g.mode = kv["mode"];
  g.topo = kv["topo"];
  if (kv.count("depth")) g.depth = std::stoi(kv["depth"]);
  if (kv.count("len")) g.prefix_len = std::stoi(kv["len"]);
  if (kv.count("max_paths")) g.max_paths = std::stoull(kv["max_paths"]);
  if (kv.count("max_tests")) g.max_tests = std::stoull(kv["max_tests"]);
  return g;
}

GenResult run_generation(const GenSpec& g) {
  GenLimits limits;
  limits.max_paths = g.max_paths;
  limits.max_total_tests = g.max_tests;
  TopoSpec ts = parse_topo_spec(g.topo);
  if (std::holds_alternative<SymbolicTopology>(ts)) {
    if (g.mode != "depth1")
      throw std::runtime_error("topology families support only --mode depth1");
    return generate_depth1(std::get<SymbolicTopology>(ts), limits);
  }
  const ConcreteTopology& topo = std::get<ConcreteTopology>(ts);
  if (g.mode == "depth1") return systematic_extension(topo, 1, limits);
  if (g.mode == "extension") return systematic_extension(topo, g.depth, limits);
  if (g.mode == "prefix") return arbitrary_prefix(topo, g.prefix_len, g.seed, limits);
  if (g.mode == "naive") return generate_naive(topo, g.depth, limits);
  throw std::runtime_error("unknown generation mode " + g.mode);
}

void write_generated(const std::string& out, GenSpec g) {
  g.topo = topo_spec_string(parse_topo_spec(g.topo));
  GenResult gen = run_generation(g);
  SuiteManifest m;
  m.generator = generator_name(g);
  m.config = config_string(g);
  m.seed = g.seed;
  write_suite(out, gen, m);
  std::cout << "wrote " << gen.tests.size() << " tests ("
            << extract_reachable_states(gen.tests).size() << " unique states"
            << (gen.truncated ? ", truncated" : "") << ") to " << out << "\n";
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_generate(const GenSpec& g, const std::string& from_manifest,
                 const std::string& out) {
  if (!from_manifest.empty()) {
    Suite s = read_suite(from_manifest);
    GenSpec re = parse_config_string(s.manifest.config, s.manifest.seed);
    write_generated(out, re);
    return 0;
  }
  if (g.topo.empty()) {
    std::cerr << "error: --topo or --from-manifest is required\n";
    return 3;
  }
  write_generated(out, g);
  return 0;
}

int cmd_extend(const std::string& suite_dir, const std::string& out, int depth,
               size_t max_paths, size_t max_tests) {
  Suite s = read_suite(suite_dir);
  if (s.tests.empty()) throw std::runtime_error("suite is empty");
  const std::string fp = s.tests.front().topology.fingerprint();
  for (const TestFile& t : s.tests)
    if (t.topology.fingerprint() != fp)
      throw std::runtime_error(
          "suite embeds multiple topologies; extension needs a single one");
  GenSpec g;
  g.mode = "extension";
  g.topo = fp;
  g.depth = depth;
  g.max_paths = max_paths;
  g.max_tests = max_tests;
  write_generated(out, g);
  return 0;
}

int cmd_run(const std::string& suite_dir, const std::string& report,
            const std::string& mutant, uint64_t seed, bool resume,
            const RunOptions& opts) {
  Suite s = read_suite(suite_dir);
  MutantConfig cfg = parse_mutant_spec(mutant);

  size_t pass = 0, fail = 0, inconc = 0;
  std::set<std::string> done;
  if (fs::exists(report)) {
    if (!resume) {
      std::cerr << "error: report " << report
                << " exists; pass --resume to continue or remove it\n";
      return 3;
    }
    for (const Verdict& v : read_report(report)) {
      if (!done.insert(v.test_id).second) continue;
      if (v.outcome == Outcome::Pass) ++pass;
      if (v.outcome == Outcome::Fail) ++fail;
      if (v.outcome == Outcome::Inconclusive) ++inconc;
    }
  }

  size_t i = 0;
  for (const TestFile& tf : s.tests) {
    ++i;
    if (done.count(tf.id)) {
      std::cout << "[" << i << "/" << s.tests.size() << "] " << tf.id
                << " already reported\n";
      continue;
    }
    auto sut = make_mutant(tf.topology, cfg, seed);
    Verdict v = run_test(*sut, tf, opts);
    append_report(report, v);
    std::cout << "[" << i << "/" << s.tests.size() << "] " << tf.id << " "
              << outcome_name(v.outcome);
    if (v.outcome == Outcome::Inconclusive) std::cout << " (" << v.detail << ")";
    std::cout << "\n";
    for (size_t d = 0; d < v.diffs.size() && d < 3; ++d)
      std::cout << "    " << v.diffs[d].to_string() << "\n";
    if (v.diffs.size() > 3)
      std::cout << "    ... " << (v.diffs.size() - 3) << " more diffs\n";
    if (v.outcome == Outcome::Pass) ++pass;
    if (v.outcome == Outcome::Fail) ++fail;
    if (v.outcome == Outcome::Inconclusive) ++inconc;
  }
  std::cout << pass << " pass, " << fail << " fail, " << inconc
            << " inconclusive\n";
  if (fail > 0) return 1;
  if (inconc > 0) return 2;
  return 0;
}

int cmd_matrix(const std::string& suite_dir, const std::string& mutants,
               uint64_t seed, const std::string& out) {
  Suite s = read_suite(suite_dir);
  std::vector<MutantConfig> catalog;
  catalog.push_back({});
  if (mutants.empty()) {
    for (MutantConfig& c : single_deviation_catalog())
      catalog.push_back(std::move(c));
  } else {
    std::istringstream is(mutants);
    std::string tok;
    while (std::getline(is, tok, ';'))
      catalog.push_back(parse_mutant_spec(tok));
  }
  std::vector<MatrixRow> rows = detection_matrix(s.tests, catalog, seed);
  std::string table = matrix_to_string(rows);
  std::cout << table;
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << table;
  }
  return 0;
}

int cmd_show_suite(const std::string& dir, const std::string& test_id) {
  Suite s = read_suite(dir);
  if (!test_id.empty()) {
    std::ifstream f(fs::path(dir) / (test_id + ".test"), std::ios::binary);
    if (!f) throw std::runtime_error("no test " + test_id + " in " + dir);
    std::cout << f.rdbuf();
    return 0;
  }
  const SuiteManifest& m = s.manifest;
  std::cout << "suite " << dir << "\n"
            << "  generator: " << m.generator << "\n"
            << "  config: " << m.config << "\n"
            << "  seed: " << m.seed << "\n"
            << "  config_hash: " << m.config_hash << "\n"
            << "  tests: " << m.test_count << "\n"
            << "  unique_states: " << m.unique_states << "\n";
  for (const IterationStat& it : m.iterations)
    std::cout << "  depth " << it.depth << ": " << it.start_states
              << " start states, " << it.tests << " tests, " << it.new_states
              << " new states\n";
  return 0;
}

int cmd_show_report(const std::string& path) {
  std::vector<Verdict> vs = read_report(path);
  size_t pass = 0, fail = 0, inconc = 0;
  for (const Verdict& v : vs) {
    if (v.outcome == Outcome::Pass) ++pass;
    if (v.outcome == Outcome::Fail) ++fail;
    if (v.outcome == Outcome::Inconclusive) ++inconc;
  }
  std::cout << vs.size() << " verdicts: " << pass << " pass, " << fail
            << " fail, " << inconc << " inconclusive\n";
  for (const Verdict& v : vs) {
    if (v.outcome == Outcome::Fail) {
      std::cout << "FAIL " << v.test_id << "\n";
      for (const Diff& d : v.diffs) std::cout << "    " << d.to_string() << "\n";
    } else if (v.outcome == Outcome::Inconclusive) {
      std::cout << "INCONCLUSIVE " << v.test_id << ": " << v.detail << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-based black-box tester for OSPF LSA flooding"};
  app.require_subcommand(1);

  GenSpec gspec;
  std::string out_dir, from_manifest;
  auto* gen = app.add_subcommand(
      "generate", "Generate a test suite from the reference model");
  gen->add_option("--topo", gspec.topo,
                  "Topology: fingerprint (n3;p0-1;p1-2;N0,1), line:N, "
                  "sym:n=N,m=M family, or @file");
  gen->add_option("--mode", gspec.mode, "Generation strategy")
      ->check(CLI::IsMember({"depth1", "extension", "prefix", "naive"}))
      ->capture_default_str();
  gen->add_option("--depth", gspec.depth, "Exploration depth (extension, naive)")
      ->capture_default_str();
  gen->add_option("--prefix-len", gspec.prefix_len,
                  "Random concrete prefix length (prefix)")
      ->capture_default_str();
  gen->add_option("--seed", gspec.seed, "Random seed (prefix)")
      ->capture_default_str();
  gen->add_option("--max-paths", gspec.max_paths, "Per-exploration path cap")
      ->capture_default_str();
  gen->add_option("--max-tests", gspec.max_tests, "Whole-generation test cap");
  gen->add_option("--from-manifest", from_manifest,
                  "Regenerate from an existing suite's manifest");
  gen->add_option("--out", out_dir, "Output suite directory")->required();

  std::string ext_suite;
  int ext_depth = 2;
  GenSpec espec;
  auto* ext = app.add_subcommand(
      "extend", "Regenerate a suite's topology at greater depth");
  ext->add_option("--suite", ext_suite, "Existing suite directory")->required();
  ext->add_option("--depth", ext_depth, "New exploration depth")
      ->capture_default_str();
  ext->add_option("--max-paths", espec.max_paths, "Per-exploration path cap")
      ->capture_default_str();
  ext->add_option("--max-tests", espec.max_tests, "Whole-generation test cap");
  ext->add_option("--out", out_dir, "Output suite directory")->required();

  std::string run_suite, report, mutant = "pristine";
  uint64_t run_seed = 1;
  bool resume = false, no_routes = false, no_setup_check = false;
  RunOptions opts;
  auto* run = app.add_subcommand(
      "run", "Run a suite against an in-process target and report verdicts");
  run->add_option("--suite", run_suite, "Suite directory")->required();
  run->add_option("--report", report, "Verdict report file (JSON lines)")
      ->required();
  run->add_option("--mutant", mutant,
                  "Deviation spec for the target: pristine, D1..D7, Q1, "
                  "D2+D5, D1@0,1")
      ->capture_default_str();
  run->add_option("--seed", run_seed, "Target base-sequence seed")
      ->capture_default_str();
  run->add_flag("--resume", resume, "Skip tests already in the report");
  run->add_flag("--no-routes", no_routes, "Skip advisory routing-table reads");
  run->add_flag("--no-setup-check", no_setup_check,
                "Skip intermediate state verification after test setup");
  run->add_option("--timeout-ms", opts.stability_timeout_ms,
                  "Stability timeout per await")
      ->capture_default_str();

  std::string mat_suite, mat_mutants, mat_out;
  uint64_t mat_seed = 1;
  auto* mat = app.add_subcommand(
      "matrix", "Run a suite against the deviation catalog and tabulate");
  mat->add_option("--suite", mat_suite, "Suite directory")->required();
  mat->add_option("--mutants", mat_mutants,
                  "Semicolon-separated mutant specs (default: every single "
                  "deviation)");
  mat->add_option("--seed", mat_seed, "Target base-sequence seed")
      ->capture_default_str();
  mat->add_option("--out", mat_out, "Also write the table to a file");

  std::string show_suite, show_test, show_report;
  auto* show = app.add_subcommand("show", "Inspect a suite or a report");
  show->add_option("--suite", show_suite, "Suite directory to summarize");
  show->add_option("--test", show_test, "Print one test from --suite");
  show->add_option("--report", show_report, "Verdict report to summarize");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (gen->parsed()) return cmd_generate(gspec, from_manifest, out_dir);
    if (ext->parsed())
      return cmd_extend(ext_suite, out_dir, ext_depth, espec.max_paths,
                        espec.max_tests);
    if (run->parsed()) {
      opts.read_routes = !no_routes;
      opts.verify_setup_state = !no_setup_check;
      return cmd_run(run_suite, report, mutant, run_seed, resume, opts);
    }
    if (mat->parsed()) return cmd_matrix(mat_suite, mat_mutants, mat_seed, mat_out);
    if (show->parsed()) {
      if (!show_report.empty()) return cmd_show_report(show_report);
      if (!show_suite.empty()) return cmd_show_suite(show_suite, show_test);
      std::cerr << "error: show needs --suite or --report\n";
      return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
