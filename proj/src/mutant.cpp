#include "ospfmbt/mutant.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ospfmbt {

namespace {

constexpr DeviationId kAllDeviations[] = {
    DeviationId::D1_NoInitAfterMaxSeqFightback,
    DeviationId::D2_MaxAgeWithOwnLinks,
    DeviationId::D3_KeyByLsidOnly,
    DeviationId::D4_FightbackOnOlder,
    DeviationId::D5_RepeatedFalseResend,
    DeviationId::D6_MaxAgeRefloodLoop,
    DeviationId::D7_UnicastDrReflood,
    DeviationId::Q1_FloodBeforeSelfCheck,
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::optional<DeviationId> parse_deviation(const std::string& name) {
  for (DeviationId id : kAllDeviations) {
    if (name == deviation_name(id)) return id;
  }
  return std::nullopt;
}

MutantConfig parse_mutant_spec(const std::string& spec) {
  MutantConfig cfg;
  if (spec.empty() || spec == "pristine") return cfg;

  std::string names = spec;
  const size_t at = spec.find('@');
  if (at != std::string::npos) {
    names = spec.substr(0, at);
    const std::string list = spec.substr(at + 1);
    if (list.empty())
      throw std::invalid_argument("mutant spec: empty router list in '" +
                                  spec + "'");
    std::set<int> routers;
    for (const std::string& part : split(list, ',')) {
      if (part.empty() || part.find_first_not_of("0123456789") !=
                              std::string::npos) {
        throw std::invalid_argument("mutant spec: bad router id '" + part +
                                    "' in '" + spec + "'");
      }
      routers.insert(std::stoi(part));
    }
    cfg.affected = std::move(routers);
  }

  for (const std::string& name : split(names, '+')) {
    std::optional<DeviationId> id = parse_deviation(name);
    if (!id)
      throw std::invalid_argument("mutant spec: unknown deviation '" + name +
                                  "' in '" + spec + "'");
    if (!cfg.enabled.insert(*id).second)
      throw std::invalid_argument("mutant spec: duplicate deviation '" + name +
                                  "' in '" + spec + "'");
  }
  return cfg;
}

std::string mutant_spec_to_string(const MutantConfig& cfg) {
  if (cfg.enabled.empty()) return "pristine";
  std::string out;
  for (DeviationId id : kAllDeviations) {
    if (!cfg.enabled.count(id)) continue;
    if (!out.empty()) out += '+';
    out += deviation_name(id);
  }
  if (cfg.affected) {
    out += '@';
    bool first = true;
    for (int r : *cfg.affected) {
      if (!first) out += ',';
      out += std::to_string(r);
      first = false;
    }
  }
  return out;
}

std::vector<MutantConfig> single_deviation_catalog() {
  std::vector<MutantConfig> out;
  for (DeviationId id : kAllDeviations) {
    MutantConfig cfg;
    cfg.enabled = {id};
    out.push_back(std::move(cfg));
  }
  return out;
}

std::unique_ptr<InProcessAdapter> make_mutant(const ConcreteTopology& topo,
                                              const MutantConfig& cfg,
                                              uint64_t seed) {
  return std::make_unique<InProcessAdapter>(topo, cfg, seed);
}

std::vector<MatrixRow> detection_matrix(const std::vector<TestFile>& suite,
                                        const std::vector<MutantConfig>& catalog,
                                        uint64_t seed, const RunOptions& opts) {
  std::vector<MatrixRow> rows;
  for (const MutantConfig& cfg : catalog) {
    MatrixRow row;
    row.config = cfg;
    row.name = mutant_spec_to_string(cfg);
    for (const TestFile& tf : suite) {
      InProcessAdapter target(tf.topology, cfg, seed);
      Verdict v = run_test(target, tf, opts);
      if (v.outcome == Outcome::Fail) {
        if (row.fails == 0) row.first_fail = tf.id;
        ++row.fails;
      } else if (v.outcome == Outcome::Inconclusive) {
        ++row.inconclusive;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string matrix_to_string(const std::vector<MatrixRow>& rows) {
  size_t name_w = 6;  // "mutant"
  for (const MatrixRow& r : rows) name_w = std::max(name_w, r.name.size());

  std::ostringstream os;
  os << std::left << std::setw(int(name_w)) << "mutant" << "  " << std::right
     << std::setw(5) << "fails" << "  " << std::setw(6) << "inconc"
     << "  first-fail\n";
  for (const MatrixRow& r : rows) {
    os << std::left << std::setw(int(name_w)) << r.name << "  " << std::right
       << std::setw(5) << r.fails << "  " << std::setw(6) << r.inconclusive
       << "  " << (r.first_fail.empty() ? "-" : r.first_fail) << "\n";
  }
  return os.str();
}

}  // namespace ospfmbt
