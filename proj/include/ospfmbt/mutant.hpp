// Catalog of injectable protocol deviations layered over the reference
// model: named single-fault configurations, a spec parser for CLI selection
// ("D1", "D2+D5", "D1@0,1,2"), and the detection matrix that measures how a
// suite fares against each mutant.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ospfmbt/adapter.hpp"
#include "ospfmbt/model.hpp"
#include "ospfmbt/testgen.hpp"
#include "ospfmbt/topology.hpp"

namespace ospfmbt {

// "D1".."D7", "Q1" -> the deviation id; nullopt for anything else.
std::optional<DeviationId> parse_deviation(const std::string& name);

// Parses a mutant spec: "pristine" (or "") for the empty config, otherwise
// deviation names joined by '+', with an optional "@r,r,..." suffix limiting
// the affected routers ("D1@0,1,2").  Throws std::invalid_argument on
// unknown names, duplicates, or malformed router lists.
MutantConfig parse_mutant_spec(const std::string& spec);

// Canonical spec string; inverse of parse_mutant_spec ("pristine" when
// empty, deviations in enum order).
std::string mutant_spec_to_string(const MutantConfig& cfg);

// One single-deviation config per DeviationId, in enum order.
std::vector<MutantConfig> single_deviation_catalog();

// A mutated (or, with an empty config, pristine) in-process target.
std::unique_ptr<InProcessAdapter> make_mutant(const ConcreteTopology& topo,
                                              const MutantConfig& cfg,
                                              uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Detection matrix
// ---------------------------------------------------------------------------
struct MatrixRow {
  MutantConfig config;
  std::string name;  // canonical spec string
  size_t fails = 0;
  size_t inconclusive = 0;
  std::string first_fail;  // id of the first failing test, empty if none

  bool operator==(const MatrixRow& o) const {
    return name == o.name && fails == o.fails &&
           inconclusive == o.inconclusive && first_fail == o.first_fail;
  }
};

// Runs the whole suite against each catalog entry on a fresh in-process
// target (same seed per row, so rows are comparable).
std::vector<MatrixRow> detection_matrix(const std::vector<TestFile>& suite,
                                        const std::vector<MutantConfig>& catalog,
                                        uint64_t seed = 1,
                                        const RunOptions& opts = {});

// Aligned text table, one row per mutant.
std::string matrix_to_string(const std::vector<MatrixRow>& rows);

}  // namespace ospfmbt
