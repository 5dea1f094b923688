#ifndef NERVE_REPORT_HPP
#define NERVE_REPORT_HPP

#include <json.hpp>
#include <optional>

#include "nerve/complex.hpp"
#include "nerve/solver.hpp"

namespace nerve {

using Json = nlohmann::ordered_json;

SpaceConfig parse_config(const Json& j);
Json config_to_json(const SpaceConfig& cfg);

struct PipelineOptions {
  std::uint64_t seed = 1;
  double tMax = 200.0;
  bool runLattice = true;
  bool runHomology = true;
  bool runSolver = true;
};

// The full Theorem-B decision flow: build, adjoin the maximal torus, classify
// the lattice, compute the complex and certificate on G/AH, then search for
// Einstein metrics on the refined G/H family.
struct AnalysisResult {
  SpaceConfig config;
  HomogeneousSpace space;
  std::optional<TorusAdjunction> adjunction;
  std::optional<SubalgebraPoset> poset;
  std::optional<SimplicialComplex> complex;
  std::optional<HomologyProfile> profile;
  Certificate certificate;
  std::vector<EinsteinSolution> solutions;
  std::string verdict;  // EXISTS_BY_TOPOLOGY | EXISTS_NUMERICALLY | UNKNOWN
  std::string latticeNote;
  const HomogeneousSpace& latticeSpace() const {
    return adjunction && adjunction->adjoinedDim > 0 ? adjunction->quotient : space;
  }
  const HomogeneousSpace& solverSpace() const {
    return adjunction && adjunction->adjoinedDim > 0 ? adjunction->refined : space;
  }
};

AnalysisResult run_pipeline(const SpaceConfig& cfg, const PipelineOptions& opts);

Json report_json(const AnalysisResult& res, std::uint64_t configHash, std::uint64_t seed);
std::string report_text(const AnalysisResult& res);

}  // namespace nerve

#endif
