#include "nerve/report.hpp"

#include <sstream>

namespace nerve {

SpaceConfig parse_config(const Json& j) {
  SpaceConfig cfg;
  try {
    if (j.contains("factors")) {
      for (const auto& f : j.at("factors"))
        cfg.ambient.push_back({family_from_name(f.at("family").get<std::string>()), f.at("n").get<int>()});
    } else {
      cfg.ambient.push_back({family_from_name(j.at("family").get<std::string>()), j.at("n").get<int>()});
    }
    if (j.contains("qScale")) cfg.qScale = j.at("qScale").get<double>();
    const auto& sub = j.at("subgroup");
    std::string kind = sub.at("kind").get<std::string>();
    if (kind == "maximal-torus") {
      cfg.kind = SubgroupKind::MaximalTorus;
    } else if (kind == "trivial") {
      cfg.kind = SubgroupKind::Trivial;
    } else if (kind == "torus-slope") {
      cfg.kind = SubgroupKind::TorusSlope;
      for (const auto& s : sub.at("slope")) cfg.slope.push_back(s.get<long>());
    } else if (kind == "block-product") {
      cfg.kind = SubgroupKind::BlockProduct;
      for (const auto& b : sub.at("blocks"))
        cfg.blocks.push_back({family_from_name(b.at("family").get<std::string>()), b.at("rank").get<int>()});
    } else {
      fail(Errc::ConfigError, "unknown subgroup kind '" + kind + "'");
    }
    if (j.contains("caps")) {
      const auto& caps = j.at("caps");
      if (caps.contains("maxSummands")) cfg.maxSummands = caps.at("maxSummands").get<int>();
      if (caps.contains("maxFaces")) cfg.maxFaces = caps.at("maxFaces").get<long>();
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ConfigError, std::string("config parse: ") + e.what());
  }
  return cfg;
}

Json config_to_json(const SpaceConfig& cfg) {
  Json j;
  Json factors = Json::array();
  for (const auto& f : cfg.ambient) factors.push_back({{"family", family_name(f.family)}, {"n", f.n}});
  j["factors"] = factors;
  j["qScale"] = cfg.qScale;
  Json sub;
  switch (cfg.kind) {
    case SubgroupKind::MaximalTorus: sub["kind"] = "maximal-torus"; break;
    case SubgroupKind::Trivial: sub["kind"] = "trivial"; break;
    case SubgroupKind::TorusSlope:
      sub["kind"] = "torus-slope";
      sub["slope"] = cfg.slope;
      break;
    case SubgroupKind::BlockProduct: {
      sub["kind"] = "block-product";
      Json blocks = Json::array();
      for (const auto& b : cfg.blocks) blocks.push_back({{"family", family_name(b.family)}, {"rank", b.rank}});
      sub["blocks"] = blocks;
      break;
    }
  }
  j["subgroup"] = sub;
  j["caps"] = {{"maxSummands", cfg.maxSummands}, {"maxFaces", cfg.maxFaces}};
  return j;
}

AnalysisResult run_pipeline(const SpaceConfig& cfg, const PipelineOptions& opts) {
  AnalysisResult res;
  res.config = cfg;
  res.space = build_space(cfg);
  res.adjunction = adjoin_maximal_torus(res.space);
  if (res.adjunction->quotientIsFullGroup) {
    // flat torus: every invariant metric is Ricci-flat
    res.certificate.kind = Certificate::NotComputed;
    res.certificate.note = "AH = G: the space is a flat torus, Delta_{G/AH} is undefined";
    if (opts.runSolver) res.solutions = find_einstein(res.space);
    res.verdict = res.solutions.empty() ? "UNKNOWN" : "EXISTS_NUMERICALLY";
    return res;
  }

  const HomogeneousSpace& latticeSpace = res.latticeSpace();
  if (opts.runLattice) {
    try {
      res.poset = enumerate_intermediate(latticeSpace);
    } catch (const Error& e) {
      if (e.code() == Errc::MultiplicityNotFree) {
        res.latticeNote = e.what();
        res.certificate.kind = Certificate::NotComputed;
        res.certificate.note = e.what();
      } else {
        throw;
      }
    }
  }
  if (res.poset && opts.runHomology) {
    res.complex = flag_complex(*res.poset);
    res.profile = homology(*res.complex, cfg.maxFaces);
    LatticeView view(latticeSpace, *res.poset);
    res.certificate = contractibility_certificate(*res.complex, *res.profile, &view);
  }
  if (opts.runSolver) {
    SearchOptions so;
    so.seed = opts.seed;
    so.tMax = opts.tMax;
    SubalgebraPoset solverPoset;
    const HomogeneousSpace& ss = res.solverSpace();
    bool havePoset = false;
    try {
      solverPoset = enumerate_intermediate(ss);
      havePoset = true;
    } catch (const Error&) {
    }
    if (havePoset) so.poset = &solverPoset;
    res.solutions = find_einstein(ss, so);
    for (auto& sol : res.solutions) {
      auto [m, mAug] = coindex(ss, sol);
      sol.coindex = m;
      sol.coindexAug = mAug;
    }
  }
  if (res.certificate.kind == Certificate::NonContractible)
    res.verdict = "EXISTS_BY_TOPOLOGY";
  else if (!res.solutions.empty())
    res.verdict = "EXISTS_NUMERICALLY";
  else
    res.verdict = "UNKNOWN";
  return res;
}

namespace {

Json space_json(const HomogeneousSpace& sp) {
  Json j;
  j["label"] = sp.label;
  j["dimG"] = sp.g.dim;
  j["dimH"] = sp.dimH();
  j["dimM"] = sp.dimM();
  j["ell"] = sp.ell();
  j["multiplicityFree"] = sp.multiplicityFree;
  j["m0Summands"] = sp.m0Index;
  Json sums = Json::array();
  for (const auto& s : sp.summands)
    sums.push_back({{"index", s.index}, {"d", s.d}, {"b", s.b}, {"c", s.c}, {"tag", s.isotypeTag}});
  j["summands"] = sums;
  j["bGH"] = sp.bGH();
  if (sp.ell() >= 2) j["cGH"] = cGH(sp);
  return j;
}

}  // namespace

Json report_json(const AnalysisResult& res, std::uint64_t configHash, std::uint64_t seed) {
  Json j;
  j["space"] = space_json(res.space);
  if (res.adjunction && res.adjunction->adjoinedDim > 0) {
    j["torusAdjoined"] = true;
    j["adjoinedDim"] = res.adjunction->adjoinedDim;
    j["quotient"] = space_json(res.adjunction->quotient);
    j["refined"] = space_json(res.adjunction->refined);
  } else {
    j["torusAdjoined"] = false;
  }
  if (res.poset) {
    Json nodes = Json::array();
    for (const auto& n : res.poset->nodes)
      nodes.push_back(
          {{"id", n.id}, {"indexSet", n.indexSet}, {"dim", n.dim}, {"toral", n.toral}, {"minimal", n.minimal}});
    j["lattice"] = {{"nodes", nodes},
                    {"nGH", uniform_nontoral_bound(res.latticeSpace(), *res.poset)}};
  } else if (!res.latticeNote.empty()) {
    j["lattice"] = {{"error", res.latticeNote}};
  }
  if (res.complex) {
    Json cx;
    cx["vertexCount"] = res.complex->vertexCount;
    cx["facets"] = res.complex->facets;
    if (res.profile) {
      cx["betti"] = res.profile->betti;
      Json tor = Json::array();
      for (const auto& [q, factors] : res.profile->torsion) {
        Json fs = Json::array();
        for (const auto& f : factors) fs.push_back(f.str());
        tor.push_back({{"degree", q}, {"factors", fs}});
      }
      cx["torsion"] = tor;
      cx["faceCounts"] = res.profile->faceCounts;
    }
    j["complex"] = cx;
  }
  Json cert;
  cert["kind"] = certificate_name(res.certificate.kind);
  if (res.certificate.kind == Certificate::NonContractible) cert["degree"] = res.certificate.degree;
  if (res.certificate.kind == Certificate::Contractible) cert["witness"] = res.certificate.witness;
  if (!res.certificate.note.empty()) cert["note"] = res.certificate.note;
  j["certificate"] = cert;
  Json sols = Json::array();
  for (const auto& s : res.solutions) {
    std::vector<double> x(s.x.x.data(), s.x.x.data() + s.x.x.size());
    sols.push_back({{"x", x},
                    {"lambda", s.lambda},
                    {"sc", s.sc},
                    {"residual", s.residual},
                    {"gradNormSq", s.gradNormSq},
                    {"coindex", s.coindex},
                    {"coindexAug", s.coindexAug},
                    {"isometryClass", s.isometryClass}});
  }
  j["einstein"] = sols;
  j["verdict"] = res.verdict;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(configHash));
  j["provenance"] = {{"configHash", hash}, {"version", kVersion}, {"seed", seed}};
  return j;
}

std::string report_text(const AnalysisResult& res) {
  std::ostringstream os;
  const auto& sp = res.space;
  os << "space " << sp.label << ": dim G/H = " << sp.dimM() << ", ell = " << sp.ell()
     << (sp.multiplicityFree ? ", multiplicity-free" : ", NOT multiplicity-free") << "\n";
  os << "  summands (d_i, b_i, c_i):";
  for (const auto& s : sp.summands) os << " (" << s.d << ", " << s.b << ", " << s.c << ")";
  os << "\n  b_GH = " << sp.bGH() << "\n";
  if (res.adjunction && res.adjunction->adjoinedDim > 0)
    os << "  adjoined maximal torus of m_0, dim " << res.adjunction->adjoinedDim << " -> "
       << res.adjunction->quotient.label << "\n";
  if (res.poset) {
    os << "lattice: " << res.poset->nodes.size() << " intermediate subalgebras\n";
    for (const auto& n : res.poset->nodes) {
      os << "  k" << n.id << " = h + m_{";
      for (std::size_t i = 0; i < n.indexSet.size(); ++i) os << (i ? "," : "") << n.indexSet[i];
      os << "} dim " << n.dim << (n.toral ? " toral" : "") << (n.minimal ? " minimal" : "") << "\n";
    }
  }
  if (res.profile) {
    os << "complex: betti~ = [";
    for (std::size_t q = 0; q < res.profile->betti.size(); ++q) os << (q ? "," : "") << res.profile->betti[q];
    os << "]\n";
  }
  os << "certificate: " << certificate_name(res.certificate.kind);
  if (res.certificate.kind == Certificate::NonContractible) os << "(" << res.certificate.degree << ")";
  os << "\n";
  os << "einstein solutions: " << res.solutions.size() << "\n";
  for (const auto& s : res.solutions) {
    os << "  x = (";
    for (int i = 0; i < s.x.x.size(); ++i) os << (i ? ", " : "") << s.x.x[i];
    os << "), lambda = " << s.lambda << ", residual = " << s.residual << ", coindex " << s.coindex << "/"
       << s.coindexAug << ", class " << s.isometryClass << "\n";
  }
  os << "VERDICT: " << res.verdict << "\n";
  return os.str();
}

}  // namespace nerve
