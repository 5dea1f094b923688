#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nerve/complex.hpp>
#include <nerve/curvature.hpp>
#include <nerve/lattice.hpp>
#include <nerve/solver.hpp>
#include <bit>
#include <set>

using namespace nerve;

namespace {

SpaceConfig su_torus(int n) {
  SpaceConfig cfg;
  cfg.ambient = {{Family::SpecialUnitary, n}};
  cfg.kind = SubgroupKind::MaximalTorus;
  return cfg;
}

// independent closure oracle: bracket the actual m-basis matrices instead of
// reading the certified triple tensor
bool closed_by_matrices(const HomogeneousSpace& sp, std::uint32_t mask) {
  std::vector<int> cols;
  for (int i = 0; i < sp.ell(); ++i)
    if (mask >> i & 1)
      for (int c : sp.summands[i].basisColumns) cols.push_back(c);
  Eigen::MatrixXd span(sp.g.dim, sp.dimH() + cols.size());
  span.leftCols(sp.dimH()) = sp.hBasis;
  for (std::size_t j = 0; j < cols.size(); ++j) span.col(sp.dimH() + j) = sp.mBasis.col(cols[j]);
  for (std::size_t a = 0; a < cols.size(); ++a)
    for (std::size_t b = a; b < cols.size(); ++b) {
      Eigen::VectorXd z = bracket(sp.g, sp.mBasis.col(cols[a]), sp.mBasis.col(cols[b]));
      if ((z - span * (span.transpose() * z)).norm() > 1e-9) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("SU(3)/T^2: three incomparable non-toral nodes") {
  auto sp = build_space(su_torus(3));
  auto poset = enumerate_intermediate(sp);
  REQUIRE(poset.nodes.size() == 3);
  for (const auto& n : poset.nodes) {
    CHECK(n.indexSet.size() == 1);
    CHECK_FALSE(n.toral);
    CHECK(n.minimal);
    CHECK(n.dim == 4);  // u(2)
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK_FALSE(poset.leq(a, b));
}

TEST_CASE("SU(4)/T^3: 13 nodes, cross-checked by matrix-level closure search") {
  auto sp = build_space(su_torus(4));
  REQUIRE(sp.ell() == 6);
  auto poset = enumerate_intermediate(sp);
  CHECK(poset.nodes.size() == 13);  // Bell(4) - 2
  // brute force over all proper subsets with the independent oracle
  std::set<std::uint32_t> oracle;
  for (std::uint32_t mask = 1; mask < 63u; ++mask)
    if (closed_by_matrices(sp, mask)) oracle.insert(mask);
  CHECK(oracle.size() == poset.nodes.size());
  for (const auto& n : poset.nodes) CHECK(oracle.count(n.mask) == 1);
}

TEST_CASE("Sp(2)/Sp(1)xSp(1): H maximal, empty lattice") {
  SpaceConfig cfg;
  cfg.ambient = {{Family::Symplectic, 2}};
  cfg.kind = SubgroupKind::BlockProduct;
  cfg.blocks = {{Family::Symplectic, 1}, {Family::Symplectic, 1}};
  auto sp = build_space(cfg);
  CHECK(sp.ell() == 1);
  auto poset = enumerate_intermediate(sp);
  CHECK(poset.nodes.empty());
}

TEST_CASE("generate: join law on SU(3)/T^2 and SU(4)/T^3") {
  auto sp3 = build_space(su_torus(3));
  auto p3 = enumerate_intermediate(sp3);
  for (int a = 0; a < 3; ++a) {
    CHECK(generate(sp3, p3, a, a) == a);  // idempotent
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(generate(sp3, p3, a, b) == -1);  // distinct u(2)s fill su(3)
  }

  auto sp4 = build_space(su_torus(4));
  auto p4 = enumerate_intermediate(sp4);
  // commutative, monotone, least upper bound in the poset + top
  for (std::size_t a = 0; a < p4.nodes.size(); ++a)
    for (std::size_t b = 0; b < p4.nodes.size(); ++b) {
      int j1 = generate(sp4, p4, int(a), int(b));
      CHECK(j1 == generate(sp4, p4, int(b), int(a)));
      if (j1 >= 0) {
        CHECK(p4.leq(int(a), j1));
        CHECK(p4.leq(int(b), j1));
        // least: any node above both is above the join
        for (std::size_t c = 0; c < p4.nodes.size(); ++c)
          if (p4.leq(int(a), int(c)) && p4.leq(int(b), int(c))) CHECK(p4.leq(j1, int(c)));
      }
    }
  // two disjoint root blocks generate the two-block coarsening, not g
  int i12 = -1, i34 = -1;
  for (const auto& n : p4.nodes) {
    if (n.indexSet.size() != 1) continue;
    for (const auto& m : p4.nodes) {
      if (m.indexSet.size() != 1 || m.id == n.id) continue;
      int j = generate(sp4, p4, n.id, m.id);
      if (j >= 0 && p4.nodes[j].indexSet.size() == 2) {
        i12 = n.id;
        i34 = m.id;
      }
    }
  }
  REQUIRE(i12 >= 0);
  REQUIRE(i34 >= 0);
  int join = generate(sp4, p4, i12, i34);
  CHECK(join >= 0);
  CHECK(p4.nodes[join].indexSet.size() == 2);
  CHECK(p4.nodes[join].mask == (p4.nodes[i12].mask | p4.nodes[i34].mask));
}

TEST_CASE("toral classification matches the toral invariant") {
  // (SU(2)xSU(2))/S^1_{1,2}: multiplicity-free with m_0 = 1
  SpaceConfig cfg;
  cfg.ambient = {{Family::SpecialUnitary, 2}, {Family::SpecialUnitary, 2}};
  cfg.kind = SubgroupKind::TorusSlope;
  cfg.slope = {1, -1, 2, -2};
  auto sp = build_space(cfg);
  REQUIRE(sp.ell() == 3);
  REQUIRE(sp.m0Index.size() == 1);
  CHECK(sp.multiplicityFree);
  auto poset = enumerate_intermediate(sp);
  bool sawToral = false, sawNonToral = false;
  for (const auto& n : poset.nodes) {
    double a = toral_invariant(sp, n.indexSet);
    if (n.toral) {
      sawToral = true;
      CHECK(a == doctest::Approx(0.0));
    } else {
      sawNonToral = true;
      CHECK(a > kEpsStruct);
    }
  }
  CHECK(sawToral);      // t = h + m_0
  CHECK(sawNonToral);   // su(2) + R nodes
  // the toral node is exactly m_0
  for (const auto& n : poset.nodes)
    if (n.toral) CHECK(n.indexSet == std::vector<int>{sp.m0Index[0]});

  // SU(3)/T^2: equal rank, no toral nodes
  auto sp3 = build_space(su_torus(3));
  auto p3 = enumerate_intermediate(sp3);
  for (const auto& n : p3.nodes) CHECK_FALSE(n.toral);
}

TEST_CASE("minimal flags agree with exhaustive scan") {
  auto sp = build_space(su_torus(4));
  auto poset = enumerate_intermediate(sp);
  for (const auto& n : poset.nodes) {
    bool minimal = true;
    for (const auto& m : poset.nodes)
      if (m.id != n.id && poset.leq(m.id, n.id)) minimal = false;
    CHECK(n.minimal == minimal);
  }
}

TEST_CASE("product space nodes") {
  SpaceConfig cfg;
  cfg.ambient = {{Family::SpecialUnitary, 3}, {Family::SpecialUnitary, 3}};
  cfg.kind = SubgroupKind::MaximalTorus;
  auto sp = build_space(cfg);
  REQUIRE(sp.ell() == 6);
  auto poset = enumerate_intermediate(sp);
  // 5 closed sets per factor (including empty and full), minus bottom and top
  CHECK(poset.nodes.size() == 23);
  // every node restricts to a closed set in each factor
  std::uint32_t firstFactor = 0;
  for (int i = 0; i < sp.ell(); ++i) {
    // summand belongs to factor 0 iff its basis columns live in the first block
    int col = sp.summands[i].basisColumns[0];
    Eigen::VectorXd v = sp.mBasis.col(col);
    double headNorm = 0;
    for (int a = 0; a < sp.g.dim; ++a)
      if (sp.g.support[a][0] == 0) headNorm += v[a] * v[a];
    if (headNorm > 0.5) firstFactor |= (1u << i);
  }
  CHECK(int(std::popcount(firstFactor)) == 3);
  for (const auto& n : poset.nodes) {
    std::uint32_t a = n.mask & firstFactor, b = n.mask & ~firstFactor;
    auto partOk = [&](std::uint32_t part, std::uint32_t whole) {
      int c = std::popcount(part);
      return c == 0 || c == 1 || part == whole;  // empty, a u(2), or the full factor
    };
    CHECK(partOk(a, firstFactor));
    CHECK(partOk(b, (~firstFactor) & ((1u << 6) - 1)));
  }
}

TEST_CASE("torus adjunction") {
  // equal rank: unchanged
  auto sp3 = build_space(su_torus(3));
  auto adj3 = adjoin_maximal_torus(sp3);
  CHECK(adj3.adjoinedDim == 0);
  CHECK(adj3.quotient.ell() == sp3.ell());

  // SU(3)/S^1_{1,1} -> SU(3)/T^2
  SpaceConfig aw;
  aw.ambient = {{Family::SpecialUnitary, 3}};
  aw.kind = SubgroupKind::TorusSlope;
  aw.slope = {1, 1, -2};
  auto spAW = build_space(aw);
  CHECK_FALSE(spAW.multiplicityFree);
  CHECK(spAW.m0Index.size() == 3);  // su(2)-block worth of trivial lines
  auto adj = adjoin_maximal_torus(spAW);
  CHECK(adj.adjoinedDim == 1);
  CHECK(adj.quotient.dimH() == 2);
  CHECK(adj.quotient.ell() == 3);
  for (const auto& s : adj.quotient.summands) CHECK(s.d == 2);
  CHECK(adj.quotient.multiplicityFree);
  auto qPoset = enumerate_intermediate(adj.quotient);
  CHECK(qPoset.nodes.size() == 3);
  // refined presentation of G/H itself: 4 Ad(AH)-isotypical summands
  CHECK(adj.refined.dimH() == 1);
  CHECK(adj.refined.ell() == 4);
  CHECK(adj.refined.multiplicityFree);
  CHECK(adj.refined.dimM() == 7);

  // (SU(2)xSU(2))/S^1_{1,2} -> T^2 quotient
  SpaceConfig cfg;
  cfg.ambient = {{Family::SpecialUnitary, 2}, {Family::SpecialUnitary, 2}};
  cfg.kind = SubgroupKind::TorusSlope;
  cfg.slope = {1, -1, 2, -2};
  auto sp = build_space(cfg);
  auto a2 = adjoin_maximal_torus(sp);
  CHECK(a2.adjoinedDim == 1);
  CHECK(a2.quotient.ell() == 2);
  CHECK(a2.quotient.dimH() == 2);
}

TEST_CASE("slope circle in an odd orthogonal group") {
  // SO(5)/S^1_{(1,2)}: the short root e_1 and the long root e_1 - e_2 carry
  // the same circle weight, so the raw space is not multiplicity-free; the
  // adjoined quotient is SO(5)/T^2 with its five-node lattice
  SpaceConfig cfg;
  cfg.ambient = {{Family::SpecialOrthogonal, 5}};
  cfg.kind = SubgroupKind::TorusSlope;
  cfg.slope = {1, 2};
  auto sp = build_space(cfg);
  CHECK_FALSE(sp.multiplicityFree);
  REQUIRE(sp.m0Index.size() == 1);
  auto adj = adjoin_maximal_torus(sp);
  CHECK(adj.adjoinedDim == 1);
  CHECK_FALSE(adj.quotientIsFullGroup);
  CHECK(adj.quotient.ell() == 4);  // B_2 root spaces
  CHECK(adj.quotient.multiplicityFree);
  auto poset = enumerate_intermediate(adj.quotient);
  CHECK(poset.nodes.size() == 5);
  auto cx = flag_complex(poset);
  auto h = homology(cx);
  CHECK(h.bettiAt(0) == 2);
  CHECK(adj.refined.multiplicityFree);
  CHECK(adj.refined.ell() == 5);  // four root pieces + the a-line
}

TEST_CASE("flat torus adjunction degenerates gracefully") {
  SpaceConfig cfg;
  cfg.ambient = {{Family::Unitary, 1}, {Family::Unitary, 1}};
  cfg.kind = SubgroupKind::Trivial;
  auto sp = build_space(cfg);
  REQUIRE(sp.ell() == 2);
  auto adj = adjoin_maximal_torus(sp);
  CHECK(adj.quotientIsFullGroup);

  // a circle inside the torus acts trivially: rejected as not effective
  SpaceConfig slope;
  slope.ambient = {{Family::Unitary, 1}, {Family::Unitary, 1}};
  slope.kind = SubgroupKind::TorusSlope;
  slope.slope = {1, 2};
  try {
    build_space(slope);
    FAIL("expected NotEffective");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotEffective);
  }
}

TEST_CASE("A3 = D3: su(4) and so(6) torus quotients match") {
  SpaceConfig suCfg;
  suCfg.ambient = {{Family::SpecialUnitary, 4}};
  suCfg.kind = SubgroupKind::MaximalTorus;
  auto su4 = build_space(suCfg);
  SpaceConfig soCfg;
  soCfg.ambient = {{Family::SpecialOrthogonal, 6}};
  soCfg.kind = SubgroupKind::MaximalTorus;
  auto so6 = build_space(soCfg);
  REQUIRE(su4.ell() == 6);
  REQUIRE(so6.ell() == 6);
  auto p1 = enumerate_intermediate(su4);
  auto p2 = enumerate_intermediate(so6);
  CHECK(p1.nodes.size() == 13);
  CHECK(p2.nodes.size() == 13);
  auto h1 = homology(flag_complex(p1));
  auto h2 = homology(flag_complex(p2));
  CHECK(h1.betti == h2.betti);  // the partition lattice profile (0, 6)
  CHECK(h1.bettiAt(0) == 0);
  CHECK(h1.bettiAt(1) == 6);
  // the block torus SO(2)^3 is the same subgroup as the maximal torus
  SpaceConfig blockCfg;
  blockCfg.ambient = {{Family::SpecialOrthogonal, 6}};
  blockCfg.kind = SubgroupKind::BlockProduct;
  blockCfg.blocks = {{Family::SpecialOrthogonal, 2},
                     {Family::SpecialOrthogonal, 2},
                     {Family::SpecialOrthogonal, 2}};
  auto blocks = build_space(blockCfg);
  auto p3 = enumerate_intermediate(blocks);
  CHECK(p3.nodes.size() == 13);
  CHECK(homology(flag_complex(p3)).betti == h1.betti);
}

TEST_CASE("C2 = B2: sp(2) and so(5) torus quotients match") {
  SpaceConfig spCfg;
  spCfg.ambient = {{Family::Symplectic, 2}};
  spCfg.kind = SubgroupKind::MaximalTorus;
  auto sp2 = build_space(spCfg);
  SpaceConfig soCfg;
  soCfg.ambient = {{Family::SpecialOrthogonal, 5}};
  soCfg.kind = SubgroupKind::MaximalTorus;
  auto so5 = build_space(soCfg);
  REQUIRE(sp2.ell() == 4);
  REQUIRE(so5.ell() == 4);
  auto p1 = enumerate_intermediate(sp2);
  auto p2 = enumerate_intermediate(so5);
  CHECK(p1.nodes.size() == 5);
  CHECK(p2.nodes.size() == 5);
  auto h1 = homology(flag_complex(p1));
  auto h2 = homology(flag_complex(p2));
  CHECK(h1.betti == h2.betti);
  CHECK(h1.bettiAt(0) == 2);
  // the two exceptional-isomorphic spaces carry the same Einstein counts
  SearchOptions so1, so2;
  so1.poset = &p1;
  so2.poset = &p2;
  CHECK(find_einstein(sp2, so1).size() == find_einstein(so5, so2).size());
}

TEST_CASE("multiplicity refusal names the equivalent summands") {
  SpaceConfig cfg;
  cfg.ambient = {{Family::SpecialOrthogonal, 5}};
  cfg.kind = SubgroupKind::BlockProduct;
  cfg.blocks = {{Family::SpecialOrthogonal, 3}};
  auto sp = build_space(cfg);
  try {
    enumerate_intermediate(sp);
    FAIL("expected MultiplicityNotFree");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MultiplicityNotFree);
    CHECK(std::string(e.what()).find("{1,2}") != std::string::npos);
  }
}
