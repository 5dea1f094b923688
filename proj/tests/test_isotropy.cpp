#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nerve/isotropy.hpp>

using namespace nerve;

namespace {

SpaceConfig single(Family f, int n, SubgroupKind kind) {
  SpaceConfig cfg;
  cfg.ambient = {{f, n}};
  cfg.kind = kind;
  return cfg;
}

SpaceConfig blocks(Family f, int n, std::vector<BlockSpec> bs) {
  SpaceConfig cfg;
  cfg.ambient = {{f, n}};
  cfg.kind = SubgroupKind::BlockProduct;
  cfg.blocks = std::move(bs);
  return cfg;
}

// spaces with semisimple ambient (finite fundamental group)
std::vector<SpaceConfig> corpus() {
  std::vector<SpaceConfig> out;
  out.push_back(single(Family::SpecialUnitary, 2, SubgroupKind::MaximalTorus));
  out.push_back(single(Family::SpecialUnitary, 3, SubgroupKind::MaximalTorus));
  out.push_back(single(Family::SpecialUnitary, 4, SubgroupKind::MaximalTorus));
  out.push_back(single(Family::SpecialUnitary, 5, SubgroupKind::MaximalTorus));
  out.push_back(blocks(Family::SpecialUnitary, 3, {{Family::Unitary, 1}, {Family::Unitary, 2}}));
  out.push_back(blocks(Family::SpecialUnitary, 4, {{Family::Unitary, 2}, {Family::Unitary, 2}}));
  out.push_back(blocks(Family::SpecialUnitary, 5, {{Family::Unitary, 2}, {Family::Unitary, 3}}));
  out.push_back(single(Family::SpecialOrthogonal, 4, SubgroupKind::MaximalTorus));
  out.push_back(blocks(Family::SpecialOrthogonal, 4, {{Family::SpecialOrthogonal, 3}}));
  out.push_back(blocks(Family::SpecialOrthogonal, 5, {{Family::SpecialOrthogonal, 2}, {Family::SpecialOrthogonal, 3}}));
  out.push_back(blocks(Family::SpecialOrthogonal, 5, {{Family::SpecialOrthogonal, 3}}));
  out.push_back(blocks(Family::SpecialOrthogonal, 6, {{Family::Unitary, 3}}));
  out.push_back(blocks(Family::SpecialOrthogonal, 6, {{Family::SpecialOrthogonal, 3}, {Family::SpecialOrthogonal, 3}}));
  out.push_back(single(Family::SpecialOrthogonal, 6, SubgroupKind::MaximalTorus));
  out.push_back(blocks(Family::SpecialOrthogonal, 7, {{Family::SpecialOrthogonal, 3}, {Family::SpecialOrthogonal, 4}}));
  out.push_back(blocks(Family::SpecialOrthogonal, 8, {{Family::Unitary, 2}, {Family::SpecialOrthogonal, 4}}));
  out.push_back(blocks(Family::SpecialOrthogonal, 8, {{Family::Unitary, 4}}));
  out.push_back(blocks(Family::SpecialOrthogonal, 8, {{Family::SpecialOrthogonal, 3}, {Family::SpecialOrthogonal, 5}}));
  out.push_back(single(Family::Symplectic, 1, SubgroupKind::MaximalTorus));
  out.push_back(blocks(Family::Symplectic, 2, {{Family::Symplectic, 1}, {Family::Symplectic, 1}}));
  out.push_back(blocks(Family::Symplectic, 2, {{Family::Unitary, 1}, {Family::Symplectic, 1}}));
  out.push_back(blocks(Family::Symplectic, 2, {{Family::Unitary, 2}}));
  out.push_back(blocks(Family::Symplectic, 3, {{Family::Symplectic, 1}, {Family::Symplectic, 2}}));
  out.push_back(blocks(Family::Symplectic, 3, {{Family::Unitary, 1}, {Family::Symplectic, 2}}));
  out.push_back(single(Family::SpecialOrthogonal, 7, SubgroupKind::MaximalTorus));  // B3 roots
  out.push_back(single(Family::Symplectic, 3, SubgroupKind::MaximalTorus));         // C3 roots
  out.push_back(blocks(Family::SpecialOrthogonal, 8, {{Family::Unitary, 2}, {Family::Unitary, 2}}));
  return out;
}

}  // namespace

TEST_CASE("SU(3)/T^2 root space decomposition") {
  auto sp = build_space(single(Family::SpecialUnitary, 3, SubgroupKind::MaximalTorus));
  CHECK(sp.ell() == 3);
  CHECK(sp.m0Index.empty());
  CHECK(sp.multiplicityFree);
  for (const auto& s : sp.summands) {
    CHECK(s.d == 2);
    CHECK(s.b == doctest::Approx(12.0));
    CHECK(s.c > 0);
  }
  for (int i = 0; i < 3; ++i) CHECK(casimir_identity_residual(sp, i) < 1e-10);
  // [ijk] > 0 exactly for {i,j,k} = {1,2,3}
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        bool allDistinct = i != j && j != k && i != k;
        if (allDistinct)
          CHECK(sp.T(i, j, k) == doctest::Approx(4.0));
        else
          CHECK(sp.T(i, j, k) == doctest::Approx(0.0));
      }
}

TEST_CASE("SO(5)/SO(3): m_0 = so(2) plus two equivalent summands") {
  auto sp = build_space(blocks(Family::SpecialOrthogonal, 5, {{Family::SpecialOrthogonal, 3}}));
  CHECK(sp.ell() == 3);
  CHECK_FALSE(sp.multiplicityFree);
  REQUIRE(sp.m0Index.size() == 1);
  CHECK(sp.summands[sp.m0Index[0]].d == 1);
  int threes = 0;
  for (const auto& s : sp.summands)
    if (s.d == 3) ++threes;
  CHECK(threes == 2);
  CHECK(sp.summands[1].isotypeTag == sp.summands[2].isotypeTag);
}

TEST_CASE("SO(4)/SO(3) is isotropy irreducible") {
  auto sp = build_space(blocks(Family::SpecialOrthogonal, 4, {{Family::SpecialOrthogonal, 3}}));
  CHECK(sp.ell() == 1);
  CHECK(sp.summands[0].d == 3);
}

TEST_CASE("torus quotient has vanishing structure constants") {
  SpaceConfig cfg;
  cfg.ambient = {{Family::Unitary, 1}, {Family::Unitary, 1}};
  cfg.kind = SubgroupKind::Trivial;
  auto sp = build_space(cfg);
  CHECK(sp.ell() == 2);
  for (double t : sp.tripleTensor) CHECK(t == 0.0);
  for (const auto& s : sp.summands) {
    CHECK(s.b == doctest::Approx(0.0));
    CHECK(s.c == doctest::Approx(0.0));
  }
}

TEST_CASE("section 6.1 block family closed forms") {
  for (auto [n, n1, n2] : {std::array<int, 3>{4, 2, 2}, std::array<int, 3>{5, 2, 3}}) {
    auto sp = build_space(
        blocks(Family::SpecialOrthogonal, 2 * n, {{Family::Unitary, n1}, {Family::SpecialOrthogonal, 2 * n2}}));
    REQUIRE(sp.ell() == 2);
    CHECK(sp.summands[0].d == n1 * (n1 - 1));
    CHECK(sp.summands[1].d == 4 * n1 * n2);
    CHECK(sp.summands[0].b == doctest::Approx(4.0 * (n - 1)).epsilon(1e-10));
    CHECK(sp.summands[1].b == doctest::Approx(4.0 * (n - 1)).epsilon(1e-10));
    CHECK(sp.T(0, 1, 1) == doctest::Approx(4.0 * n1 * (n1 - 1) * n2).epsilon(1e-10));
    CHECK(sp.T(0, 0, 1) == doctest::Approx(0.0));
  }
}

TEST_CASE("structural invariants across the corpus") {
  for (const auto& cfg : corpus()) {
    auto sp = build_space(cfg);
    INFO(sp.label);
    // Q(h,m) = 0, dimension split
    if (sp.dimH() > 0) CHECK((sp.hBasis.transpose() * sp.mBasis).norm() < 1e-10);
    CHECK(sp.dimH() + sp.dimM() == sp.g.dim);
    // summand orthonormality
    Eigen::MatrixXd gram = sp.mBasis.transpose() * sp.mBasis;
    CHECK((gram - Eigen::MatrixXd::Identity(sp.dimM(), sp.dimM())).norm() < 1e-9);
    // [h, m_i] in m_i
    for (const auto& s : sp.summands) {
      Eigen::MatrixXd cols(sp.g.dim, s.d);
      for (int j = 0; j < s.d; ++j) cols.col(j) = sp.mBasis.col(s.basisColumns[j]);
      for (int a = 0; a < sp.dimH(); ++a) {
        Eigen::MatrixXd img = sp.g.ad(sp.hBasis.col(a)) * cols;
        CHECK((img - cols * (cols.transpose() * img)).norm() < 1e-9 * (1 + img.norm()));
      }
    }
    // [ijk] symmetric, nonnegative
    const int l = sp.ell();
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j)
        for (int k = 0; k < l; ++k) {
          CHECK(sp.T(i, j, k) >= 0.0);
          CHECK(sp.T(i, j, k) == doctest::Approx(sp.T(j, i, k)).epsilon(1e-9));
          CHECK(sp.T(i, j, k) == doctest::Approx(sp.T(i, k, j)).epsilon(1e-9));
        }
    // m_0 = exactly the c_i = 0 summands
    for (const auto& s : sp.summands) {
      bool inM0 = std::find(sp.m0Index.begin(), sp.m0Index.end(), s.index) != sp.m0Index.end();
      CHECK(inM0 == (s.c < 1e-7));
    }
    // Lemma 1.5 residual and positivity (all corpus members have finite pi_1)
    for (int i = 0; i < l; ++i) {
      CHECK(casimir_identity_residual(sp, i) < 1e-8);
      double tsum = 0;
      for (int j = 0; j < l; ++j)
        for (int k = 0; k < l; ++k) tsum += sp.T(i, j, k);
      CHECK(sp.summands[i].d * sp.summands[i].b - 0.5 * tsum > 0.0);
    }
  }
}

TEST_CASE("m_0 is a subalgebra") {
  auto sp = build_space(blocks(Family::SpecialOrthogonal, 7, {{Family::SpecialOrthogonal, 3}}));
  REQUIRE(!sp.m0Index.empty());
  std::vector<int> cols;
  for (int i : sp.m0Index)
    for (int c : sp.summands[i].basisColumns) cols.push_back(c);
  // [m_0, m_0] lands in h + m_0
  Eigen::MatrixXd hm0(sp.g.dim, sp.dimH() + cols.size());
  hm0.leftCols(sp.dimH()) = sp.hBasis;
  for (std::size_t j = 0; j < cols.size(); ++j) hm0.col(sp.dimH() + j) = sp.mBasis.col(cols[j]);
  for (std::size_t a = 0; a < cols.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) {
      Eigen::VectorXd z = bracket(sp.g, sp.mBasis.col(cols[a]), sp.mBasis.col(cols[b]));
      CHECK((z - hm0 * (hm0.transpose() * z)).norm() < 1e-9);
    }
}

TEST_CASE("qScale covariance") {
  auto base = single(Family::SpecialUnitary, 3, SubgroupKind::MaximalTorus);
  auto scaled = base;
  scaled.qScale = 0.3;
  auto sp1 = build_space(base), sp2 = build_space(scaled);
  double ratio = 0.5 / 0.3;
  for (int i = 0; i < 3; ++i) {
    CHECK(sp2.summands[i].b == doctest::Approx(sp1.summands[i].b * ratio).epsilon(1e-9));
    CHECK(sp2.summands[i].c == doctest::Approx(sp1.summands[i].c * ratio).epsilon(1e-9));
    CHECK(casimir_identity_residual(sp2, i) < 1e-8);
  }
  CHECK(sp2.T(0, 1, 2) == doctest::Approx(sp1.T(0, 1, 2) * ratio).epsilon(1e-9));
}

TEST_CASE("error paths") {
  // h = g
  CHECK_THROWS_AS(build_space(single(Family::Unitary, 1, SubgroupKind::MaximalTorus)), Error);
  // h contains a factor = an ideal of g
  SpaceConfig bad;
  bad.ambient = {{Family::SpecialUnitary, 2}, {Family::SpecialUnitary, 2}};
  bad.kind = SubgroupKind::BlockProduct;
  bad.blocks = {{Family::Unitary, 2}};
  CHECK_THROWS_AS(build_space(bad), Error);
  // summand cap
  auto capped = single(Family::SpecialUnitary, 3, SubgroupKind::MaximalTorus);
  capped.maxSummands = 2;
  CHECK_THROWS_AS(build_space(capped), Error);
  // zero slope
  auto slope = single(Family::SpecialUnitary, 3, SubgroupKind::TorusSlope);
  slope.slope = {0, 0, 0};
  CHECK_THROWS_AS(build_space(slope), Error);
  // su slope must balance
  slope.slope = {1, 1, 1};
  CHECK_THROWS_AS(build_space(slope), Error);
}

TEST_CASE("two unitary blocks in an orthogonal ambient") {
  auto sp = build_space(blocks(Family::SpecialOrthogonal, 8, {{Family::Unitary, 2}, {Family::Unitary, 2}}));
  CHECK(sp.ell() == 4);  // two Lambda^2 pieces and two cross pieces
  CHECK(sp.multiplicityFree);
  CHECK(sp.dimM() == 20);
  int twos = 0, eights = 0;
  for (const auto& s : sp.summands) {
    if (s.d == 2) ++twos;
    if (s.d == 8) ++eights;
  }
  CHECK(twos == 2);
  CHECK(eights == 2);
}

TEST_CASE("summand constants accessor") {
  auto sp = build_space(blocks(Family::SpecialOrthogonal, 8, {{Family::Unitary, 2}, {Family::SpecialOrthogonal, 4}}));
  auto sc = summand_constants(sp);
  CHECK(sc.d == std::vector<int>{2, 16});
  CHECK(structure_tensor(sp).size() == 8);
}
