#include <gtest/gtest.h>

#include <cmath>

#include "rrgg/properties.hpp"
#include "rrgg/ugly_cover.hpp"
#include "support/fixtures.hpp"

using namespace rrgg;

namespace {

struct Expect {
  const char* name;
  bool pass;
  double value;
};

}  // namespace

// Hand evaluation of the fixture (see support/fixtures.hpp), n = 20:
//   P1  largest cell 3 > ln 20 = 2.996                        fail
//   P2  3 bad cells <= 20^0.95 = 17.2                         pass
//   P3  7 ugly cells > 20^(0.1^0.5) = 2.58                    fail
//   P4  max degree 10 (K11) <= 4 ln 20 = 11.98                pass
//   L3a 2 non-rainbow cells <= (ln 20)^4                      pass
//   L3b worst in-cell colour multiplicity 2                   pass
//   L3c Z is non-rainbow and outside the giant                fail
//   L3d Z lies 0.08 from the boundary, closer than 10 r = 2   fail
//   L3e C4, C6, C7 are bad and touch non-rainbow C1           fail
TEST(Properties, FixtureMatchesHandEvaluation) {
  const auto f = fixture::property_fixture();
  const auto rep = check_properties(f.graph, f.grid, f.cells, f.coloring, PathCover{},
                                    PropertyParams{fixture::kEpsilon, 200, 3.0});
  const Expect table[] = {
      {"P1", false, 3.0},  {"P2", true, 3.0},   {"P3", false, 7.0},  {"P4", true, 10.0}, {"L3a", true, 2.0},
      {"L3b", true, 2.0},  {"L3c", false, 2.0}, {"L3d", false, 0.08}, {"L3e", false, 0.0},
  };
  for (const auto& e : table) {
    const auto* c = rep.find(e.name);
    ASSERT_NE(c, nullptr) << e.name;
    EXPECT_EQ(c->pass, e.pass) << e.name;
    EXPECT_NEAR(c->value, e.value, 1e-12) << e.name;
    EXPECT_EQ(c->witness.empty(), c->pass) << e.name;
  }
  EXPECT_NEAR(rep.find("P1")->bound, std::log(20.0), 1e-12);
  EXPECT_NEAR(rep.find("P2")->bound, std::pow(20.0, 0.95), 1e-9);
  EXPECT_NEAR(rep.find("P3")->bound, std::pow(20.0, std::sqrt(0.1)), 1e-9);
  EXPECT_NEAR(rep.find("P4")->bound, 4.0 * std::log(20.0), 1e-12);
}

TEST(Properties, PathChecksOnFixture) {
  const auto f = fixture::property_fixture();
  const auto rep = check_properties(f.graph, f.grid, f.cells, f.coloring, PathCover{}, PropertyParams{0.1, 200, 3.0});
  EXPECT_FALSE(rep.passed("Q1"));  // nothing covers the ugly vertices
  EXPECT_TRUE(rep.passed("Q2"));
  EXPECT_TRUE(rep.passed("Q4"));
  EXPECT_TRUE(rep.passed("Q6"));
  EXPECT_TRUE(rep.passed("L5"));
  EXPECT_EQ(rep.failures(), (std::vector<std::string>{"P1", "P3", "L3c", "L3d", "L3e", "Q1"}));
}

TEST(Properties, L6CountsForbiddenIncidences) {
  const auto f = fixture::property_fixture();
  // Nearly every K11 edge touches a bad vertex, so good cells see many B1
  // incidences.
  const auto strict = check_properties(f.graph, f.grid, f.cells, f.coloring, PathCover{}, PropertyParams{0.1, 1, 3.0});
  EXPECT_FALSE(strict.passed("L6"));
  const auto loose = check_properties(f.graph, f.grid, f.cells, f.coloring, PathCover{}, PropertyParams{0.1, 1000, 3.0});
  EXPECT_TRUE(loose.passed("L6"));
}

TEST(Properties, CoverChecks) {
  const auto f = fixture::property_fixture();
  PathCover cover;
  // C6 - C5 - C4 anchored at good cell C2: C5 is not adjacent to C2 but the
  // terminals are.
  cover.paths.push_back({9, 8, 7});
  const std::vector<long> c2 = {26, 25};
  cover.anchors.push_back(*f.grid.find(c2));
  const auto rep = check_properties(f.graph, f.grid, f.cells, f.coloring, cover, PropertyParams{0.1, 200, 3.0});
  EXPECT_TRUE(rep.passed("Q2"));
  EXPECT_TRUE(rep.passed("Q4"));
  EXPECT_TRUE(rep.passed("L5"));
  EXPECT_EQ(rep.find("Q6")->value, 2.0);
  EXPECT_TRUE(rep.passed("Q5"));  // a single path has no partner

  cover.paths.push_back({0, 3});
  cover.anchors.push_back(*f.grid.find(c2));
  const auto two = check_properties(f.graph, f.grid, f.cells, f.coloring, cover, PropertyParams{0.1, 200, 3.0});
  EXPECT_FALSE(two.passed("Q5"));
  EXPECT_FALSE(two.passed("Q6"));  // 3 edges > 20^0.316
}
