#include <gtest/gtest.h>

#include <sstream>

#include "rrgg/io.hpp"
#include "support/fixtures.hpp"

using namespace rrgg;

TEST(Io, GraphDumpRoundTripsExactly) {
  const auto pts = sample_points(RggConfig{120, 3, kInfNorm, 17});
  const auto g = build_rgg(pts, 0.2, kInfNorm);
  std::ostringstream os;
  write_graph(os, g, 17);
  std::istringstream is(os.str());
  const auto dump = read_graph_dump(is);
  EXPECT_EQ(dump.seed, 17U);
  EXPECT_EQ(dump.graph.points().coords(), g.points().coords());
  EXPECT_EQ(dump.graph.edges(), g.edges());
  EXPECT_EQ(dump.graph.radius(), g.radius());
  EXPECT_TRUE(std::isinf(dump.graph.p_norm()));
  EXPECT_FALSE(dump.coloring.has_value());
}

TEST(Io, ColoringAppendsToDump) {
  const auto pts = sample_points(RggConfig{60, 2, 2.0, 2});
  const auto g = build_rgg(pts, 0.3, 2.0);
  Rng rng(2);
  const auto col = color_edges(g, make_palette(60, 0.5), rng);
  std::ostringstream os;
  write_graph(os, g, 2);
  write_coloring(os, g, col);
  std::istringstream is(os.str());
  const auto dump = read_graph_dump(is);
  ASSERT_TRUE(dump.coloring.has_value());
  EXPECT_EQ(dump.coloring->colors(), col.colors());
  EXPECT_EQ(dump.graph.num_edges(), g.num_edges());
}

TEST(Io, HeaderFormat) {
  const auto g = build_rgg(PointSet(2, {0.25, 0.5, 0.75, 0.5}), 0.6, 2.0);
  std::ostringstream os;
  write_graph(os, g, 9);
  EXPECT_EQ(os.str(), "2 2 2 0.59999999999999998 9\n0.25 0.5\n0.75 0.5\n0 1\n");
}

TEST(Io, ClassificationLines) {
  const auto f = fixture::property_fixture();
  std::ostringstream os;
  write_classification(os, f.grid, f.cells);
  std::istringstream is(os.str());
  std::string line;
  std::size_t lines = 0, points = 0;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    long i = 0, j = 0;
    std::string cls;
    std::size_t count = 0;
    ASSERT_TRUE(ls >> i >> j >> cls >> count) << line;
    EXPECT_TRUE(cls == "GOOD" || cls == "BAD" || cls == "UGLY") << cls;
    points += count;
    ++lines;
  }
  EXPECT_EQ(lines, 13U);
  EXPECT_EQ(points, 20U);
  EXPECT_NE(os.str().find("26 25 GOOD 2\n"), std::string::npos);
  EXPECT_NE(os.str().find("25 25 BAD 3\n"), std::string::npos);
}

TEST(Io, CycleRoundTrip) {
  const auto f = fixture::complete_graph(5, {});
  const std::vector<Vertex> cyc = {0, 3, 1, 4, 2};
  std::ostringstream os;
  write_cycle(os, f.graph, f.coloring, cyc);
  std::istringstream is(os.str());
  EXPECT_EQ(read_cycle(is), cyc);
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(Io, ParseErrors) {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_graph_dump(is);
  };
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("2 2 2 0.5\n"), ParseError);
  EXPECT_THROW(parse("2 2 2 0.5 1\n0.1 0.1\n"), ParseError);
  EXPECT_THROW(parse("2 2 2 0.5 1\n0.1 0.1\n0.2 x\n"), ParseError);
  EXPECT_THROW(parse("2 2 2 0.5 1\n0.1 0.1\n0.2 0.2\n0 5\n"), ParseError);
  EXPECT_THROW(parse("3 2 2 0.5 1\n0.1 0.1\n0.2 0.2\n0.3 0.3\n0 1 4\n1 2\n"), ParseError);
  EXPECT_NO_THROW(parse("# comment\n2 2 2 0.5 1\n0.1 0.1\n\n0.2 0.2\n0 1\n"));

  std::istringstream broken("0 1 5\n2 0 6\n");
  EXPECT_THROW(read_cycle(broken), ParseError);
  std::istringstream open("0 1 5\n1 2 6\n");
  EXPECT_THROW(read_cycle(open), ParseError);
}

TEST(Io, DiagnosticsJson) {
  Diagnostics d;
  d.phase = Phase::Good;
  d.reason = "BOOTSTRAP_FAILURE";
  d.witness = "cell 3";
  d.timings_ms = {{"classify", 1.5}};
  const auto j = to_json(d);
  EXPECT_EQ(j["phase"], "GOOD_PHASE");
  EXPECT_EQ(j["reason"], "BOOTSTRAP_FAILURE");
  EXPECT_EQ(j["witness"], "cell 3");
  EXPECT_TRUE(j["counters"].contains("claimA_max"));
  EXPECT_EQ(j["timings_ms"]["classify"], 1.5);

  const auto f = fixture::complete_graph(4, {{{0, 1}, 1}, {{1, 2}, 1}});
  const std::vector<Vertex> cyc = {0, 1, 2, 3};
  const auto rj = to_json(verify_cycle(f.graph, f.coloring, cyc));
  EXPECT_FALSE(rj["passes"].get<bool>());
  EXPECT_EQ(rj["duplicate_colors"].size(), 1U);
}

TEST(Io, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(parse_double(format_double(0.1)), 0.1);
  EXPECT_EQ(format_double(kInfNorm), "inf");
  EXPECT_TRUE(std::isinf(parse_double("inf")));
  EXPECT_THROW(parse_double("1.5x"), ParseError);
}
