#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "fractherm/io.hpp"
#include "random_problems.hpp"

namespace fractherm {
namespace {

constexpr const char* kGood = R"(# sample
alpha = 0.25
lambda = 0.005764
T = 1
f.kind = affine-clamped
f.params = 1, 0.5
f.L = 0.5
f.c1 = 0.5
f.c2 = 1.5
h.kind = constant
h.params = 0.2
mesh.n = 256
mesh.grading = 2
)";

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos);
  return text.replace(pos, from.size(), to);
}

int error_line(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

TEST(ParseProblem, ReadsAllFields) {
  const auto f = parse_problem(std::string(kGood));
  EXPECT_EQ(f.problem.alpha(), 0.25);
  EXPECT_EQ(f.problem.lambda, 0.005764);
  EXPECT_EQ(f.problem.f.kind(), ConductivityKind::affine_clamped);
  EXPECT_EQ(f.problem.f.params(), (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(f.problem.f.c2(), 1.5);
  EXPECT_EQ(f.problem.h(0.3), 0.2);
  EXPECT_EQ(f.mesh_n, 256u);
  EXPECT_EQ(f.mesh_grading, 2.0);
}

TEST(ParseProblem, OptionalKeysDefault) {
  const std::string text = "alpha = 0.1\nlambda = 1\nT = 2\nf.kind = constant\nf.params = 3\n"
                           "f.L = 0\nf.c1 = 3\nf.c2 = 3\n";
  const auto f = parse_problem(text);
  EXPECT_EQ(f.problem.h.kind(), SourceKind::zero);
  EXPECT_EQ(f.mesh_n, 512u);
  EXPECT_EQ(f.mesh_grading, 1.0);
}

TEST(ParseProblem, ErrorsCarryLineNumbers) {
  const std::string good(kGood);
  EXPECT_EQ(error_line(replace_line(good, "alpha = 0.25", "alpha = 0.7")), 2);
  EXPECT_EQ(error_line(replace_line(good, "lambda = 0.005764", "lambda = abc")), 3);
  EXPECT_EQ(error_line(replace_line(good, "lambda = 0.005764", "lambda = -1")), 3);
  EXPECT_EQ(error_line(replace_line(good, "T = 1", "T = 0")), 4);
  EXPECT_EQ(error_line(replace_line(good, "f.kind = affine-clamped", "f.kind = cubic")), 5);
  EXPECT_EQ(error_line(replace_line(good, "f.params = 1, 0.5", "f.params = 1, x")), 6);
  EXPECT_EQ(error_line(replace_line(good, "f.L = 0.5", "f.L = 0.1")), 5);  // Lipschitz spot check
  EXPECT_EQ(error_line(replace_line(good, "h.kind = constant", "h.kind = zero")), 10);
  EXPECT_EQ(error_line(replace_line(good, "mesh.n = 256", "mesh.n = 0")), 12);
  EXPECT_EQ(error_line(replace_line(good, "mesh.grading = 2", "mesh.grading = 0.5")), 13);
  EXPECT_EQ(error_line(good + "colour = red\n"), 14);
  EXPECT_EQ(error_line(good + "alpha = 0.2\n"), 14);
  EXPECT_EQ(error_line(good + "no equals sign\n"), 14);
  EXPECT_EQ(error_line(replace_line(good, "f.c2 = 1.5\n", "")), 13);  // missing key reported at end
}

TEST(ParseProblem, MessageNamesTheLine) {
  try {
    parse_problem(std::string(kGood) + "bogus = 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 14"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

TEST(ParseProblem, RoundTripsThroughFormat) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const ProblemFile f{testing::random_problem(seed), 100 + seed, 1.0 + 0.01 * static_cast<double>(seed)};
    EXPECT_EQ(parse_problem(format_problem(f)), f) << "seed " << seed;
  }
}

TEST(ParseProblem, ReportReparsesToProblem) {
  const auto f = parse_problem(std::string(kGood));
  ReportWriter w;
  w.comment("header");
  write_problem_section(w, f);
  w.section("solve").field("converged", true).field("alpha", 0.3);
  EXPECT_EQ(parse_problem(w.str()), f);
}

TEST(FormatReal, SeventeenDigits) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(1.0), "1");
  EXPECT_EQ(detail::to_real(format_real(M_PI)), M_PI);
}

TEST(SolutionCsv, RoundTrips) {
  const auto m = make_mesh(1.0, 5, 2.0);
  const auto u = GridFunction::sample(m, [](double t) { return std::sin(t) / 3.0; });
  const std::string csv = solution_csv(u);
  EXPECT_EQ(csv.substr(0, 4), "t,u\n");
  std::istringstream in(csv);
  const auto rows = read_solution_csv(in);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_EQ(rows[k].first, m->node(k));
    EXPECT_EQ(rows[k].second, u[k]);
  }
  std::istringstream bad("t,u\n0,1\n0.5;2\n");
  EXPECT_THROW(read_solution_csv(bad), ParseError);
}

}  // namespace
}  // namespace fractherm
