#include "owlreg/cli.hpp"
#include "owlreg/experiment.hpp"
#include "owlreg/io.hpp"
#include "owlreg/weight_spec.hpp"

#include "owl/datagen.hpp"
#include "owl/norm.hpp"
#include "owl/solvers.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

namespace owlreg {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("owlreg_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    write_text_file(dir_ / name, text);
  }

  fs::path dir_;
};

TEST(Io, ParsesVectorsAsRowOrColumn) {
  EXPECT_EQ(parse_vector_csv("1,2,3"), (owl::Vector(3) << 1, 2, 3).finished());
  EXPECT_EQ(parse_vector_csv("1\n2\n3\n"), (owl::Vector(3) << 1, 2, 3).finished());
  EXPECT_THROW(parse_vector_csv("1,2\n3,4"), ParseError);
  EXPECT_THROW(parse_matrix_csv("1,2\n3"), ParseError);
  EXPECT_THROW(parse_matrix_csv(""), ParseError);
  EXPECT_THROW(parse_vector_csv("1,,2"), ParseError);
}

TEST(Io, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789}) {
    EXPECT_EQ(parse_double(format_double(v), "x"), v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-0.0), "0");
}

TEST(WeightSpecParse, Kinds) {
  EXPECT_EQ(WeightSpec::parse("uniform:0.5").build(3).values(), owl::Vector::Constant(3, 0.5));
  EXPECT_EQ(WeightSpec::parse("oscar:1,1").build(2).values(), (owl::Vector(2) << 2, 1).finished());
  EXPECT_EQ(WeightSpec::parse("slope:0.1").build(4).size(), 4);
  EXPECT_EQ(WeightSpec::parse("oscar:1,0.5").to_string(), "oscar:1,0.5");
  EXPECT_THROW(WeightSpec::parse("oscar:1"), ParseError);
  EXPECT_THROW(WeightSpec::parse("bogus:1"), ParseError);
  EXPECT_THROW(WeightSpec::parse("uniform"), ParseError);
  EXPECT_THROW(WeightSpec::parse("uniform:-1").build(2), ParseError);
  EXPECT_THROW(WeightSpec::parse("slope:2").build(2), ParseError);
}

TEST_F(CliTest, WeightFile) {
  write("w.csv", "3\n2\n1\n");
  EXPECT_EQ(WeightSpec::parse("file:" + path("w.csv")).build(3).values(),
            (owl::Vector(3) << 3, 2, 1).finished());
  EXPECT_THROW(WeightSpec::parse("file:" + path("w.csv")).build(4), ParseError);
  write("bad.csv", "1\n2\n");
  EXPECT_THROW(WeightSpec::parse("file:" + path("bad.csv")).build(2), ParseError);
}

TEST(Cli, ProxExamples) {
  CliRun r = cli({"prox", "--values", "4,1", "--weights", "oscar:1,1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2,0\n");
  r = cli({"prox", "--values", "0,0", "--weights", "oscar:0.3,0.2"});
  EXPECT_EQ(r.out, "0,0\n");
  r = cli({"prox", "--values", "a,b", "--weights", "uniform:1"});
  EXPECT_EQ(r.code, kParseError);
  EXPECT_NE(r.err.find("parse error"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kParseError);
  EXPECT_EQ(cli({"nope"}).code, kParseError);
  EXPECT_EQ(cli({"prox", "--values", "1"}).code, kParseError);
  EXPECT_EQ(cli({"--tol", "-1", "prox", "--values", "1", "-w", "uniform:1"}).code, kParseError);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, IdentitySolveEqualsProx) {
  write("I.csv", "1,0,0\n0,1,0\n0,0,1\n");
  write("u.csv", "3\n-0.5\n2\n");
  const CliRun s = cli({"solve", "-A", path("I.csv"), "-y", path("u.csv"), "-w", "oscar:0.2,0.3",
                     "-o", path("x.csv"), "--tol", "1e-12"});
  ASSERT_EQ(s.code, 0) << s.err;
  const CliRun p = cli({"prox", path("u.csv"), "-w", "oscar:0.2,0.3"});
  ASSERT_EQ(p.code, 0);
  const owl::Vector xs = read_vector_csv(path("x.csv"));
  const owl::Vector xp = parse_vector_csv(p.out);
  EXPECT_LE((xs - xp).norm(), 1e-12);
}

TEST_F(CliTest, SolveMatchesLibraryBitForBit) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  owl::Matrix a(5, 8);
  owl::Vector y(5);
  for (Eigen::Index i = 0; i < 5; ++i) {
    y[i] = nd(rng);
    for (Eigen::Index j = 0; j < 8; ++j) {
      a(i, j) = nd(rng);
    }
  }
  write_matrix_csv(dir_ / "A.csv", a);
  write_vector_csv(dir_ / "y.csv", y);
  for (const std::string loss : {"sq", "abs"}) {
    const CliRun r = cli({"solve", "-A", path("A.csv"), "-y", path("y.csv"), "-w", "oscar:0.3,0.05",
                       "--loss", loss, "-o", path("x.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("converged=true"), std::string::npos);
    // The CSV round trip is exact, so the library sees the same inputs.
    const owl::ProblemInstance prob(
        read_matrix_csv(path("A.csv")), read_vector_csv(path("y.csv")),
        owl::oscar_weights(8, 0.3, 0.05),
        loss == "sq" ? owl::Loss::SquaredL2 : owl::Loss::AbsoluteL1);
    EXPECT_EQ(read_vector_csv(path("x.csv")), owl::solve(prob).x_hat);
  }
}

TEST_F(CliTest, SolveInfeasibleExitCode) {
  write("A.csv", "1\n1\n");
  write("y.csv", "1\n-1\n");
  const CliRun r = cli({"solve", "-A", path("A.csv"), "-y", path("y.csv"), "-w", "uniform:1",
                     "--formulation", "constrained", "--eps", "0.1", "-o", path("x.csv")});
  EXPECT_EQ(r.code, kInfeasible);
  EXPECT_EQ(cli({"solve", "-A", path("A.csv"), "-y", path("y.csv"), "-w", "uniform:1",
                 "--formulation", "constrained", "-o", path("x.csv")})
                .code,
            kParseError);
  write("y3.csv", "1\n2\n3\n");
  EXPECT_EQ(cli({"solve", "-A", path("A.csv"), "-y", path("y3.csv"), "-w", "uniform:1"}).code,
            kParseError);
}

TEST_F(CliTest, GenerateFilesAndDeterminism) {
  const std::vector<std::string> args{"--seed", "17",        "generate", "--groups",
                                      "1,2;3;4", "--n",      "6",        "--s",
                                      "1",       "--eps",    "0.1",      "-o"};
  auto with_dir = [&](const std::string& d) {
    auto a = args;
    a.push_back(path(d));
    return cli(a);
  };
  const CliRun first = with_dir("g1");
  ASSERT_EQ(first.code, 0) << first.err;
  ASSERT_EQ(with_dir("g2").code, 0);
  for (const char* f : {"A.csv", "y.csv", "xstar.csv", "C.csv", "meta.json"}) {
    EXPECT_EQ(read_text_file(dir_ / "g1" / f), read_text_file(dir_ / "g2" / f)) << f;
  }
  const owl::Matrix a = read_matrix_csv(dir_ / "g1" / "A.csv");
  EXPECT_EQ(a.col(0), a.col(1));
  EXPECT_NE(read_text_file(dir_ / "g1" / "meta.json").find("\"seed\": 17"), std::string::npos);
  EXPECT_NE(first.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, GenerateZeroSparsityIsNoise) {
  ASSERT_EQ(cli({"generate", "--p", "6", "--q", "3", "--n", "4", "--s", "0", "--eps", "0.2", "-o",
                 path("g")})
                .code,
            0);
  const owl::Vector y = read_vector_csv(dir_ / "g" / "y.csv");
  EXPECT_NEAR(y.lpNorm<1>() / 4, 0.2, 1e-15);
  EXPECT_EQ(read_vector_csv(dir_ / "g" / "xstar.csv"), owl::Vector::Zero(6));
  EXPECT_EQ(cli({"generate", "--n", "4"}).code, kParseError);
  EXPECT_EQ(cli({"generate", "--groups", "1,1", "--n", "4"}).code, kParseError);
}

TEST_F(CliTest, RoundTripReportsNoViolations) {
  ASSERT_EQ(cli({"--seed", "3", "generate", "--groups", "1,2,3;4,-5;6;7,8", "--n", "10", "--s",
                 "2", "--eps", "0.05", "-o", path("g")})
                .code,
            0);
  for (const std::string loss : {"sq", "abs"}) {
    const CliRun s = cli({"solve", "-A", path("g/A.csv"), "-y", path("g/y.csv"), "-w",
                       "oscar:0.1,0.02", "--loss", loss, "-o", path("g/x.csv")});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_NE(s.out.find("cluster 1,2,3"), std::string::npos) << s.out;
    const CliRun c = cli({"check-clusters", "-A", path("g/A.csv"), "-y", path("g/y.csv"), "-x",
                       path("g/x.csv"), "-w", "oscar:0.1,0.02", "--loss", loss});
    EXPECT_EQ(c.code, 0) << c.out;
    EXPECT_NE(c.out.find("pair (1,2): condition=true, clustered=true"), std::string::npos);
    EXPECT_NE(c.out.find("violations=0"), std::string::npos);
  }
}

TEST_F(CliTest, CheckClustersFlagsViolation) {
  write("A.csv", "1,1,0\n2,2,1\n");
  write("y.csv", "0.1\n0.1\n");
  write("x_ok.csv", "0.5\n0.5\n0.1\n");
  write("x_bad.csv", "0.5\n0.3\n0.1\n");
  write("x_far.csv", "0.5\n0.5\n2\n");
  const auto check = [&](const std::string& x) {
    return cli({"check-clusters", "-A", path("A.csv"), "-y", path("y.csv"), "-x", path(x), "-w",
                "oscar:0.1,0.1"});
  };
  CliRun r = check("x_ok.csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("pair (1,2): condition=true, clustered=true"), std::string::npos);
  EXPECT_NE(r.out.find("pair (1,3): condition=false, clustered=false"), std::string::npos);
  r = check("x_bad.csv");
  EXPECT_EQ(r.code, kViolation);
  EXPECT_NE(r.out.find("pair (1,2): condition=true, clustered=false VIOLATION"), std::string::npos);
}

TEST(ExperimentConfigParse, GrammarAndErrors) {
  const ExperimentConfig cfg = ExperimentConfig::parse(
      "# grid\n"
      "n = 100, 200\n"
      "s = 1,2\n"
      "q = 16\n"
      "eps = 0, 0.05   # noise levels\n"
      "weights = oscar:1,0.02\n"
      "trials = 3\n"
      "seed = 9\n"
      "loss = abs\n"
      "formulation = constrained\n"
      "output = out.csv\n");
  EXPECT_EQ(cfg.n, (std::vector<Eigen::Index>{100, 200}));
  EXPECT_EQ(cfg.trials, 3);
  EXPECT_EQ(cfg.seed, 9u);
  const auto cells = expand_grid(cfg);
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0].p, 32);
  EXPECT_EQ(cells[1].eps, 0.05);
  EXPECT_EQ(cells[7].n, 200);

  const ExperimentConfig rule =
      ExperimentConfig::parse("n_rule = 8\ns = 1, 2\nq = 64\np = 128\neps = 0.05\n");
  const auto rc = expand_grid(rule);
  EXPECT_EQ(rc[0].n, 39);
  EXPECT_EQ(rc[1].n, 78);

  EXPECT_THROW(ExperimentConfig::parse("n = 1\ns = 1\nq = 2\n"), ParseError);
  EXPECT_THROW(ExperimentConfig::parse("n = 1\nn = 2\ns = 1\nq = 2\neps = 0\n"), ParseError);
  EXPECT_THROW(ExperimentConfig::parse("n = 1\nfoo = 2\ns = 1\nq = 2\neps = 0\n"), ParseError);
  EXPECT_THROW(ExperimentConfig::parse("n = 1\ns = 1\nq = 2\neps = 0\ntrials = 0\n"), ParseError);
  EXPECT_THROW(ExperimentConfig::parse("n = 1\nn_rule = 2\ns = 1\nq = 2\neps = 0\n"), ParseError);
  EXPECT_THROW(ExperimentConfig::parse("n = x\ns = 1\nq = 2\neps = 0\n"), ParseError);
  EXPECT_THROW(ExperimentConfig::parse("n = 1\ns = 1\nq = 2\neps = 0\nloss = l2\n"), ParseError);
  EXPECT_THROW(expand_grid(ExperimentConfig::parse("n = 1\ns = 3\nq = 2\neps = 0\n")), ParseError);
}

TEST_F(CliTest, ExperimentZeroSignalCell) {
  write("cfg.txt", "n = 10\ns = 0\nq = 4\neps = 0\ntrials = 1\noutput = " + path("r.csv") + "\n");
  const CliRun r = cli({"experiment", path("cfg.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text_file(dir_ / "r.csv"),
            "n,s,q,p,eps,trials,mean_error,std_error,bound_rhs,ratio,clustering_violations,"
            "nonconverged\n"
            "10,0,4,8,0,1,0,0,0,0,0,0\n");
}

TEST_F(CliTest, ExperimentDeterministicAcrossThreadCounts) {
  write("cfg.txt",
        "n = 30\ns = 1, 2\nq = 8\neps = 0.05\ntrials = 4\nseed = 5\noutput = " + path("r.csv") +
            "\ntrials_output = " + path("t.csv") + "\n");
  ASSERT_EQ(cli({"experiment", path("cfg.txt")}).code, 0);
  const std::string one = read_text_file(dir_ / "r.csv");
  const std::string trials_one = read_text_file(dir_ / "t.csv");
  ASSERT_EQ(cli({"--threads", "3", "experiment", path("cfg.txt")}).code, 0);
  EXPECT_EQ(read_text_file(dir_ / "r.csv"), one);
  EXPECT_EQ(read_text_file(dir_ / "t.csv"), trials_one);
  ASSERT_EQ(cli({"--seed", "6", "experiment", path("cfg.txt")}).code, 0);
  EXPECT_NE(read_text_file(dir_ / "r.csv"), one);
}

TEST_F(CliTest, ExperimentBadConfigIsParseError) {
  write("cfg.txt", "n = 30\ns = 1\n");
  EXPECT_EQ(cli({"experiment", path("cfg.txt")}).code, kParseError);
  EXPECT_EQ(cli({"experiment", path("missing.txt")}).code, kParseError);
}

}  // namespace
}  // namespace owlreg
