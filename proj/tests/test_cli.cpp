#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fogpact/cli.hpp"
#include "fogpact/config.hpp"
#include "fogpact/error.hpp"

namespace fogpact {
namespace {

namespace fs = std::filesystem;

constexpr const char* kFixture = R"(
[instance]
c = [[1.0, 0.1], [0.1, 1.0]]
sigma = [[1.0, 0.7], [0.7, 1.0]]
beta = [1, 1]
eta = 0.5
w_bar = 0
)";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fogpact_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const std::string path = (dir_ / name).string();
    std::ofstream(path, std::ios::binary) << text;
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  // The single error line, or "" if none.
  std::string error_line() const {
    const std::string e = err_.str();
    EXPECT_EQ(std::count(e.begin(), e.end(), '\n'), 1) << e;
    EXPECT_EQ(e.rfind("error:", 0), 0u) << e;
    return e;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

// ---- Config parsing --------------------------------------------------------

TEST(Config, LowerTriangleAndComments) {
  const auto doc = parse_config(R"(# two resources
[instance]
n = 2
c = [[2],
     [0.5, 1]]   # lower triangle
sigma = [[1, 0.3], [0.3, 2]]
beta = [1, -1]
eta = 1.5
[solve]
plan = single-bonus:1
[sim]
samples = 10
seed = 3
antithetic = true
)",
                                "inline");
  EXPECT_EQ(doc.instance.cost()(0, 1), 0.5);
  EXPECT_EQ(doc.instance.cost()(1, 0), 0.5);
  EXPECT_EQ(doc.instance.noise()(1, 1), 2.0);
  EXPECT_EQ(doc.instance.w_bar(), 0.0);
  EXPECT_EQ(doc.plan, (PlanKind{PlanType::SingleBonus, 1}));
  ASSERT_TRUE(doc.sim);
  EXPECT_EQ(doc.sim->samples, 10u);
  EXPECT_TRUE(doc.sim->antithetic);
  EXPECT_FALSE(doc.sweep);
}

TEST(Config, SweepSection) {
  const auto doc = parse_config(std::string(kFixture) + R"(
[sweep]
parameter = sigma_ii
index = 1
values = [1, 2]
plans = [general, opening-reward]
mode = true
)",
                                "inline");
  ASSERT_TRUE(doc.sweep);
  EXPECT_EQ(doc.sweep->parameter.kind, Parameter::Kind::NoiseEntry);
  EXPECT_EQ(doc.sweep->parameter.i, 1u);
  EXPECT_EQ(doc.sweep->values, (std::vector<double>{1, 2}));
  EXPECT_EQ(doc.sweep->plans.size(), 2u);
  EXPECT_EQ(doc.sweep->mode, EvaluationMode::TrueInstance);
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "cfg.ini");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "accepted:\n" << text;
  return "";
}

TEST(Config, DiagnosticsCarryLineAndField) {
  EXPECT_NE(config_error("[instance]\nc = [[1]]\nsigma = [[1]]\nbeta = [1]\neta = abc\n")
                .find("cfg.ini:5: [instance] eta"),
            std::string::npos);
  EXPECT_NE(config_error("[instance]\nbogus = 1\n").find("cfg.ini:2"), std::string::npos);
  EXPECT_NE(config_error("[nope]\n").find("cfg.ini:1"), std::string::npos);
  EXPECT_NE(config_error("[instance]\nc = [[1]]\nsigma = [[1]]\neta = 1\n").find("beta"),
            std::string::npos);
  // Non-PD C names the invariant.
  EXPECT_NE(config_error("[instance]\nc = [[1, 1], [1, 1]]\nsigma = [[1], [0, 1]]\nbeta = [1, 1]\neta = 1\n")
                .find("positive definite"),
            std::string::npos);
  EXPECT_NE(config_error("[instance]\nn = 3\nc = [[1]]\nsigma = [[1]]\nbeta = [1]\neta = 1\n")
                .find("n"),
            std::string::npos);
  config_error("[instance]\nc = [[1, 2], [3, 1]]\nsigma = [[1]]\nbeta = [1]\neta = 1\n");
  config_error(std::string(kFixture) + "[sim]\nsamples = 0\n");
}

TEST(Config, LoadMissingFile) {
  try {
    load_config("/nonexistent/fogpact.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}

// ---- solve -----------------------------------------------------------------

TEST_F(CliTest, SolvePrintsReport) {
  const std::string cfg = write("a.ini", kFixture);
  ASSERT_EQ(run({"solve", cfg, "--plan", "general"}), 0) << err_.str();
  const std::string text = out_.str();
  for (const char* key : {"plan = general\n", "t = ", "s = ", "a = ", "no_utility = 0.469814423303\n",
                          "fn_ce = ", "welfare = ", "instance_digest = "}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
  ASSERT_EQ(run({"solve", cfg, "--output", path("r.txt")}), 0);
  EXPECT_EQ(read(path("r.txt")), text);
}

TEST_F(CliTest, SolveRejectsNonPdCost) {
  const std::string cfg =
      write("bad.ini", "[instance]\nc = [[1, 1], [1, 1]]\nsigma = [[1, 0], [0, 1]]\nbeta = [1, 1]\neta = 1\n");
  EXPECT_EQ(run({"solve", cfg}), 2);
  EXPECT_NE(error_line().find("positive definite"), std::string::npos);
}

TEST_F(CliTest, SolveSingleBonusHasOneNonzeroRate) {
  const std::string cfg = write("a.ini", kFixture);
  ASSERT_EQ(run({"solve", cfg, "--plan", "single-bonus", "--dim", "1"}), 0) << err_.str();
  const std::string text = out_.str();
  const auto pos = text.find("\ns = [");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_EQ(text.substr(pos, 10), "\ns = [0, 0");
  EXPECT_NE(text.find("plan = single-bonus:1"), std::string::npos);
  EXPECT_EQ(run({"solve", cfg, "--plan", "single-bonus", "--dim", "2"}), 2);
  error_line();
  EXPECT_EQ(run({"solve", cfg, "--plan", "general", "--dim", "0"}), 2);
  EXPECT_EQ(run({"solve", cfg, "--plan", "nonsense"}), 2);
  error_line();
}

TEST_F(CliTest, SolveErrorsMapToExitCodes) {
  EXPECT_EQ(run({"solve", path("missing.ini")}), 2);
  error_line();
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({}), 2);
  // I + eta C Sigma too ill-conditioned to solve.
  const std::string cfg = write(
      "sing.ini", "[instance]\nc = [[1, 0], [0, 1]]\nsigma = [[1, 0], [0, 0]]\nbeta = [1, 1]\neta = 1e13\n");
  EXPECT_EQ(run({"solve", cfg}), 3);
  EXPECT_NE(error_line().find("SingularMatrix"), std::string::npos);
}

// ---- compare ---------------------------------------------------------------

TEST_F(CliTest, CompareFixture) {
  const std::string cfg = write("a.ini", kFixture);
  ASSERT_EQ(run({"compare", cfg, "--output", path("rank.csv")}), 0) << err_.str();
  std::istringstream csv(read(path("rank.csv")));
  std::vector<std::string> lines;
  for (std::string line; std::getline(csv, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "plan,no_utility,fn_ce,welfare");
  EXPECT_EQ(lines[1].rfind("opening-reward,", 0), 0u);
  EXPECT_EQ(lines[6].rfind("single-bonus,", 0), 0u);
  ASSERT_EQ(run({"compare", cfg, "--mode", "true", "-o", path("rank_true.csv")}), 0);
  EXPECT_NE(read(path("rank_true.csv")).find("\ngeneral,"), std::string::npos);
}

TEST_F(CliTest, CompareDiagonalTies) {
  const std::string cfg = write(
      "d.ini", "[instance]\nc = [[2, 0], [0, 1]]\nsigma = [[0.5, 0], [0, 2]]\nbeta = [1, 0.6]\neta = 1.2\n");
  ASSERT_EQ(run({"compare", cfg, "--output", path("rank.csv")}), 0);
  std::istringstream csv(read(path("rank.csv")));
  std::string line;
  std::getline(csv, line);
  std::vector<double> utilities;
  while (std::getline(csv, line)) {
    const std::string plan = line.substr(0, line.find(','));
    if (plan == "opening-reward" || plan == "single-bonus") continue;
    utilities.push_back(std::stod(line.substr(line.find(',') + 1)));
  }
  ASSERT_EQ(utilities.size(), 4u);
  for (double u : utilities) EXPECT_NEAR(u, utilities[0], 1e-12);
}

TEST_F(CliTest, CompareNeedsOutput) {
  const std::string cfg = write("a.ini", kFixture);
  EXPECT_EQ(run({"compare", cfg}), 2);
  error_line();
  EXPECT_EQ(run({"compare", cfg, "--mode", "sideways", "-o", path("x.csv")}), 2);
}

// ---- sweep -----------------------------------------------------------------

std::vector<double> general_column(const std::string& csv_text) {
  std::istringstream csv(csv_text);
  std::string line;
  std::getline(csv, line);
  std::vector<double> out;
  while (std::getline(csv, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (line.substr(c1 + 1, c2 - c1 - 1) == "general") out.push_back(std::stod(line.substr(c2 + 1)));
  }
  return out;
}

TEST_F(CliTest, SweepEtaMonotone) {
  const std::string cfg = write(
      "s.ini", std::string(kFixture) + "[sweep]\nparameter = eta\nvalues = [0.25, 0.5, 1, 2, 4]\n");
  ASSERT_EQ(run({"sweep", cfg, "--output", path("s.csv")}), 0) << err_.str();
  const auto g = general_column(read(path("s.csv")));
  ASSERT_EQ(g.size(), 5u);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_LT(g[k], g[k - 1]);
}

TEST_F(CliTest, SweepSingleValue) {
  const std::string cfg =
      write("s.ini", std::string(kFixture) + "[sweep]\nparameter = c_ii\nindex = 1\nvalues = [2]\n");
  ASSERT_EQ(run({"sweep", cfg, "--output", path("s.csv")}), 0) << err_.str();
  const std::string text = read(path("s.csv"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}

TEST_F(CliTest, SweepErrors) {
  const std::string desc =
      write("d.ini", std::string(kFixture) + "[sweep]\nparameter = eta\nvalues = [2, 1]\n");
  EXPECT_EQ(run({"sweep", desc, "--output", path("s.csv")}), 2);
  EXPECT_NE(error_line().find("increasing"), std::string::npos);
  const std::string bad =
      write("b.ini", std::string(kFixture) + "[sweep]\nparameter = sigma_ii\nindex = 0\nvalues = [0.1, 1]\n");
  EXPECT_EQ(run({"sweep", bad, "--output", path("s.csv")}), 3);
  EXPECT_NE(error_line().find("0.1"), std::string::npos);
  const std::string none = write("n.ini", kFixture);
  EXPECT_EQ(run({"sweep", none, "--output", path("s.csv")}), 2);
  EXPECT_EQ(run({"sweep", desc}), 2);
}

// ---- simulate --------------------------------------------------------------

std::string value_of(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " = ");
  if (pos == std::string::npos) return "";
  const auto start = pos + key.size() + 3;
  return text.substr(start, text.find('\n', start) - start);
}

TEST_F(CliTest, SimulateZeroNoiseHasZeroScore) {
  const std::string cfg = write(
      "z.ini", "[instance]\nc = [[1, 0.2], [0.2, 1]]\nsigma = [[0, 0], [0, 0]]\nbeta = [1, 2]\neta = 1\n"
               "[sim]\nsamples = 1000\nseed = 1\n");
  ASSERT_EQ(run({"simulate", cfg}), 0) << err_.str();
  EXPECT_EQ(value_of(out_.str(), "z_score"), "0");
  EXPECT_EQ(value_of(out_.str(), "stderr_fn_utility"), "0");
}

TEST_F(CliTest, SimulateFixture) {
  const std::string cfg = write("a.ini", kFixture);
  ASSERT_EQ(run({"simulate", cfg, "--samples", "1000000", "--seed", "42"}), 0) << err_.str();
  const double z = std::stod(value_of(out_.str(), "z_score"));
  EXPECT_LE(std::abs(z), 3.0);
  EXPECT_EQ(value_of(out_.str(), "samples_used"), "1000000");
  ASSERT_EQ(run({"simulate", cfg, "--samples", "1000", "--antithetic", "--plan", "independent"}), 0);
  EXPECT_EQ(value_of(out_.str(), "samples_used"), "2000");
}

TEST_F(CliTest, SimulateErrors) {
  const std::string cfg = write("a.ini", kFixture);
  EXPECT_EQ(run({"simulate", cfg, "--samples", "0"}), 2);
  error_line();
  const std::string zero = write("z.ini", std::string(kFixture) + "[sim]\nsamples = 0\n");
  EXPECT_EQ(run({"simulate", zero}), 2);
  // w_bar = -800 makes the first-best payment exponent exceed the cap.
  const std::string hot = write(
      "o.ini", "[instance]\nc = [[1]]\nsigma = [[1]]\nbeta = [1]\neta = 1\nw_bar = -800\n");
  EXPECT_EQ(run({"simulate", hot, "--plan", "opening-reward", "--samples", "10"}), 4);
  EXPECT_NE(error_line().find("Overflow"), std::string::npos);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const std::string cfg = write(
      "s.ini", std::string(kFixture) + "[sweep]\nparameter = sigma_ii\nindex = 0\nvalues = [1, 2, 3]\n"
                                       "[sim]\nsamples = 20000\nseed = 7\n");
  ASSERT_EQ(run({"sweep", cfg, "-o", path("s1.csv")}), 0);
  ASSERT_EQ(run({"sweep", cfg, "-o", path("s2.csv")}), 0);
  EXPECT_EQ(read(path("s1.csv")), read(path("s2.csv")));
  ASSERT_EQ(run({"simulate", cfg, "-o", path("m1.txt")}), 0);
  ASSERT_EQ(run({"simulate", cfg, "-o", path("m2.txt")}), 0);
  EXPECT_EQ(read(path("m1.txt")), read(path("m2.txt")));
  EXPECT_FALSE(read(path("m1.txt")).empty());
}

}  // namespace
}  // namespace fogpact
