#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  fs::path p = fs::current_path() / "cli_test_tmp";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args) {
  fs::path dir = work_dir();
  fs::path out_f = dir / "stdout.txt";
  fs::path err_f = dir / "stderr.txt";
  std::string cmd = std::string(GPSCAT_BIN) + " " + args + " > " + out_f.string() + " 2> " + err_f.string();
  int rc = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(out_f);
  res.err = slurp(err_f);
  return res;
}

}  // namespace

TEST(CliSigma, SolvedFiveDbReport) {
  CliResult res = run_cli("sigma --db 5 --format json");
  ASSERT_EQ(res.exit_code, 0) << res.out << res.err;
  json j = json::parse(res.out);
  EXPECT_EQ(j["command"], "sigma");
  EXPECT_NEAR(j["reflectance"].get<double>(), 0.240, 5e-4);
  EXPECT_NEAR(j["sigma"]["s11"].get<double>(), 1.0, 1e-9);
  EXPECT_TRUE(j["solved"].get<bool>());
  EXPECT_NEAR(j["r_c"].get<double>(), 0.623, 1e-3);
  EXPECT_NEAR(j["det"].get<double>(), 1.0, 1e-12);
}

TEST(CliSigma, FifteenDbSolvedReflectance) {
  CliResult res = run_cli("sigma --db 15 --format json");
  ASSERT_EQ(res.exit_code, 0);
  json j = json::parse(res.out);
  EXPECT_NEAR(j["reflectance"].get<double>(), 0.0307, 1e-3);
}

TEST(CliSigma, NoSolutionExitsTwoWithMachineReadableError) {
  CliResult res = run_cli("sigma --r1 0.3 --r2 0.3");
  EXPECT_EQ(res.exit_code, 2);
  json j = json::parse(res.out);
  EXPECT_EQ(j["error"], "NoSolution");
}

TEST(CliSigma, CsvDeterministic) {
  fs::path out1 = work_dir() / "sigma1.csv";
  fs::path out2 = work_dir() / "sigma2.csv";
  ASSERT_EQ(run_cli("sigma --db 5 --format csv --out " + out1.string()).exit_code, 0);
  ASSERT_EQ(run_cli("sigma --db 5 --format csv --out " + out2.string()).exit_code, 0);
  std::string a = slurp(out1), b = slurp(out2);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, 10), "key,value\n");
}

TEST(CliSigma, MutuallyExclusiveSourceOptions) {
  CliResult res = run_cli("sigma --db 5 --r1 0.1 --r2 -0.1");
  EXPECT_EQ(res.exit_code, 2);
  json j = json::parse(res.out);
  EXPECT_EQ(j["error"], "DomainError");
}

TEST(CliSigma, UnknownFlagExitsTwo) {
  CliResult res = run_cli("sigma --db 5 --bogus 1");
  EXPECT_EQ(res.exit_code, 2);
  json j = json::parse(res.out);
  EXPECT_EQ(j["error"], "UsageError");
}

TEST(CliWavefunction, CsvSchemaSidecarAndDeterminism) {
  fs::path out = work_dir() / "wf.csv";
  std::string cmd = "wavefunction --db 5 --n 10 --grid -8:8:0.05 --out " + out.string();
  ASSERT_EQ(run_cli(cmd).exit_code, 0);
  std::string first = slurp(out);
  ASSERT_EQ(run_cli(cmd).exit_code, 0);
  EXPECT_EQ(first, slurp(out));
  EXPECT_EQ(first.substr(0, first.find('\n')), "x,psi_n,target_cat,abs_err");

  json meta = json::parse(slurp(out.string() + ".meta.json"));
  EXPECT_NEAR(meta["fidelity"].get<double>(), 0.997, 0.002);
  EXPECT_FALSE(meta["r_c"].is_null());
  EXPECT_LT(meta["oscillation_metric"].get<double>(), 0.05);
  EXPECT_NEAR(meta["sigma11"].get<double>(), 1.0, 1e-9);
}

TEST(CliWavefunction, HighSigma11FlagsOscillation) {
  fs::path out = work_dir() / "wf_osc.csv";
  CliResult res = run_cli("wavefunction --db 5 --n 10 --reflectance 0.380820 --out " + out.string());
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_NE(res.err.find("GPS condition not met"), std::string::npos);
  json meta = json::parse(slurp(out.string() + ".meta.json"));
  EXPECT_NEAR(meta["sigma11"].get<double>(), 1.4, 0.01);
  EXPECT_GT(meta["oscillation_metric"].get<double>(), 0.05);
  EXPECT_TRUE(meta["r_c"].is_null());
}

TEST(CliWavefunction, PDomainColumns) {
  fs::path out = work_dir() / "wf_p.csv";
  ASSERT_EQ(run_cli("wavefunction --db 5 --n 4 --grid -6:6:0.1 --p-domain --out " + out.string()).exit_code, 0);
  std::string content = slurp(out);
  EXPECT_EQ(content.substr(0, content.find('\n')), "x,psi_n,target_cat,abs_err,p,psi_tilde_abs");
}

TEST(CliWavefunction, BadGridExitsTwo) {
  CliResult res = run_cli("wavefunction --db 5 --n 3 --grid bogus");
  EXPECT_EQ(res.exit_code, 2);
}

TEST(CliSweep, AnchorRowAndDeterminism) {
  fs::path out = work_dir() / "sweep.csv";
  std::string cmd = "sweep --grid 14:16:0.5 --n 10 --methods gps,hom --frep 1e8 --out " + out.string();
  ASSERT_EQ(run_cli(cmd).exit_code, 0);
  std::string first = slurp(out);
  ASSERT_EQ(run_cli(cmd).exit_code, 0);
  EXPECT_EQ(first, slurp(out));

  std::istringstream lines(first);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "db,r,gps_P10,gps_rate10,hom_P10,flags");
  bool found15 = false;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("15,", 0) == 0) {
      found15 = true;
      std::istringstream cells(line);
      std::string db, r, p, rate;
      std::getline(cells, db, ',');
      std::getline(cells, r, ',');
      std::getline(cells, p, ',');
      std::getline(cells, rate, ',');
      EXPECT_NEAR(std::stod(p), 0.023, 0.001);
      EXPECT_NEAR(std::stod(rate), 2.3e6, 0.1e6);
    }
  }
  EXPECT_TRUE(found15);
}

TEST(CliSweep, TruncationFlaggedPerPoint) {
  CliResult res = run_cli("sweep --grid 20:20:1 --n 2 --methods conv --nmax 40 --format json");
  ASSERT_EQ(res.exit_code, 0);
  json j = json::parse(res.out);
  ASSERT_EQ(j["rows"].size(), 1u);
  EXPECT_TRUE(j["rows"][0]["conv_P2"].is_null());
  EXPECT_EQ(j["rows"][0]["flags"], "conv_P2:TruncationError");
}

TEST(CliValidate, GaussSuitePasses) {
  CliResult res = run_cli("validate --suite gauss");
  EXPECT_EQ(res.exit_code, 0) << res.out;
  EXPECT_NE(res.out.find("PASS"), std::string::npos);
  EXPECT_EQ(res.out.find("FAIL"), std::string::npos);
}

TEST(CliValidate, OracleSuiteAtTenDb) {
  CliResult res = run_cli("validate --suite oracle --db 10 --n 10 --nmax 60 --format json");
  ASSERT_EQ(res.exit_code, 0) << res.out;
  json j = json::parse(res.out);
  bool saw_prob_check = false;
  for (const auto& check : j["checks"]) {
    if (check["check"].get<std::string>().find("closed form vs Fock herald") != std::string::npos) {
      saw_prob_check = true;
      EXPECT_LT(check["measured"].get<double>(), 1e-5);
      EXPECT_EQ(check["status"], "pass");
    }
  }
  EXPECT_TRUE(saw_prob_check);
}

TEST(CliValidate, TruncationSurfacedAsDistinctFailure) {
  CliResult res = run_cli("validate --suite oracle --db 15 --nmax 20 --format json");
  EXPECT_EQ(res.exit_code, 1);
  json j = json::parse(res.out);
  bool saw_truncation = false;
  for (const auto& check : j["checks"])
    if (check["error"] == "TruncationError") saw_truncation = true;
  EXPECT_TRUE(saw_truncation);
}

TEST(CliValidate, UnknownSuiteExitsTwo) {
  CliResult res = run_cli("validate --suite nonsense");
  EXPECT_EQ(res.exit_code, 2);
}
