#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "test_support.hpp"

namespace dj = ddjacobi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::map<std::string, std::string> kv;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ddjacobi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  std::string write_matrix(const std::string& name, const dj::SymMatrix& a) const {
    dj::io::write_matrix_market(fs::path(path(name)), a);
    return path(name);
  }

  static Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "ddjacobi");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = dj::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    std::istringstream lines(out.str());
    std::string line;
    while (std::getline(lines, line)) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) o.kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    o.err = err.str();
    return o;
  }

  static std::vector<double> numbers(const std::string& csv) {
    std::vector<double> v;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    return v;
  }

  fs::path dir_;
};

TEST_F(Cli, EigExampleOneHistory) {
  const auto mtx = write_matrix("ex1.mtx", dj::io::gen_example1());
  const auto h = path("h.csv");
  const auto r = run({"eig", "--input", mtx, "--m", "6", "--history", h, "--ref", "--stop-rel", "0",
                      "--max-sweeps", "5"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.kv.at("status"), "MaxSweeps");
  const auto rows = dj::io::read_history_csv(fs::path(h));
  ASSERT_EQ(rows.size(), 6u);
  // Unscaled row norms relate to the scaled ones by sqrt(a_66 a_kk), all near 6.
  const double published[] = {6.89e-3, 5.81e-5, 5.67e-7, 2.41e-9, 1.12e-11, 3.25e-14};
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_TRUE(rows[k].alpha.has_value());
    EXPECT_TRUE(rows[k].err_vs_ref.has_value());
    const double scaled = rows[k].off_row_m / rows[k].a_mm;
    EXPECT_GE(scaled, published[k] / 2) << k;
    EXPECT_LE(scaled, published[k] * 2) << k;
  }
}

TEST_F(Cli, EigDiagonal) {
  const std::vector<double> d{4, 2, 9};
  const auto mtx = write_matrix("d.mtx", dj::SymMatrix::diagonal(d));
  const auto r = run({"eig", "--input", mtx, "--m", "1", "--vector"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.kv.at("lambda_hat"), "2");
  EXPECT_EQ(r.kv.at("sweeps"), "0");
  EXPECT_EQ(numbers(r.kv.at("vector")), (std::vector<double>{0, 1, 0}));
}

TEST_F(Cli, UsageErrors) {
  const auto mtx = write_matrix("i.mtx", dj::SymMatrix::identity(3));
  EXPECT_EQ(run({"eig", "--input", mtx, "--m", "0"}).code, 64);
  EXPECT_EQ(run({"eig", "--input", mtx, "--m", "4"}).code, 64);
  EXPECT_EQ(run({"eig", "--m", "1"}).code, 64);
  EXPECT_EQ(run({"bogus"}).code, 64);
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, DataErrors) {
  const auto bad = write("bad.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n9 9 1\n");
  const auto r = run({"eig", "--input", bad, "--m", "1"});
  EXPECT_EQ(r.code, 65);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);
}

TEST_F(Cli, FullExamples) {
  const auto id = write_matrix("i.mtx", dj::SymMatrix::identity(4));
  EXPECT_EQ(numbers(run({"full", "--input", id}).kv.at("values")), (std::vector<double>(4, 1.0)));

  const auto two = write("two.csv", "2,1\n1,2\n");
  const auto out = path("vals.csv");
  const auto r = run({"full", "--input", two, "--out", out});
  const auto v = numbers(r.kv.at("values"));
  EXPECT_NEAR(v[0], 1.0, 1e-15);
  EXPECT_NEAR(v[1], 3.0, 1e-15);
  std::ifstream f(out);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "index,value");
}

TEST_F(Cli, FullAgreesWithEig) {
  const dj::SymMatrix a = dj::testing::random_symmetric(6, 21);
  const auto mtx = write_matrix("r.mtx", a);
  const auto all = numbers(run({"full", "--input", mtx}).kv.at("values"));
  for (std::size_t m = 1; m <= 6; ++m) {
    const auto r = run({"eig", "--input", mtx, "--m", std::to_string(m), "--stop-rel", "1e-14"});
    if (r.code != 0) continue;
    EXPECT_NEAR(std::stod(r.kv.at("lambda_hat")), all[m - 1], 1e-10);
  }
}

TEST_F(Cli, ClusterTwoBlobs) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::ostringstream pts;
  pts << "x,y\n";
  for (int i = 0; i < 100; ++i) pts << nd(rng) + (i < 50 ? 0.0 : 10.0) << ',' << nd(rng) << '\n';
  const auto csv = write("pts.csv", pts.str());
  const auto labels = path("labels.csv");
  const auto r = run({"cluster", "--points", csv, "--sigma", "1", "--labels", labels, "--gap"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.kv.at("cluster0"), "50");
  EXPECT_EQ(r.kv.at("cluster1"), "50");
  EXPECT_LE(std::stod(r.kv.at("err_vs_ref")), 1e-8);
  std::ifstream f(labels);
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "index,label,fiedler_entry");
  int rows = 0;
  while (std::getline(f, line)) ++rows;
  EXPECT_EQ(rows, 100);
}

TEST_F(Cli, ClusterErrors) {
  const auto csv = write("pts.csv", "0,0\n1,0\n");
  EXPECT_EQ(run({"cluster", "--points", csv, "--sigma", "0"}).code, 64);
  EXPECT_EQ(run({"cluster"}).code, 64);
  const auto w = write("w.mtx", "%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n2 1 1\n");
  const auto r = run({"cluster", "--weights", w});
  EXPECT_EQ(r.code, 65);
  EXPECT_NE(r.err.find("IsolatedVertex"), std::string::npos);
}

TEST_F(Cli, TrackExamples) {
  const std::vector<double> d{1, 2, 3};
  const auto diag = write_matrix("d.mtx", dj::SymMatrix::diagonal(d));
  EXPECT_EQ(run({"track", "--input", diag}).kv.at("steps"), "1");

  const auto two = write("two.csv", "1,0.1\n0.1,2\n");
  const auto v = numbers(run({"track", "--input", two}).kv.at("values"));
  const auto [lo, hi] = dj::testing::eig2(1, 0.1, 2);
  EXPECT_NEAR(v[0], lo, 1e-10);
  EXPECT_NEAR(v[1], hi, 1e-10);

  const dj::SymMatrix a = dj::io::gen_random_dd(33, 0.3, 11);
  const auto mtx = write_matrix("r33.mtx", a);
  const auto p = path("path.csv");
  const auto r = run({"track", "--input", mtx, "--path", p});
  EXPECT_EQ(r.code, 0);
  const auto full = numbers(run({"full", "--input", mtx}).kv.at("values"));
  const auto tracked = numbers(r.kv.at("values"));
  for (std::size_t i = 0; i < 33; ++i) EXPECT_NEAR(tracked[i], full[i], 1e-8 * dj::frob_norm(a));
  std::ifstream f(p);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header.rfind("t,s,gamma_hat,avg_iters,sigma_1,", 0), 0u);
}

TEST_F(Cli, GenExamples) {
  const auto ex = path("ex1.mtx");
  EXPECT_EQ(run({"gen", "--kind", "example1", "--out", ex}).code, 0);
  const auto a = dj::io::read_matrix_market(fs::path(ex));
  EXPECT_EQ(a(5, 5), 6.0);
  EXPECT_EQ(a, dj::io::gen_example1());

  const auto drk = path("drk.mtx");
  EXPECT_EQ(run({"gen", "--kind", "drk1", "--n", "1023", "--out", drk}).code, 0);
  EXPECT_EQ(dj::io::read_matrix_market(fs::path(drk)), dj::io::gen_diag_rank1(1023));

  const auto r1 = path("r1.mtx"), r2 = path("r2.mtx");
  run({"gen", "--kind", "random-dd", "--n", "8", "--alpha", "0.005", "--seed", "3", "--out", r1});
  run({"gen", "--kind", "random-dd", "--n", "8", "--alpha", "0.005", "--seed", "3", "--out", r2});
  EXPECT_EQ(dj::io::read_matrix_market(fs::path(r1)), dj::io::read_matrix_market(fs::path(r2)));
  EXPECT_EQ(run({"gen", "--kind", "nope", "--out", r1}).code, 64);
}

TEST_F(Cli, DiagnoseExamples) {
  const auto ex = write_matrix("ex1.mtx", dj::io::gen_example1());
  const auto r = run({"diagnose", "--input", ex, "--m", "6", "--exact"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(r.kv.at("alpha0")), 0.023, 5e-4);
  EXPECT_NEAR(std::stod(r.kv.at("gamma")), 0.048, 5e-4);
  EXPECT_NEAR(std::stod(r.kv.at("gamma_m")), 1.0 / 13.0, 5e-5);
  EXPECT_EQ(r.kv.at("thm2_applicable"), "false");

  const std::vector<double> d{1, 2, 3};
  const auto diag = write_matrix("d.mtx", dj::SymMatrix::diagonal(d));
  EXPECT_EQ(run({"diagnose", "--input", diag, "--m", "1"}).kv.at("alpha0"), "0");

  const auto zero = write("z.csv", "0,1\n1,2\n");
  EXPECT_EQ(run({"diagnose", "--input", zero, "--m", "1"}).code, 65);
}

TEST(ExitCodes, EveryStatusMapsToOneCode) {
  using dj::SolveStatus;
  EXPECT_EQ(dj::cli::exit_code(SolveStatus::Converged), 0);
  EXPECT_EQ(dj::cli::exit_code(SolveStatus::ToleranceFloor), 2);
  EXPECT_EQ(dj::cli::exit_code(SolveStatus::MaxSweeps), 3);
  EXPECT_EQ(dj::cli::exit_code(SolveStatus::Stagnated), 4);
  EXPECT_EQ(dj::cli::exit_code(dj::Errc::TrackerStalled), 4);
  EXPECT_EQ(dj::cli::exit_code(dj::Errc::ParseError), 65);
}

}  // namespace
