#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "support/oracles.hpp"
#include "wreath/eigen_multiset.hpp"
#include "wreath/graphs.hpp"
#include "wreath/matrix_io.hpp"
#include "wreath_cli/cli.hpp"

using namespace wreath;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome wreath_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "wreath");
  std::ostringstream out, err;
  Outcome r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    static std::atomic<int> counter{0};
    dir_ = fs::temp_directory_path() /
           ("wreath_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name, const json& j) { return file(name, j.dump()); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string example_a() { return file("a.json", json::parse(R"({"rows":2,"cols":2,"data":[1,1,0,2]})")); }
  std::string example_b() {
    return file("b.json", to_json(DenseMatrix::from_rows({{1, 2, -1}, {-1, 1, 2}, {2, -1, 1}})));
  }

  fs::path dir_;
};

std::vector<Complex> expand(const json& spectrum) {
  std::vector<Complex> v;
  for (const auto& e : spectrum["eigenvalues"]) {
    for (int i = 0; i < e["multiplicity"].get<int>(); ++i) {
      v.emplace_back(e["re"].get<double>(), e["im"].get<double>());
    }
  }
  return v;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_F(CliTest, BuildExampleReportsOrderAndTrace) {
  const Outcome r = wreath_cli({"build", "--a", example_a(), "--b", example_b()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("order 18"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("trace 45"), std::string::npos) << r.err;
  const SparseMatrix s = sparse_from_json(json::parse(r.out));
  EXPECT_EQ(s.rows(), 18u);
  EXPECT_NEAR(trace(s).real(), 45.0, 1e-12);
}

TEST_F(CliTest, BuildKernelPairIsEmpty) {
  const double h = 1.75;
  const auto a = file("a.json", to_json(scale(DenseMatrix::identity(2), h)));
  const auto b = file("b.json", to_json(scale(DenseMatrix::identity(3), -h)));
  const Outcome r = wreath_cli({"build", "--a", a, "--b", b});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["rows"], 18);
  EXPECT_EQ(j["triples"].size(), 0u);
  EXPECT_NE(r.err.find("stored nonzeros 0"), std::string::npos);
}

TEST_F(CliTest, BuildNonzeroCountMatchesMaterialization) {
  oracle::Rng rng(301);
  DenseMatrix a = rng.integer_dense(3, 3, -3, 3);
  DenseMatrix b = rng.integer_dense(3, 3, -3, 3);
  a.entries()[1] = 0;
  b.entries()[6] = 0;
  const Outcome r = wreath_cli({"build", "--a", file("a.json", to_json(a)), "--b",
                            file("b.json", to_json(b)), "--dense"});
  ASSERT_EQ(r.code, 0) << r.err;
  const DenseMatrix got = dense_from_json(json::parse(r.out));
  const DenseMatrix want = oracle::wreath_by_definition(a, b);
  EXPECT_EQ(got, want);
  std::size_t nnz = 0;
  for (const Complex z : want.entries()) nnz += z != Complex(0) ? 1 : 0;
  const Outcome sparse = wreath_cli({"build", "--a", path("a.json"), "--b", path("b.json")});
  EXPECT_EQ(json::parse(sparse.out)["triples"].size(), nnz);
}

TEST_F(CliTest, SpectrumMethodsAgreeOnExample) {
  const auto a = example_a();
  const auto b = example_b();
  const Outcome red = wreath_cli({"spectrum", "--a", a, "--b", b, "--format", "json"});
  const Outcome den =
      wreath_cli({"spectrum", "--a", a, "--b", b, "--method", "dense", "--format", "json"});
  ASSERT_EQ(red.code, 0) << red.err;
  ASSERT_EQ(den.code, 0) << den.err;
  const auto x = expand(json::parse(red.out));
  const auto y = expand(json::parse(den.out));
  EXPECT_EQ(x.size(), 18u);
  EXPECT_TRUE(eigen_values_diff(x, y, 1e-8).equal);
  EXPECT_EQ(json::parse(red.out)["eigenvalues"].size(), 6u);
}

TEST_F(CliTest, SpectrumCsvHeaderAndOrder) {
  const Outcome r = wreath_cli({"spectrum", "--a", example_a(), "--b", example_b()});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("re,im,multiplicity\n", 0), 0u);
  EXPECT_EQ(count_of(r.out, "\n"), 7u);
}

TEST_F(CliTest, ReducedRefusesNonCirculant) {
  const auto b = file("b.json", to_json(DenseMatrix::from_rows({{1, 2, -1}, {-1, 1, 2}, {2, 5, 1}})));
  const Outcome r = wreath_cli({"spectrum", "--a", example_a(), "--b", b, "--method", "reduced"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("not circulant"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("(3, 2)"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("--method dense"), std::string::npos) << r.err;
  EXPECT_EQ(wreath_cli({"spectrum", "--a", example_a(), "--b", b, "--method", "dense"}).code, 0);
}

TEST_F(CliTest, CoarseToleranceIsDeterministic) {
  oracle::Rng rng(302);
  const auto a = file("a.json", to_json(rng.dense(2, 2)));
  CirculantSpec spec{{1.0, Complex(1e-5, 0), Complex(1e-5, 0)}};
  const auto b = file("b.json", to_json(spec.to_matrix()));
  const Outcome fine = wreath_cli({"spectrum", "--a", a, "--b", b, "--tol", "1e-8"});
  const Outcome coarse1 = wreath_cli({"spectrum", "--a", a, "--b", b, "--tol", "1e-4"});
  const Outcome coarse2 = wreath_cli({"spectrum", "--a", a, "--b", b, "--tol", "1e-4"});
  ASSERT_EQ(coarse1.code, 0);
  EXPECT_EQ(coarse1.out, coarse2.out);
  EXPECT_LT(count_of(coarse1.out, "\n"), count_of(fine.out, "\n"));
}

TEST_F(CliTest, OutputIsIndependentOfThreads) {
  oracle::Rng rng(303);
  const auto a = file("a.json", to_json(rng.dense(3, 3)));
  const auto b = file("b.json", to_json(rng.circulant(3).to_matrix()));
  const Outcome one = wreath_cli({"--threads", "1", "spectrum", "--a", a, "--b", b});
  const Outcome many = wreath_cli({"--threads", "4", "spectrum", "--a", a, "--b", b});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, many.out);
}

TEST_F(CliTest, FileOutputMatchesStdout) {
  const auto a = example_a();
  const auto b = example_b();
  const Outcome r = wreath_cli({"build", "--a", a, "--b", b, "--out", path("w.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path("w.json"));
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, wreath_cli({"build", "--a", a, "--b", b}).out);
}

TEST_F(CliTest, GraphWreathDot) {
  const Outcome r = wreath_cli({"graph-wreath", "--g1", "cycle:3", "--g2", "segment", "--dot"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_of(r.out, "[label="), 24u);
  EXPECT_EQ(count_of(r.out, " -- "), 36u);
  EXPECT_NE(r.out.find("\"010,2\""), std::string::npos);
  EXPECT_NE(r.err.find("3-regular"), std::string::npos);
}

TEST_F(CliTest, GraphWreathJsonFromFile) {
  const auto k3 = file("k3.json", to_json(Graph::complete(3)));
  const Outcome r = wreath_cli({"graph-wreath", "--g1", "complete:2", "--g2", k3});
  ASSERT_EQ(r.code, 0) << r.err;
  const Graph g = graph_from_json(json::parse(r.out));
  const Graph want = graph_wreath(Graph::complete(2), Graph::complete(3));
  EXPECT_EQ(g.labels(), want.labels());
  EXPECT_EQ(g.edges(), want.edges());
  EXPECT_EQ(wreath_cli({"graph-wreath", "--g1", "cycle:x", "--g2", "segment"}).code,
            cli::kExitUsage);
  const auto bad = file("bad.json", std::string(R"({"n": 2, "labels": ["a","b"], "edges": [[0, 7]]})"));
  const Outcome e = wreath_cli({"graph-wreath", "--g1", bad, "--g2", "segment"});
  EXPECT_EQ(e.code, cli::kExitUsage);
  EXPECT_NE(e.err.find("edges[0][1]"), std::string::npos) << e.err;
}

TEST_F(CliTest, LamplighterClosedFormParts) {
  const Outcome r = wreath_cli(
      {"lamplighter", "--graph", "complete", "--n", "3", "--closed-form", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["total"], 24);
  ASSERT_EQ(j["parts"].size(), 4u);
  EXPECT_EQ(j["parts"][1]["weight"], 3);
  EXPECT_EQ(j["parts"][2]["weight"], 3);
  const Outcome check = wreath_cli({"lamplighter", "--graph", "complete", "--n", "3", "--verify"});
  EXPECT_EQ(check.code, 0) << check.err;
  EXPECT_NE(r.err.find("k=0 weight 1"), std::string::npos);
}

TEST_F(CliTest, LamplighterCycleValidated) {
  const Outcome r = wreath_cli({"lamplighter", "--graph", "cycle", "--n", "4", "--verify",
                            "--transition", path("p.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("rows sum to 1"), std::string::npos);
  EXPECT_NE(r.err.find("matches dense"), std::string::npos);
  const SparseMatrix p = sparse_from_json(read_json_file(path("p.json")));
  EXPECT_EQ(p.rows(), 64u);
}

TEST_F(CliTest, LamplighterMoreColours) {
  const Outcome r = wreath_cli({"lamplighter", "--graph", "complete", "--n", "3", "--colors", "3",
                            "--verify"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("order 81"), std::string::npos) << r.err;
}

TEST_F(CliTest, LamplighterRejections) {
  EXPECT_EQ(wreath_cli({"lamplighter", "--graph", "cycle", "--n", "4", "--closed-form"}).code,
            cli::kExitUsage);
  EXPECT_EQ(wreath_cli({"lamplighter", "--graph", "complete", "--n", "3", "--colors", "3",
                        "--closed-form"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(wreath_cli({"lamplighter", "--graph", "complete"}).code, cli::kExitUsage);
  const auto star = file("star.json", to_json(Graph({"c", "x", "y", "z"}, {{0, 1}, {0, 2}, {0, 3}})));
  const Outcome r = wreath_cli({"lamplighter", "--graph", star});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("regular"), std::string::npos) << r.err;
}

TEST_F(CliTest, SylvesterCheckClosedForm) {
  const json sys = {{"wreath", {{"A", to_json(DenseMatrix::diagonal(std::vector<Complex>{1, 2}))},
                                {"B", to_json(DenseMatrix::from_rows({{1, 1}, {1, 1}}))}}},
                    {"C", to_json(DenseMatrix(2, 4))}};
  const Outcome r = wreath_cli({"sylvester", "check", "--in", file("s.json", sys)});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["route"], "closed-form");
  EXPECT_EQ(j["unique"], true);

  json bad = sys;
  bad["wreath"]["A"] = to_json(DenseMatrix::diagonal(std::vector<Complex>{1, -2}));
  const Outcome s = wreath_cli({"sylvester", "check", "--in", file("bad.json", bad)});
  ASSERT_EQ(s.code, 0);
  const json w = json::parse(s.out);
  EXPECT_EQ(w["unique"], false);
  EXPECT_EQ(w["witness"]["k"], 2);
  EXPECT_EQ(w["witness"]["reason"], "a_k = -m h");
  EXPECT_EQ(wreath_cli({"sylvester", "solve", "--in", path("bad.json")}).code,
            cli::kExitNumerical);
}

TEST_F(CliTest, SylvesterSolveRecoversManufacturedSolution) {
  oracle::Rng rng(304);
  const DenseMatrix a1 = rng.dense(2, 2), b1 = rng.dense(3, 3);
  const DenseMatrix a2 = rng.dense(2, 2), b2 = rng.dense(3, 3);
  const DenseMatrix x = rng.dense(2, 3);
  const DenseMatrix c = add(multiply(multiply(a1, x), b1), multiply(multiply(a2, x), b2));
  const json sys = {{"pairs", {{{"A", to_json(a1)}, {"B", to_json(b1)}},
                               {{"A", to_json(a2)}, {"B", to_json(b2)}}}},
                    {"C", to_json(c)}};
  const Outcome r = wreath_cli({"sylvester", "solve", "--in", file("s.json", sys)});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_LT(max_abs_diff(dense_from_json(j["x"]), x), 1e-9);
  EXPECT_LT(j["relative_residual"].get<double>(), 1e-12);
  const Outcome check = wreath_cli({"sylvester", "check", "--in", path("s.json")});
  EXPECT_EQ(json::parse(check.out)["route"], "lu");
  EXPECT_EQ(json::parse(check.out)["unique"], true);
}

TEST_F(CliTest, BenchSmall) {
  const Outcome r = wreath_cli({"bench", "--n", "2", "--m", "3", "--repeat", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "equal");
  EXPECT_EQ(j["order"], 18);
  EXPECT_TRUE(j["speedup"].is_number());
  EXPECT_EQ(wreath_cli({"bench", "--n", "2", "--m", "3", "--repeat", "4"}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, BenchAboveDenseCapIsReducedOnly) {
  const Outcome r = wreath_cli({"bench", "--n", "3", "--m", "3", "--dense-cap", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "dense-skipped");
  EXPECT_TRUE(j["dense_ms"].is_null());
  EXPECT_TRUE(j["reduced_ms"].is_number());
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(wreath_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(wreath_cli({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(wreath_cli({"build", "--a", example_a()}).code, cli::kExitUsage);
  EXPECT_EQ(wreath_cli({"frobnicate"}).code, cli::kExitUsage);

  const Outcome parse = wreath_cli({"build", "--a", file("x.json", std::string("{\"rows\": 1,")),
                                "--b", example_b()});
  EXPECT_EQ(parse.code, cli::kExitUsage);
  EXPECT_NE(parse.err.find("byte"), std::string::npos) << parse.err;

  oracle::Rng rng(305);
  const auto a5 = file("a5.json", to_json(rng.dense(5, 5)));
  const auto b3 = file("b3.json", to_json(rng.circulant(3).to_matrix()));
  const Outcome cap = wreath_cli({"spectrum", "--a", a5, "--b", b3, "--method", "dense"});
  EXPECT_EQ(cap.code, cli::kExitCap);
  EXPECT_NE(cap.err.find("--method reduced"), std::string::npos) << cap.err;
  EXPECT_EQ(wreath_cli({"spectrum", "--a", a5, "--b", b3}).code, cli::kExitOk);

  const auto a40 = file("a40.json", to_json(DenseMatrix::identity(40)));
  const auto b2 = file("b2.json", to_json(DenseMatrix::identity(2)));
  EXPECT_EQ(wreath_cli({"build", "--a", a40, "--b", b2}).code, cli::kExitCap);
}

TEST_F(CliTest, EveryCommandTakesASeed) {
  const auto a = example_a();
  const auto b = example_b();
  EXPECT_EQ(wreath_cli({"build", "--a", a, "--b", b, "--seed", "9"}).code, 0);
  EXPECT_EQ(wreath_cli({"spectrum", "--a", a, "--b", b, "--seed", "9"}).code, 0);
  EXPECT_EQ(wreath_cli({"graph-wreath", "--g1", "segment", "--g2", "segment", "--seed", "9"}).code, 0);
  EXPECT_EQ(wreath_cli({"lamplighter", "--graph", "complete", "--n", "2", "--seed", "9"}).code, 0);
  const json sys = {{"wreath", {{"A", to_json(DenseMatrix::identity(1))},
                                {"B", to_json(DenseMatrix::identity(2))}}},
                    {"C", to_json(DenseMatrix(1, 2))}};
  EXPECT_EQ(wreath_cli({"sylvester", "check", "--in", file("s.json", sys), "--seed", "9"}).code, 0);
  const Outcome x = wreath_cli({"bench", "--n", "1", "--m", "2", "--seed", "9"});
  const Outcome y = wreath_cli({"bench", "--n", "1", "--m", "2", "--seed", "9"});
  EXPECT_EQ(x.code, 0);
  EXPECT_EQ(json::parse(x.out)["verdict"], json::parse(y.out)["verdict"]);
}
