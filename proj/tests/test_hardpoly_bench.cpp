#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "logdepth.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace ld = logdepth;
namespace fs = std::filesystem;
using ld::Mode;
using test::q;

// ---------------------------------------------------------------------------
// Hard polynomial

TEST(Hard, SizesAndDegrees) {
  for (std::uint32_t k = 1; k <= 3; ++k)
    for (std::uint32_t r = 2; r <= 4; ++r) {
      const ld::HardParams p{k, r};
      auto m = ld::gen_hard(p);
      EXPECT_EQ(mpz_class(static_cast<unsigned long>(m.metrics().size)), p.universe());
      EXPECT_EQ(m.metrics().syn_degree, std::uint64_t{1} << k);
      EXPECT_EQ(m.metrics().depth, 2 * k);
      if (k <= 2 || r <= 3)
        EXPECT_EQ(mpz_class(static_cast<unsigned long>(ld::expand(m).size())), p.monomial_count());
    }
}

TEST(Hard, AllCoefficientsOne) {
  auto p = ld::expand(ld::gen_hard(ld::HardParams{2, 3}));
  EXPECT_EQ(p.size(), 27u);
  for (const auto& [m, c] : p.terms()) EXPECT_EQ(c, 1);
}

TEST(Hard, UniverseLimit) {
  EXPECT_THROW(ld::gen_hard(ld::HardParams{10, 4}), ld::UniverseTooLarge);
  EXPECT_THROW(ld::gen_hard(ld::HardParams{0, 2}), ld::ParamOutOfRange);
  EXPECT_THROW(ld::gen_hard(ld::HardParams{2, 1}), ld::ParamOutOfRange);
}

TEST(Hard, EncodeDecodeRoundTrip) {
  const ld::HardParams p{3, 3};
  for (std::uint32_t a = 1; a <= 2; ++a)
    for (std::uint32_t b = 1; b <= 3; ++b) {
      ld::Word sigma{a, 2, 1}, tau{b, 3, 1};
      auto [s, t] = ld::decode(p, ld::encode(p, sigma, tau));
      EXPECT_EQ(s, sigma);
      EXPECT_EQ(t, tau);
    }
}

TEST(Hard, SubpolynomialIsRenamedSmallerInstance) {
  const ld::HardParams p{3, 2};
  auto m = ld::gen_hard(p);
  for (const auto& [u, v] : std::vector<std::pair<ld::Word, ld::Word>>{{{1}, {2}}, {{2, 1}, {1, 2}}, {{2}, {1}}}) {
    const ld::HardParams small{static_cast<std::uint32_t>(p.k - u.size()), p.r};
    auto map = ld::prefix_renaming(p, u, v);
    oracle::Terms renamed;
    for (const auto& [w, c] : oracle::parse_tree_sum(ld::gen_hard(small))) {
      oracle::Word x;
      for (auto var : w) x.push_back(map.at(var));
      std::sort(x.begin(), x.end());
      renamed[x] += c;
    }
    EXPECT_EQ(renamed, oracle::parse_tree_sum(ld::subpolynomial(m, p, u, v)));
  }
}

TEST(Hard, PrefixProperty) {
  for (std::uint32_t k = 1; k <= 3; ++k) {
    auto c = ld::check_prefix_property(ld::HardParams{k, 2});
    EXPECT_TRUE(c.holds);
    EXPECT_FALSE(c.violation);
  }
}

TEST(Hard, PrefixPropertyMutantFails) {
  // x_{11,11} x_{12,12}: sigmas share one letter, taus only one.
  const ld::HardParams p{2, 2};
  using N = ld::Node<ld::Rationals>;
  auto f = ld::Formula<ld::Rationals>{
      ld::Rationals{}, Mode::Commutative,
      N::prod({{mpq_class(1), N::var(ld::encode(p, {1, 1}, {1, 1}))},
               {mpq_class(1), N::var(ld::encode(p, {1, 2}, {1, 2}))}})};
  auto c = ld::check_prefix_property(f, p);
  EXPECT_FALSE(c.holds);
  ASSERT_TRUE(c.violation);
  EXPECT_EQ(c.violation->sigma_prefix, 1u);
}

TEST(Hard, GateCountsOnCanonicalAndReduced) {
  const ld::HardParams p{2, 3};
  auto m = ld::gen_hard(p);
  auto c = ld::check_gate_counts(m, p);
  EXPECT_TRUE(c.holds);
  EXPECT_GT(c.gates, 0u);
  auto reduced = ld::depth_reduce_main_auto(ld::binarize(m)).formula;
  EXPECT_TRUE(ld::check_gate_counts(reduced, p).holds);
}

TEST(Hard, GateCountsRejectOtherPolynomial) {
  EXPECT_THROW(ld::check_gate_counts(ld::gen_hard(ld::HardParams{2, 2}), ld::HardParams{2, 3}), ld::NotComputingH);
}

TEST(Hard, LowerBoundParameters) {
  auto a = ld::lower_bound_params(16, 4);
  EXPECT_EQ(a.k, 2u);
  EXPECT_EQ(a.r, 2u);
  auto b = ld::lower_bound_params(1024, 4);
  EXPECT_EQ(b.k, 2u);
  EXPECT_EQ(b.r, 16u);
  EXPECT_THROW(ld::lower_bound_params(100, 3), ld::ParamOutOfRange);
  EXPECT_THROW(ld::lower_bound_params(32, 8), ld::ParamOutOfRange);
}

// ---------------------------------------------------------------------------
// Generators

TEST(Generators, DegreeOne) {
  auto f = ld::gen_random_homogeneous(4, 1, 4, 1);
  EXPECT_EQ(f.metrics().size, 4u);
  EXPECT_EQ(f.metrics().syn_degree, 1u);
  EXPECT_TRUE(ld::is_homogeneous(f));
}

TEST(Generators, HomogeneousShape) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto f = ld::gen_random_homogeneous(8, 4, 50, seed);
    EXPECT_EQ(f.metrics().size, 50u);
    EXPECT_EQ(f.metrics().syn_degree, 4u);
    EXPECT_TRUE(ld::is_homogeneous(f));
    EXPECT_TRUE(ld::is_syntactically_monotone(f));
    for (auto v : ld::variables(f)) EXPECT_LE(v, 8u);
  }
  EXPECT_TRUE(ld::structurally_equal(ld::gen_random_homogeneous(8, 4, 50, 7), ld::gen_random_homogeneous(8, 4, 50, 7)));
}

TEST(Generators, InfeasibleShapes) {
  EXPECT_THROW(ld::gen_random_homogeneous(2, 5, 3, 1), ld::InfeasibleShape);
  EXPECT_THROW(ld::gen_random_homogeneous(0, 2, 3, 1), ld::InfeasibleShape);
  EXPECT_THROW(ld::gen_random_homogeneous(2, 0, 3, 1), ld::InfeasibleShape);
  EXPECT_THROW(ld::comb(0), ld::InfeasibleShape);
}

TEST(Generators, SkewShape) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto f = ld::gen_random_skew(3, 30, seed);
    EXPECT_TRUE(ld::is_skew(f));
    EXPECT_LE(f.metrics().sum_depth, 3u);
    EXPECT_LE(f.metrics().size, 30u);
    EXPECT_EQ(ld::variables(f).size(), f.metrics().size);
  }
}

TEST(Generators, Combs) {
  auto c = ld::comb(64);
  EXPECT_EQ(c.metrics().size, 64u);
  EXPECT_EQ(c.metrics().depth, 63u);
  EXPECT_EQ(ld::left_comb(64).metrics().depth, 63u);
}

// ---------------------------------------------------------------------------
// Bench driver

TEST(Bench, HardMainRow) {
  ld::Experiment e;
  e.family = ld::Family::Hard;
  e.k = 2;
  e.r = 2;
  e.pass = ld::PassKind::Main;
  auto rows = ld::run(e);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_TRUE(rows[0].verified);
  ASSERT_TRUE(rows[0].phi);
  EXPECT_LE(rows[0].product_depth_out, *rows[0].phi);
  EXPECT_EQ(rows[0].s_in, 16u);
}

TEST(Bench, CombBalancing) {
  ld::Experiment e;
  e.family = ld::Family::Comb;
  e.size = 64;
  e.pass = ld::PassKind::BB;
  e.epsilon = 1;
  auto rows = ld::run(e);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].depth_in, 63u);
  EXPECT_LT(rows[0].depth_out, 63u);
  EXPECT_TRUE(rows[0].verified);
}

TEST(Bench, RepetitionsAreReproducible) {
  ld::Experiment e;
  e.family = ld::Family::RandomHomogeneous;
  e.degree = 4;
  e.size = 80;
  e.repetitions = 10;
  e.pass = ld::PassKind::Homogeneous;
  auto a = ld::to_csv(ld::run(e), false);
  auto b = ld::to_csv(ld::run(e, 2), false);
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 11);
  EXPECT_EQ(a.substr(0, a.find('\n')), ld::kCsvHeader);
}

TEST(Bench, FailuresAreRecorded) {
  ld::Experiment e;
  e.family = ld::Family::File;
  e.file = q("(+ x1 (* x2 x3))");
  e.pass = ld::PassKind::Pipeline;
  auto rows = ld::run(e);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].status.rfind("failed: ", 0), 0u);
  EXPECT_FALSE(rows[0].verified);
}

TEST(Bench, VerifyFallsBackToPit) {
  auto f = ld::gen_hard(ld::HardParams{3, 3});
  auto v = ld::verify_equal(f, f, ld::VerifyMethod::Expand, 100, ld::PitConfig{}, ld::kMersenne61);
  EXPECT_TRUE(v.equal);
  EXPECT_EQ(v.method, "pit-fallback");
  auto w = ld::verify_equal(f, ld::gen_hard(ld::HardParams{3, 2}), ld::VerifyMethod::Pit, 100, ld::PitConfig{},
                            ld::kMersenne61);
  EXPECT_FALSE(w.equal);
  EXPECT_TRUE(w.witness);
}

TEST(Bench, FittedConstants) {
  ld::Experiment e;
  e.family = ld::Family::RandomHomogeneous;
  e.degree = 8;
  e.size = 200;
  e.repetitions = 3;
  e.pass = ld::PassKind::Main;
  auto rows = ld::run(e);
  auto c = ld::fit_constants(rows);
  ASSERT_TRUE(c.c_depth);
  ASSERT_TRUE(c.c_size);
  EXPECT_GT(*c.c_depth, 0.0);
  EXPECT_LE(*c.c_size, 1.0);
  EXPECT_EQ(c.rows_used, 3u);
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct Run {
  int code;
  std::string out;
};

Run sh(const std::string& args) {
  std::string cmd = std::string(LOGDEPTH_CLI) + " " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf;
  while (auto n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = ::pclose(p);
  return Run{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  fs::path dir;
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("logdepth_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text) {
    auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

}  // namespace

TEST_F(Cli, GenHard) {
  auto r = sh("gen-hard --k 2 --r 3");
  ASSERT_EQ(r.code, 0);
  auto f = ld::parse_as(r.out, ld::Rationals{});
  EXPECT_EQ(f.metrics().size, 36u);
}

TEST_F(Cli, ReduceMainVerifies) {
  auto in = file("m.ld", ld::serialize(ld::gen_hard(ld::HardParams{2, 2})));
  auto out = (dir / "out.ld").string();
  auto r = sh("reduce --method main " + in + " -o " + out);
  ASSERT_EQ(r.code, 0);
  std::ifstream is(out);
  std::string text((std::istreambuf_iterator<char>(is)), {});
  EXPECT_TRUE(ld::equal_expand(ld::parse_as(text, ld::Rationals{}), ld::gen_hard(ld::HardParams{2, 2})));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(sh("validate " + file("bad.ld", "(* 1 x1)")).code, 1);
  EXPECT_EQ(sh("validate " + file("ok.ld", "(+ x1 x2)")).code, 0);
  EXPECT_EQ(sh("stats " + file("syntax.ld", "(+ x1")).code, 2);
  EXPECT_EQ(sh("stats " + (dir / "missing.ld").string()).code, 2);
  EXPECT_EQ(sh("no-such-command").code, 2);
  auto m22 = file("m22.ld", ld::serialize(ld::gen_hard(ld::HardParams{2, 2})));
  EXPECT_EQ(sh("check-hard --k 2 --r 2 " + m22).code, 0);
  EXPECT_EQ(sh("check-hard --k 2 --r 3 " + m22).code, 1);
  EXPECT_EQ(sh("expand --budget 10 " + file("m33.ld", ld::serialize(ld::gen_hard(ld::HardParams{3, 3})))).code, 3);
  EXPECT_EQ(sh("verify-equal " + file("a.ld", "(* x1 x2)") + " " + file("b.ld", "(* x2 x1)")).code, 0);
  auto a = file("na.ld", "mode: noncommutative\n(* x1 x2)");
  auto b = file("nb.ld", "mode: noncommutative\n(* x2 x1)");
  EXPECT_EQ(sh("verify-equal --method pit " + a + " " + b).code, 1);
}

TEST_F(Cli, StatsOnPrimeField) {
  auto r = sh("stats " + file("fp.ld", "field: Fp:101\n(+ x1 (scale 3 x2))"));
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["syntactically_monotone"].is_null());
  EXPECT_EQ(j["metrics"]["size"], 2);
}

TEST_F(Cli, BenchIsByteIdenticalWithoutTiming) {
  const std::string args = "bench --family random-homogeneous --pass main --degree 4,8 --size 100 --reps 3 --no-timing";
  auto a = sh(args);
  auto b = sh(args + " --jobs 2");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 7);
}
