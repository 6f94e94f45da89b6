// Command-line driver: every pass and checker over formula files.
//
// Formula outputs go to -o (default stdout) and report records to --report
// (default stderr). Commands without a formula output print their report on
// stdout. Exit codes: 0 success, 1 verification failure, 2 usage or input
// error, 3 budget exceeded.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "logdepth.hpp"

namespace ld = logdepth;
using ld::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kBudget = 3 };

struct Common {
  std::string out = "-";
  std::string report;
  bool human = false;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> prime;
  std::size_t budget = ld::kDefaultExpandBudget;
  std::uint32_t trials = 20;

  std::uint64_t pit_prime() const { return prime ? *prime : ld::default_prime(); }
};

std::string read_input(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_to(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

std::string render(const json& j, bool human) { return (human ? j.dump(2) : j.dump()) + "\n"; }

/// Report record for commands that also write a formula.
void emit_side_report(const Common& c, const json& j) {
  if (c.report.empty())
    std::cerr << render(j, c.human);
  else
    write_to(c.report, render(j, c.human));
}

/// Report record for commands whose only output is the report.
void emit_report(const Common& c, const json& j) {
  write_to(c.report.empty() ? c.out : c.report, render(j, c.human));
}

template <ld::FieldDescriptor K>
void emit_formula(const Common& c, const ld::Formula<K>& f) {
  write_to(c.out, c.human ? ld::render_tree(f) : ld::serialize(f));
}

ld::AnyFormula load(const std::string& path) { return ld::parse(read_input(path)); }

mpq_class parse_rational(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    auto q = ld::Rationals{}.parse(text);
    if (!q) throw CLI::ValidationError("epsilon", "not a rational: " + text);
    return *q;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  auto q = ld::Rationals{}.parse(digits.empty() ? "x" : digits);
  if (!q || text.find_first_not_of("0123456789.") != std::string::npos)
    throw CLI::ValidationError("epsilon", "not a decimal: " + text);
  return *q / ld::pow_mpz(10, text.size() - dot - 1);
}

mpq_class parse_epsilon(const std::string& text) {
  if (text == "auto") return mpq_class(1, 2);
  auto e = parse_rational(text);
  ld::check_epsilon(e);
  return e;
}

std::optional<std::uint32_t> parse_delta(const std::string& text) {
  if (text == "auto") return std::nullopt;
  auto n = ld::detail::parse_natural(text);
  if (!n || *n == 0 || *n > 64) throw ld::ParamOutOfRange("delta must be 'auto' or a natural in [1, 64]");
  return static_cast<std::uint32_t>(*n);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

template <ld::FieldDescriptor K>
ld::Verification check_equal(const Common& c, const ld::Formula<K>& a, const ld::Formula<K>& b,
                             ld::VerifyMethod how) {
  ld::PitConfig pit{c.trials, c.seed, 0};
  return ld::verify_equal(a, b, how, c.budget, pit, c.pit_prime());
}

/// Adds the verdict to the report; true when equal.
bool record_verification(json& j, const ld::Verification& v) {
  j["verdict"] = v.equal ? "equal" : "unequal";
  j["method"] = v.method;
  if (v.witness) j["witness"] = ld::to_json(*v.witness);
  return v.equal;
}

// ---------------------------------------------------------------------------

struct StatsCmd {
  std::string input;
  int run(const Common& c) const {
    auto any = load(input);
    return std::visit(
        [&](const auto& f) {
          json j;
          j["command"] = "stats";
          j["mode"] = ld::to_string(f.mode);
          j["field"] = f.field.name();
          j["metrics"] = ld::to_json(f.metrics());
          j["variables"] = ld::variables(f).size();
          j["parse_trees"] = ld::count_parse_trees(f);
          j["homogeneous"] = ld::is_homogeneous(f);
          j["skew"] = ld::is_skew(f);
          using K = std::decay_t<decltype(f.field)>;
          if constexpr (K::ordered)
            j["syntactically_monotone"] = ld::is_syntactically_monotone(f);
          else
            j["syntactically_monotone"] = nullptr;
          j["fanin2"] = ld::is_fanin2(f);
          emit_report(c, j);
          return kOk;
        },
        any);
  }
};

struct ValidateCmd {
  std::string input;
  int run(const Common& c) const {
    json j;
    j["command"] = "validate";
    try {
      auto any = load(input);
      auto problems = std::visit([](const auto& f) { return ld::validate(f); }, any);
      j["valid"] = problems.empty();
      j["problems"] = problems;
    } catch (const ld::SyntaxError& e) {
      j["valid"] = false;
      j["problems"] = {e.what()};
      j["line"] = e.line();
      j["column"] = e.column();
    } catch (const ld::WellFormednessError& e) {
      j["valid"] = false;
      j["problems"] = {e.what()};
    }
    emit_report(c, j);
    return j["valid"].get<bool>() ? kOk : kVerifyFailed;
  }
};

struct ExpandCmd {
  std::string input;
  int run(const Common& c) const {
    auto any = load(input);
    return std::visit(
        [&](const auto& f) {
          auto p = ld::expand(f, c.budget);
          write_to(c.out, p.to_string());
          json j{{"command", "expand"}, {"terms", p.size()}, {"degrees", p.degrees()}};
          emit_side_report(c, j);
          return kOk;
        },
        any);
  }
};

struct ReduceCmd {
  std::string input;
  std::string method = "main";
  std::string delta = "auto";
  std::string epsilon = "auto";
  std::string verify = "expand";
  bool no_verify = false;

  template <ld::FieldDescriptor K>
  int run_on(const Common& c, const ld::Formula<K>& f) const {
    const auto t0 = std::chrono::steady_clock::now();
    const mpq_class eps = parse_epsilon(epsilon);
    ld::Report r;
    r.pass = method;
    r.input = f.metrics();
    r.seed = c.seed;
    std::optional<ld::Formula<K>> out;
    if (method == "bb") {
      auto res = ld::depth_reduce_bb(f, eps);
      r.epsilon = eps;
      r.extra["k"] = res.k;
      out = res.formula;
    } else if (method == "main") {
      auto in = ld::is_fanin2(f) ? f : ld::binarize(f);
      const auto& m = in.metrics();
      auto d = parse_delta(delta);
      auto res = ld::depth_reduce_main(in, d ? *d : ld::auto_delta(m.size, m.syn_degree, m.sum_depth));
      r.delta = res.delta;
      r.phi = res.phi.phi;
      r.bound_size = res.size_bound.get_str();
      r.extra["binarized"] = !ld::is_fanin2(f);
      out = res.formula;
    } else if (method == "nearlinear" || method == "homogeneous" || method == "pipeline") {
      auto res = method == "nearlinear"    ? ld::depth_reduce_nearlinear(f, eps)
                 : method == "homogeneous" ? ld::depth_reduce_homogeneous(f)
                                           : ld::pipeline_inhom(f, c.budget);
      if (method == "nearlinear") r.epsilon = eps;
      r.delta = res.delta;
      if (res.phi) r.phi = res.phi->phi;
      r.extra["k"] = res.bb_k;
      r.extra["size_after_bb"] = res.size_after_bb;
      r.extra["branch"] = res.branch;
      out = res.formula;
    } else {
      throw CLI::ValidationError("--method", "unknown method " + method);
    }
    r.output = out->metrics();
    int code = kOk;
    json j;
    if (!no_verify) {
      auto v = check_equal(c, f, *out, verify == "pit" ? ld::VerifyMethod::Pit : ld::VerifyMethod::Expand);
      r.verdict = v.equal ? "equal" : "unequal";
      r.method = v.method;
      if (v.witness) r.extra["witness"] = ld::to_json(*v.witness);
      if (!v.equal) code = kVerifyFailed;
    }
    r.duration_ms = ms_since(t0);
    if (code == kOk) emit_formula(c, *out);
    emit_side_report(c, r.to_json());
    return code;
  }

  int run(const Common& c) const {
    auto any = load(input);
    return std::visit([&](const auto& f) { return run_on(c, f); }, any);
  }
};

struct HomogenizeCmd {
  std::string input;
  std::uint32_t degree = 0;
  bool no_verify = false;

  template <ld::FieldDescriptor K>
  int run_on(const Common& c, const ld::Formula<K>& f) const {
    const auto t0 = std::chrono::steady_clock::now();
    const bool pre = !ld::products_fanin2(f);
    auto in = pre ? ld::product_fanin_2(f) : f;
    auto res = ld::homogenize(in, degree);
    ld::Report r;
    r.pass = "homogenize";
    r.input = f.metrics();
    r.extra["degree"] = degree;
    r.extra["product_fanin_2_applied"] = pre;
    r.extra["total_size"] = res.total_size;
    r.extra["size_bound"] = res.size_bound.get_str();
    json sizes = json::array();
    for (const auto& comp : res.components) sizes.push_back(comp ? json(comp->metrics().size) : json(nullptr));
    r.extra["component_sizes"] = sizes;
    const auto& target = res.components[degree];
    int code = kOk;
    if (target) {
      r.output = target->metrics();
      if (!no_verify) {
        try {
          const bool ok = ld::expand(*target, c.budget) == ld::expand(f, c.budget).component(degree);
          r.verdict = ok ? "equal" : "unequal";
          r.method = "expand";
          if (!ok) code = kVerifyFailed;
        } catch (const ld::BudgetExceeded&) {
          r.method = "skipped: budget";
        }
      }
      if (code == kOk) emit_formula(c, *target);
    } else {
      r.extra["empty"] = true;
    }
    r.duration_ms = ms_since(t0);
    emit_side_report(c, r.to_json());
    return code;
  }

  int run(const Common& c) const {
    auto any = load(input);
    return std::visit([&](const auto& f) { return run_on(c, f); }, any);
  }
};

struct ProdFaninCmd {
  std::string input;
  std::string verify = "expand";
  bool no_verify = false;
  int run(const Common& c) const {
    auto any = load(input);
    return std::visit(
        [&](const auto& f) {
          const auto t0 = std::chrono::steady_clock::now();
          auto out = ld::product_fanin_2(f);
          ld::Report r;
          r.pass = "prodfanin2";
          r.input = f.metrics();
          r.output = out.metrics();
          int code = kOk;
          if (!no_verify) {
            auto v = check_equal(c, f, out, verify == "pit" ? ld::VerifyMethod::Pit : ld::VerifyMethod::Expand);
            r.verdict = v.equal ? "equal" : "unequal";
            r.method = v.method;
            if (!v.equal) code = kVerifyFailed;
          }
          r.duration_ms = ms_since(t0);
          if (code == kOk) emit_formula(c, out);
          emit_side_report(c, r.to_json());
          return code;
        },
        any);
  }
};

struct GenHardCmd {
  std::uint32_t k = 1, r = 2;
  bool noncommutative = false;
  int run(const Common& c) const {
    ld::HardParams p{k, r};
    auto m = ld::gen_hard(p, ld::Rationals{}, noncommutative ? ld::Mode::NonCommutative : ld::Mode::Commutative);
    emit_formula(c, m);
    json j{{"command", "gen-hard"},
           {"k", k},
           {"r", r},
           {"size", m.metrics().size},
           {"degree", p.degree()},
           {"monomials", p.monomial_count().get_str()}};
    emit_side_report(c, j);
    return kOk;
  }
};

struct CheckHardCmd {
  std::uint32_t k = 1, r = 2;
  std::string input;  // empty: the canonical formula
  int run(const Common& c) const {
    ld::HardParams p{k, r};
    auto f = input.empty() ? ld::gen_hard(p) : std::get<ld::Formula<ld::Rationals>>(load(input));
    json j{{"command", "check-hard"}, {"k", k}, {"r", r}};
    bool ok = true;
    try {
      auto poly = ld::expand(f, c.budget);
      const bool count_ok = mpz_class(static_cast<unsigned long>(poly.size())) == p.monomial_count();
      j["monomials"] = poly.size();
      j["monomials_expected"] = p.monomial_count().get_str();
      j["monomial_count_holds"] = count_ok;
      auto pre = ld::check_prefix_property(f, p, c.budget);
      j["prefix_property_holds"] = pre.holds;
      j["prefix_pairs_checked"] = pre.pairs;
      if (pre.violation)
        j["prefix_violation"] = {{"first", ld::var::name(pre.violation->first)},
                                 {"second", ld::var::name(pre.violation->second)}};
      auto gates = ld::check_gate_counts(f, p, c.budget);
      j["gate_bound_holds"] = gates.holds;
      j["gates_checked"] = gates.gates;
      if (gates.violation)
        j["gate_violation"] = {{"monomials", gates.violation->monomials},
                               {"degree", gates.violation->degree},
                               {"bound", gates.violation->bound.get_str()}};
      ok = count_ok && pre.holds && gates.holds;
    } catch (const ld::NotComputingH& e) {
      j["error"] = e.what();
      ok = false;
    }
    j["holds"] = ok;
    emit_report(c, j);
    return ok ? kOk : kVerifyFailed;
  }
};

struct VerifyEqualCmd {
  std::string a, b;
  std::string method = "expand";
  int run(const Common& c) const {
    auto fa = load(a);
    auto fb = load(b);
    if (fa.index() != fb.index()) throw ld::ModeMismatch("formulas are over different fields");
    return std::visit(
        [&](const auto& x) {
          using F = std::decay_t<decltype(x)>;
          const auto& y = std::get<F>(fb);
          if (x.mode != y.mode || !(x.field == y.field)) throw ld::ModeMismatch("formulas differ in mode or field");
          json j{{"command", "verify-equal"}};
          const auto how = method == "pit" ? ld::VerifyMethod::Pit : ld::VerifyMethod::Expand;
          int code = kOk;
          if (how == ld::VerifyMethod::Expand) {
            // An explicit expansion request reports budget overruns instead of
            // switching methods.
            const bool eq = ld::equal_expand(x, y, c.budget);
            j["verdict"] = eq ? "equal" : "unequal";
            j["method"] = "expand";
            code = eq ? kOk : kVerifyFailed;
          } else {
            code = record_verification(j, check_equal(c, x, y, how)) ? kOk : kVerifyFailed;
          }
          emit_report(c, j);
          return code;
        },
        fa);
  }
};

struct BenchCmd {
  std::string family = "random-homogeneous";
  std::string pass = "main";
  std::string input;
  std::vector<std::uint64_t> degrees{4};
  std::vector<std::uint64_t> sizes{64};
  std::uint64_t n_vars = 8;
  std::uint32_t k = 2, r = 2, sum_depth = 4;
  bool noncommutative = false;
  std::string delta = "auto";
  std::string epsilon = "auto";
  std::uint32_t reps = 1;
  std::string verify = "expand";
  unsigned jobs = 1;
  bool no_timing = false;

  int run(const Common& c) const {
    std::vector<ld::Experiment> batch;
    ld::Experiment base;
    static const std::vector<std::pair<std::string, ld::Family>> families{
        {"comb", ld::Family::Comb},         {"left-comb", ld::Family::LeftComb},
        {"random-homogeneous", ld::Family::RandomHomogeneous}, {"random-skew", ld::Family::RandomSkew},
        {"hard", ld::Family::Hard},         {"user-file", ld::Family::File}};
    static const std::vector<std::pair<std::string, ld::PassKind>> passes{
        {"binarize", ld::PassKind::Binarize},       {"collapse", ld::PassKind::Collapse},
        {"bb", ld::PassKind::BB},                   {"main", ld::PassKind::Main},
        {"nearlinear", ld::PassKind::NearLinear},   {"homogeneous", ld::PassKind::Homogeneous},
        {"prodfanin2", ld::PassKind::ProdFanin2},   {"pipeline", ld::PassKind::Pipeline}};
    for (const auto& [n, f] : families)
      if (n == family) base.family = f;
    for (const auto& [n, p] : passes)
      if (n == pass) base.pass = p;
    base.n_vars = n_vars;
    base.k = k;
    base.r = r;
    base.sum_depth = sum_depth;
    base.mode = noncommutative ? ld::Mode::NonCommutative : ld::Mode::Commutative;
    base.delta = parse_delta(delta);
    base.epsilon = parse_epsilon(epsilon);
    base.repetitions = reps;
    base.verify = verify == "pit" ? ld::VerifyMethod::Pit : verify == "none" ? ld::VerifyMethod::None
                                                                             : ld::VerifyMethod::Expand;
    base.expand_budget = c.budget;
    base.pit_trials = c.trials;
    base.prime = c.pit_prime();
    if (base.family == ld::Family::File) {
      if (input.empty()) throw CLI::ValidationError("--input", "user-file family needs --input");
      base.file = std::get<ld::Formula<ld::Rationals>>(load(input));
    }
    // Experiment i gets seed + i; repetitions within it derive from that.
    std::uint64_t index = 0;
    for (auto d : degrees)
      for (auto s : sizes) {
        auto e = base;
        e.degree = d;
        e.size = s;
        e.seed = ld::Rng::derive(c.seed, index++ * std::max<std::uint32_t>(1, reps));
        batch.push_back(std::move(e));
      }
    auto rows = ld::run(batch, jobs);
    write_to(c.out, ld::to_csv(rows, !no_timing));
    std::string records;
    bool all_ok = true;
    for (const auto& row : rows) {
      records += render(ld::to_json(row, !no_timing), c.human);
      all_ok = all_ok && row.status == "ok";
    }
    json summary{{"command", "bench"}, {"seed", c.seed}, {"rows", rows.size()}, {"all_ok", all_ok},
                 {"fitted", ld::to_json(ld::fit_constants(rows, base.epsilon))}};
    records += render(summary, c.human);
    if (c.report.empty())
      std::cerr << records;
    else
      write_to(c.report, records);
    return all_ok ? kOk : kVerifyFailed;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-o,--output", c.out, "Output file ('-' for stdout)");
  sub->add_option("--report", c.report, "Report file (default: stderr, or stdout for report-only commands)");
  sub->add_flag("--human", c.human, "Human-readable rendering");
  sub->add_option("--seed", c.seed, "PRNG seed");
  sub->add_option("--prime", c.prime, "Prime for randomized checks (default $LOGDEPTH_PRIME or 2^61-1)");
  sub->add_option("--budget", c.budget, "Expansion budget in table entries");
  sub->add_option("--trials", c.trials, "PIT trials");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth reduction for algebraic formulas"};
  app.require_subcommand(1);
  Common common;

  StatsCmd stats;
  auto* s_stats = app.add_subcommand("stats", "Metrics and structural predicates");
  s_stats->add_option("input", stats.input)->required();

  ValidateCmd validate;
  auto* s_validate = app.add_subcommand("validate", "Parse and check well-formedness");
  s_validate->add_option("input", validate.input)->required();

  ExpandCmd expand;
  auto* s_expand = app.add_subcommand("expand", "Expand into a sparse polynomial");
  s_expand->add_option("input", expand.input)->required();

  ReduceCmd reduce;
  auto* s_reduce = app.add_subcommand("reduce", "Depth reduction");
  s_reduce->add_option("input", reduce.input)->required();
  s_reduce->add_option("--method", reduce.method)
      ->check(CLI::IsMember({"bb", "main", "nearlinear", "homogeneous", "pipeline"}));
  s_reduce->add_option("--delta", reduce.delta, "Natural or 'auto'");
  s_reduce->add_option("--epsilon", reduce.epsilon, "Rational in (0, 1] or 'auto'");
  s_reduce->add_option("--verify", reduce.verify)->check(CLI::IsMember({"expand", "pit"}));
  s_reduce->add_flag("--no-verify", reduce.no_verify);

  HomogenizeCmd homogenize;
  auto* s_homog = app.add_subcommand("homogenize", "Degree component of a formula");
  s_homog->add_option("input", homogenize.input)->required();
  s_homog->add_option("--degree", homogenize.degree)->required();
  s_homog->add_flag("--no-verify", homogenize.no_verify);

  ProdFaninCmd prodfanin;
  auto* s_pf = app.add_subcommand("prodfanin2", "Product gates of fan-in 2");
  s_pf->add_option("input", prodfanin.input)->required();
  s_pf->add_option("--verify", prodfanin.verify)->check(CLI::IsMember({"expand", "pit"}));
  s_pf->add_flag("--no-verify", prodfanin.no_verify);

  GenHardCmd genhard;
  auto* s_gh = app.add_subcommand("gen-hard", "Canonical formula for the nested inner-product polynomial");
  s_gh->add_option("--k", genhard.k)->required();
  s_gh->add_option("--r", genhard.r)->required();
  s_gh->add_flag("--noncommutative", genhard.noncommutative);

  CheckHardCmd checkhard;
  auto* s_ch = app.add_subcommand("check-hard", "Monomial count, prefix property and gate bound");
  s_ch->add_option("--k", checkhard.k)->required();
  s_ch->add_option("--r", checkhard.r)->required();
  s_ch->add_option("input", checkhard.input, "Formula to check (default: the canonical one)");

  VerifyEqualCmd veq;
  auto* s_veq = app.add_subcommand("verify-equal", "Polynomial equality of two formulas");
  s_veq->add_option("a", veq.a)->required();
  s_veq->add_option("b", veq.b)->required();
  s_veq->add_option("--method", veq.method)->check(CLI::IsMember({"expand", "pit"}));

  BenchCmd bench;
  auto* s_bench = app.add_subcommand("bench", "Run experiments and emit a CSV table");
  s_bench->add_option("--family", bench.family)
      ->check(CLI::IsMember({"comb", "left-comb", "random-homogeneous", "random-skew", "hard", "user-file"}));
  s_bench->add_option("--pass", bench.pass)
      ->check(CLI::IsMember(
          {"binarize", "collapse", "bb", "main", "nearlinear", "homogeneous", "prodfanin2", "pipeline"}));
  s_bench->add_option("--input", bench.input, "Formula for the user-file family");
  s_bench->add_option("--degree", bench.degrees, "Degrees (random-homogeneous)")->delimiter(',');
  s_bench->add_option("--size", bench.sizes, "Sizes / leaf counts")->delimiter(',');
  s_bench->add_option("--n-vars", bench.n_vars);
  s_bench->add_option("--k", bench.k);
  s_bench->add_option("--r", bench.r);
  s_bench->add_option("--sum-depth", bench.sum_depth);
  s_bench->add_flag("--noncommutative", bench.noncommutative);
  s_bench->add_option("--delta", bench.delta);
  s_bench->add_option("--epsilon", bench.epsilon);
  s_bench->add_option("--reps", bench.reps);
  s_bench->add_option("--verify", bench.verify)->check(CLI::IsMember({"expand", "pit", "none"}));
  s_bench->add_option("--jobs", bench.jobs);
  s_bench->add_flag("--no-timing", bench.no_timing, "Zero the duration column for byte-identical reruns");

  for (auto* sub : app.get_subcommands({})) add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*s_stats) return stats.run(common);
    if (*s_validate) return validate.run(common);
    if (*s_expand) return expand.run(common);
    if (*s_reduce) return reduce.run(common);
    if (*s_homog) return homogenize.run(common);
    if (*s_pf) return prodfanin.run(common);
    if (*s_gh) return genhard.run(common);
    if (*s_ch) return checkhard.run(common);
    if (*s_veq) return veq.run(common);
    if (*s_bench) return bench.run(common);
  } catch (const ld::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const ld::BoundViolation& e) {
    std::cerr << "error: bound violated: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const ld::NotComputingH& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::bad_variant_access&) {
    std::cerr << "error: this command needs a formula over Q\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
