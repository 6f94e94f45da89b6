#pragma once

// Formula families and the experiment runner.
//
// Random distribution (fixed so that tables are comparable): sum edges carry
// weights uniform in {1..9}, product edges weight 1; a sum's fan-out is
// 2 + Geometric(1/2) capped by what the budget allows; a product splits its
// degree uniformly.

#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/expand.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/hardpoly.hpp"
#include "logdepth/pit.hpp"
#include "logdepth/rng.hpp"
#include "logdepth/transforms/binarize.hpp"
#include "logdepth/transforms/bonet_buss.hpp"
#include "logdepth/transforms/collapse.hpp"
#include "logdepth/transforms/composite.hpp"
#include "logdepth/transforms/main_reduction.hpp"
#include "logdepth/transforms/product_fanin.hpp"

namespace logdepth {

namespace detail {
template <FieldDescriptor K>
typename K::Scalar small_weight(const K& field, Rng& rng) {
  return *field.parse(std::to_string(rng.between(1, 9)));
}

/// b split into f parts, each at least `least`.
inline std::vector<std::uint64_t> composition(Rng& rng, std::uint64_t b, std::uint64_t f, std::uint64_t least) {
  std::uint64_t spare = b - f * least;
  std::vector<std::uint64_t> cuts;
  for (std::uint64_t i = 0; i + 1 < f; ++i) cuts.push_back(rng.below(spare + 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::uint64_t> parts;
  std::uint64_t prev = 0;
  for (auto c : cuts) {
    parts.push_back(least + c - prev);
    prev = c;
  }
  parts.push_back(least + spare - prev);
  return parts;
}
}  // namespace detail

/// x1 + x2*(x3 + x4*(x5 + ...)), n leaves.
template <FieldDescriptor K = Rationals>
Formula<K> comb(std::uint64_t n, const K& field = K{}, Mode mode = Mode::Commutative) {
  if (n == 0) throw InfeasibleShape("comb needs at least one leaf");
  NodePtr<K> acc = Node<K>::var(n);
  for (std::uint64_t i = n - 1; i >= 1; --i) {
    auto x = Node<K>::var(i);
    const bool sum = (i % 2) == 1;
    acc = Node<K>::gate(sum ? GateKind::Sum : GateKind::Prod, {Edge<K>{field.one(), x}, Edge<K>{field.one(), acc}});
  }
  return Formula<K>{field, mode, acc};
}

/// ((((x1 + x2) * x3) + x4) * x5) ..., n leaves, depth n - 1.
template <FieldDescriptor K = Rationals>
Formula<K> left_comb(std::uint64_t n, const K& field = K{}, Mode mode = Mode::Commutative) {
  if (n == 0) throw InfeasibleShape("comb needs at least one leaf");
  NodePtr<K> acc = Node<K>::var(1);
  for (std::uint64_t i = 2; i <= n; ++i) {
    const bool sum = (i % 2) == 0;
    acc = Node<K>::gate(sum ? GateKind::Sum : GateKind::Prod,
                        {Edge<K>{field.one(), acc}, Edge<K>{field.one(), Node<K>::var(i)}});
  }
  return Formula<K>{field, mode, acc};
}

/// Homogeneous, monotone, syntactic degree exactly d, exactly s leaves over
/// variables x1..xn. Degree-1 parts are flat weighted sums of variables.
template <FieldDescriptor K = Rationals>
Formula<K> gen_random_homogeneous(std::uint64_t n_vars, std::uint64_t d, std::uint64_t s, std::uint64_t seed,
                                  const K& field = K{}, Mode mode = Mode::Commutative) {
  if (n_vars == 0) throw InfeasibleShape("need at least one variable");
  if (d == 0) throw InfeasibleShape("degree must be at least 1");
  if (d > s) throw InfeasibleShape("size " + std::to_string(s) + " cannot support degree " + std::to_string(d));
  Rng rng(seed);
  auto leaf = [&] { return Node<K>::var(rng.between(1, n_vars)); };
  std::function<NodePtr<K>(std::uint64_t, std::uint64_t)> gen = [&](std::uint64_t e, std::uint64_t b) -> NodePtr<K> {
    if (e == 1) {
      if (b == 1) return leaf();
      std::vector<Edge<K>> edges;
      for (std::uint64_t i = 0; i < b; ++i) edges.push_back(Edge<K>{detail::small_weight(field, rng), leaf()});
      return Node<K>::sum(std::move(edges));
    }
    const bool can_sum = b >= 2 * e;
    if (can_sum && rng.coin()) {
      const std::uint64_t f = std::min<std::uint64_t>(b / e, 2 + rng.geometric_half());
      std::vector<Edge<K>> edges;
      for (auto part : detail::composition(rng, b, f, e))
        edges.push_back(Edge<K>{detail::small_weight(field, rng), gen(e, part)});
      return Node<K>::sum(std::move(edges));
    }
    const std::uint64_t d1 = rng.between(1, e - 1), d2 = e - d1;
    const std::uint64_t b1 = rng.between(d1, b - d2);
    auto left = gen(d1, b1);
    auto right = gen(d2, b - b1);
    return Node<K>::prod({Edge<K>{field.one(), left}, Edge<K>{field.one(), right}});
  };
  return Formula<K>{field, mode, gen(d, s)};
}

/// Skew, fan-in 2, pairwise distinct variables x1, x2, ..., at most
/// `max_leaves` leaves and sum-depth at most `max_sum_depth`.
template <FieldDescriptor K = Rationals>
Formula<K> gen_random_skew(std::uint32_t max_sum_depth, std::uint64_t max_leaves, std::uint64_t seed,
                           const K& field = K{}, Mode mode = Mode::Commutative) {
  if (max_leaves == 0) throw InfeasibleShape("need at least one leaf");
  Rng rng(seed);
  VarId next = 1;
  std::function<NodePtr<K>(std::uint32_t, std::uint64_t)> gen = [&](std::uint32_t sd, std::uint64_t b) -> NodePtr<K> {
    if (b == 1) return Node<K>::var(next++);
    const auto pick = rng.below(3);
    if (sd > 0 && pick == 0) {
      const std::uint64_t b1 = rng.between(1, b - 1);
      auto l = gen(sd - 1, b1);
      auto r = gen(sd - 1, b - b1);
      return Node<K>::sum({Edge<K>{detail::small_weight(field, rng), l}, Edge<K>{detail::small_weight(field, rng), r}});
    }
    if (pick == 1 && b >= 2) {
      auto x = Node<K>::var(next++);
      auto rest = gen(sd, b - 1);
      if (rng.coin()) return Node<K>::prod({Edge<K>{field.one(), x}, Edge<K>{field.one(), rest}});
      return Node<K>::prod({Edge<K>{field.one(), rest}, Edge<K>{field.one(), x}});
    }
    if (sd == 0 || pick == 2) {
      // Shrink: spend a leaf-product at the bottom or stop here.
      if (b >= 2 && rng.coin()) {
        auto x = Node<K>::var(next++);
        auto y = Node<K>::var(next++);
        return Node<K>::prod({Edge<K>{field.one(), x}, Edge<K>{field.one(), y}});
      }
      return Node<K>::var(next++);
    }
    return Node<K>::var(next++);
  };
  return Formula<K>{field, mode, gen(max_sum_depth, max_leaves)};
}

/// Unconstrained random formula: mixed degrees, constant leaves under sums,
/// gates of fan-in 1 to 4, weights from {-9..9} \ {0}. At most s leaves.
template <FieldDescriptor K = Rationals>
Formula<K> gen_random_formula(std::uint64_t n_vars, std::uint64_t s, std::uint64_t seed, const K& field = K{},
                              Mode mode = Mode::Commutative) {
  if (n_vars == 0 || s == 0) throw InfeasibleShape("need at least one variable and one leaf");
  Rng rng(seed);
  auto weight = [&] {
    auto w = detail::small_weight(field, rng);
    return rng.coin() ? field.neg(w) : w;
  };
  std::function<NodePtr<K>(std::uint64_t, bool)> gen = [&](std::uint64_t b, bool under_sum) -> NodePtr<K> {
    if (b == 1 || rng.below(4) == 0) {
      if (under_sum && rng.below(5) == 0) return Node<K>::one();
      return Node<K>::var(rng.between(1, n_vars));
    }
    const std::uint64_t f = std::min<std::uint64_t>(b, rng.between(1, 4));
    const bool sum = rng.coin();
    std::vector<Edge<K>> edges;
    for (auto part : detail::composition(rng, b, f, 1))
      edges.push_back(Edge<K>{rng.below(3) == 0 ? weight() : field.one(), gen(part, sum)});
    // A sum of constant leaves only is allowed at the root alone.
    if (sum && std::all_of(edges.begin(), edges.end(), [](const Edge<K>& e) { return e.child->is_one(); }))
      edges.front().child = Node<K>::var(rng.between(1, n_vars));
    return Node<K>::gate(sum ? GateKind::Sum : GateKind::Prod, std::move(edges));
  };
  return Formula<K>{field, mode, gen(s, false)};
}

// ---------------------------------------------------------------------------
// Experiments.

enum class Family { Comb, LeftComb, RandomHomogeneous, RandomSkew, Hard, File };
enum class PassKind { Binarize, Collapse, BB, Main, NearLinear, Homogeneous, ProdFanin2, Pipeline };
enum class VerifyMethod { Expand, Pit, None };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Comb: return "comb";
    case Family::LeftComb: return "left-comb";
    case Family::RandomHomogeneous: return "random-homogeneous";
    case Family::RandomSkew: return "random-skew";
    case Family::Hard: return "hard";
    case Family::File: return "user-file";
  }
  return "?";
}
inline const char* to_string(PassKind p) {
  switch (p) {
    case PassKind::Binarize: return "binarize";
    case PassKind::Collapse: return "collapse";
    case PassKind::BB: return "bb";
    case PassKind::Main: return "main";
    case PassKind::NearLinear: return "nearlinear";
    case PassKind::Homogeneous: return "homogeneous";
    case PassKind::ProdFanin2: return "prodfanin2";
    case PassKind::Pipeline: return "pipeline";
  }
  return "?";
}
inline const char* to_string(VerifyMethod v) {
  switch (v) {
    case VerifyMethod::Expand: return "expand";
    case VerifyMethod::Pit: return "pit";
    case VerifyMethod::None: return "none";
  }
  return "?";
}

struct Experiment {
  Family family = Family::RandomHomogeneous;
  // Family parameters; which ones apply depends on the family.
  std::uint64_t n_vars = 8;
  std::uint64_t degree = 4;
  std::uint64_t size = 64;
  std::uint32_t k = 2;
  std::uint32_t r = 2;
  std::uint32_t sum_depth = 4;
  Mode mode = Mode::Commutative;
  std::optional<Formula<Rationals>> file;

  PassKind pass = PassKind::Main;
  std::optional<std::uint32_t> delta;  // main only; empty: auto
  mpq_class epsilon = mpq_class(1, 2);

  std::uint64_t seed = 1;
  std::uint32_t repetitions = 1;
  VerifyMethod verify = VerifyMethod::Expand;
  std::size_t expand_budget = kDefaultExpandBudget;
  std::uint32_t pit_trials = 20;
  std::uint64_t prime = kMersenne61;
};

struct FrontierRow {
  std::uint64_t index = 0;  // position in the batch
  std::string family;
  std::string pass;
  std::uint64_t seed = 0;
  std::uint64_t s_in = 0;
  std::uint64_t d = 0;
  std::uint32_t depth_in = 0;
  std::uint32_t depth_out = 0;
  std::uint32_t product_depth_out = 0;
  std::uint64_t size_out = 0;
  std::optional<std::uint32_t> phi;
  std::optional<std::uint32_t> delta;
  std::optional<std::string> bound_size;  // s * d^delta (main)
  std::optional<std::uint32_t> bound_depth;
  bool verified = false;
  std::string verify_method;
  std::string status = "ok";  // "ok" or "failed: <reason>"
  double duration_ms = 0;
};

inline Formula<Rationals> instantiate(const Experiment& e, std::uint64_t seed) {
  const Rationals q;
  switch (e.family) {
    case Family::Comb: return comb(e.size, q, e.mode);
    case Family::LeftComb: return left_comb(e.size, q, e.mode);
    case Family::RandomHomogeneous: return gen_random_homogeneous(e.n_vars, e.degree, e.size, seed, q, e.mode);
    case Family::RandomSkew: return gen_random_skew(e.sum_depth, e.size, seed, q, e.mode);
    case Family::Hard: return gen_hard(HardParams{e.k, e.r}, q, e.mode);
    case Family::File:
      if (!e.file) throw std::invalid_argument("user-file experiment without a formula");
      return *e.file;
  }
  throw std::logic_error("unknown family");
}

/// Verdict of an equivalence check and how it was reached. Expansion falls
/// back to PIT when it runs over budget.
struct Verification {
  bool equal = false;
  std::string method;
  std::optional<PitWitness> witness;
};

template <FieldDescriptor K>
Verification verify_equal(const Formula<K>& a, const Formula<K>& b, VerifyMethod how, std::size_t budget,
                          const PitConfig& pit, std::uint64_t prime) {
  if (how == VerifyMethod::None) return Verification{true, "none", std::nullopt};
  if (how == VerifyMethod::Expand) {
    try {
      return Verification{equal_expand(a, b, budget), "expand", std::nullopt};
    } catch (const BudgetExceeded&) {
    }
  }
  const PrimeField fp(prime);
  auto pa = to_prime_field(a, fp);
  auto pb = to_prime_field(b, fp);
  auto res = pit_equal(pa, pb, pit);
  Verification v{res.verdict == PitVerdict::EqualProbably, how == VerifyMethod::Expand ? "pit-fallback" : "pit",
                 res.witness};
  if (!v.equal && !check_witness(pa, pb, *res.witness)) throw std::logic_error("PIT witness failed re-check");
  return v;
}

/// One pass application with the data a row needs.
template <FieldDescriptor K>
struct PassOutcome {
  Formula<K> formula;
  std::optional<std::uint32_t> delta;
  std::optional<Potential> phi;
  std::optional<mpz_class> bound_size;
};

template <FieldDescriptor K>
PassOutcome<K> apply_pass(const Formula<K>& f, PassKind pass, std::optional<std::uint32_t> delta,
                          const mpq_class& eps, std::size_t budget) {
  switch (pass) {
    case PassKind::Binarize: return {binarize(f), {}, {}, {}};
    case PassKind::Collapse: return {collapse(f), {}, {}, {}};
    case PassKind::BB: return {depth_reduce_bb(f, eps).formula, {}, {}, {}};
    case PassKind::Main: {
      auto in = is_fanin2(f) ? f : binarize(f);
      const auto& m = in.metrics();
      auto r = depth_reduce_main(in, delta ? *delta : auto_delta(m.size, m.syn_degree, m.sum_depth));
      return {r.formula, r.delta, r.phi, r.size_bound};
    }
    case PassKind::NearLinear: {
      auto r = depth_reduce_nearlinear(f, eps);
      return {r.formula, r.delta, r.phi, {}};
    }
    case PassKind::Homogeneous: {
      auto r = depth_reduce_homogeneous(f);
      return {r.formula, r.delta, r.phi, {}};
    }
    case PassKind::ProdFanin2: return {product_fanin_2(f), {}, {}, {}};
    case PassKind::Pipeline: {
      auto r = pipeline_inhom(f, budget);
      return {r.formula, r.delta, r.phi, {}};
    }
  }
  throw std::logic_error("unknown pass");
}

inline FrontierRow run_one(const Experiment& e, std::uint64_t index, std::uint32_t rep) {
  FrontierRow row;
  row.index = index;
  row.family = to_string(e.family);
  row.pass = to_string(e.pass);
  row.seed = Rng::derive(e.seed, rep);
  row.verify_method = to_string(e.verify);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto f = instantiate(e, row.seed);
    const auto& mi = f.metrics();
    row.s_in = mi.size;
    row.d = mi.syn_degree;
    row.depth_in = mi.depth;
    auto out = apply_pass(f, e.pass, e.delta, e.epsilon, e.expand_budget);
    const auto& mo = out.formula.metrics();
    row.depth_out = mo.depth;
    row.product_depth_out = mo.product_depth;
    row.size_out = mo.size;
    row.delta = out.delta;
    if (out.phi) {
      row.phi = out.phi->phi;
      row.bound_depth = out.phi->phi;
    }
    if (out.bound_size) row.bound_size = out.bound_size->get_str();
    if (e.pass == PassKind::Main) {
      if (mo.product_depth > out.phi->phi) throw BoundViolation("product depth exceeds phi");
      if (mpz_class(static_cast<unsigned long>(mo.size)) > *out.bound_size) throw BoundViolation("size exceeds s*d^delta");
    }
    PitConfig pit{e.pit_trials, row.seed, 0};
    auto v = verify_equal(f, out.formula, e.verify, e.expand_budget, pit, e.prime);
    row.verified = v.equal;
    row.verify_method = v.method;
    if (!v.equal) row.status = "failed: output not equivalent";
  } catch (const std::exception& ex) {
    row.status = std::string("failed: ") + ex.what();
    row.verified = false;
  }
  row.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

/// Rows for every repetition of every experiment, in input order. With
/// jobs > 1 rows run on a thread pool; the output does not depend on it.
inline std::vector<FrontierRow> run(const std::vector<Experiment>& batch, unsigned jobs = 1) {
  std::vector<std::pair<std::size_t, std::uint32_t>> work;
  for (std::size_t i = 0; i < batch.size(); ++i)
    for (std::uint32_t rep = 0; rep < std::max<std::uint32_t>(1, batch[i].repetitions); ++rep) work.emplace_back(i, rep);
  std::vector<FrontierRow> rows(work.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t w;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next == work.size()) return;
        w = next++;
      }
      rows[w] = run_one(batch[work[w].first], w, work[w].second);
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

inline std::vector<FrontierRow> run(const Experiment& e, unsigned jobs = 1) { return run(std::vector{e}, jobs); }

inline const char* kCsvHeader =
    "index,family,pass,seed,s_in,d,depth_in,depth_out,product_depth_out,size_out,phi,delta,bound_size,"
    "bound_depth,verified,verify_method,status,duration_ms";

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Fixed column order; `timing = false` writes 0 durations so reruns are
/// byte-identical.
inline std::string to_csv(const std::vector<FrontierRow>& rows, bool timing = true) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  auto opt = [](const auto& o) { return o ? std::to_string(*o) : std::string(); };
  for (const auto& r : rows) {
    char dur[32];
    std::snprintf(dur, sizeof dur, "%.3f", timing ? r.duration_ms : 0.0);
    os << r.index << ',' << r.family << ',' << r.pass << ',' << r.seed << ',' << r.s_in << ',' << r.d << ','
       << r.depth_in << ',' << r.depth_out << ',' << r.product_depth_out << ',' << r.size_out << ',' << opt(r.phi)
       << ',' << opt(r.delta) << ',' << r.bound_size.value_or("") << ',' << opt(r.bound_depth) << ','
       << (r.verified ? "true" : "false") << ',' << r.verify_method << ',' << csv_escape(r.status) << ',' << dur
       << '\n';
  }
  return os.str();
}

/// Fitted constants. c_depth = max depth_out / log2 d (rows with d >= 2);
/// c_size = max size_out / bound_size (rows with a bound); c_size_eps =
/// max size_out / s_in^(1 + eps) (rows with s_in >= 2). Reporting only.
struct FittedConstants {
  std::optional<double> c_depth;
  std::optional<double> c_size;
  std::optional<double> c_size_eps;
  std::size_t rows_used = 0;
};

inline FittedConstants fit_constants(const std::vector<FrontierRow>& rows, const mpq_class& eps = mpq_class(1, 2)) {
  FittedConstants c;
  auto upd = [](std::optional<double>& slot, double v) {
    if (!slot || v > *slot) slot = v;
  };
  const double e = eps.get_d();
  for (const auto& r : rows) {
    if (r.status != "ok") continue;
    ++c.rows_used;
    if (r.d >= 2) upd(c.c_depth, r.depth_out / std::log2(static_cast<double>(r.d)));
    if (r.bound_size) upd(c.c_size, static_cast<double>(r.size_out) / mpz_class(*r.bound_size).get_d());
    if (r.s_in >= 2) upd(c.c_size_eps, static_cast<double>(r.size_out) / std::pow(static_cast<double>(r.s_in), 1 + e));
  }
  return c;
}

}  // namespace logdepth
