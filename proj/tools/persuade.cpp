// persuade: command-line front end for the persuasion solvers.

#include <persuasion/blackbox.hpp>
#include <persuasion/corpus.hpp>
#include <persuasion/exact.hpp>
#include <persuasion/iid.hpp>
#include <persuasion/indep_approx.hpp>
#include <persuasion/io.hpp>
#include <persuasion/khintchine.hpp>
#include <persuasion/verify.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

using namespace persuasion;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

/// Bad flag combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v)
{
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

std::string list(const Vector& v)
{
  std::string out;
  for (Index i = 0; i < v.size(); ++i)
    out += (i ? " " : "") + num(v(i));
  return out;
}

IIDInstance require_iid(const Instance& inst, const std::string& method)
{
  if (const auto* i = std::get_if<IIDInstance>(&inst))
    return *i;
  throw UsageError("method " + method + " needs an iid instance");
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
  std::string input;
  std::string method = "exact";
  double epsilon = 0.0;
  std::string output;
};

struct Solved {
  SchemeFile file;
  std::vector<std::pair<std::string, std::string>> extra;
};

Solved solve_instance(const Instance& inst, const SolveArgs& a)
{
  Solved out;
  SchemeFile& f = out.file;
  f.method = a.method;
  const bool product = !std::holds_alternative<ExplicitInstance>(inst);
  f.state_order = product ? kLexicographicOrder : "instance";

  if (a.method == "exact") {
    const ExactSolution sol = solve_exact(to_explicit(inst), a.epsilon);
    f.value = sol.value;
    f.epsilon = a.epsilon;
    f.phi = sol.scheme.phi();
    f.min_slack = sol.audit.min_slack;
    f.epsilon_certified = sol.audit.epsilon_certified;
  } else if (a.method == "iid-opt") {
    if (a.epsilon != 0.0)
      throw UsageError("iid-opt solves the exact-IC problem; drop --epsilon");
    const IIDInstance iid = require_iid(inst, a.method);
    const SymmetricSignaler signaler = solve_iid(iid);
    const SSignatureSolution sol = solve_s_signature(iid);
    f.value = sol.value;
    f.s_signature = signaler.s_signature();
    out.extra.emplace_back("border_cuts", std::to_string(sol.cuts));
    if (iid.actions <= kMaxSymmetrizeActions) {
      const DirectScheme direct = signaler.direct_scheme();
      const AuditReport rep = audit(expand_product(iid), direct);
      f.phi = direct.phi();
      f.min_slack = rep.min_slack;
      f.epsilon_certified = rep.epsilon_certified;
    }
  } else if (a.method == "iid-approx") {
    if (a.epsilon != 0.0)
      throw UsageError("iid-approx has no epsilon parameter");
    const IIDInstance iid = require_iid(inst, a.method);
    const IndependentSignaler signaler(iid);
    const DirectScheme direct = signaler.direct_scheme();
    const AuditReport rep = audit(expand_product(iid), direct);
    f.value = rep.sender_utility;
    f.phi = direct.phi();
    f.s_signature = SSignature{signaler.relaxation().x, signaler.relaxation().y};
    f.min_slack = rep.min_slack;
    f.epsilon_certified = rep.epsilon_certified;
    out.extra.emplace_back("relaxation_value", num(signaler.relaxation().value));
    out.extra.emplace_back("guaranteed_value", num(signaler.guaranteed_value()));
    for (const std::string& w : signaler.warnings())
      std::cerr << "warning: " << w << "\n";
  } else {
    throw UsageError("unknown method '" + a.method + "'");
  }
  return out;
}

int run_solve(const SolveArgs& a)
{
  const Instance inst = load_instance(a.input);
  const Solved s = solve_instance(inst, a);
  std::cout << "method: " << s.file.method << "\n";
  std::cout << "value: " << num(s.file.value) << "\n";
  if (s.file.min_slack)
    std::cout << "min_slack: " << num(*s.file.min_slack) << "\n";
  if (s.file.epsilon_certified)
    std::cout << "epsilon_certified: " << num(*s.file.epsilon_certified) << "\n";
  if (s.file.s_signature) {
    std::cout << "x: " << list(s.file.s_signature->x) << "\n";
    std::cout << "y: " << list(s.file.s_signature->y) << "\n";
  }
  for (const auto& [k, v] : s.extra)
    std::cout << k << ": " << v << "\n";
  if (!a.output.empty()) {
    save_scheme(a.output, s.file);
    std::cout << "scheme: " << a.output << "\n";
  }
  return 0;
}

// ---- signal --------------------------------------------------------------

struct SignalArgs {
  std::string input;
  std::string method = "exact";
  double epsilon = 0.0;
  std::optional<Index> state;
  std::vector<Index> types;
  std::uint64_t seed = 1;
};

int run_signal(const SignalArgs& a)
{
  const Instance inst = load_instance(a.input);
  const bool product = !std::holds_alternative<ExplicitInstance>(inst);
  if (product == a.state.has_value())
    throw UsageError(product ? "product instances take --types, not --state"
                             : "explicit instances take --state, not --types");
  Rng rng(a.seed);
  Index signal = 0;
  if (a.method == "exact") {
    const ExplicitInstance ex = to_explicit(inst);
    Index k = 0;
    if (product) {
      std::vector<Index> radices;
      if (const auto* i = std::get_if<IIDInstance>(&inst))
        radices.assign(static_cast<std::size_t>(i->actions), i->types());
      else
        for (const Marginal& m : std::get<IndependentInstance>(inst).marginals)
          radices.push_back(m.q.size());
      if (a.types.size() != radices.size())
        throw UsageError("--types needs one entry per action");
      for (std::size_t i = 0; i < radices.size(); ++i)
        if (a.types[i] < 0 || a.types[i] >= radices[i])
          throw UsageError("type " + std::to_string(a.types[i]) + " of action " +
                           std::to_string(i) + " out of range");
      k = ProfileIndexer(radices).index(a.types);
    } else {
      k = *a.state;
      if (k < 0 || k >= ex.state_count())
        throw UsageError("--state out of range");
    }
    signal = solve_exact(ex, a.epsilon).scheme.sample(k, rng);
  } else if (a.method == "iid-opt") {
    signal = solve_iid(require_iid(inst, a.method)).sample(a.types, rng);
  } else if (a.method == "iid-approx") {
    signal = IndependentSignaler(require_iid(inst, a.method)).sample(a.types, rng);
  } else {
    throw UsageError("unknown method '" + a.method + "'");
  }
  std::cout << "signal: " << signal << "\n";
  return 0;
}

// ---- blackbox ------------------------------------------------------------

struct BlackBoxArgs {
  std::string input;
  double epsilon = 0.1;
  std::optional<Index> samples;
  bool force = false;
  Index trials = 1000;
  std::uint64_t seed = 1;
  bool normalize = false;
  Index workers = 1;
};

Marginal scaled(const Marginal& m, double s, double r) { return Marginal{m.q, m.xi * s, m.rho * r}; }

int run_blackbox(const BlackBoxArgs& a)
{
  const Instance inst = load_instance(a.input);
  std::unique_ptr<SampleOracle> oracle;
  double sender_scale = 1.0;
  double receiver_scale = 1.0;
  if (const auto* e = std::get_if<ExplicitInstance>(&inst)) {
    if (a.normalize) {
      sender_scale = unit_scale(e->sender());
      receiver_scale = unit_scale(e->receiver());
    }
    oracle = std::make_unique<ExplicitOracle>(scale_payoffs(*e, sender_scale, receiver_scale));
  } else {
    IndependentInstance ind;
    if (const auto* i = std::get_if<IIDInstance>(&inst))
      for (Index k = 0; k < i->actions; ++k)
        ind.marginals.push_back(Marginal{i->q, i->xi, i->rho});
    else
      ind = std::get<IndependentInstance>(inst);
    if (a.normalize) {
      double smax = 0.0, rmax = 0.0;
      for (const Marginal& m : ind.marginals) {
        smax = std::max(smax, m.xi.cwiseAbs().maxCoeff());
        rmax = std::max(rmax, m.rho.cwiseAbs().maxCoeff());
      }
      sender_scale = smax > 1.0 ? 1.0 / smax : 1.0;
      receiver_scale = rmax > 1.0 ? 1.0 / rmax : 1.0;
      for (Marginal& m : ind.marginals)
        m = scaled(m, sender_scale, receiver_scale);
    }
    oracle = std::make_unique<ProductOracle>(ind);
  }

  const BlackBoxScheme scheme(*oracle, {a.epsilon, a.samples, a.force});
  for (const std::string& w : scheme.warnings())
    std::cerr << "warning: " << w << "\n";
  EvalOptions opts;
  opts.workers = a.workers;
  const EvalReport rep = monte_carlo_eval(
    [&](const StateDraw& d, Rng& rng) { return scheme.sample(d, rng).signal; }, *oracle, a.trials,
    a.seed, opts);

  double min_slack = 0.0;
  for (Index i = 0; i < rep.actions; ++i)
    for (Index j = 0; j < rep.actions; ++j)
      if (i != j)
        min_slack = std::min(min_slack, rep.ic_slack(i, j));
  std::cout << "epsilon: " << num(a.epsilon) << "\n";
  std::cout << "samples: " << scheme.samples() << "\n";
  if (scheme.formula_samples())
    std::cout << "formula_samples: " << *scheme.formula_samples() << "\n";
  std::cout << "trials: " << rep.trials << "\n";
  if (a.normalize)
    std::cout << "payoff_scale: sender " << num(sender_scale) << " receiver "
              << num(receiver_scale) << "\n";
  std::cout << "utility: " << num(rep.follow_utility) << " se " << num(rep.follow_std_error)
            << "\n";
  std::cout << "best_response_utility: " << num(rep.mean_sender_utility) << " se "
            << num(rep.std_error) << "\n";
  std::cout << "follow_rate: " << num(rep.follow_rate) << "\n";
  for (const SignalSummary& s : rep.signals)
    std::cout << "signal " << s.signal << ": rate "
              << num(static_cast<double>(s.count) / static_cast<double>(rep.trials)) << "\n";
  std::cout << "min_ic_slack: " << num(min_slack) << "\n";
  std::cout << "ic_within_epsilon: " << (rep.ic_within(a.epsilon) ? "yes" : "no") << "\n";
  return 0;
}

// ---- audit ---------------------------------------------------------------

int run_audit(const std::string& input, const std::string& scheme_path)
{
  const Instance inst = load_instance(input);
  const SchemeFile file = load_scheme(scheme_path);
  if (!file.phi)
    throw Error(ErrorKind::InvalidArgument, scheme_path + " has no phi matrix to audit");
  const ExplicitInstance ex = to_explicit(inst);
  const AuditReport rep = audit(ex, DirectScheme(*file.phi));
  std::cout << "sender_utility: " << num(rep.sender_utility) << "\n";
  std::cout << "recorded_value: " << num(file.value) << "\n";
  std::cout << "min_slack: " << num(rep.min_slack) << "\n";
  std::cout << "epsilon_certified: " << num(rep.epsilon_certified) << "\n";
  std::cout << "conditional_epsilon: " << num(rep.conditional_epsilon) << "\n";
  std::cout << "signal_probs: " << list(rep.signal_probs) << "\n";
  std::cout << "incentive_compatible: " << (rep.incentive_compatible() ? "yes" : "no") << "\n";
  const bool matches = std::abs(rep.sender_utility - file.value) <= 1e-9;
  std::cout << "value_matches: " << (matches ? "yes" : "no") << "\n";
  return matches ? 0 : kExitDomain;
}

// ---- khintchine ----------------------------------------------------------

int run_khintchine(const std::vector<double>& coeffs, bool lp, bool brute)
{
  if (coeffs.empty())
    throw UsageError("--a needs at least one coefficient");
  const Vector a = Eigen::Map<const Vector>(coeffs.data(), static_cast<Index>(coeffs.size()));
  if (!lp && !brute)
    lp = brute = true;
  if (brute)
    std::cout << "brute: " << num(khintchine_constant(a)) << "\n";
  if (lp)
    std::cout << "lp: " << num(solve_khintchine_lp(a).value) << "\n";
  return 0;
}

// ---- verify --------------------------------------------------------------

int run_verify(const std::string& suite, std::uint64_t seed)
{
  const std::vector<CheckResult> results = run_verify_suite(suite, seed);
  bool all = true;
  for (const CheckResult& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    all = all && r.passed;
  }
  return all ? 0 : kExitDomain;
}

// ---- bench ---------------------------------------------------------------

int run_bench(std::uint64_t seed, Index reps)
{
  Rng rng(seed);
  using clock = std::chrono::steady_clock;
  auto time = [&](const char* name, auto&& body) {
    const auto start = clock::now();
    double checksum = 0.0;
    for (Index r = 0; r < reps; ++r)
      checksum += body();
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    std::cerr << name << ": " << std::fixed << std::setprecision(3) << ms / static_cast<double>(reps)
              << " ms/run\n"
              << std::defaultfloat;
    std::cout << name << " checksum: " << num(checksum) << "\n";
  };
  const IIDInstance inst = corpus::random_iid(rng, {4, 4, 3, 3, false});
  const ExplicitInstance ex = expand_product(inst);
  time("exact (81 states, 4 actions)", [&] { return solve_exact(ex).value; });
  time("s-signature LP", [&] { return solve_s_signature(inst).value; });
  time("relaxed LP", [&] { return solve_lp3(inst).value; });
  Vector a(10);
  for (Index i = 0; i < a.size(); ++i)
    a(i) = static_cast<double>(i + 1);
  time("Khintchine LP (n = 10)", [&] { return solve_khintchine_lp(a).value; });
  time("Khintchine brute force (n = 10)", [&] { return khintchine_constant(a); });
  const ExplicitOracle oracle(corpus::rain_shine(0.1));
  Rng draw_rng(seed + 1);
  time("black-box signal (K = 2000)", [&] {
    return static_cast<double>(blackbox_signal(oracle, oracle.draw(draw_rng), 0.2, 2000, draw_rng)
                                 .signal);
  });
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Optimal and approximate signaling schemes for Bayesian persuasion"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve an instance and optionally save the scheme");
  solve->add_option("--input", solve_args.input, "Instance file")->required();
  solve->add_option("--method", solve_args.method, "exact | iid-opt | iid-approx")
    ->check(CLI::IsMember({"exact", "iid-opt", "iid-approx"}));
  solve->add_option("--epsilon", solve_args.epsilon, "IC relaxation (exact only)")
    ->check(CLI::NonNegativeNumber);
  solve->add_option("--output", solve_args.output, "Scheme file to write");

  SignalArgs signal_args;
  std::string types_text;
  auto* signal = app.add_subcommand("signal", "Draw one signal for a given state");
  signal->add_option("--input", signal_args.input, "Instance file")->required();
  signal->add_option("--method", signal_args.method, "exact | iid-opt | iid-approx")
    ->check(CLI::IsMember({"exact", "iid-opt", "iid-approx"}));
  signal->add_option("--epsilon", signal_args.epsilon, "IC relaxation (exact only)")
    ->check(CLI::NonNegativeNumber);
  auto* state_opt = signal->add_option("--state", signal_args.state, "State index (explicit)");
  auto* types_opt =
    signal->add_option("--types", types_text, "Comma-separated type per action (product)");
  state_opt->excludes(types_opt);
  signal->add_option("--seed", signal_args.seed, "Random seed");

  BlackBoxArgs bb_args;
  auto* bb = app.add_subcommand("blackbox", "Evaluate the sample-and-solve scheme by simulation");
  bb->add_option("--input", bb_args.input, "Instance file used as the sampling oracle")
    ->required();
  bb->add_option("--epsilon", bb_args.epsilon, "IC relaxation")->check(CLI::Range(0.0, 1.0));
  bb->add_option("-K,--samples", bb_args.samples, "Samples per signal (default: formula)");
  bb->add_flag("--force-K", bb_args.force, "Allow fewer samples than the formula");
  bb->add_option("--trials", bb_args.trials, "Simulated states")->check(CLI::PositiveNumber);
  bb->add_option("--seed", bb_args.seed, "Random seed");
  bb->add_flag("--normalize", bb_args.normalize, "Rescale payoffs into [-1, 1]");
  bb->add_option("--workers", bb_args.workers, "Simulation threads")->check(CLI::PositiveNumber);

  std::string audit_input, audit_scheme;
  auto* aud = app.add_subcommand("audit", "Audit a saved scheme against an instance");
  aud->add_option("--input", audit_input, "Instance file")->required();
  aud->add_option("--scheme", audit_scheme, "Scheme file")->required();

  std::vector<double> kh_a;
  bool kh_lp = false, kh_brute = false;
  auto* kh = app.add_subcommand("khintchine", "Khintchine constant by enumeration and by LP");
  kh->add_option("--a", kh_a, "Coefficients, comma separated")->required()->delimiter(',');
  kh->add_flag("--lp", kh_lp, "Solve the polytope LP");
  kh->add_flag("--brute", kh_brute, "Enumerate sign vectors");

  std::string suite = "small";
  std::uint64_t verify_seed = 7;
  auto* ver = app.add_subcommand("verify", "Run the oracle-equivalence suites");
  ver->add_option("--suite", suite, "small | full")->check(CLI::IsMember({"small", "full"}));
  ver->add_option("--seed", verify_seed, "Random seed");

  std::uint64_t bench_seed = 1;
  Index bench_reps = 20;
  auto* bench = app.add_subcommand("bench", "Time the solvers (timings on stderr)");
  bench->add_option("--seed", bench_seed, "Random seed");
  bench->add_option("--reps", bench_reps, "Repetitions per solver")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve)
      return run_solve(solve_args);
    if (*signal) {
      if (!types_text.empty()) {
        std::stringstream in(types_text);
        std::string part;
        while (std::getline(in, part, ','))
          try {
            signal_args.types.push_back(std::stoll(part));
          } catch (const std::exception&) {
            throw UsageError("--types entry '" + part + "' is not an integer");
          }
      }
      return run_signal(signal_args);
    }
    if (*bb)
      return run_blackbox(bb_args);
    if (*aud)
      return run_audit(audit_input, audit_scheme);
    if (*kh)
      return run_khintchine(kh_a, kh_lp, kh_brute);
    if (*ver)
      return run_verify(suite, verify_seed);
    if (*bench)
      return run_bench(bench_seed, bench_reps);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
