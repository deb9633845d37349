#include <persuasion/verify.hpp>

#include <persuasion/corpus.hpp>
#include <persuasion/exact.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace persuasion {

namespace {

struct Accumulator {
  Index count = 0;
  Vector sum_r;
  Vector sum_s;
  Vector sum_s2;
  Matrix sum_rr;

  explicit Accumulator(Index n)
    : sum_r(Vector::Zero(n)), sum_s(Vector::Zero(n)), sum_s2(Vector::Zero(n)),
      sum_rr(Matrix::Zero(n, n))
  {}

  void add(const StateDraw& d)
  {
    ++count;
    sum_r += d.receiver;
    sum_s += d.sender;
    sum_s2 += d.sender.cwiseAbs2();
    sum_rr.noalias() += d.receiver * d.receiver.transpose();
  }

  void merge(const Accumulator& other)
  {
    count += other.count;
    sum_r += other.sum_r;
    sum_s += other.sum_s;
    sum_s2 += other.sum_s2;
    sum_rr += other.sum_rr;
  }

  /// Sum and sum of squares of r_i - r_j over this signal's trials.
  std::pair<double, double> difference(Index i, Index j) const
  {
    return {sum_r(i) - sum_r(j), sum_rr(i, i) - 2.0 * sum_rr(i, j) + sum_rr(j, j)};
  }
};

using SignalTable = std::map<Index, Accumulator>;

/// Standard error of a mean over count observations with the given sums.
double standard_error(double sum, double sum_sq, double count)
{
  if (count < 2.0)
    return 0.0;
  const double var = (sum_sq - sum * sum / count) / (count - 1.0);
  return std::sqrt(std::max(var, 0.0) / count);
}

SignalTable run_worker(const Sampler& sampler, const SampleOracle& oracle, Index trials,
                       std::uint64_t seed, Index worker)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(worker)};
  Rng rng(seq);
  const Index n = oracle.actions();
  SignalTable table;
  for (Index t = 0; t < trials; ++t) {
    const StateDraw d = oracle.draw(rng);
    if (d.sender.size() != n || d.receiver.size() != n)
      throw Error(ErrorKind::DimensionMismatch, "oracle returned a state with the wrong length");
    const Index signal = sampler(d, rng);
    if (signal < 0)
      throw Error(ErrorKind::InvalidArgument, "sampler returned a negative signal");
    auto it = table.try_emplace(signal, n).first;
    it->second.add(d);
  }
  return table;
}

Index empirical_best_response(const Accumulator& a, double tie_sigmas)
{
  const double c = static_cast<double>(a.count);
  const Vector r = a.sum_r / c;
  const Vector s = a.sum_s / c;
  Index top = 0;
  for (Index i = 1; i < r.size(); ++i)
    if (r(i) > r(top))
      top = i;
  Index choice = -1;
  for (Index i = 0; i < r.size(); ++i) {
    const auto [sum, sum_sq] = a.difference(top, i);
    const double tol = tie_sigmas * standard_error(sum, sum_sq, c) + kTieTolerance;
    if (r(top) - r(i) > tol)
      continue;
    if (choice < 0 || s(i) > s(choice))
      choice = i;
  }
  return choice;
}

} // namespace

bool EvalReport::ic_within(double epsilon, double sigmas) const
{
  for (Index i = 0; i < ic_slack.rows(); ++i)
    for (Index j = 0; j < ic_slack.cols(); ++j)
      if (i != j && ic_slack(i, j) < -epsilon - sigmas * ic_slack_se(i, j) - 1e-12)
        return false;
  return true;
}

bool EvalReport::rational(double sigmas) const
{
  for (const SignalSummary& sig : signals) {
    if (sig.signal >= actions || sig.count == 0)
      continue;
    const Index i = sig.signal;
    for (Index j = 0; j < actions; ++j)
      if (conditional_gap(i, j) < -sigmas * conditional_gap_se(i, j) - kTieTolerance)
        return false;
  }
  return true;
}

EvalReport monte_carlo_eval(const Sampler& sampler, const SampleOracle& oracle, Index trials,
                            std::uint64_t seed, const EvalOptions& options)
{
  if (trials < 1)
    throw Error(ErrorKind::InvalidArgument, "trials must be at least 1");
  Index workers = std::max<Index>(1, std::min(options.workers, trials));
  if (!oracle.concurrent_safe())
    workers = 1;

  std::vector<SignalTable> tables(static_cast<std::size_t>(workers));
  auto share = [&](Index w) { return trials / workers + (w < trials % workers ? 1 : 0); };
  if (workers == 1) {
    tables[0] = run_worker(sampler, oracle, trials, seed, 0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
    for (Index w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          tables[static_cast<std::size_t>(w)] = run_worker(sampler, oracle, share(w), seed, w);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    for (auto& t : pool)
      t.join();
    for (auto& f : failures)
      if (f)
        std::rethrow_exception(f);
  }

  const Index n = oracle.actions();
  SignalTable merged;
  for (const SignalTable& table : tables)
    for (const auto& [signal, acc] : table)
      merged.try_emplace(signal, n).first->second.merge(acc);

  EvalReport report;
  report.trials = trials;
  report.actions = n;
  report.ic_slack = Matrix::Zero(n, n);
  report.ic_slack_se = Matrix::Zero(n, n);
  report.conditional_gap = Matrix::Zero(n, n);
  report.conditional_gap_se = Matrix::Zero(n, n);

  const double total = static_cast<double>(trials);
  double br_sum = 0.0, br_sq = 0.0, follow_sum = 0.0, follow_sq = 0.0, followed = 0.0;
  for (const auto& [signal, acc] : merged) {
    const double c = static_cast<double>(acc.count);
    SignalSummary summary;
    summary.signal = signal;
    summary.count = acc.count;
    summary.receiver_mean = acc.sum_r / c;
    summary.sender_mean = acc.sum_s / c;
    summary.best_action = empirical_best_response(acc, options.tie_sigmas);
    report.signals.push_back(summary);

    br_sum += acc.sum_s(summary.best_action);
    br_sq += acc.sum_s2(summary.best_action);
    const Index obey = signal < n ? signal : summary.best_action;
    follow_sum += acc.sum_s(obey);
    follow_sq += acc.sum_s2(obey);
    if (signal < n && summary.best_action == signal)
      followed += c;

    if (signal >= n)
      continue;
    for (Index j = 0; j < n; ++j) {
      const auto [sum, sum_sq] = acc.difference(signal, j);
      report.ic_slack(signal, j) = sum / total;
      report.ic_slack_se(signal, j) = standard_error(sum, sum_sq, total);
      report.conditional_gap(signal, j) = sum / c;
      report.conditional_gap_se(signal, j) = standard_error(sum, sum_sq, c);
    }
  }
  report.mean_sender_utility = br_sum / total;
  report.std_error = standard_error(br_sum, br_sq, total);
  report.follow_utility = follow_sum / total;
  report.follow_std_error = standard_error(follow_sum, follow_sq, total);
  report.follow_rate = followed / total;
  return report;
}

bool realizability_check(const Signature& signature, const IIDInstance& instance,
                         const LpSolver& solver)
{
  instance.validate();
  const Index n = instance.actions;
  const Index m = instance.types();
  const Index signals = signature.signals();
  if (signals < 1)
    throw Error(ErrorKind::InvalidArgument, "signature has no signals");
  for (const Matrix& mi : signature.m)
    if (mi.rows() != n || mi.cols() != m)
      throw Error(ErrorKind::DimensionMismatch, "signature matrices must be " +
                                                  std::to_string(n) + " x " + std::to_string(m));
  const ProfileIndexer indexer(n, m);
  constexpr Index kMaxColumns = 40000;
  if (indexer.size() * signals > kMaxColumns)
    throw Error(ErrorKind::TooLarge, "realizability LP would need more than " +
                                       std::to_string(kMaxColumns) + " variables");

  LinearProgram lp(indexer.size() * signals);
  std::vector<std::vector<LinearProgram::Term>> match(static_cast<std::size_t>(signals * n * m));
  for (Index p = 0; p < indexer.size(); ++p) {
    const std::vector<Index> theta = indexer.profile(p);
    double lam = 1.0;
    for (Index t : theta)
      lam *= instance.q(t);
    std::vector<LinearProgram::Term> row;
    for (Index i = 0; i < signals; ++i) {
      const Index col = p * signals + i;
      lp.upper(col) = 1.0;
      row.emplace_back(col, 1.0);
      if (lam == 0.0)
        continue;
      for (Index k = 0; k < n; ++k)
        match[static_cast<std::size_t>((i * n + k) * m + theta[static_cast<std::size_t>(k)])]
          .emplace_back(col, lam);
    }
    lp.add_constraint(row, Relation::Equal, 1.0);
  }
  for (Index i = 0; i < signals; ++i)
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < m; ++j)
        lp.add_constraint(match[static_cast<std::size_t>((i * n + k) * m + j)], Relation::Equal,
                          signature.m[static_cast<std::size_t>(i)](k, j));

  const LpOutcome out = solver.solve(lp);
  if (out.status == LpStatus::NumericalFailure)
    throw Error(ErrorKind::NumericalFailure, "realizability LP: " + out.message);
  return out.status == LpStatus::Optimal;
}

bool realizability_check(const TwoSignalSignature& signature, Index n, const LpSolver& solver)
{
  return membership_check(signature, n, solver);
}

double posterior_sender_value(const ExplicitInstance& instance, const Vector& belief)
{
  const Vector r = instance.receiver().transpose() * belief;
  const Vector s = instance.sender().transpose() * belief;
  return s(best_response(r, s));
}

double concavification_value(const ExplicitInstance& instance)
{
  const Index states = instance.state_count();
  const Index n = instance.actions();
  if (states > 3)
    throw Error(ErrorKind::TooLarge, "concavification oracle handles at most 3 states");
  if (states == 3 && n > 8)
    throw Error(ErrorKind::TooLarge, "three-state concavification is capped at 8 actions");
  const Vector& prior = instance.prior();
  const Matrix& r = instance.receiver();

  std::vector<Vector> points;
  for (Index k = 0; k < states; ++k)
    points.push_back(Vector::Unit(states, k));
  points.push_back(prior);

  // Switching hyperplanes {p : p . (r_a - r_b) = 0}.
  std::vector<Vector> planes;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) {
      Vector d = r.col(a) - r.col(b);
      if (d.cwiseAbs().maxCoeff() > 1e-12)
        planes.push_back(std::move(d));
    }
  for (const Vector& d : planes) {
    for (Index u = 0; u < states; ++u)
      for (Index v = u + 1; v < states; ++v) {
        if (d(u) == d(v))
          continue;
        const double t = d(u) / (d(u) - d(v));
        if (t < 0.0 || t > 1.0)
          continue;
        Vector p = Vector::Zero(states);
        p(u) = 1.0 - t;
        p(v) = t;
        points.push_back(p);
      }
  }
  if (states == 3) {
    for (std::size_t x = 0; x < planes.size(); ++x)
      for (std::size_t y = x + 1; y < planes.size(); ++y) {
        Eigen::Matrix3d a;
        a.row(0) = planes[x].transpose();
        a.row(1) = planes[y].transpose();
        a.row(2).setOnes();
        if (std::abs(a.determinant()) < 1e-12)
          continue;
        const Eigen::Vector3d p = a.fullPivLu().solve(Eigen::Vector3d(0.0, 0.0, 1.0));
        if (p.minCoeff() < -1e-12)
          continue;
        const Vector clipped = p.cwiseMax(0.0);
        points.push_back(clipped / clipped.sum());
      }
  }

  std::vector<double> values;
  for (const Vector& p : points)
    values.push_back(posterior_sender_value(instance, p));

  double best = values[static_cast<std::size_t>(states)]; // the prior itself
  const std::size_t count = points.size();
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = a + 1; b < count; ++b) {
      const Vector d = points[a] - points[b];
      const double len = d.squaredNorm();
      if (len < 1e-24)
        continue;
      const double w = (prior - points[b]).dot(d) / len;
      if (w < -1e-12 || w > 1.0 + 1e-12)
        continue;
      if ((w * d + points[b] - prior).cwiseAbs().maxCoeff() > 1e-12)
        continue;
      best = std::max(best, w * values[a] + (1.0 - w) * values[b]);
    }
  if (states == 3) {
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = a + 1; b < count; ++b)
        for (std::size_t c = b + 1; c < count; ++c) {
          Eigen::Matrix3d hull;
          hull << points[a], points[b], points[c];
          if (std::abs(hull.determinant()) < 1e-14)
            continue;
          const Eigen::Vector3d w = hull.fullPivLu().solve(Eigen::Vector3d(prior));
          if (w.minCoeff() < -1e-12)
            continue;
          best = std::max(best, w(0) * values[a] + w(1) * values[b] + w(2) * values[c]);
        }
  }
  return best;
}

bool reduced_form_realizable(const ReducedForm& tau, const Vector& q, Index n,
                             const LpSolver& solver)
{
  const Index m = q.size();
  if (tau.tau.size() != m)
    throw Error(ErrorKind::DimensionMismatch, "tau and q differ in length");
  const ProfileIndexer indexer(n, m);
  LinearProgram lp(indexer.size() * n);
  std::vector<std::vector<LinearProgram::Term>> wins(static_cast<std::size_t>(n * m));
  for (Index p = 0; p < indexer.size(); ++p) {
    const std::vector<Index> theta = indexer.profile(p);
    double lam = 1.0;
    for (Index t : theta)
      lam *= q(t);
    std::vector<LinearProgram::Term> row;
    for (Index k = 0; k < n; ++k) {
      row.emplace_back(p * n + k, 1.0);
      if (lam > 0.0)
        wins[static_cast<std::size_t>(k * m + theta[static_cast<std::size_t>(k)])].emplace_back(
          p * n + k, lam);
    }
    lp.add_constraint(row, Relation::LessEqual, 1.0);
  }
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < m; ++j)
      lp.add_constraint(wins[static_cast<std::size_t>(k * m + j)], Relation::Equal,
                        q(j) * tau.tau(j));
  const LpOutcome out = solver.solve(lp);
  if (out.status == LpStatus::NumericalFailure)
    throw Error(ErrorKind::NumericalFailure, "transportation LP: " + out.message);
  return out.status == LpStatus::Optimal;
}

namespace {

std::string format_gap(Index agree, Index total, double worst)
{
  std::ostringstream out;
  out << agree << "/" << total << " agree, worst gap " << worst;
  return out.str();
}

CheckResult check_exact_vs_envelope(Index count, Rng& rng)
{
  std::vector<ExplicitInstance> cases{corpus::prosecutor(), corpus::rain_shine(),
                                      corpus::three_action(), corpus::three_action_prime()};
  std::uniform_int_distribution<Index> states(2, 3);
  std::uniform_int_distribution<Index> actions(2, 3);
  for (Index k = 0; k < count; ++k)
    cases.push_back(corpus::random_explicit(rng, states(rng), actions(rng)));
  Index agree = 0;
  double worst = 0.0;
  for (const ExplicitInstance& inst : cases) {
    const double gap = std::abs(solve_exact(inst).value - concavification_value(inst));
    worst = std::max(worst, gap);
    agree += gap <= 1e-6 ? 1 : 0;
  }
  const Index total = static_cast<Index>(cases.size());
  return {"exact LP vs concave envelope", agree == total, format_gap(agree, total, worst)};
}

CheckResult check_iid_vs_exact(Index count, Rng& rng)
{
  Index agree = 0;
  double worst = 0.0;
  for (Index k = 0; k < count; ++k) {
    const IIDInstance inst = corpus::random_iid(rng);
    const double gap =
      std::abs(solve_s_signature(inst).value - solve_exact(expand_product(inst)).value);
    worst = std::max(worst, gap);
    agree += gap <= 1e-6 ? 1 : 0;
  }
  return {"s-signature LP vs exact LP", agree == count, format_gap(agree, count, worst)};
}

CheckResult check_border(Index count, Rng& rng)
{
  std::uniform_int_distribution<Index> actions(1, 4);
  std::uniform_int_distribution<Index> types(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Index agree = 0;
  Index decomposed = 0;
  Index feasible = 0;
  double worst = 0.0;
  for (Index k = 0; k < count; ++k) {
    const Index n = actions(rng);
    const Index m = types(rng);
    const Vector q = corpus::random_distribution(m, rng);
    ReducedForm tau{Vector(m)};
    for (Index j = 0; j < m; ++j)
      tau.tau(j) = unit(rng);
    const bool fast = border_feasible(tau, q, n).feasible;
    agree += fast == reduced_form_realizable(tau, q, n) ? 1 : 0;
    if (!fast)
      continue;
    ++feasible;
    const Matrix forms = decompose_reduced_form(tau, q, n).reduced_forms(q);
    double gap = 0.0;
    for (Index i = 0; i < n; ++i)
      gap = std::max(gap, (forms.row(i).transpose() - tau.tau).cwiseAbs().maxCoeff());
    worst = std::max(worst, gap);
    decomposed += gap <= 1e-8 ? 1 : 0;
  }
  std::ostringstream detail;
  detail << agree << "/" << count << " agree with the transportation LP; " << decomposed << "/"
         << feasible << " decompositions within 1e-8 (worst " << worst << ")";
  return {"Border inequalities and decomposition", agree == count && decomposed == feasible,
          detail.str()};
}

CheckResult check_khintchine(Index count, Rng& rng)
{
  std::uniform_int_distribution<Index> length(1, 8);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Index agree = 0;
  double worst = 0.0;
  for (Index k = 0; k < count; ++k) {
    Vector a(length(rng));
    for (Index i = 0; i < a.size(); ++i)
      a(i) = coeff(rng);
    const double gap = std::abs(solve_khintchine_lp(a).value - khintchine_constant(a));
    worst = std::max(worst, gap);
    agree += gap <= 1e-6 ? 1 : 0;
  }
  return {"Khintchine LP vs enumeration", agree == count, format_gap(agree, count, worst)};
}

CheckResult check_symmetrize(Index count, Rng& rng)
{
  Index agree = 0;
  double worst = 0.0;
  for (Index k = 0; k < count; ++k) {
    const IIDInstance inst = corpus::random_iid(rng, {2, 4, 1, 3, false});
    const ExplicitInstance expanded = expand_product(inst);
    const DirectScheme scheme =
      corpus::random_scheme(rng, expanded.state_count(), expanded.actions());
    const DirectScheme sym = symmetrize(inst, scheme);
    const double gap = std::max(std::abs(audit(expanded, scheme).sender_utility -
                                         audit(expanded, sym).sender_utility),
                                symmetry_defect(signature(inst, sym)));
    worst = std::max(worst, gap);
    agree += gap <= 1e-9 ? 1 : 0;
  }
  return {"symmetrization", agree == count, format_gap(agree, count, worst)};
}

} // namespace

std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed)
{
  Index scale;
  if (suite == "small")
    scale = 1;
  else if (suite == "full")
    scale = 10;
  else
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "' (small or full)");
  Rng rng(seed);
  std::vector<CheckResult> out;
  out.push_back(check_exact_vs_envelope(10 * scale, rng));
  out.push_back(check_iid_vs_exact(10 * scale, rng));
  out.push_back(check_border(20 * scale, rng));
  out.push_back(check_khintchine(5 * scale, rng));
  out.push_back(check_symmetrize(2 * scale, rng));
  return out;
}

} // namespace persuasion
