#include <persuasion/iid.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <string>

namespace persuasion {

namespace {

std::string describe_set(const std::vector<Index>& types)
{
  std::string out = "{";
  for (std::size_t k = 0; k < types.size(); ++k)
    out += (k ? ", " : "") + std::to_string(types[k]);
  return out + "}";
}

/// Dinic's algorithm on a residual graph with paired forward/backward edges.
class MaxFlow {
public:
  explicit MaxFlow(Index nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  Index add_edge(Index from, Index to, double cap)
  {
    const Index id = static_cast<Index>(edges_.size());
    edges_.push_back({to, cap, cap});
    edges_.push_back({from, 0.0, 0.0});
    adj_[static_cast<std::size_t>(from)].push_back(id);
    adj_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  double run(Index source, Index sink)
  {
    double total = 0.0;
    while (levels(source, sink)) {
      next_.assign(adj_.size(), 0);
      while (true) {
        const double pushed = augment(source, sink, std::numeric_limits<double>::infinity());
        if (pushed <= kEps)
          break;
        total += pushed;
      }
    }
    return total;
  }

  double flow(Index edge) const
  {
    const Edge& e = edges_[static_cast<std::size_t>(edge)];
    return e.initial - e.residual;
  }

private:
  static constexpr double kEps = 1e-15;

  struct Edge {
    Index to;
    double residual;
    double initial;
  };

  bool levels(Index source, Index sink)
  {
    level_.assign(adj_.size(), -1);
    std::queue<Index> frontier;
    level_[static_cast<std::size_t>(source)] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const Index v = frontier.front();
      frontier.pop();
      for (Index id : adj_[static_cast<std::size_t>(v)]) {
        const Edge& e = edges_[static_cast<std::size_t>(id)];
        if (e.residual > kEps && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
          frontier.push(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(sink)] >= 0;
  }

  double augment(Index v, Index sink, double limit)
  {
    if (v == sink)
      return limit;
    auto& out = adj_[static_cast<std::size_t>(v)];
    for (std::size_t& k = next_[static_cast<std::size_t>(v)]; k < out.size(); ++k) {
      const Index id = out[k];
      Edge& e = edges_[static_cast<std::size_t>(id)];
      if (e.residual <= kEps ||
          level_[static_cast<std::size_t>(e.to)] != level_[static_cast<std::size_t>(v)] + 1)
        continue;
      const double pushed = augment(e.to, sink, std::min(limit, e.residual));
      if (pushed > kEps) {
        e.residual -= pushed;
        edges_[static_cast<std::size_t>(id ^ 1)].residual += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> adj_;
  std::vector<Index> level_;
  std::vector<std::size_t> next_;
};

double factorial(Index n)
{
  double f = 1.0;
  for (Index k = 2; k <= n; ++k)
    f *= static_cast<double>(k);
  return f;
}

void check_symmetrize_size(Index n)
{
  if (n > kMaxSymmetrizeActions)
    throw Error(ErrorKind::TooLarge,
                "explicit symmetrization averages n! relabelings and is capped at n = " +
                  std::to_string(kMaxSymmetrizeActions) + "; use PermutedSampler");
}

} // namespace

Vector Signature::signal_probs() const
{
  Vector out(signals());
  for (Index i = 0; i < signals(); ++i)
    out(i) = m[static_cast<std::size_t>(i)].row(0).sum();
  return out;
}

AllocationRule::AllocationRule(Index bidders, Index types, Matrix alloc)
  : indexer_(bidders, types), alloc_(std::move(alloc))
{
  if (alloc_.rows() != indexer_.size() || alloc_.cols() != bidders + 1)
    throw Error(ErrorKind::DimensionMismatch,
                "allocation matrix must be " + std::to_string(indexer_.size()) + " x " +
                  std::to_string(bidders + 1));
  for (Index k = 0; k < alloc_.rows(); ++k)
    if (std::abs(alloc_.row(k).sum() - 1.0) > 1e-9 || alloc_.row(k).minCoeff() < -1e-12)
      throw Error(ErrorKind::InvalidArgument,
                  "allocation for profile " + std::to_string(k) + " is not a distribution");
}

Matrix AllocationRule::reduced_forms(const Vector& q) const
{
  const Index n = bidders();
  const Index m = types();
  if (q.size() != m)
    throw Error(ErrorKind::DimensionMismatch, "q has length " + std::to_string(q.size()) +
                                                ", expected " + std::to_string(m));
  Matrix wins = Matrix::Zero(n, m);
  for (Index p = 0; p < indexer_.size(); ++p) {
    const std::vector<Index> theta = indexer_.profile(p);
    double prob = 1.0;
    for (Index t : theta)
      prob *= q(t);
    if (prob == 0.0)
      continue;
    for (Index k = 0; k < n; ++k)
      wins(k, theta[static_cast<std::size_t>(k)]) += prob * alloc_(p, k);
  }
  for (Index j = 0; j < m; ++j)
    wins.col(j) = q(j) > 0.0 ? Vector(wins.col(j) / q(j)) : Vector::Zero(n);
  return wins;
}

SSignatureSolution solve_s_signature(const IIDInstance& instance, const LpSolver& solver)
{
  instance.validate();
  const Index n = instance.actions;
  const Index m = instance.types();
  SSignatureSolution out;

  if (n == 1) {
    out.signature = {instance.q, instance.q};
    out.value = instance.xi.dot(instance.q);
    return out;
  }

  // Zero-probability types are dropped and reinserted as zeros.
  std::vector<Index> support;
  for (Index j = 0; j < m; ++j)
    if (instance.q(j) > 0.0)
      support.push_back(j);
  const Index ms = static_cast<Index>(support.size());
  Vector q(ms), xi(ms), rho(ms);
  for (Index k = 0; k < ms; ++k) {
    const Index j = support[static_cast<std::size_t>(k)];
    q(k) = instance.q(j);
    xi(k) = instance.xi(j);
    rho(k) = instance.rho(j);
  }

  const double nd = static_cast<double>(n);
  LinearProgram lp(2 * ms);
  std::vector<LinearProgram::Term> mass;
  std::vector<LinearProgram::Term> ic;
  for (Index k = 0; k < ms; ++k) {
    lp.objective(k) = nd * xi(k);
    lp.upper(k) = q(k);
    lp.add_constraint({{k, 1.0}, {ms + k, nd - 1.0}}, Relation::Equal, q(k));
    mass.emplace_back(k, 1.0);
    ic.emplace_back(k, rho(k));
    ic.emplace_back(ms + k, -rho(k));
  }
  lp.add_constraint(mass, Relation::Equal, 1.0 / nd);
  lp.add_constraint(ic, Relation::GreaterEqual, 0.0);

  // Border's inequalities are separated lazily over prefix sets.
  std::set<std::vector<Index>> added;
  Vector x, y;
  while (true) {
    const LpOutcome sol = solve_or_throw(lp, solver, "s-signature LP");
    x = sol.point.head(ms).cwiseMax(0.0);
    y = sol.point.tail(ms).cwiseMax(0.0);
    const BorderCheck check = border_feasible(ReducedForm{x.cwiseQuotient(q).cwiseMin(1.0)}, q, n);
    if (check.feasible)
      break;
    std::vector<Index> key = check.violating_set;
    std::sort(key.begin(), key.end());
    if (!added.insert(key).second) {
      if (check.violation > 1e-8)
        throw Error(ErrorKind::NumericalFailure,
                    "Border cut on " + describe_set(key) + " did not take effect");
      break;
    }
    std::vector<LinearProgram::Term> cut;
    double qa = 0.0;
    for (Index k : key) {
      cut.emplace_back(k, 1.0);
      qa += q(k);
    }
    lp.add_constraint(cut, Relation::LessEqual, (1.0 - std::pow(1.0 - qa, nd)) / nd);
    ++out.cuts;
  }

  out.signature.x = Vector::Zero(m);
  out.signature.y = Vector::Zero(m);
  for (Index k = 0; k < ms; ++k) {
    out.signature.x(support[static_cast<std::size_t>(k)]) = x(k);
    out.signature.y(support[static_cast<std::size_t>(k)]) = y(k);
  }
  out.value = nd * instance.xi.dot(out.signature.x);
  return out;
}

ReducedForm reduced_form(const SSignature& signature, const Vector& q)
{
  if (signature.x.size() != q.size())
    throw Error(ErrorKind::DimensionMismatch, "x and q differ in length");
  Vector tau = Vector::Zero(q.size());
  for (Index j = 0; j < q.size(); ++j)
    if (q(j) > 0.0)
      tau(j) = std::clamp(signature.x(j) / q(j), 0.0, 1.0);
  return ReducedForm{tau};
}

BorderCheck border_feasible(const ReducedForm& tau, const Vector& q, Index n, double tolerance)
{
  if (n < 1)
    throw Error(ErrorKind::InvalidArgument, "bidder count must be positive");
  if (tau.tau.size() != q.size())
    throw Error(ErrorKind::DimensionMismatch, "tau has length " + std::to_string(tau.tau.size()) +
                                                ", q has length " + std::to_string(q.size()));
  for (Index j = 0; j < q.size(); ++j) {
    if (q(j) < 0.0)
      throw Error(ErrorKind::InvalidArgument, "q[" + std::to_string(j) + "] is negative");
    if (!(tau.tau(j) >= -1e-12 && tau.tau(j) <= 1.0 + 1e-12))
      throw Error(ErrorKind::InvalidArgument, "tau[" + std::to_string(j) + "] outside [0, 1]");
  }

  std::vector<Index> order;
  for (Index j = 0; j < q.size(); ++j)
    if (q(j) > 0.0)
      order.push_back(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return tau.tau(a) > tau.tau(b); });

  BorderCheck out;
  double lhs = 0.0;
  double qa = 0.0;
  Index worst = -1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Index j = order[k];
    lhs += static_cast<double>(n) * q(j) * tau.tau(j);
    qa += q(j);
    const double rhs = 1.0 - std::pow(std::max(0.0, 1.0 - qa), static_cast<double>(n));
    const double violation = lhs - rhs;
    if (worst < 0 || violation > out.violation) {
      out.violation = violation;
      worst = static_cast<Index>(k);
    }
  }
  out.feasible = worst < 0 || out.violation <= tolerance;
  if (!out.feasible)
    out.violating_set.assign(order.begin(), order.begin() + worst + 1);
  return out;
}

AllocationRule decompose_reduced_form(const ReducedForm& tau, const Vector& q, Index n, Index cap)
{
  const BorderCheck check = border_feasible(tau, q, n, 1e-9);
  if (!check.feasible)
    throw Error(ErrorKind::Infeasible, "reduced form violates Border's inequality on types " +
                                         describe_set(check.violating_set) + " by " +
                                         std::to_string(check.violation));
  const Index m = q.size();
  const ProfileIndexer indexer(n, m, cap);
  const Index profiles = indexer.size();

  // source -> profile (prior mass) -> (bidder, own type) -> sink (q_j tau_j).
  const Index source = 0;
  const Index first_pair = 1 + profiles;
  const Index sink = first_pair + n * m;
  MaxFlow net(sink + 1);

  Vector prob(profiles);
  std::vector<Index> win_edges(static_cast<std::size_t>(profiles * n), -1);
  for (Index p = 0; p < profiles; ++p) {
    const std::vector<Index> theta = indexer.profile(p);
    double lam = 1.0;
    for (Index t : theta)
      lam *= q(t);
    prob(p) = lam;
    if (lam <= 0.0)
      continue;
    net.add_edge(source, 1 + p, lam);
    for (Index k = 0; k < n; ++k)
      win_edges[static_cast<std::size_t>(p * n + k)] =
        net.add_edge(1 + p, first_pair + k * m + theta[static_cast<std::size_t>(k)], lam);
  }
  double target = 0.0;
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < m; ++j) {
      const double c = q(j) * tau.tau(j);
      target += c;
      net.add_edge(first_pair + k * m + j, sink, c);
    }
  }
  const double flow = net.run(source, sink);
  if (flow < target - 1e-9)
    throw Error(ErrorKind::Infeasible, "no allocation rule attains the reduced form (flow " +
                                         std::to_string(flow) + " of " + std::to_string(target) +
                                         ")");

  Matrix alloc = Matrix::Zero(profiles, n + 1);
  for (Index p = 0; p < profiles; ++p) {
    if (prob(p) <= 0.0) {
      alloc(p, n) = 1.0;
      continue;
    }
    double total = 0.0;
    for (Index k = 0; k < n; ++k) {
      const double f = std::max(0.0, net.flow(win_edges[static_cast<std::size_t>(p * n + k)]));
      alloc(p, k) = f / prob(p);
      total += alloc(p, k);
    }
    if (total > 1.0)
      alloc.row(p).head(n) /= total;
    else
      alloc(p, n) = 1.0 - total;
  }
  return AllocationRule(n, m, std::move(alloc));
}

Signature signature(const IIDInstance& instance, const DirectScheme& scheme)
{
  instance.validate();
  const Index n = instance.actions;
  const Index m = instance.types();
  const ProfileIndexer indexer(n, m);
  if (scheme.state_count() != indexer.size() || scheme.signal_count() != n)
    throw Error(ErrorKind::DimensionMismatch,
                "scheme is " + std::to_string(scheme.state_count()) + " x " +
                  std::to_string(scheme.signal_count()) + ", expansion needs " +
                  std::to_string(indexer.size()) + " x " + std::to_string(n));
  Signature sig;
  sig.m.assign(static_cast<std::size_t>(n), Matrix::Zero(n, m));
  for (Index p = 0; p < indexer.size(); ++p) {
    const std::vector<Index> theta = indexer.profile(p);
    double lam = 1.0;
    for (Index t : theta)
      lam *= instance.q(t);
    for (Index i = 0; i < n; ++i) {
      const double w = lam * scheme.phi()(p, i);
      if (w == 0.0)
        continue;
      for (Index k = 0; k < n; ++k)
        sig.m[static_cast<std::size_t>(i)](k, theta[static_cast<std::size_t>(k)]) += w;
    }
  }
  return sig;
}

double symmetry_defect(const Signature& sig, const SSignature& target)
{
  double worst = 0.0;
  for (Index i = 0; i < sig.signals(); ++i) {
    const Matrix& mi = sig.m[static_cast<std::size_t>(i)];
    for (Index k = 0; k < mi.rows(); ++k) {
      const Vector& want = (k == i) ? target.x : target.y;
      worst = std::max(worst, (mi.row(k).transpose() - want).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double symmetry_defect(const Signature& sig)
{
  const Index n = sig.signals();
  if (n == 0)
    return 0.0;
  const Index m = sig.m.front().cols();
  SSignature mean{Vector::Zero(m), Vector::Zero(m)};
  for (Index i = 0; i < n; ++i) {
    const Matrix& mi = sig.m[static_cast<std::size_t>(i)];
    mean.x += mi.row(i).transpose() / static_cast<double>(n);
    for (Index k = 0; k < n; ++k)
      if (k != i)
        mean.y += mi.row(k).transpose() / static_cast<double>(n * (n - 1));
  }
  return symmetry_defect(sig, mean);
}

std::vector<Index> random_permutation(Index n, Rng& rng)
{
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

SymmetricSignaler::SymmetricSignaler(IIDInstance instance, SSignature signature,
                                     AllocationRule rule)
  : instance_(std::move(instance)), signature_(std::move(signature)), rule_(std::move(rule))
{
  instance_.validate();
  if (rule_.bidders() != instance_.actions || rule_.types() != instance_.types())
    throw Error(ErrorKind::DimensionMismatch, "allocation rule does not match the instance");
  const Matrix forms = rule_.reduced_forms(instance_.q);
  for (Index j = 0; j < instance_.types(); ++j) {
    if (instance_.q(j) <= 0.0)
      continue;
    const double want = signature_.x(j) / instance_.q(j);
    for (Index k = 0; k < rule_.bidders(); ++k)
      if (std::abs(forms(k, j) - want) > 1e-6)
        throw Error(ErrorKind::InvalidArgument,
                    "allocation rule's reduced form for bidder " + std::to_string(k) +
                      ", type " + std::to_string(j) + " is " + std::to_string(forms(k, j)) +
                      ", expected " + std::to_string(want));
  }
}

Index SymmetricSignaler::sample(const std::vector<Index>& types, Rng& rng) const
{
  const Index n = instance_.actions;
  if (static_cast<Index>(types.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "type profile has " +
                                                std::to_string(types.size()) +
                                                " entries, expected " + std::to_string(n));
  const std::vector<Index> perm = random_permutation(n, rng);
  std::vector<Index> relabeled(types.size());
  for (Index k = 0; k < n; ++k)
    relabeled[static_cast<std::size_t>(k)] = types[static_cast<std::size_t>(perm[k])];
  const Index w =
    sample_categorical(rule_.alloc().row(rule_.indexer().index(relabeled)).transpose(), rng);
  if (w == n) {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    return pick(rng);
  }
  return perm[static_cast<std::size_t>(w)];
}

DirectScheme SymmetricSignaler::direct_scheme() const
{
  const Index n = instance_.actions;
  check_symmetrize_size(n);
  const ProfileIndexer& indexer = rule_.indexer();
  Matrix phi = Matrix::Zero(indexer.size(), n);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::vector<Index> relabeled(static_cast<std::size_t>(n));
  for (Index p = 0; p < indexer.size(); ++p) {
    const std::vector<Index> theta = indexer.profile(p);
    std::iota(perm.begin(), perm.end(), Index{0});
    do {
      for (Index k = 0; k < n; ++k)
        relabeled[static_cast<std::size_t>(k)] = theta[static_cast<std::size_t>(perm[k])];
      const auto row = rule_.alloc().row(indexer.index(relabeled));
      for (Index w = 0; w < n; ++w)
        phi(p, perm[static_cast<std::size_t>(w)]) += row(w);
      phi.row(p).array() += row(n) / static_cast<double>(n);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  phi /= factorial(n);
  return DirectScheme(std::move(phi));
}

SymmetricSignaler scheme_from_allocation(const IIDInstance& instance,
                                         const SSignature& signature, const AllocationRule& rule)
{
  return SymmetricSignaler(instance, signature, rule);
}

SymmetricSignaler solve_iid(const IIDInstance& instance, const LpSolver& solver)
{
  const SSignatureSolution sol = solve_s_signature(instance, solver);
  AllocationRule rule = decompose_reduced_form(reduced_form(sol.signature, instance.q),
                                               instance.q, instance.actions);
  return SymmetricSignaler(instance, sol.signature, std::move(rule));
}

DirectScheme symmetrize(const IIDInstance& instance, const DirectScheme& scheme)
{
  instance.validate();
  const Index n = instance.actions;
  check_symmetrize_size(n);
  const ProfileIndexer indexer(n, instance.types());
  if (scheme.state_count() != indexer.size() || scheme.signal_count() != n)
    throw Error(ErrorKind::DimensionMismatch,
                "scheme is " + std::to_string(scheme.state_count()) + " x " +
                  std::to_string(scheme.signal_count()) + ", expansion needs " +
                  std::to_string(indexer.size()) + " x " + std::to_string(n));
  Matrix phi = Matrix::Zero(indexer.size(), n);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::vector<Index> relabeled(static_cast<std::size_t>(n));
  for (Index p = 0; p < indexer.size(); ++p) {
    const std::vector<Index> theta = indexer.profile(p);
    std::iota(perm.begin(), perm.end(), Index{0});
    do {
      for (Index k = 0; k < n; ++k)
        relabeled[static_cast<std::size_t>(k)] = theta[static_cast<std::size_t>(perm[k])];
      const Index src = indexer.index(relabeled);
      for (Index w = 0; w < n; ++w)
        phi(p, perm[static_cast<std::size_t>(w)]) += scheme.phi()(src, w);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  phi /= factorial(n);
  return DirectScheme(std::move(phi));
}

PermutedSampler::PermutedSampler(const IIDInstance& instance, DirectScheme scheme)
  : indexer_(instance.actions, instance.types()), scheme_(std::move(scheme))
{
  if (scheme_.state_count() != indexer_.size() || scheme_.signal_count() != instance.actions)
    throw Error(ErrorKind::DimensionMismatch, "scheme does not match the instance expansion");
}

Index PermutedSampler::sample(const std::vector<Index>& types, Rng& rng) const
{
  const Index n = indexer_.actions();
  if (static_cast<Index>(types.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "type profile has the wrong length");
  const std::vector<Index> perm = random_permutation(n, rng);
  std::vector<Index> relabeled(types.size());
  for (Index k = 0; k < n; ++k)
    relabeled[static_cast<std::size_t>(k)] = types[static_cast<std::size_t>(perm[k])];
  const Index w = scheme_.sample(indexer_.index(relabeled), rng);
  return perm[static_cast<std::size_t>(w)];
}

} // namespace persuasion
