#include <doctest.h>

#include <persuasion/corpus.hpp>
#include <persuasion/exact.hpp>
#include <persuasion/io.hpp>

#include <cmath>
#include <filesystem>

using namespace persuasion;

namespace {

bool same(const Instance& a, const Instance& b)
{
  if (a.index() != b.index())
    return false;
  if (const auto* e = std::get_if<ExplicitInstance>(&a)) {
    const auto& f = std::get<ExplicitInstance>(b);
    return e->prior() == f.prior() && e->sender() == f.sender() && e->receiver() == f.receiver();
  }
  if (const auto* i = std::get_if<IIDInstance>(&a)) {
    const auto& j = std::get<IIDInstance>(b);
    return i->actions == j.actions && i->q == j.q && i->xi == j.xi && i->rho == j.rho;
  }
  const auto& x = std::get<IndependentInstance>(a);
  const auto& y = std::get<IndependentInstance>(b);
  if (x.actions() != y.actions())
    return false;
  for (Index k = 0; k < x.actions(); ++k) {
    const Marginal& m = x.marginals[static_cast<std::size_t>(k)];
    const Marginal& n = y.marginals[static_cast<std::size_t>(k)];
    if (!(m.q == n.q && m.xi == n.xi && m.rho == n.rho))
      return false;
  }
  return true;
}

std::string parse_error(const std::string& text)
{
  try {
    parse_instance(text, "case.json");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

} // namespace

TEST_CASE("shipped corpus round-trips bit-exactly")
{
  const std::filesystem::path dir(PERSUASION_DATA_DIR);
  REQUIRE(std::filesystem::is_directory(dir));
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json")
      continue;
    ++files;
    INFO(entry.path().string());
    const Instance a = load_instance(entry.path().string());
    const Instance b = parse_instance(dump_instance(a));
    CHECK(same(a, b));
    CHECK(dump_instance(a) == dump_instance(b));
  }
  CHECK(files >= 7);
}

TEST_CASE("generated instances round-trip bit-exactly")
{
  Rng rng(91);
  for (int t = 0; t < 50; ++t) {
    const Instance e = corpus::random_explicit(rng, 1 + t % 5, 1 + t % 4);
    CHECK(same(e, parse_instance(dump_instance(e))));
    const Instance i = corpus::random_iid(rng);
    CHECK(same(i, parse_instance(dump_instance(i))));
    const Instance d = corpus::random_independent(rng, 1 + t % 3, 3);
    CHECK(same(d, parse_instance(dump_instance(d))));
  }
  const Instance p = corpus::prosecutor();
  CHECK(same(p, parse_instance(dump_instance(p))));
}

TEST_CASE("file round trip")
{
  const auto path = std::filesystem::temp_directory_path() / "persuasion_io_test.json";
  const Instance inv = corpus::investor();
  save_instance(path.string(), inv);
  CHECK(same(inv, load_instance(path.string())));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_instance(path.string()), Error);
}

TEST_CASE("malformed JSON reports the line")
{
  const std::string msg = parse_error("{\n  \"kind\": \"iid\",\n  \"q\": [0.5, 0.5,,]\n}\n");
  CHECK(contains(msg, "case.json:3"));
  CHECK(contains(msg, "malformed"));
}

TEST_CASE("field errors name the field and line")
{
  {
    const std::string msg = parse_error(
      "{\n  \"kind\": \"iid\",\n  \"actions\": 2,\n  \"q\": [0.5, 0.5],\n  \"xi\": [0, \"a\"],\n"
      "  \"rho\": [0, 1]\n}\n");
    CHECK(contains(msg, "xi[1]"));
    CHECK(contains(msg, "case.json:5"));
  }
  {
    const std::string msg = parse_error("{\"kind\": \"iid\", \"actions\": 2, \"q\": [1]}");
    CHECK(contains(msg, "'xi'"));
    CHECK(contains(msg, "missing"));
  }
  {
    const std::string msg = parse_error(
      "{\n\"kind\": \"explicit\",\n\"actions\": 2,\n\"states\": [\n"
      "  {\"prob\": 0.5, \"sender\": [0, 1], \"receiver\": [1, 0]},\n"
      "  {\"prob\": 0.5, \"sender\": [0, 1], \"receiver\": [1]}\n]}\n");
    CHECK(contains(msg, "states[1].receiver"));
    CHECK(contains(msg, "states"));
    CHECK(contains(msg, "length"));
  }
  {
    const std::string msg = parse_error(
      "{\"kind\": \"iid\", \"actions\": 2, \"q\": [0.5, 0.6], \"xi\": [0, 1], \"rho\": [0, 1]}");
    CHECK(contains(msg, "'q'"));
    CHECK(contains(msg, "sum"));
  }
  CHECK(contains(parse_error("{\"kind\": \"nope\"}"), "'kind'"));
  CHECK(contains(parse_error("[1, 2]"), "object"));
}

TEST_CASE("scheme files reproduce the audit")
{
  Rng rng(92);
  for (int t = 0; t < 20; ++t) {
    const ExplicitInstance inst = corpus::random_explicit(rng, 2 + t % 5, 2 + t % 3);
    const ExactSolution sol = solve_exact(inst, t % 2 == 0 ? 0.0 : 0.1);
    SchemeFile file;
    file.method = "exact";
    file.value = sol.value;
    file.epsilon = t % 2 == 0 ? 0.0 : 0.1;
    file.phi = sol.scheme.phi();
    file.state_order = "instance";
    file.min_slack = sol.audit.min_slack;
    file.epsilon_certified = sol.audit.epsilon_certified;
    file.seed = 12345678901234ULL;
    const SchemeFile back = parse_scheme(dump_scheme(file));
    REQUIRE(back.phi.has_value());
    CHECK(*back.phi == *file.phi);
    CHECK(back.value == file.value);
    CHECK(back.seed == file.seed);
    CHECK(back.epsilon == file.epsilon);
    const AuditReport rep = audit(inst, DirectScheme(*back.phi));
    CHECK(std::abs(rep.sender_utility - back.value) < 1e-9);
  }
}

TEST_CASE("s-signature scheme files")
{
  SchemeFile file;
  file.method = "iid-opt";
  file.value = 5.0 / 9.0;
  file.s_signature = SSignature{Vector::Constant(3, 1.0 / 6), Vector::Constant(3, 1.0 / 6)};
  const SchemeFile back = parse_scheme(dump_scheme(file));
  REQUIRE(back.s_signature.has_value());
  CHECK(back.s_signature->x == file.s_signature->x);
  CHECK_FALSE(back.phi.has_value());
  CHECK_THROWS_AS(parse_scheme("{\"method\": \"x\", \"value\": 1}"), Error);
}

TEST_CASE("to_explicit expands product instances")
{
  CHECK(to_explicit(corpus::investor()).state_count() == 9);
  CHECK(to_explicit(corpus::prosecutor()).state_count() == 2);
}
