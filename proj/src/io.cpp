#include <persuasion/io.hpp>

#include <persuasion/exact.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace persuasion {

using nlohmann::json;

namespace {

/// Approximate 1-based line of the occurrence-th "key" token in text, or 0.
std::size_t line_of_key(const std::string& text, const std::string& key, std::size_t occurrence)
{
  const std::string token = "\"" + key + "\"";
  std::size_t pos = std::string::npos;
  std::size_t from = 0;
  for (std::size_t k = 0; k <= occurrence; ++k) {
    pos = text.find(token, from);
    if (pos == std::string::npos)
      return 0;
    from = pos + 1;
  }
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n')) + 1;
}

/// Walks a parsed document, tracking the JSON path for diagnostics.
class Reader {
public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source))
  {
    try {
      root_ = json::parse(text);
    } catch (const json::parse_error& e) {
      const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
      const std::size_t line =
        static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte > 0 ? byte - 1 : 0), '\n')) + 1;
      throw Error(ErrorKind::Parse, source_ + ":" + std::to_string(line) + ": malformed JSON (" +
                                      e.what() + ")");
    }
    if (!root_.is_object())
      fail("", "top level must be an object", 0);
  }

  const json& root() const { return root_; }

  [[noreturn]] void fail(const std::string& path, const std::string& what,
                         std::size_t index) const
  {
    std::string where = source_;
    const std::size_t dot = path.find_last_of('.');
    std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
    key = key.substr(0, key.find('['));
    if (!key.empty()) {
      if (const std::size_t line = line_of_key(text_, key, index))
        where += ":" + std::to_string(line);
    }
    throw Error(ErrorKind::Parse, where + ": field '" + path + "': " + what);
  }

  const json& field(const json& obj, const std::string& path, const std::string& key,
                    std::size_t index = 0) const
  {
    const std::string full = path.empty() ? key : path + "." + key;
    if (!obj.contains(key))
      fail(full, "missing", index);
    return obj.at(key);
  }

  double number(const json& value, const std::string& path, std::size_t index = 0) const
  {
    if (!value.is_number())
      fail(path, "expected a number", index);
    return value.get<double>();
  }

  Index integer(const json& value, const std::string& path, std::size_t index = 0) const
  {
    if (!value.is_number_integer())
      fail(path, "expected an integer", index);
    return value.get<Index>();
  }

  Vector vector(const json& value, const std::string& path, std::size_t index = 0) const
  {
    if (!value.is_array())
      fail(path, "expected an array of numbers", index);
    Vector out(static_cast<Index>(value.size()));
    for (std::size_t k = 0; k < value.size(); ++k) {
      if (!value[k].is_number())
        fail(path + "[" + std::to_string(k) + "]", "expected a number", index);
      out(static_cast<Index>(k)) = value[k].get<double>();
    }
    return out;
  }

  Matrix matrix(const json& value, const std::string& path) const
  {
    if (!value.is_array() || value.empty())
      fail(path, "expected a nonempty array of rows", 0);
    Matrix out;
    for (std::size_t k = 0; k < value.size(); ++k) {
      const Vector row = vector(value[k], path + "[" + std::to_string(k) + "]");
      if (k == 0)
        out.resize(static_cast<Index>(value.size()), row.size());
      else if (row.size() != out.cols())
        fail(path + "[" + std::to_string(k) + "]", "row length differs from row 0", 0);
      out.row(static_cast<Index>(k)) = row.transpose();
    }
    return out;
  }

  /// Run a constructor, reattaching library errors to a path.
  template <typename F>
  auto guarded(const std::string& path, F&& build) const
  {
    try {
      return build();
    } catch (const Error& e) {
      fail(path, e.what(), 0);
    }
  }

private:
  const std::string& text_;
  std::string source_;
  json root_;
};

json to_json(const Vector& v)
{
  json out = json::array();
  for (Index k = 0; k < v.size(); ++k)
    out.push_back(v(k));
  return out;
}

json to_json(const Matrix& m)
{
  json out = json::array();
  for (Index k = 0; k < m.rows(); ++k)
    out.push_back(to_json(Vector(m.row(k).transpose())));
  return out;
}

Marginal read_marginal(const Reader& r, const json& obj, const std::string& path,
                       std::size_t index)
{
  if (!obj.is_object())
    r.fail(path, "expected an object", index);
  return Marginal{r.vector(r.field(obj, path, "q", index), path + ".q", index),
                  r.vector(r.field(obj, path, "xi", index), path + ".xi", index),
                  r.vector(r.field(obj, path, "rho", index), path + ".rho", index)};
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::InvalidArgument, path + ": cannot write file");
  out << text;
}

} // namespace

Instance parse_instance(const std::string& text, const std::string& source)
{
  const Reader r(text, source);
  const json& root = r.root();
  const json& kind_field = r.field(root, "", "kind");
  if (!kind_field.is_string())
    r.fail("kind", "expected a string", 0);
  const std::string kind = kind_field.get<std::string>();

  if (kind == "explicit") {
    const Index n = r.integer(r.field(root, "", "actions"), "actions");
    const json& states = r.field(root, "", "states");
    if (!states.is_array())
      r.fail("states", "expected an array", 0);
    std::vector<State> list;
    for (std::size_t k = 0; k < states.size(); ++k) {
      const std::string path = "states[" + std::to_string(k) + "]";
      const json& s = states[k];
      if (!s.is_object())
        r.fail(path, "expected an object", k);
      list.push_back(State{r.number(r.field(s, path, "prob", k), path + ".prob", k),
                           r.vector(r.field(s, path, "sender", k), path + ".sender", k),
                           r.vector(r.field(s, path, "receiver", k), path + ".receiver", k)});
    }
    return r.guarded("states", [&] { return Instance(ExplicitInstance(n, list)); });
  }
  if (kind == "iid") {
    IIDInstance inst;
    inst.actions = r.integer(r.field(root, "", "actions"), "actions");
    inst.q = r.vector(r.field(root, "", "q"), "q");
    inst.xi = r.vector(r.field(root, "", "xi"), "xi");
    inst.rho = r.vector(r.field(root, "", "rho"), "rho");
    if (root.contains("types") && r.integer(root.at("types"), "types") != inst.q.size())
      r.fail("types", "does not match the length of q", 0);
    r.guarded("q", [&] { inst.validate(); return 0; });
    return inst;
  }
  if (kind == "independent") {
    const json& marginals = r.field(root, "", "marginals");
    if (!marginals.is_array())
      r.fail("marginals", "expected an array", 0);
    IndependentInstance inst;
    for (std::size_t k = 0; k < marginals.size(); ++k)
      inst.marginals.push_back(
        read_marginal(r, marginals[k], "marginals[" + std::to_string(k) + "]", k));
    r.guarded("marginals", [&] { inst.validate(); return 0; });
    return inst;
  }
  r.fail("kind", "must be explicit, iid or independent", 0);
}

std::string dump_instance(const Instance& instance)
{
  json out;
  if (const auto* e = std::get_if<ExplicitInstance>(&instance)) {
    out["kind"] = "explicit";
    out["actions"] = e->actions();
    json states = json::array();
    for (Index k = 0; k < e->state_count(); ++k) {
      const State s = e->state(k);
      states.push_back({{"prob", s.prob}, {"sender", to_json(s.sender)},
                        {"receiver", to_json(s.receiver)}});
    }
    out["states"] = std::move(states);
  } else if (const auto* i = std::get_if<IIDInstance>(&instance)) {
    out["kind"] = "iid";
    out["actions"] = i->actions;
    out["types"] = i->types();
    out["q"] = to_json(i->q);
    out["xi"] = to_json(i->xi);
    out["rho"] = to_json(i->rho);
  } else {
    const auto& d = std::get<IndependentInstance>(instance);
    out["kind"] = "independent";
    json marginals = json::array();
    for (const Marginal& m : d.marginals)
      marginals.push_back({{"q", to_json(m.q)}, {"xi", to_json(m.xi)}, {"rho", to_json(m.rho)}});
    out["marginals"] = std::move(marginals);
  }
  return out.dump(2) + "\n";
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path), path); }

void save_instance(const std::string& path, const Instance& instance)
{
  write_file(path, dump_instance(instance));
}

SchemeFile parse_scheme(const std::string& text, const std::string& source)
{
  const Reader r(text, source);
  const json& root = r.root();
  SchemeFile out;
  const json& method = r.field(root, "", "method");
  if (!method.is_string())
    r.fail("method", "expected a string", 0);
  out.method = method.get<std::string>();
  out.value = r.number(r.field(root, "", "value"), "value");
  if (root.contains("epsilon"))
    out.epsilon = r.number(root.at("epsilon"), "epsilon");
  if (root.contains("phi"))
    out.phi = r.matrix(root.at("phi"), "phi");
  if (root.contains("state_order")) {
    if (!root.at("state_order").is_string())
      r.fail("state_order", "expected a string", 0);
    out.state_order = root.at("state_order").get<std::string>();
  }
  if (root.contains("s_signature")) {
    const json& sig = root.at("s_signature");
    if (!sig.is_object())
      r.fail("s_signature", "expected an object", 0);
    out.s_signature = SSignature{r.vector(r.field(sig, "s_signature", "x"), "s_signature.x"),
                                 r.vector(r.field(sig, "s_signature", "y"), "s_signature.y")};
  }
  if (root.contains("ic_report")) {
    const json& ic = root.at("ic_report");
    if (!ic.is_object())
      r.fail("ic_report", "expected an object", 0);
    if (ic.contains("min_slack"))
      out.min_slack = r.number(ic.at("min_slack"), "ic_report.min_slack");
    if (ic.contains("epsilon_certified"))
      out.epsilon_certified = r.number(ic.at("epsilon_certified"), "ic_report.epsilon_certified");
  }
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned())
      r.fail("seed", "expected a nonnegative integer", 0);
    out.seed = root.at("seed").get<std::uint64_t>();
  }
  if (!out.phi && !out.s_signature)
    r.fail("phi", "a scheme needs phi or s_signature", 0);
  return out;
}

std::string dump_scheme(const SchemeFile& scheme)
{
  json out;
  out["method"] = scheme.method;
  out["value"] = scheme.value;
  if (scheme.epsilon)
    out["epsilon"] = *scheme.epsilon;
  if (!scheme.state_order.empty())
    out["state_order"] = scheme.state_order;
  if (scheme.phi)
    out["phi"] = to_json(*scheme.phi);
  if (scheme.s_signature)
    out["s_signature"] = {{"x", to_json(scheme.s_signature->x)},
                          {"y", to_json(scheme.s_signature->y)}};
  if (scheme.min_slack || scheme.epsilon_certified) {
    json ic = json::object();
    if (scheme.min_slack)
      ic["min_slack"] = *scheme.min_slack;
    if (scheme.epsilon_certified)
      ic["epsilon_certified"] = *scheme.epsilon_certified;
    out["ic_report"] = std::move(ic);
  }
  if (scheme.seed)
    out["seed"] = *scheme.seed;
  return out.dump(2) + "\n";
}

SchemeFile load_scheme(const std::string& path) { return parse_scheme(read_file(path), path); }

void save_scheme(const std::string& path, const SchemeFile& scheme)
{
  write_file(path, dump_scheme(scheme));
}

ExplicitInstance to_explicit(const Instance& instance)
{
  if (const auto* e = std::get_if<ExplicitInstance>(&instance))
    return *e;
  if (const auto* i = std::get_if<IIDInstance>(&instance))
    return expand_product(*i);
  return expand_product(std::get<IndependentInstance>(instance));
}

} // namespace persuasion
