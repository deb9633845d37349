#pragma once

#include <persuasion/core.hpp>
#include <persuasion/iid.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace persuasion {

using Instance = std::variant<ExplicitInstance, IIDInstance, IndependentInstance>;

/// Parse an instance document. source names the input in diagnostics.
Instance parse_instance(const std::string& text, const std::string& source = "<input>");
std::string dump_instance(const Instance& instance);
Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& instance);

inline constexpr const char* kLexicographicOrder = "lexicographic, action 0 most significant";

struct SchemeFile {
  std::string method;
  double value = 0.0;
  std::optional<double> epsilon;
  /// Rows follow the instance's state order; product instances use
  /// kLexicographicOrder over type profiles.
  std::optional<Matrix> phi;
  std::string state_order;
  std::optional<SSignature> s_signature;
  std::optional<double> min_slack;
  std::optional<double> epsilon_certified;
  std::optional<std::uint64_t> seed;
};

SchemeFile parse_scheme(const std::string& text, const std::string& source = "<input>");
std::string dump_scheme(const SchemeFile& scheme);
SchemeFile load_scheme(const std::string& path);
void save_scheme(const std::string& path, const SchemeFile& scheme);

/// The explicit form of any instance (expanding product priors).
ExplicitInstance to_explicit(const Instance& instance);

} // namespace persuasion
