#include "choinet/tolerances.hpp"

#include <charconv>
#include <string>

#include "choinet/errors.hpp"

namespace choinet {
namespace {

Tolerances g_defaults{};

double parse_positive(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(value > 0.0)) {
    throw InvalidArgument("tolerance: expected a positive number, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

const Tolerances& default_tolerances() { return g_defaults; }

void set_default_tolerances(const Tolerances& tol) { g_defaults = tol; }

Tolerances parse_tolerances(std::string_view text, Tolerances base) {
  if (text.find('=') == std::string_view::npos) {
    base.psd = parse_positive(text);
    return base;
  }
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("tolerance: expected key=value, got '" + std::string(item) + "'");
    }
    const auto key = item.substr(0, eq);
    const double value = parse_positive(item.substr(eq + 1));
    if (key == "herm") base.herm = value;
    else if (key == "psd") base.psd = value;
    else if (key == "trace") base.trace = value;
    else if (key == "completeness") base.completeness = value;
    else if (key == "feas") base.feas = value;
    else if (key == "sep") base.sep = value;
    else if (key == "wit") base.wit = value;
    else throw InvalidArgument("tolerance: unknown key '" + std::string(key) + "'");
  }
  return base;
}

}  // namespace choinet
