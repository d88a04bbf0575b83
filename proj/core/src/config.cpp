#include "choinet/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "choinet/errors.hpp"
#include "json.hpp"

namespace choinet {
namespace {

using Json = nlohmann::ordered_json;

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "/" + key, "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

Dims parse_dims(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty array of dimensions");
  Dims dims;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer() || j[k].get<long long>() < 1) {
      throw ParseError(fmt::format("{}/{}", path, k), "expected a positive integer");
    }
    dims.push_back(static_cast<Index>(j[k].get<long long>()));
  }
  return dims;
}

ComplexMatrix parse_matrix(const Json& j, Index n, const std::string& path) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n) {
    throw ParseError(path, fmt::format("expected {} rows", n));
  }
  ComplexMatrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    const std::string row_path = fmt::format("{}/{}", path, r);
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      throw ParseError(row_path, fmt::format("expected {} entries", n));
    }
    for (Index c = 0; c < n; ++c) {
      const Json& z = row[static_cast<std::size_t>(c)];
      const std::string entry_path = fmt::format("{}/{}", row_path, c);
      if (!z.is_array() || z.size() != 2) throw ParseError(entry_path, "expected a [re, im] pair");
      m(r, c) = Complex(number(z[0], entry_path + "/0"), number(z[1], entry_path + "/1"));
    }
  }
  return m;
}

template <typename F>
auto validated(const std::string& path, F make) {
  try {
    return make();
  } catch (const ValidationError& e) {
    throw ValidationError(e.invariant(), fmt::format("at {}: {}", path, e.what()));
  } catch (const InvalidArgument& e) {
    throw ValidationError("config.value", fmt::format("at {}: {}", path, e.what()));
  }
}

QuantumState parse_state(const Json& j, const std::string& path, const Tolerances& tol) {
  const Dims dims = parse_dims(field(j, "dims", path), path + "/dims");
  ComplexMatrix m = parse_matrix(field(j, "matrix", path), total_dim(dims), path + "/matrix");
  return validated(path, [&] { return QuantumState(std::move(m), dims, tol); });
}

Povm parse_povm(const Json& j, const std::string& path, const Tolerances& tol) {
  const Dims dims = parse_dims(field(j, "dims", path), path + "/dims");
  const Json& effects = field(j, "effects", path);
  if (!effects.is_array() || effects.empty()) throw ParseError(path + "/effects", "expected a non-empty array");
  std::vector<ComplexMatrix> mats;
  for (std::size_t i = 0; i < effects.size(); ++i) {
    mats.push_back(parse_matrix(effects[i], total_dim(dims), fmt::format("{}/effects/{}", path, i)));
  }
  return validated(path, [&] { return Povm(std::move(mats), dims, tol); });
}

std::vector<BlockSpec> parse_blocks(const Json& root, const char* key, const Tolerances& tol) {
  std::vector<BlockSpec> blocks;
  const auto it = root.find(key);
  if (it == root.end()) return blocks;
  const std::string path = std::string("/") + key;
  if (!it->is_array()) throw ParseError(path, "expected an array of blocks");
  for (std::size_t k = 0; k < it->size(); ++k) {
    const std::string bpath = fmt::format("{}/{}", path, k);
    const Json& b = (*it)[k];
    Povm povm = parse_povm(field(b, "povm", bpath), bpath + "/povm", tol);
    QuantumState state = parse_state(field(b, "state", bpath), bpath + "/state", tol);
    blocks.push_back(validated(bpath, [&] { return BlockSpec(std::move(povm), std::move(state)); }));
  }
  return blocks;
}

ConfigOptions parse_options(const Json& root) {
  ConfigOptions opts;
  const auto it = root.find("options");
  if (it == root.end()) return opts;
  if (!it->is_object()) throw ParseError("/options", "expected an object");
  if (const auto t = it->find("tolerances"); t != it->end()) {
    if (!t->is_object()) throw ParseError("/options/tolerances", "expected an object");
    Tolerances tol;
    for (const auto& [key, value] : t->items()) {
      const std::string p = "/options/tolerances/" + key;
      const double v = number(value, p);
      if (!(v > 0.0)) throw ParseError(p, "tolerances must be positive");
      if (key == "herm") tol.herm = v;
      else if (key == "psd") tol.psd = v;
      else if (key == "trace") tol.trace = v;
      else if (key == "completeness") tol.completeness = v;
      else if (key == "feas") tol.feas = v;
      else if (key == "sep") tol.sep = v;
      else if (key == "wit") tol.wit = v;
      else throw ParseError(p, "unknown tolerance");
    }
    opts.tolerances = tol;
  }
  if (const auto s = it->find("seed"); s != it->end()) {
    if (!s->is_number_unsigned()) throw ParseError("/options/seed", "expected a non-negative integer");
    opts.seed = s->get<std::uint64_t>();
  }
  if (const auto c = it->find("tuple_cap"); c != it->end()) {
    if (!c->is_number_unsigned() || c->get<std::uint64_t>() == 0) {
      throw ParseError("/options/tuple_cap", "expected a positive integer");
    }
    opts.tuple_cap = c->get<std::size_t>();
  }
  return opts;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(fmt::format("line {}, column {}", line, col), "malformed JSON");
  }
}

void check_version(const Json& root) {
  const Json& v = field(root, "version", "");
  if (!v.is_number_integer() || v.get<int>() != kConfigVersion) {
    throw ParseError("/version", fmt::format("unsupported version (expected {})", kConfigVersion));
  }
}

Json dump_matrix(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json dump_state(const QuantumState& s) {
  Json j;
  j["dims"] = s.dims();
  j["matrix"] = dump_matrix(s.matrix());
  return j;
}

Json dump_povm(const Povm& p) {
  Json j;
  j["dims"] = p.dims();
  Json effects = Json::array();
  for (const auto& e : p.effects()) effects.push_back(dump_matrix(e));
  j["effects"] = std::move(effects);
  return j;
}

Json dump_blocks(const std::vector<BlockSpec>& blocks) {
  Json arr = Json::array();
  for (const auto& b : blocks) {
    Json j;
    j["povm"] = dump_povm(b.povm);
    j["state"] = dump_state(b.state);
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

NetworkConfig parse_network_config(std::string_view text) {
  const Json root = parse_json(text);
  if (!root.is_object()) throw ParseError("", "expected a JSON object");
  check_version(root);
  ConfigOptions opts = parse_options(root);
  const Tolerances tol = opts.tolerances.value_or(default_tolerances());

  const Json& subj = field(root, "subject", "");
  const Json& kind = field(subj, "kind", "/subject");
  Subject subject = [&]() -> Subject {
    if (kind == "state") return StateSubject{parse_state(field(subj, "state", "/subject"), "/subject/state", tol)};
    if (kind == "measurement") {
      Povm m = parse_povm(field(subj, "povm", "/subject"), "/subject/povm", tol);
      QuantumState omega0 = parse_state(field(subj, "omega0", "/subject"), "/subject/omega0", tol);
      QuantumState xi0 = parse_state(field(subj, "xi0", "/subject"), "/subject/xi0", tol);
      return validated("/subject", [&] { return MeasSubject(std::move(m), std::move(omega0), std::move(xi0)); });
    }
    throw ParseError("/subject/kind", "expected \"state\" or \"measurement\"");
  }();

  auto left = parse_blocks(root, "left_blocks", tol);
  auto right = parse_blocks(root, "right_blocks", tol);
  LineNetwork net = validated("/", [&] { return LineNetwork(std::move(left), std::move(right), std::move(subject)); });
  return NetworkConfig{root["version"].get<int>(), std::move(net), opts};
}

NetworkConfig load_network_config(const std::filesystem::path& path) { return parse_network_config(read_file(path)); }

std::string dump_network_config(const NetworkConfig& config) {
  Json root;
  root["version"] = config.version;
  Json subj;
  if (const auto* s = std::get_if<StateSubject>(&config.network.subject())) {
    subj["kind"] = "state";
    subj["state"] = dump_state(s->rho);
  } else {
    const auto& ms = std::get<MeasSubject>(config.network.subject());
    subj["kind"] = "measurement";
    subj["povm"] = dump_povm(ms.m);
    subj["omega0"] = dump_state(ms.omega0);
    subj["xi0"] = dump_state(ms.xi0);
  }
  root["subject"] = std::move(subj);
  root["left_blocks"] = dump_blocks(config.network.left_blocks());
  root["right_blocks"] = dump_blocks(config.network.right_blocks());
  const auto& o = config.options;
  if (o.tolerances || o.seed || o.tuple_cap) {
    Json opts = Json::object();
    if (o.tolerances) {
      const auto& t = *o.tolerances;
      opts["tolerances"] = {{"herm", t.herm}, {"psd", t.psd},   {"trace", t.trace}, {"completeness", t.completeness},
                            {"feas", t.feas}, {"sep", t.sep},   {"wit", t.wit}};
    }
    if (o.seed) opts["seed"] = *o.seed;
    if (o.tuple_cap) opts["tuple_cap"] = *o.tuple_cap;
    root["options"] = std::move(opts);
  }
  return root.dump(2) + "\n";
}

void save_network_config(const NetworkConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument(fmt::format("cannot write {}", path.string()));
  out << dump_network_config(config);
}

LineNetwork load_network(const std::filesystem::path& path) { return load_network_config(path).network; }

QuantumState parse_state_document(std::string_view text) {
  const Json root = parse_json(text);
  if (!root.is_object()) throw ParseError("", "expected a JSON object");
  check_version(root);
  return parse_state(field(root, "state", ""), "/state", default_tolerances());
}

QuantumState load_state(const std::filesystem::path& path) { return parse_state_document(read_file(path)); }

}  // namespace choinet
