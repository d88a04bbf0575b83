#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "choinet/config.hpp"
#include "choinet/errors.hpp"
#include "json.hpp"

using namespace choinet;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"({
  "version": 1,
  "subject": {"kind": "state", "state": {"dims": [2, 2], "matrix": [
    [[0.5, 0], [0, 0], [0, 0], [0.5, 0]],
    [[0, 0], [0, 0], [0, 0], [0, 0]],
    [[0, 0], [0, 0], [0, 0], [0, 0]],
    [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]]}}
})";

template <typename E>
E expect_throw(const std::string& text) {
  try {
    parse_network_config(text);
  } catch (const E& e) {
    return e;
  }
  ADD_FAILURE() << "no exception for config";
  return E("", "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(Config, MinimalStateSubject) {
  const NetworkConfig cfg = parse_network_config(kMinimal);
  EXPECT_TRUE(cfg.network.has_state_subject());
  EXPECT_TRUE(cfg.network.left_blocks().empty());
  EXPECT_TRUE(cfg.network.right_blocks().empty());
  EXPECT_FALSE(cfg.options.seed.has_value());
}

TEST(Config, ShippedConfigsRoundTripBitExact) {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(CHOINET_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const std::string text = slurp(entry.path());
    EXPECT_EQ(dump_network_config(parse_network_config(text)), text) << entry.path();
    ++seen;
  }
  EXPECT_GE(seen, 3);
}

TEST(Config, DumpThenParseIsStable) {
  NetworkConfig cfg{1, LineNetwork({BlockSpec(random_povm({2, 3}, 3, 1), random_state({3, 2}, 2))}, {},
                                   MeasSubject(random_povm({2, 2}, 2, 3), random_state({2, 2}, 4), random_state({2, 2}, 5))),
                    {}};
  cfg.options.seed = 42;
  cfg.options.tuple_cap = 100;
  const std::string once = dump_network_config(cfg);
  const NetworkConfig back = parse_network_config(once);
  EXPECT_EQ(dump_network_config(back), once);
  EXPECT_EQ(back.options.seed, 42u);
  const auto& m = std::get<MeasSubject>(back.network.subject());
  EXPECT_EQ(m.m.effect(1), random_povm({2, 2}, 2, 3).effect(1));
}

TEST(Config, SyntaxErrorReportsLine) {
  const ParseError e = expect_throw<ParseError>("{\n  \"version\": 1,\n  oops\n}");
  EXPECT_EQ(e.field().rfind("line 3", 0), 0u) << e.field();
}

TEST(Config, MissingAndWrongFields) {
  EXPECT_EQ(expect_throw<ParseError>(replace(kMinimal, "\"version\": 1", "\"version\": 7")).field(), "/version");
  EXPECT_EQ(expect_throw<ParseError>(replace(kMinimal, "\"kind\": \"state\"", "\"kind\": \"channel\"")).field(),
            "/subject/kind");
  EXPECT_EQ(expect_throw<ParseError>(replace(kMinimal, "\"dims\": [2, 2]", "\"dims\": [2, 3]")).field(),
            "/subject/state/matrix");
  EXPECT_EQ(expect_throw<ParseError>(replace(kMinimal, "[[0.5, 0], [0, 0], [0, 0], [0.5, 0]],",
                                             "[[0.5, 0], [0, 0], [0, \"x\"], [0.5, 0]],"))
                .field(),
            "/subject/state/matrix/0/2/1");
}

TEST(Config, ValidationNamesInvariantAndField) {
  const std::string bad_trace = replace(kMinimal, "[[0.5, 0], [0, 0], [0, 0], [0.5, 0]],", "[[0.7, 0], [0, 0], [0, 0], [0.5, 0]],");
  try {
    parse_network_config(bad_trace);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "state.trace");
    EXPECT_NE(std::string(e.what()).find("/subject/state"), std::string::npos);
  }
}

TEST(Config, NonNormalizedPovmNamesCompleteness) {
  NetworkConfig cfg{1, LineNetwork({}, {}, MeasSubject(bell_povm(2), max_entangled(2).state(), max_entangled(2).state())), {}};
  auto j = nlohmann::ordered_json::parse(dump_network_config(cfg));
  j["subject"]["povm"]["effects"][0][1][1][0] = 0.01;
  const std::string text = j.dump();
  try {
    parse_network_config(text);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "povm.completeness");
    EXPECT_NE(std::string(e.what()).find("/subject/povm"), std::string::npos);
  }
}

TEST(Config, ChainMismatch) {
  const BlockSpec blk(bell_povm(2), max_entangled(2).state());
  NetworkConfig cfg{1, LineNetwork({}, {blk}, StateSubject{max_entangled(2).state()}), {}};
  std::string text = dump_network_config(cfg);
  // re-declare the subject as a 3x2 state (valid on its own) so the right block no longer chains
  NetworkConfig other{1, LineNetwork({}, {}, StateSubject{random_state({2, 3}, 1)}), {}};
  const std::string subj = dump_network_config(other);
  const auto s0 = subj.find("\"subject\"");
  const auto s1 = subj.find("\"left_blocks\"");
  const auto t0 = text.find("\"subject\"");
  const auto t1 = text.find("\"left_blocks\"");
  text.replace(t0, t1 - t0, subj.substr(s0, s1 - s0));
  try {
    parse_network_config(text);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "network.chain");
  }
}

TEST(Config, StateDocument) {
  const QuantumState s = parse_state_document(
      R"({"version": 1, "state": {"dims": [2], "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}})");
  EXPECT_EQ(s.dims(), (Dims{2}));
  EXPECT_THROW(parse_state_document(R"({"version": 1})"), ParseError);
}
