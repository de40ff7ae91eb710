#include "doctest.h"
#include "fixtures.hpp"
#include "matchforge/generator.hpp"
#include "matchforge/json_io.hpp"

using namespace matchforge;
namespace fx = matchforge::test_fixtures;

TEST_CASE("minimal instance round-trips") {
  const std::string text = R"({
    "contracts": [{"id": 0, "agent": "a", "institution": "i"}],
    "preferences": {"a": [0]},
    "institutions": {"i": {"capacity": 1, "priority": [0]}}
  })";
  const Problem p = load_instance(text);
  CHECK(p.agent_count() == 1);
  CHECK(p.contract_count() == 1);
  CHECK(p.preference(0).acceptable(0));
  const std::string saved = save_instance(p);
  const Problem again = load_instance(saved);
  CHECK(save_instance(again) == saved);
}

TEST_CASE("acceptable-prefix shorthand completes canonically") {
  const std::string text = R"({
    "contracts": [
      {"id": 0, "agent": "a", "institution": "i"},
      {"id": 1, "agent": "a", "institution": "j"},
      {"id": 2, "agent": "a", "institution": "k"}
    ],
    "preferences": {"a": [1]},
    "institutions": {
      "i": {"capacity": 1, "priority": [0]},
      "j": {"capacity": 1, "priority": [1]},
      "k": {"capacity": 1, "priority": [2]}
    }
  })";
  const Problem p = load_instance(text);
  // Listed prefix above null, the rest below null in ascending id order.
  CHECK(p.preference(0).order() == std::vector<int>{1, Preference::kNull, 0, 2});
  CHECK(p.preference(0).acceptable(1));
  CHECK(!p.preference(0).acceptable(0));
}

TEST_CASE("rejections name the offending field") {
  auto expect_reject = [](const std::string& text, const char* fragment) {
    CHECK_THROWS_WITH_AS(load_instance(text), doctest::Contains(fragment), InstanceError);
  };

  SUBCASE("two returning contracts at capacity one") {
    expect_reject(R"({
      "contracts": [
        {"id": 0, "agent": "a", "institution": "i"},
        {"id": 1, "agent": "b", "institution": "i"}
      ],
      "preferences": {},
      "institutions": {"i": {"capacity": 1, "priority": [0, 1], "returning": [0, 1]}}
    })",
                  "returning");
  }
  SUBCASE("unknown keys are rejected") {
    expect_reject(R"({
      "contracts": [], "preferences": {}, "institutions": {}, "comment": "hi"
    })",
                  "unknown key \"comment\"");
  }
  SUBCASE("duplicate contract ids") {
    expect_reject(R"({
      "contracts": [
        {"id": 0, "agent": "a", "institution": "i"},
        {"id": 0, "agent": "b", "institution": "i"}
      ],
      "preferences": {}, "institutions": {"i": {"capacity": 1, "priority": [0, 1]}}
    })",
                  "duplicate contract id");
  }
  SUBCASE("priority not total") {
    expect_reject(R"({
      "contracts": [
        {"id": 0, "agent": "a", "institution": "i"},
        {"id": 1, "agent": "b", "institution": "i"}
      ],
      "preferences": {}, "institutions": {"i": {"capacity": 1, "priority": [0]}}
    })",
                  "priority");
  }
  SUBCASE("negative reserves") {
    expect_reject(R"({
      "contracts": [{"id": 0, "agent": "a", "institution": "i"}],
      "preferences": {},
      "institutions": {"i": {"capacity": 1, "priority": [0],
                             "types": ["D"], "reserves": {"D": -1}}}
    })",
                  "reserves.D");
  }
  SUBCASE("preference entry for a contract of another agent") {
    expect_reject(R"({
      "contracts": [{"id": 0, "agent": "a", "institution": "i"}],
      "preferences": {"a": [0], "ghost": [0]},
      "institutions": {"i": {"capacity": 1, "priority": [0]}}
    })",
                  "ghost");
  }
}

TEST_CASE("serialization is a fixed point on generated instances") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    GenConfig config;
    config.agents = 1 + static_cast<int>(seed % 4);
    config.institutions = 1 + static_cast<int>(seed % 2);
    config.types = static_cast<int>(seed % 3);
    config.seed = seed;
    const Problem p = generate_instance(config);
    const std::string once = save_instance(p);
    CHECK(save_instance(load_instance(once)) == once);
  }
}

TEST_CASE("fixture instances load") {
  CHECK(fx::load("e1.json").contract_count() == 3);
  CHECK(fx::load("e3.json").institution(0).returning == ContractSet::of({2}));
  CHECK(fx::load("e4.json").institution_count() == 2);
}

TEST_CASE("tabulated rules round-trip") {
  ChoiceFunction rule = tabulated_rule_from_file(fx::data_path("cpp_pi.json"));
  CHECK(rule.ground() == ContractSet::of({0, 1}));
  CHECK(rule.choose(ContractSet::of({0})).empty());
  CHECK(rule.choose(ContractSet::of({0, 1})) == ContractSet::of({0}));
  const std::string text = tabulated_rule_to_json(rule);
  ChoiceFunction again = tabulated_rule_from_json(text);
  for (std::uint64_t j = 0; j < 4; ++j) {
    const ContractSet x = nth_subset(j, rule.ground_positions());
    CHECK(rule.choose(x) == again.choose(x));
  }
}

TEST_CASE("instances over the contract cap are refused") {
  GenConfig config;
  config.agents = 13;
  config.institutions = 5;
  CHECK_THROWS_WITH_AS(generate_instance(config), doctest::Contains("64"), InstanceError);
}
