#include <doctest.h>

#include <filesystem>

#include "fiatchain/sim.hpp"

using namespace fiatchain;
using namespace fiatchain::sim;

namespace {

const std::string kActors = R"(
  "actors": [
    {"name": "pm", "roles": ["PlatformManager"]},
    {"name": "bank", "roles": ["AccountProvider"]},
    {"name": "v1", "roles": ["Validator"]},
    {"name": "v2", "roles": ["Validator"]},
    {"name": "alice", "roles": ["User"], "balance": 300, "provider": "bank"},
    {"name": "bob", "roles": ["User"], "balance": 300, "provider": "bank"}
  ])";

std::string doc(const std::string& steps, const std::string& extra = "") {
    return R"({"name": "t", "seed": 3, "key_scheme": "mock",)" + extra + kActors + R"(, "steps": )" + steps + "}";
}

ScenarioError::Kind error_kind(const std::string& text, std::string* what = nullptr) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        if (what) *what = e.what();
        return e.kind();
    }
    FAIL("scenario was accepted");
    return ScenarioError::Kind::Parse;
}

}  // namespace

TEST_CASE("schema errors name the field") {
    std::string what;
    CHECK(error_kind("{\n  \"name\": \"x\",\n  oops\n}", &what) == ScenarioError::Kind::Parse);
    CHECK(what.find("line 3") != std::string::npos);

    CHECK(error_kind(doc(R"([{"tick": 1, "tx": {"from": "alice", "payload": {"type": "Transfer", "to": "zed", "amount": 1}}}])"),
                     &what) == ScenarioError::Kind::Schema);
    CHECK(what.find("$.steps[0].tx.payload.to") != std::string::npos);

    CHECK(error_kind(doc(R"([{"tick": 1, "tx": {"from": "alice", "payload": {"type": "Transfer", "to": "bob", "amount": 1, "memo": 2}}}])"),
                     &what) == ScenarioError::Kind::Schema);
    CHECK(what.find("memo") != std::string::npos);

    CHECK(error_kind(doc(R"([{"tick": 0, "assert": {"type": "conservation"}}])")) == ScenarioError::Kind::Schema);
    CHECK(error_kind(doc(R"([{"tick": 1, "assert": {"type": "conservation"}, "tx": {}}])")) ==
          ScenarioError::Kind::Schema);
    CHECK(error_kind(doc(R"([{"tick": 1, "assert": {"type": "tx", "label": "later", "status": "Ok"}}])")) ==
          ScenarioError::Kind::Schema);
    CHECK(error_kind(doc(R"([{"tick": 1, "tx": {"from": "alice", "payload": {"type": "Warp"}}}])")) ==
          ScenarioError::Kind::Schema);
    CHECK(error_kind(doc("[]", R"("key_scheme": "rsa",)")) == ScenarioError::Kind::Schema);
}

TEST_CASE("transfers and assertions") {
    auto s = parse_scenario(doc(R"([
      {"tick": 1, "tx": {"from": "alice", "payload": {"type": "Transfer", "to": "bob", "amount": 100}, "label": "t1", "expect": "Ok"}},
      {"tick": 1, "tx": {"from": "alice", "payload": {"type": "Transfer", "to": "bob", "amount": 900}, "expect": "InsufficientFunds"}},
      {"tick": 3, "assert": {"type": "balance", "account": "bob", "equals": 400}},
      {"tick": 3, "assert": {"type": "tx", "label": "t1", "status": "Ok"}},
      {"tick": 3, "assert": {"type": "balance", "account": "alice", "equals": 1}},
      {"tick": 4, "assert": {"type": "conservation"}}
    ])"));
    auto r = run(s);
    CHECK_FALSE(r.report.fatal);
    // Transaction expectations count as assertions, in step order.
    REQUIRE(r.report.assertions.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CAPTURE(i);
        CHECK(r.report.assertions[i].step == i);
        CHECK(r.report.assertions[i].pass == (i != 4));
    }
    CHECK_FALSE(r.report.all_passed());
    CHECK(r.report.height == 4);
    CHECK(verify_chain(r.chain).ok);
}

TEST_CASE("runs are deterministic and seeded") {
    auto s = parse_scenario(doc(R"([
      {"tick": 1, "random_transfers": {"count": 20, "among": ["alice", "bob"], "max_amount": 50}},
      {"tick": 2, "random_transfers": {"count": 20, "among": ["alice", "bob"], "max_amount": 50}},
      {"tick": 5, "assert": {"type": "conservation"}}
    ])"));
    auto a = run(s);
    auto b = run(s);
    CHECK(a.report.state_digest == b.report.state_digest);
    CHECK(a.report.to_json().dump() == b.report.to_json().dump());
    CHECK(export_chain(a.chain) == export_chain(b.chain));
    CHECK(a.report.all_passed());

    auto c = run(s, 99);
    CHECK(c.report.seed == 99);
    CHECK(c.report.state_digest != a.report.state_digest);
}

TEST_CASE("bundled scenarios pass") {
    std::filesystem::path dir = std::filesystem::path(FIATCHAIN_SOURCE_DIR) / "scenarios";
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().filename().string());
        auto r = run(load_scenario(entry.path().string()));
        CHECK_FALSE(r.report.fatal);
        for (const auto& a : r.report.assertions) {
            CAPTURE(a.what);
            CAPTURE(a.detail);
            CHECK(a.pass);
        }
        CHECK(verify_chain(r.chain).ok);
        ++seen;
    }
    CHECK(seen >= 2);
}

TEST_CASE("report json") {
    auto s = parse_scenario(doc(R"([
      {"tick": 1, "tx": {"from": "alice", "payload": {"type": "Transfer", "to": "bob", "amount": 5}, "label": "pay"}},
      {"tick": 2, "query": {"as": "alice", "kind": "balance", "label": "q"}},
      {"tick": 8, "assert": {"type": "query", "label": "q", "outcome": "Consistent", "value": 295}}
    ])"));
    auto r = run(s);
    CHECK(r.report.all_passed());
    auto j = r.report.to_json();
    CHECK(j["scenario"] == "t");
    CHECK(j["transactions"][0]["label"] == "pay");
    CHECK(j["transactions"][0]["outcome"] == "Ok");
    CHECK(j["queries"][0]["outcome"] == "Consistent");
}
