#pragma once

// Deterministic scenario runner. Scenarios are JSON documents; see
// docs/scenario-format.md for the schema.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fiatchain/chain.hpp"
#include "fiatchain/gateway.hpp"

namespace fiatchain::sim {

using Json = nlohmann::ordered_json;

class ScenarioError : public std::runtime_error {
public:
    enum class Kind { Parse, Schema };
    ScenarioError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct FaultProfile {
    bool offline = false;
    bool censor_all = false;
    std::set<std::string> censor;  // payload type names dropped when publishing
    GatewayFaults gateway;
};

struct ActorSpec {
    std::string name;
    AccountId id;
    RoleSet roles;
    Amount balance = 0;
    bool in_genesis = true;
    std::optional<std::string> provider;
    RecoveryPolicy recovery = RecoveryProviderOnly{};
    FaultProfile faults;
};

enum class StepKind { Tx, Query, Fault, Assert, RandomTransfers };

struct Step {
    std::size_t index = 0;  // position in the scenario file
    Tick tick = 0;
    StepKind kind = StepKind::Tx;
    Json body;  // validated at load time
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    KeyScheme scheme = KeyScheme::Ed25519;
    Tick ticks = 0;  // last tick; at least the last step's tick
    std::vector<ActorSpec> actors;
    std::optional<std::string> escrow;
    std::vector<SetPolicy> policies;
    std::vector<Step> steps;

    const ActorSpec* actor(std::string_view name) const;
};

/// Throws ScenarioError. Parse errors name the line, schema errors the field path.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Keys are derived from the actor name, so ids are known before the run.
KeyPair actor_key(KeyScheme scheme, std::string_view name);
KeyPair view_key(KeyScheme scheme, std::string_view name);

struct AssertionResult {
    std::size_t step = 0;
    Tick tick = 0;
    std::string what;
    bool pass = false;
    std::string detail;
};

struct TxOutcome {
    std::size_t step = 0;
    std::string label;
    std::string sender;
    std::string type;
    Tick submitted = 0;
    std::optional<Height> included_at;
    std::string outcome = "Pending";  // Ok, an error code name, Pending or Unavailable
    std::optional<std::string> expect;
};

struct QueryOutcome {
    std::size_t step = 0;
    std::string label;
    std::string requester;
    std::string kind;
    Height as_of = 0;
    std::size_t responses = 0;
    std::string outcome = "Pending";  // Consistent, Evidence, an error code name or Pending
    std::optional<Amount> value;      // majority amount for balance/claimable queries
    std::optional<Tick> resolved_at;
    std::optional<std::size_t> filed_tx;  // index into Report::transactions
};

struct Report {
    std::string scenario;
    std::uint64_t seed = 0;
    Height height = 0;
    std::size_t blocks_produced = 0;
    std::vector<std::string> publishers;  // per height, from 1
    Hash256 state_digest;
    std::vector<AssertionResult> assertions;
    std::vector<TxOutcome> transactions;
    std::vector<QueryOutcome> queries;
    SupplyCounters supply;
    Amount unclaimed = 0;
    std::vector<LogEntry> management_log;
    std::vector<std::pair<std::string, Amount>> balances;  // oracle view, not served in-protocol
    std::map<AccountId, std::string> names;
    std::optional<std::string> fatal;  // internal invariant violation

    bool all_passed() const;
    Json to_json() const;
};

struct RunResult {
    Report report;
    Chain chain;
    LedgerState state;
};

/// Runs the tick loop. `seed` overrides the scenario seed.
RunResult run(const Scenario& scenario, std::optional<std::uint64_t> seed = std::nullopt);

// JSON views shared by the report and the CLI -------------------------------

using Namer = std::function<std::string(const AccountId&)>;
Namer genesis_namer(const GenesisConfig& genesis);

Json to_json(const LogEntry& entry, const Namer& name);
Json to_json(const Answer& answer, const Namer& name);
Json block_summary(const Block& block, const Namer& name);

}  // namespace fiatchain::sim
