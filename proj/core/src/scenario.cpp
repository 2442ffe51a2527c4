#include <algorithm>
#include <fstream>
#include <sstream>

#include "fiatchain/governance.hpp"
#include "sim_internal.hpp"

namespace fiatchain::sim {

namespace detail {

void schema_error(const std::string& path, const std::string& msg) {
    throw ScenarioError(ScenarioError::Kind::Schema, path + ": " + msg);
}

Fields::Fields(const Json& j, std::string path, std::initializer_list<std::string_view> allowed)
    : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema_error(path_, "expected an object");
    for (const auto& [key, value] : j_.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            schema_error(path_ + "." + key, "unknown field");
    }
}

bool Fields::has(std::string_view key) const { return j_.contains(std::string(key)); }

const Json& Fields::raw(std::string_view key) const {
    auto it = j_.find(std::string(key));
    if (it == j_.end()) schema_error(at(key), "missing required field");
    return *it;
}

std::string Fields::str(std::string_view key) const {
    const Json& v = raw(key);
    if (!v.is_string()) schema_error(at(key), "expected a string");
    return v.get<std::string>();
}

std::optional<std::string> Fields::opt_str(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return str(key);
}

std::uint64_t as_u64(const Json& j, const std::string& path) {
    if (!j.is_number_unsigned()) {
        if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
        schema_error(path, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

Role as_role(const Json& j, const std::string& path) {
    if (!j.is_string()) schema_error(path, "expected a role name");
    auto role = parse_role(j.get<std::string>());
    if (!role) schema_error(path, "unknown role '" + j.get<std::string>() + "'");
    return *role;
}

std::uint64_t Fields::u64(std::string_view key) const { return as_u64(raw(key), at(key)); }

std::uint64_t Fields::u64_or(std::string_view key, std::uint64_t fallback) const {
    return has(key) ? u64(key) : fallback;
}

std::optional<std::uint64_t> Fields::opt_u64(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return u64(key);
}

bool Fields::boolean_or(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_boolean()) schema_error(at(key), "expected true or false");
    return v.get<bool>();
}

std::vector<std::string> Fields::str_list(std::string_view key) const {
    const Json& v = raw(key);
    if (!v.is_array()) schema_error(at(key), "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) schema_error(at(key) + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

Role Fields::role(std::string_view key) const { return as_role(raw(key), at(key)); }

namespace {

std::set<AccountId> id_set(const Fields& f, std::string_view key, const PayloadEnv& env) {
    std::set<AccountId> out;
    for (const auto& name : f.str_list(key)) out.insert(env.id(name, f.at(key)));
    return out;
}

PolicyValue policy_value(const Json& j, const std::string& path, const PayloadEnv& env) {
    if (j.is_object()) {
        Fields f(j, path, {"accounts", "hex"});
        if (f.has("accounts") == f.has("hex")) schema_error(path, "give exactly one of accounts, hex");
        if (f.has("hex")) {
            auto raw = from_hex(f.str("hex"));
            if (!raw) schema_error(f.at("hex"), "invalid hex");
            return *raw;
        }
        std::vector<AccountId> ids;
        for (const auto& name : f.str_list("accounts")) ids.push_back(env.id(name, f.at("accounts")));
        return encode_account_list(ids);
    }
    return as_u64(j, path);
}

Permanence permanence(const Json& j, const std::string& path) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "permanent") return PermanencePermanent{};
        if (s == "temporary") return PermanenceTemporary{};
    } else if (j.is_object()) {
        Fields f(j, path, {"timed"});
        return PermanenceTimed{f.u64("timed")};
    }
    schema_error(path, "expected \"permanent\", \"temporary\" or {\"timed\": H}");
}

}  // namespace

RecoveryPolicy build_recovery(const Json& j, const std::string& path, const PayloadEnv& env) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "provider_only") return RecoveryProviderOnly{};
        if (s == "provider_plus_security") return RecoveryProviderPlusSecurity{};
    } else if (j.is_object()) {
        Fields f(j, path, {"guardians", "threshold"});
        return RecoveryGuardians{id_set(f, "guardians", env), f.u64("threshold")};
    }
    schema_error(path, "expected \"provider_only\", \"provider_plus_security\" or {\"guardians\", \"threshold\"}");
}

Payload build_payload(const Json& j, const std::string& path, const PayloadEnv& env) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        schema_error(path, "payload needs a string \"type\"");
    const auto type = j["type"].get<std::string>();
    auto who = [&](const Fields& f, std::string_view key) { return env.id(f.str(key), f.at(key)); };

    if (type == "Transfer") {
        Fields f(j, path, {"type", "to", "amount"});
        return Transfer{who(f, "to"), f.u64("amount")};
    }
    if (type == "SetFrozen") {
        Fields f(j, path, {"type", "target", "frozen"});
        return SetFrozen{who(f, "target"), f.boolean_or("frozen", true)};
    }
    if (type == "Confiscate") {
        Fields f(j, path, {"type", "from", "to", "amount"});
        return Confiscate{who(f, "from"), who(f, "to"), f.u64("amount")};
    }
    if (type == "Reverse") {
        Fields f(j, path, {"type", "tx"});
        return Reverse{env.tx(f.str("tx"), f.at("tx"))};
    }
    if (type == "RotateKey") {
        Fields f(j, path, {"type", "target", "new_key", "approvals"});
        RotateKey p;
        p.target = who(f, "target");
        p.new_key = KeyPair::from_seed(env.scheme(), f.str("new_key")).public_key();
        const PublicKey current = env.key(f.str("target")).public_key();
        const Bytes message = RotateKey::approval_bytes(p.target, current, p.new_key);
        for (const auto& name : f.has("approvals") ? f.str_list("approvals") : std::vector<std::string>{})
            p.approvals.push_back(Approval{env.id(name, f.at("approvals")), env.key(name).sign(message)});
        return p;
    }
    if (type == "SetPolicy") {
        Fields f(j, path, {"type", "key", "value", "permanence"});
        SetPolicy p;
        p.key = f.str("key");
        p.value = policy_value(f.raw("value"), f.at("value"), env);
        if (f.has("permanence")) p.permanence = permanence(f.raw("permanence"), f.at("permanence"));
        return p;
    }
    if (type == "AssignRole") {
        Fields f(j, path, {"type", "target", "role", "recovery", "omit_proof", "provider"});
        AssignRole p;
        p.target = who(f, "target");
        p.role = f.role("role");
        const KeyPair& target_key = env.key(f.str("target"));
        if (!env.exists(p.target)) p.key = target_key.public_key();
        if (p.role == Role::User && !f.boolean_or("omit_proof", false)) {
            // The proof is bound to the provider that submits the assignment.
            AccountId provider = f.has("provider") ? who(f, "provider") : env.id(env.sender, path);
            p.possession_proof = target_key.sign(AssignRole::possession_bytes(p.target, provider));
        }
        if (f.has("recovery")) p.recovery = build_recovery(f.raw("recovery"), f.at("recovery"), env);
        return p;
    }
    if (type == "RevokeRole") {
        Fields f(j, path, {"type", "target", "role"});
        return RevokeRole{who(f, "target"), f.role("role")};
    }
    if (type == "BootstrapValidators") {
        Fields f(j, path, {"type", "validators"});
        BootstrapValidators p;
        for (const auto& name : f.str_list("validators")) p.validators.push_back(env.id(name, f.at("validators")));
        return p;
    }
    if (type == "CreateProposal") {
        Fields f(j, path, {"type", "action", "electorate"});
        auto action = std::make_shared<const Payload>(build_payload(f.raw("action"), f.at("action"), env));
        if (action->as<CreateProposal>()) schema_error(f.at("action"), "proposals cannot nest");
        Role electorate;
        if (f.has("electorate")) {
            electorate = f.role("electorate");
        } else {
            auto e = electorate_for(*action);
            if (!e) schema_error(f.at("action"), "action is not voteable; give an electorate explicitly");
            electorate = *e;
        }
        return CreateProposal{action, electorate};
    }
    if (type == "CastVote") {
        Fields f(j, path, {"type", "proposal", "yes"});
        return CastVote{f.u64("proposal"), f.boolean_or("yes", true)};
    }
    if (type == "FinalizeProposal") {
        Fields f(j, path, {"type", "proposal"});
        return FinalizeProposal{f.u64("proposal")};
    }
    if (type == "Mint") {
        Fields f(j, path, {"type", "to", "amount"});
        return Mint{who(f, "to"), f.u64("amount")};
    }
    if (type == "Burn") {
        Fields f(j, path, {"type", "from", "amount"});
        return Burn{who(f, "from"), f.u64("amount")};
    }
    if (type == "ConvertFiat") {
        Fields f(j, path, {"type", "user", "direction", "amount"});
        auto dir = f.str("direction");
        if (dir != "in" && dir != "out") schema_error(f.at("direction"), "expected \"in\" or \"out\"");
        return ConvertFiat{who(f, "user"), dir == "in" ? FiatDirection::In : FiatDirection::Out, f.u64("amount")};
    }
    if (type == "SetInterestRule") {
        Fields f(j, path, {"type", "rate_num", "rate_den", "period_blocks", "start_height", "mode", "scope"});
        SetInterestRule p;
        p.rate_num = f.u64("rate_num");
        p.rate_den = f.u64("rate_den");
        p.period_blocks = f.u64("period_blocks");
        p.start_height = f.u64("start_height");
        auto mode = f.has("mode") ? f.str("mode") : std::string("push");
        if (mode != "push" && mode != "pull") schema_error(f.at("mode"), "expected \"push\" or \"pull\"");
        p.mode = mode == "push" ? AccrualMode::Push : AccrualMode::Pull;
        if (f.has("scope")) p.scope = id_set(f, "scope", env);
        return p;
    }
    if (type == "ClaimAllowance") {
        Fields f(j, path, {"type", "rule", "up_to_period"});
        return ClaimAllowance{f.u64("rule"), f.u64("up_to_period")};
    }
    if (type == "RegisterEndpoints") {
        Fields f(j, path,
                 {"type", "validator", "security_gateways", "visibility_gateways", "validation_server", "contact",
                  "view_key"});
        const auto name = f.str("validator");
        ValidatorRecord r;
        r.account = env.id(name, f.at("validator"));
        r.security_gateways = f.has("security_gateways") ? f.str_list("security_gateways")
                                                         : std::vector<std::string>{"sg." + name};
        r.visibility_gateways = f.has("visibility_gateways") ? f.str_list("visibility_gateways")
                                                             : std::vector<std::string>{"vg." + name};
        r.validation_server = f.opt_str("validation_server").value_or("vs." + name);
        r.contact = f.opt_str("contact").value_or(name + "@validators");
        r.view_key = KeyPair::from_seed(env.scheme(), f.opt_str("view_key").value_or("view:" + name)).public_key();
        return RegisterEndpoints{r};
    }
    schema_error(path + ".type", "unknown payload type '" + type + "'");
}

FaultProfile build_faults(const Json& j, const std::string& path, FaultProfile base) {
    Fields f(j, path, {"validator", "offline", "censor", "corrupt_results", "corrupt_delta"});
    base.offline = f.boolean_or("offline", base.offline);
    if (f.has("censor")) {
        const Json& c = f.raw("censor");
        if (c.is_boolean()) {
            base.censor_all = c.get<bool>();
            if (!base.censor_all) base.censor.clear();
        } else {
            base.censor_all = false;
            base.censor.clear();
            for (const auto& name : f.str_list("censor")) {
                bool known = false;
                for (std::uint8_t t = 0; t < std::variant_size_v<PayloadVariant>; ++t) known |= payload_name(t) == name;
                if (!known) schema_error(f.at("censor"), "unknown payload type '" + name + "'");
                base.censor.insert(name);
            }
        }
    }
    base.gateway.corrupt_results = f.boolean_or("corrupt_results", base.gateway.corrupt_results);
    base.gateway.corrupt_delta = f.u64_or("corrupt_delta", base.gateway.corrupt_delta);
    return base;
}

void check_assert(const Json& j, const std::string& path, const PayloadEnv& env,
                  const std::vector<std::string>& tx_labels, const std::vector<std::string>& query_labels) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        schema_error(path, "assertion needs a string \"type\"");
    const auto type = j["type"].get<std::string>();
    auto known = [](const std::vector<std::string>& labels, const std::string& l) {
        return std::find(labels.begin(), labels.end(), l) != labels.end();
    };
    if (type == "balance" || type == "claimable") {
        Fields f(j, path, {"type", "account", "equals"});
        env.id(f.str("account"), f.at("account"));
        f.u64("equals");
    } else if (type == "supply") {
        Fields f(j, path, {"type", "minted", "burned", "circulating"});
        f.opt_u64("minted");
        f.opt_u64("burned");
        f.opt_u64("circulating");
    } else if (type == "role") {
        Fields f(j, path, {"type", "account", "role", "present"});
        env.id(f.str("account"), f.at("account"));
        f.role("role");
        f.boolean_or("present", true);
    } else if (type == "frozen") {
        Fields f(j, path, {"type", "account", "equals"});
        env.id(f.str("account"), f.at("account"));
        f.boolean_or("equals", true);
    } else if (type == "log_contains") {
        Fields f(j, path, {"type", "kind", "at_least", "exactly"});
        f.str("kind");
        f.opt_u64("at_least");
        f.opt_u64("exactly");
    } else if (type == "proposal") {
        Fields f(j, path, {"type", "id", "status"});
        f.u64("id");
        auto s = f.str("status");
        if (s != "Open" && s != "Passed" && s != "Failed" && s != "Expired")
            schema_error(f.at("status"), "expected Open, Passed, Failed or Expired");
    } else if (type == "policy") {
        Fields f(j, path, {"type", "key", "equals"});
        f.str("key");
        f.u64("equals");
    } else if (type == "height") {
        Fields f(j, path, {"type", "equals"});
        f.u64("equals");
    } else if (type == "tx") {
        Fields f(j, path, {"type", "label", "status"});
        if (!known(tx_labels, f.str("label"))) schema_error(f.at("label"), "no earlier tx with this label");
        f.str("status");
    } else if (type == "validators") {
        Fields f(j, path, {"type", "equals"});
        for (const auto& n : f.str_list("equals")) env.id(n, f.at("equals"));
    } else if (type == "conservation") {
        Fields f(j, path, {"type"});
    } else if (type == "query") {
        Fields f(j, path, {"type", "label", "outcome", "value"});
        if (!known(query_labels, f.str("label"))) schema_error(f.at("label"), "no earlier query with this label");
        f.opt_str("outcome");
        f.opt_u64("value");
    } else {
        schema_error(path + ".type", "unknown assertion type '" + type + "'");
    }
}

namespace {

/// Load-time environment: resolves names against the declared actors.
class CheckEnv : public PayloadEnv {
public:
    explicit CheckEnv(const Scenario& s) : s_(s) {
        for (const auto& a : s.actors) keys_.emplace(a.name, actor_key(s.scheme, a.name));
    }
    AccountId id(const std::string& name, const std::string& path) const override {
        const ActorSpec* a = s_.actor(name);
        if (!a) schema_error(path, "undeclared actor '" + name + "'");
        return a->id;
    }
    const KeyPair& key(const std::string& name) const override { return keys_.at(name); }
    TxId tx(const std::string& label, const std::string& path) const override {
        if (std::find(labels.begin(), labels.end(), label) == labels.end())
            schema_error(path, "no earlier tx with label '" + label + "'");
        return TxId{};
    }
    bool exists(const AccountId&) const override { return true; }
    KeyScheme scheme() const override { return s_.scheme; }

    std::vector<std::string> labels;

private:
    const Scenario& s_;
    std::map<std::string, KeyPair> keys_;
};

void check_step(const Step& step, const std::string& path, CheckEnv& env, std::vector<std::string>& query_labels) {
    const Json& b = step.body;
    switch (step.kind) {
        case StepKind::Tx: {
            Fields f(b, path, {"from", "payload", "label", "expect", "via", "nonce", "sign_with", "corrupt"});
            env.id(f.str("from"), f.at("from"));
            env.sender = f.str("from");
            build_payload(f.raw("payload"), f.at("payload"), env);
            if (f.has("via")) env.id(f.str("via"), f.at("via"));
            f.opt_u64("nonce");
            f.boolean_or("corrupt", false);
            if (auto sw = f.opt_str("sign_with"); sw && *sw != "previous") env.id(*sw, f.at("sign_with"));
            if (auto e = f.opt_str("expect")) {
                ErrorCode code;
                if (*e != "Ok" && *e != "Pending" && *e != "Unavailable" && !parse_error_code(*e, code))
                    schema_error(f.at("expect"), "unknown outcome '" + *e + "'");
            }
            if (auto label = f.opt_str("label")) {
                if (std::find(env.labels.begin(), env.labels.end(), *label) != env.labels.end())
                    schema_error(f.at("label"), "duplicate tx label '" + *label + "'");
                env.labels.push_back(*label);
            }
            break;
        }
        case StepKind::Query: {
            Fields f(b, path, {"as", "kind", "subject", "from", "to", "at", "via", "expect", "file_evidence", "label"});
            env.id(f.str("as"), f.at("as"));
            if (!parse_query_kind(f.str("kind"))) schema_error(f.at("kind"), "unknown query kind");
            if (f.has("subject")) env.id(f.str("subject"), f.at("subject"));
            f.opt_u64("from");
            f.opt_u64("to");
            f.opt_u64("at");
            if (f.has("via"))
                for (const auto& v : f.str_list("via")) env.id(v, f.at("via"));
            f.boolean_or("file_evidence", true);
            if (f.has("expect")) {
                const Json& e = f.raw("expect");
                if (!e.is_string()) as_u64(e, f.at("expect"));
            }
            if (auto label = f.opt_str("label")) query_labels.push_back(*label);
            break;
        }
        case StepKind::Fault: {
            build_faults(b, path, {});
            Fields f(b, path, {"validator", "offline", "censor", "corrupt_results", "corrupt_delta"});
            env.id(f.str("validator"), f.at("validator"));
            break;
        }
        case StepKind::Assert:
            check_assert(b, path, env, env.labels, query_labels);
            break;
        case StepKind::RandomTransfers: {
            Fields f(b, path, {"count", "among", "max_amount", "via"});
            f.u64("count");
            if (f.u64("max_amount") == 0) schema_error(f.at("max_amount"), "must be positive");
            auto among = f.str_list("among");
            if (among.size() < 2) schema_error(f.at("among"), "needs at least two actors");
            for (const auto& n : among) env.id(n, f.at("among"));
            if (f.has("via")) env.id(f.str("via"), f.at("via"));
            break;
        }
    }
}

std::size_t line_of(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

}  // namespace detail

const ActorSpec* Scenario::actor(std::string_view name) const {
    for (const auto& a : actors)
        if (a.name == name) return &a;
    return nullptr;
}

KeyPair actor_key(KeyScheme scheme, std::string_view name) {
    return KeyPair::from_seed(scheme, "actor:" + std::string(name));
}

KeyPair view_key(KeyScheme scheme, std::string_view name) {
    return KeyPair::from_seed(scheme, "view:" + std::string(name));
}

Scenario parse_scenario(const std::string& text) {
    using namespace detail;
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ScenarioError(ScenarioError::Kind::Parse,
                            "line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
    }

    Fields top(doc, "$", {"name", "description", "seed", "key_scheme", "ticks", "actors", "escrow", "policies", "steps"});
    Scenario s;
    s.name = top.str("name");
    s.seed = top.u64_or("seed", 0);
    auto scheme = top.opt_str("key_scheme").value_or("ed25519");
    if (scheme == "ed25519")
        s.scheme = KeyScheme::Ed25519;
    else if (scheme == "mock")
        s.scheme = KeyScheme::MockHmac;
    else
        schema_error(top.at("key_scheme"), "expected \"ed25519\" or \"mock\"");

    const Json& actors = top.raw("actors");
    if (!actors.is_array()) schema_error(top.at("actors"), "expected an array");
    for (std::size_t i = 0; i < actors.size(); ++i) {
        const std::string path = "$.actors[" + std::to_string(i) + "]";
        Fields f(actors[i], path, {"name", "roles", "balance", "genesis", "provider", "recovery", "faults"});
        ActorSpec a;
        a.name = f.str("name");
        if (a.name.empty()) schema_error(f.at("name"), "empty actor name");
        if (s.actor(a.name)) schema_error(f.at("name"), "duplicate actor '" + a.name + "'");
        if (f.has("roles")) {
            const Json& roles = f.raw("roles");
            if (!roles.is_array()) schema_error(f.at("roles"), "expected an array of role names");
            for (std::size_t r = 0; r < roles.size(); ++r)
                a.roles.add(as_role(roles[r], f.at("roles") + "[" + std::to_string(r) + "]"));
        }
        a.balance = f.u64_or("balance", 0);
        a.in_genesis = f.boolean_or("genesis", true);
        auto id = derive_account_id(actor_key(s.scheme, a.name).public_key());
        a.id = id.value();
        s.actors.push_back(std::move(a));
    }

    CheckEnv env(s);
    // Second pass: fields that reference other actors.
    for (std::size_t i = 0; i < actors.size(); ++i) {
        const std::string path = "$.actors[" + std::to_string(i) + "]";
        Fields f(actors[i], path, {"name", "roles", "balance", "genesis", "provider", "recovery", "faults"});
        ActorSpec& a = s.actors[i];
        if (f.has("provider")) {
            env.id(f.str("provider"), f.at("provider"));
            a.provider = f.str("provider");
        }
        if (f.has("recovery")) a.recovery = build_recovery(f.raw("recovery"), f.at("recovery"), env);
        if (f.has("faults")) {
            Fields ff(f.raw("faults"), f.at("faults"), {"offline", "censor", "corrupt_results", "corrupt_delta"});
            a.faults = build_faults(f.raw("faults"), f.at("faults"), {});
        }
        if (!a.in_genesis && (a.balance != 0 || !a.roles.empty()))
            schema_error(path, "non-genesis actors start without roles or balance");
    }
    if (auto escrow = top.opt_str("escrow")) {
        env.id(*escrow, top.at("escrow"));
        s.escrow = escrow;
    }

    if (top.has("policies")) {
        const Json& policies = top.raw("policies");
        if (!policies.is_array()) schema_error(top.at("policies"), "expected an array");
        for (std::size_t i = 0; i < policies.size(); ++i) {
            Json p = policies[i];
            const std::string path = "$.policies[" + std::to_string(i) + "]";
            if (!p.is_object()) schema_error(path, "expected an object");
            p["type"] = "SetPolicy";
            s.policies.push_back(*build_payload(p, path, env).as<SetPolicy>());
        }
    }

    const Json& steps = top.has("steps") ? top.raw("steps") : Json::array();
    if (!steps.is_array()) schema_error(top.at("steps"), "expected an array");
    static const std::vector<std::pair<std::string_view, StepKind>> kinds = {
        {"tx", StepKind::Tx},
        {"query", StepKind::Query},
        {"fault", StepKind::Fault},
        {"assert", StepKind::Assert},
        {"random_transfers", StepKind::RandomTransfers},
    };
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const std::string path = "$.steps[" + std::to_string(i) + "]";
        Fields f(steps[i], path, {"tick", "note", "tx", "query", "fault", "assert", "random_transfers"});
        Step step;
        step.index = i;
        step.tick = f.u64("tick");
        if (step.tick == 0) schema_error(f.at("tick"), "ticks start at 1");
        int actions = 0;
        for (const auto& [key, kind] : kinds)
            if (f.has(key)) {
                ++actions;
                step.kind = kind;
                step.body = f.raw(key);
            }
        if (actions != 1) schema_error(path, "a step needs exactly one of tx, query, fault, assert, random_transfers");
        s.steps.push_back(std::move(step));
    }
    std::stable_sort(s.steps.begin(), s.steps.end(), [](const Step& a, const Step& b) { return a.tick < b.tick; });

    std::vector<std::string> query_labels;
    for (const auto& step : s.steps) {
        std::string path = "$.steps[" + std::to_string(step.index) + "]";
        for (const auto& [key, kind] : kinds)
            if (kind == step.kind) path += "." + std::string(key);
        check_step(step, path, env, query_labels);
    }

    s.ticks = top.u64_or("ticks", 0);
    for (const auto& step : s.steps) s.ticks = std::max(s.ticks, step.tick);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(ScenarioError::Kind::Parse, path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace fiatchain::sim
