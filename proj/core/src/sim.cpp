#include "fiatchain/sim.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "fiatchain/governance.hpp"
#include "sim_internal.hpp"

namespace fiatchain::sim {

namespace {

constexpr Height kMaxHeight = std::numeric_limits<Height>::max();

std::string outcome_name(const Status& s) { return s.is_ok() ? "Ok" : std::string(to_string(s.code())); }

struct PoolEntry {
    Transaction tx;
    std::size_t outcome = 0;  // index into report.transactions
};

struct PendingQuery {
    std::size_t outcome = 0;  // index into report.queries
    std::vector<SignedQueryResponse> responses;
    bool file_evidence = true;
    std::string asker;
    std::optional<Json> expect;
    std::size_t step = 0;
    Tick tick = 0;
    bool resolved = false;
};

class InvariantViolation : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class World : public detail::PayloadEnv {
public:
    World(const Scenario& s, std::uint64_t seed) : sc_(s), rng_(seed) {
        keep_history_ = std::any_of(s.steps.begin(), s.steps.end(),
                                    [](const Step& st) { return st.kind == StepKind::Query; });
        GenesisConfig genesis;
        for (const auto& a : s.actors) {
            keys_.emplace(a.name, actor_key(s.scheme, a.name));
            ids_.emplace(a.name, a.id);
            report.names[a.id] = a.name;
            faults_[a.name] = a.faults;
            if (!a.in_genesis) continue;
            GenesisAccount ga;
            ga.label = a.name;
            ga.key = keys_.at(a.name).public_key();
            ga.roles = a.roles;
            ga.roles.remove(Role::Validator);
            ga.balance = a.balance;
            ga.recovery = a.recovery;
            if (a.provider) ga.provider = ids_.at(*a.provider);
            genesis.accounts.push_back(std::move(ga));
            if (a.roles.has(Role::Validator)) {
                genesis.validators.push_back(a.id);
                ValidatorRecord r;
                r.account = a.id;
                r.security_gateways = {"sg." + a.name};
                r.visibility_gateways = {"vg." + a.name};
                r.validation_server = "vs." + a.name;
                r.contact = a.name + "@validators";
                r.view_key = view_key(s.scheme, a.name).public_key();
                genesis.endpoints.push_back(std::move(r));
            }
        }
        if (s.escrow) genesis.escrow = ids_.at(*s.escrow);
        genesis.policies = s.policies;

        auto initial = genesis_state(genesis);
        if (!initial) throw InvariantViolation("genesis: " + initial.status().to_string());
        state_ = std::move(initial.value());
        chain_ = Chain::create(std::move(genesis));
        if (!check_conservation(state_)) throw InvariantViolation("genesis violates conservation");
        if (keep_history_) history_.push_back(std::make_shared<const LedgerState>(state_));
        report.scenario = s.name;
        report.seed = seed;
    }

    // PayloadEnv
    AccountId id(const std::string& name, const std::string& path) const override {
        auto it = ids_.find(name);
        if (it == ids_.end()) detail::schema_error(path, "undeclared actor '" + name + "'");
        return it->second;
    }
    const KeyPair& key(const std::string& name) const override { return keys_.at(name); }
    TxId tx(const std::string& label, const std::string&) const override {
        auto it = labels_.find(label);
        return it == labels_.end() ? TxId{} : it->second;
    }
    bool exists(const AccountId& id) const override { return state_.find(id) != nullptr; }
    KeyScheme scheme() const override { return sc_.scheme; }

    void run() {
        auto step = sc_.steps.begin();
        for (Tick tick = 1; tick <= sc_.ticks; ++tick) {
            auto first = step;
            while (step != sc_.steps.end() && step->tick == tick) ++step;
            for (auto it = first; it != step; ++it) phase_a(*it, tick);
            produce_block(tick);
            for (auto it = first; it != step; ++it)
                if (it->kind == StepKind::Query) start_query(*it, tick);
            resolve_queries(tick);
            for (auto it = first; it != step; ++it)
                if (it->kind == StepKind::Assert) evaluate_assert(*it, tick);
        }
        finish();
    }

    Report report;
    Chain chain_;
    LedgerState state_;

private:
    std::string name_of(const AccountId& id) const {
        auto it = report.names.find(id);
        return it == report.names.end() ? id.short_hex() : it->second;
    }

    bool online(const AccountId& id) const {
        auto it = report.names.find(id);
        return it != report.names.end() && !faults_.at(it->second).offline;
    }

    // Phase A ------------------------------------------------------------

    void phase_a(const Step& step, Tick tick) {
        switch (step.kind) {
            case StepKind::Tx: {
                const Json& b = step.body;
                submit(step.index, tick, b.at("from").get<std::string>(), b.at("payload"), b);
                break;
            }
            case StepKind::Fault: {
                auto name = step.body.at("validator").get<std::string>();
                faults_[name] = detail::build_faults(step.body, "fault", faults_[name]);
                break;
            }
            case StepKind::RandomTransfers: {
                const Json& b = step.body;
                auto among = b.at("among").get<std::vector<std::string>>();
                auto count = b.at("count").get<std::uint64_t>();
                auto max_amount = b.at("max_amount").get<std::uint64_t>();
                Json opts = Json::object();
                if (b.contains("via")) opts["via"] = b["via"];
                for (std::uint64_t k = 0; k < count; ++k) {
                    auto i = rng_() % among.size();
                    auto j = rng_() % (among.size() - 1);
                    if (j >= i) ++j;
                    Json payload = {{"type", "Transfer"}, {"to", among[j]}, {"amount", 1 + rng_() % max_amount}};
                    submit(step.index, tick, among[i], payload, opts);
                }
                break;
            }
            case StepKind::Query:
            case StepKind::Assert:
                break;
        }
    }

    std::optional<AccountId> default_gateway() const {
        for (const auto& v : state_.validators())
            if (online(v)) return v;
        return std::nullopt;
    }

    SecurityGateway& security_gateway(const AccountId& v) {
        return security_.try_emplace(v, SecurityGateway(v)).first->second;
    }

    std::uint64_t next_nonce(const AccountId& sender) const {
        const Account* a = state_.find(sender);
        std::uint64_t n = a ? a->nonce : 0;
        for (const auto& e : pool_)
            if (e.tx.sender == sender) ++n;
        return n;
    }

    std::size_t submit(std::size_t step, Tick tick, const std::string& from, const Json& payload_json,
                       const Json& opts) {
        sender = from;
        Payload payload = detail::build_payload(payload_json, "payload", *this);
        const AccountId sender_id = ids_.at(from);
        std::uint64_t nonce = opts.contains("nonce") ? opts["nonce"].get<std::uint64_t>() : next_nonce(sender_id);
        const KeyPair* signer = &keys_.at(from);
        if (opts.contains("sign_with")) {
            auto sw = opts["sign_with"].get<std::string>();
            if (sw == "previous") {
                auto it = previous_.find(from);
                if (it != previous_.end()) signer = &it->second;
            } else {
                signer = &keys_.at(sw);
            }
        }
        Transaction tx = make_transaction(sender_id, nonce, std::move(payload), *signer);
        return submit_tx(step, tick, from, std::move(tx), opts);
    }

    std::size_t submit_tx(std::size_t step, Tick tick, const std::string& from, Transaction tx, const Json& opts) {
        TxOutcome out;
        out.step = step;
        out.sender = from;
        out.type = std::string(tx.payload.name());
        out.submitted = tick;
        if (opts.contains("label")) out.label = opts["label"].get<std::string>();
        if (opts.contains("expect")) out.expect = opts["expect"].get<std::string>();
        const std::size_t index = report.transactions.size();

        Bytes raw = tx.encode();
        if (opts.value("corrupt", false)) raw.back() ^= 0x01;
        const TxId id = tx.id();
        if (!out.label.empty()) labels_[out.label] = id;

        std::optional<AccountId> via =
            opts.contains("via") ? std::optional<AccountId>(ids_.at(opts["via"].get<std::string>())) : default_gateway();
        if (!via || !online(*via) || !state_.has_role(*via, Role::Validator)) {
            out.outcome = "Unavailable";
            report.transactions.push_back(std::move(out));
            return index;
        }
        Admission admission = security_gateway(*via).admit(raw, tick, state_);
        if (!admission.accepted()) {
            out.outcome = outcome_name(admission.status);
        } else {
            admitted_.insert(id);
            by_id_[id] = index;
            if (auto* rotate = tx.payload.as<RotateKey>()) {
                const Json& p = find_payload(opts);
                if (!p.is_null()) rotations_[id] = {rotate->target, p.at("new_key").get<std::string>()};
            }
            pool_.push_back(PoolEntry{std::move(*admission.tx), index});
        }
        report.transactions.push_back(std::move(out));
        return index;
    }

    // The tx step body holds the payload; random transfers have none to look up.
    const Json& find_payload(const Json& opts) const {
        static const Json null;
        return opts.contains("payload") ? opts["payload"] : null;
    }

    // Phase B ------------------------------------------------------------

    bool censored(const FaultProfile& f, const Transaction& tx) const {
        return f.censor_all || f.censor.count(std::string(tx.payload.name())) != 0;
    }

    void produce_block(Tick tick) {
        LivenessFn live = [this](const AccountId& id) { return online(id); };
        auto publisher = next_publisher(chain_, state_, live);
        if (!publisher) return;  // nobody eligible this tick
        const std::string pub_name = name_of(publisher.value());
        const FaultProfile& profile = faults_.at(pub_name);

        std::vector<Transaction> selected;
        std::map<AccountId, std::uint64_t> expected;
        std::set<std::size_t> dropped;
        const auto cap = policy_u64(state_, policy_keys::kMaxTxsPerBlock);
        for (std::size_t i = 0; i < pool_.size() && selected.size() < cap; ++i) {
            const Transaction& tx = pool_[i].tx;
            if (censored(profile, tx)) continue;
            const Account* sender_acct = state_.find(tx.sender);
            if (!sender_acct || !verify_signature(sender_acct->public_key, tx.signing_bytes(), tx.signature)) {
                // Key rotated since admission: the envelope can no longer be valid.
                report.transactions[pool_[i].outcome].outcome = std::string(to_string(ErrorCode::BadSignature));
                dropped.insert(i);
                continue;
            }
            auto [it, fresh] = expected.try_emplace(tx.sender, sender_acct->nonce);
            if (tx.nonce != it->second) continue;
            ++it->second;
            selected.push_back(tx);
        }

        auto block = build_block(chain_, state_, publisher.value(), keys_.at(pub_name), selected, tick, live);
        if (!block) throw InvariantViolation("publisher could not build block: " + block.status().to_string());
        for (const auto& tx : block.value().txs)
            if (!admitted_.count(tx.id())) throw InvariantViolation("block carries a transaction no gateway admitted");
        auto receipts = append_block(chain_, state_, block.value());
        if (!receipts) throw InvariantViolation("own block rejected: " + receipts.status().to_string());
        if (!check_conservation(state_))
            throw InvariantViolation("conservation violated at height " + std::to_string(state_.height));

        std::set<TxId> included;
        for (const auto& r : receipts.value()) {
            included.insert(r.tx_id);
            auto& out = report.transactions[by_id_.at(r.tx_id)];
            out.outcome = outcome_name(r.status);
            out.included_at = state_.height;
            auto rot = rotations_.find(r.tx_id);
            if (rot != rotations_.end() && r.ok()) {
                const std::string target = name_of(rot->second.first);
                auto old = keys_.at(target);
                previous_.insert_or_assign(target, old);
                keys_.insert_or_assign(target, KeyPair::from_seed(sc_.scheme, rot->second.second));
            }
        }
        std::vector<PoolEntry> keep;
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (dropped.count(i) || included.count(pool_[i].tx.id())) continue;
            const Account* a = state_.find(pool_[i].tx.sender);
            if (a && pool_[i].tx.nonce < a->nonce) {
                report.transactions[pool_[i].outcome].outcome = std::string(to_string(ErrorCode::BadNonce));
                continue;
            }
            keep.push_back(std::move(pool_[i]));
        }
        pool_ = std::move(keep);

        ++report.blocks_produced;
        report.publishers.push_back(pub_name);
        if (keep_history_) history_.push_back(std::make_shared<const LedgerState>(state_));
    }

    // Phase C ------------------------------------------------------------

    VisibilityGateway& visibility_gateway(const AccountId& v) {
        const std::string name = name_of(v);
        return visibility_.try_emplace(v, v, view_key(sc_.scheme, name)).first->second;
    }

    void start_query(const Step& step, Tick tick) {
        const Json& b = step.body;
        QueryOutcome out;
        out.step = step.index;
        out.label = b.value("label", std::string());
        out.requester = b.at("as").get<std::string>();
        out.kind = b.at("kind").get<std::string>();

        QueryEcho echo;
        echo.requester = ids_.at(out.requester);
        echo.query.kind = *parse_query_kind(out.kind);
        echo.query.subject = ids_.at(b.value("subject", out.requester));
        echo.query.from_height = b.value("from", Height{0});
        echo.query.to_height = b.value("to", kMaxHeight);
        out.as_of = std::min<Height>(b.value("at", state_.height), state_.height);

        std::vector<AccountId> via;
        if (b.contains("via")) {
            for (const auto& n : b["via"]) via.push_back(ids_.at(n.get<std::string>()));
        } else {
            for (const auto& v : state_.validators())
                if (state_.validator_registry.count(v)) via.push_back(v);
        }
        std::sort(via.begin(), via.end());

        PendingQuery pending;
        pending.asker = out.requester;
        pending.file_evidence = b.value("file_evidence", true);
        if (b.contains("expect")) pending.expect = b["expect"];
        pending.step = step.index;
        pending.tick = tick;
        std::optional<Status> first_error;
        for (const auto& v : via) {
            if (!online(v)) continue;
            auto& gw = visibility_gateway(v);
            gw.refresh(history_.at(out.as_of));
            gw.set_faults(faults_.at(name_of(v)).gateway);
            auto request = make_query_request(echo, gw.issue_challenge(), keys_.at(out.requester));
            auto response = gw.answer(request);
            if (response)
                pending.responses.push_back(std::move(response.value()));
            else if (!first_error)
                first_error = response.status();
        }
        out.responses = pending.responses.size();
        pending.outcome = report.queries.size();
        if (pending.responses.empty()) {
            out.outcome = first_error ? outcome_name(*first_error) : "Unavailable";
            out.resolved_at = tick;
            pending.resolved = true;
        }
        report.queries.push_back(std::move(out));
        if (pending.resolved) check_query_expect(pending);
        queries_.push_back(std::move(pending));
    }

    void resolve_queries(Tick tick) {
        const Height delay = policy_u64(state_, policy_keys::kDelayBlocks);
        for (auto& q : queries_) {
            if (q.resolved) continue;
            auto& out = report.queries[q.outcome];
            if (state_.height < out.as_of + delay) continue;  // still inside the delay window
            q.resolved = true;
            out.resolved_at = tick;

            std::map<Amount, std::size_t> votes;
            for (const auto& r : q.responses)
                if (auto v = decode_amount_answer(r.result)) ++votes[*v];
            std::size_t best = 0;
            for (const auto& [v, n] : votes)
                if (n > best) {
                    best = n;
                    out.value = v;
                }

            auto cmp = compare_responses(q.responses, state_.height, delay, state_);
            if (!cmp) {
                out.outcome = outcome_name(cmp.status());
            } else if (std::holds_alternative<Consistent>(cmp.value())) {
                out.outcome = "Consistent";
            } else {
                out.outcome = "Evidence";
                if (q.file_evidence) file(q, std::get<DiscrepancyEvidence>(cmp.value()), tick);
            }
            check_query_expect(q);
        }
    }

    void file(const PendingQuery& q, const DiscrepancyEvidence& evidence, Tick tick) {
        const AccountId asker = ids_.at(q.asker);
        auto tx = file_discrepancy(evidence, asker, next_nonce(asker), keys_.at(q.asker), state_);
        if (!tx) return;
        report.queries[q.outcome].filed_tx = submit_tx(q.step, tick, q.asker, std::move(tx.value()), Json::object());
    }

    void check_query_expect(const PendingQuery& q) {
        if (!q.expect) return;
        const auto& out = report.queries[q.outcome];
        AssertionResult a;
        a.step = q.step;
        a.tick = q.tick;
        if (q.expect->is_string()) {
            auto want = q.expect->get<std::string>();
            a.what = "query " + out.kind + " outcome " + want;
            a.pass = out.outcome == want;
            a.detail = "got " + out.outcome;
        } else {
            auto want = q.expect->get<Amount>();
            a.what = "query " + out.kind + " value " + std::to_string(want);
            a.pass = out.value == want;
            a.detail = out.value ? "got " + std::to_string(*out.value) : "no amount answer (" + out.outcome + ")";
        }
        report.assertions.push_back(std::move(a));
    }

    const QueryOutcome* query_by_label(const std::string& label) const {
        for (const auto& q : report.queries)
            if (q.label == label) return &q;
        return nullptr;
    }

    void evaluate_assert(const Step& step, Tick tick) {
        const Json& b = step.body;
        const auto type = b.at("type").get<std::string>();
        AssertionResult a;
        a.step = step.index;
        a.tick = tick;
        a.what = type;
        auto account = [&](const char* key) { return state_.find(ids_.at(b.at(key).get<std::string>())); };
        auto expect_eq = [&](std::uint64_t got, std::uint64_t want) {
            a.pass = got == want;
            a.detail = "got " + std::to_string(got) + ", want " + std::to_string(want);
        };

        if (type == "balance") {
            a.what += " " + b["account"].get<std::string>();
            const Account* acct = account("account");
            expect_eq(acct ? acct->balance : 0, b["equals"].get<Amount>());
        } else if (type == "claimable") {
            a.what += " " + b["account"].get<std::string>();
            auto id = ids_.at(b["account"].get<std::string>());
            auto c = claimable_amount(state_, id, id);
            expect_eq(c ? c.value() : 0, b["equals"].get<Amount>());
        } else if (type == "supply") {
            a.pass = true;
            for (const char* key : {"minted", "burned", "circulating"}) {
                if (!b.contains(key)) continue;
                Amount got = std::string(key) == "minted"   ? state_.supply.minted
                             : std::string(key) == "burned" ? state_.supply.burned
                                                            : state_.supply.circulating();
                Amount want = b[key].get<Amount>();
                if (got != want) a.pass = false;
                a.detail += std::string(a.detail.empty() ? "" : ", ") + key + " " + std::to_string(got) + "/" +
                            std::to_string(want);
            }
        } else if (type == "role") {
            auto role = *parse_role(b["role"].get<std::string>());
            bool want = b.value("present", true);
            const Account* acct = account("account");
            bool got = acct && acct->roles.has(role);
            a.what += " " + b["account"].get<std::string>() + " " + std::string(to_string(role));
            a.pass = got == want;
            a.detail = got ? "present" : "absent";
        } else if (type == "frozen") {
            const Account* acct = account("account");
            bool got = acct && acct->frozen;
            a.what += " " + b["account"].get<std::string>();
            a.pass = got == b.value("equals", true);
            a.detail = got ? "frozen" : "not frozen";
        } else if (type == "log_contains") {
            auto kind = b["kind"].get<std::string>();
            std::uint64_t n = 0;
            for (const auto& e : state_.tx_log) n += e.kind == kind;
            a.what += " " + kind;
            if (b.contains("exactly")) {
                expect_eq(n, b["exactly"].get<std::uint64_t>());
            } else {
                auto least = b.value("at_least", std::uint64_t{1});
                a.pass = n >= least;
                a.detail = "found " + std::to_string(n) + ", want at least " + std::to_string(least);
            }
        } else if (type == "proposal") {
            auto id = b["id"].get<ProposalId>();
            auto want = b["status"].get<std::string>();
            auto it = state_.proposals.find(id);
            std::string got = it == state_.proposals.end() ? "missing" : std::string(to_string(it->second.status));
            a.what += " #" + std::to_string(id);
            a.pass = got == want;
            a.detail = "got " + got;
        } else if (type == "policy") {
            auto key = b["key"].get<std::string>();
            a.what += " " + key;
            expect_eq(policy_u64(state_, key), b["equals"].get<std::uint64_t>());
        } else if (type == "height") {
            expect_eq(state_.height, b["equals"].get<Height>());
        } else if (type == "tx") {
            auto label = b["label"].get<std::string>();
            auto want = b["status"].get<std::string>();
            std::string got = "missing";
            for (const auto& t : report.transactions)
                if (t.label == label) got = t.outcome;
            a.what += " " + label;
            a.pass = got == want;
            a.detail = "got " + got;
        } else if (type == "validators") {
            std::vector<std::string> want = b["equals"].get<std::vector<std::string>>();
            std::vector<std::string> got;
            for (const auto& v : state_.validators()) got.push_back(name_of(v));
            std::sort(want.begin(), want.end());
            std::sort(got.begin(), got.end());
            a.pass = got == want;
            for (const auto& g : got) a.detail += (a.detail.empty() ? "got " : ",") + g;
        } else if (type == "conservation") {
            a.pass = check_conservation(state_);
        } else if (type == "query") {
            auto label = b["label"].get<std::string>();
            const QueryOutcome* q = query_by_label(label);
            a.what += " " + label;
            a.pass = q != nullptr;
            if (q && b.contains("outcome")) a.pass = a.pass && q->outcome == b["outcome"].get<std::string>();
            if (q && b.contains("value")) a.pass = a.pass && q->value == b["value"].get<Amount>();
            a.detail = q ? q->outcome + (q->value ? " " + std::to_string(*q->value) : "") : "not run yet";
        }
        report.assertions.push_back(std::move(a));
    }

    void finish() {
        for (const auto& q : queries_) {
            if (q.resolved || !q.expect) continue;
            report.assertions.push_back(
                {q.step, q.tick, "query " + report.queries[q.outcome].kind, false, "unresolved at end of run"});
        }
        for (const auto& t : report.transactions) {
            if (!t.expect) continue;
            report.assertions.push_back({t.step, t.submitted,
                                         "tx " + (t.label.empty() ? t.type : t.label) + " expect " + *t.expect,
                                         t.outcome == *t.expect, "got " + t.outcome});
        }
        std::stable_sort(report.assertions.begin(), report.assertions.end(),
                         [](const auto& x, const auto& y) { return x.step < y.step; });
    }

    const Scenario& sc_;
    std::mt19937_64 rng_;
    bool keep_history_ = false;
    std::map<std::string, KeyPair> keys_;
    std::map<std::string, KeyPair> previous_;
    std::map<std::string, AccountId> ids_;
    std::map<std::string, FaultProfile> faults_;
    std::map<AccountId, SecurityGateway> security_;
    std::map<AccountId, VisibilityGateway> visibility_;
    std::vector<std::shared_ptr<const LedgerState>> history_;  // index = height
    std::vector<PoolEntry> pool_;
    std::set<TxId> admitted_;
    std::map<TxId, std::size_t> by_id_;
    std::map<std::string, TxId> labels_;
    std::map<TxId, std::pair<AccountId, std::string>> rotations_;  // target, new key seed
    std::vector<PendingQuery> queries_;
};

}  // namespace

bool Report::all_passed() const {
    if (fatal) return false;
    return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.pass; });
}

RunResult run(const Scenario& scenario, std::optional<std::uint64_t> seed) {
    std::optional<World> world;
    RunResult result;
    try {
        world.emplace(scenario, seed.value_or(scenario.seed));
        world->run();
    } catch (const InvariantViolation& e) {
        if (!world) {
            result.report.scenario = scenario.name;
            result.report.seed = seed.value_or(scenario.seed);
            result.report.fatal = e.what();
            return result;
        }
        world->report.fatal = e.what();
    }
    Report& r = world->report;
    const LedgerState& st = world->state_;
    r.height = st.height;
    r.state_digest = st.digest();
    r.supply = st.supply;
    r.unclaimed = unclaimed_total(st);
    r.management_log = management_log(st, 0, kMaxHeight);
    for (const auto& a : scenario.actors)
        if (const Account* acct = st.find(a.id)) r.balances.emplace_back(a.name, acct->balance);

    result.report = std::move(r);
    result.chain = std::move(world->chain_);
    result.state = std::move(world->state_);
    return result;
}

// JSON views -----------------------------------------------------------------

Namer genesis_namer(const GenesisConfig& genesis) {
    std::map<AccountId, std::string> names;
    for (const auto& a : genesis.accounts)
        if (auto id = derive_account_id(a.key)) names[id.value()] = a.label;
    return [names](const AccountId& id) {
        if (id == AccountId{}) return std::string("system");
        auto it = names.find(id);
        return it == names.end() ? id.short_hex() : it->second;
    };
}

Json to_json(const LogEntry& e, const Namer& name) {
    Json parties = Json::array();
    for (const auto& p : e.parties) parties.push_back(name(p));
    return Json{{"height", e.height},  {"kind", e.kind},     {"actor", name(e.actor)}, {"parties", parties},
                {"amount", e.amount},  {"public", e.is_public}, {"detail", e.detail}, {"tx", e.id.hex()}};
}

Json to_json(const Answer& answer, const Namer& name) {
    return std::visit(
        [&](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Amount>) {
                return Json{{"amount", v}};
            } else if constexpr (std::is_same_v<T, std::vector<LogEntry>>) {
                Json entries = Json::array();
                for (const auto& e : v) entries.push_back(to_json(e, name));
                return Json{{"entries", entries}};
            } else if constexpr (std::is_same_v<T, SupplyView>) {
                Json rules = Json::array();
                for (const auto& [rule, amount] : v.created_per_rule)
                    rules.push_back(Json{{"rule", rule}, {"created", amount}});
                return Json{{"minted", v.counters.minted},
                            {"burned", v.counters.burned},
                            {"circulating", v.counters.circulating()},
                            {"per_rule", rules}};
            } else if constexpr (std::is_same_v<T, std::vector<DirectoryEntry>>) {
                Json list = Json::array();
                for (const auto& d : v) {
                    Json item{{"validator", name(d.record.account)},
                              {"security_gateways", d.record.security_gateways},
                              {"visibility_gateways", d.record.visibility_gateways},
                              {"contact", d.record.contact}};
                    item["validation_server"] = d.server_redacted ? Json("(redacted)") : Json(d.record.validation_server);
                    list.push_back(std::move(item));
                }
                return Json{{"validators", list}};
            } else {
                return Json{{"validation_server", v}};
            }
        },
        answer);
}

Json block_summary(const Block& block, const Namer& name) {
    Json txs = Json::array();
    for (const auto& tx : block.txs)
        txs.push_back(Json{{"id", tx.id().hex()},
                           {"sender", name(tx.sender)},
                           {"nonce", tx.nonce},
                           {"type", std::string(tx.payload.name())}});
    return Json{{"height", block.height},
                {"hash", block.digest().hex()},
                {"prev_hash", block.prev_hash.hex()},
                {"publisher", block.height == 0 ? Json(nullptr) : Json(name(block.publisher))},
                {"tick", block.tick},
                {"transactions", txs}};
}

Json Report::to_json() const {
    auto name = [this](const AccountId& id) {
        if (id == AccountId{}) return std::string("system");
        auto it = names.find(id);
        return it == names.end() ? id.short_hex() : it->second;
    };
    Json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["passed"] = all_passed();
    j["fatal"] = fatal ? Json(*fatal) : Json(nullptr);
    j["height"] = height;
    j["blocks_produced"] = blocks_produced;
    j["state_digest"] = state_digest.hex();
    j["publishers"] = publishers;

    Json asserts = Json::array();
    for (const auto& a : assertions)
        asserts.push_back(Json{{"step", a.step}, {"tick", a.tick}, {"what", a.what}, {"pass", a.pass}, {"detail", a.detail}});
    j["assertions"] = asserts;

    Json txs = Json::array();
    for (const auto& t : transactions) {
        Json item{{"step", t.step}, {"sender", t.sender}, {"type", t.type}, {"submitted", t.submitted},
                  {"outcome", t.outcome}};
        if (!t.label.empty()) item["label"] = t.label;
        item["included_at"] = t.included_at ? Json(*t.included_at) : Json(nullptr);
        txs.push_back(std::move(item));
    }
    j["transactions"] = txs;

    Json qs = Json::array();
    for (const auto& q : queries) {
        Json item{{"step", q.step}, {"requester", q.requester}, {"kind", q.kind}, {"as_of", q.as_of},
                  {"responses", q.responses}, {"outcome", q.outcome}};
        if (!q.label.empty()) item["label"] = q.label;
        item["value"] = q.value ? Json(*q.value) : Json(nullptr);
        item["resolved_at"] = q.resolved_at ? Json(*q.resolved_at) : Json(nullptr);
        item["filed_tx"] = q.filed_tx ? Json(*q.filed_tx) : Json(nullptr);
        qs.push_back(std::move(item));
    }
    j["queries"] = qs;

    j["supply"] = Json{{"minted", supply.minted},
                       {"burned", supply.burned},
                       {"circulating", supply.circulating()},
                       {"unclaimed_accruals", unclaimed}};
    Json log = Json::array();
    for (const auto& e : management_log) log.push_back(sim::to_json(e, name));
    j["management_log"] = log;

    // Omniscient oracle view for testing; never served through a gateway.
    Json oracle = Json::object();
    for (const auto& [n, b] : balances) oracle[n] = b;
    j["oracle_balances"] = oracle;
    return j;
}

}  // namespace fiatchain::sim
