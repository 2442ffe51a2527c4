#include <doctest.h>

#include <memory>

#include "harness.hpp"

using namespace fiatchain;
using namespace fiatchain::testing;

namespace {

const char* kValidators[] = {"v1", "v2", "v3", "v4"};

Net world(Options o = {}) {
    return Net({actor("sec", {Role::SystemSecurity}), actor("ap", {Role::AccountProvider}),
                actor("alice", {Role::User}, 500, "ap"), actor("bob", {Role::User}, 50, "ap"),
                actor("shop", {Role::User}, 0, "ap"), actor("idle", {}), actor("v1", {Role::Validator}),
                actor("v2", {Role::Validator}), actor("v3", {Role::Validator}), actor("v4", {Role::Validator})},
               std::move(o));
}

struct Gateways {
    std::vector<VisibilityGateway> list;

    Gateways(const Net& net, const LedgerState& snapshot) {
        auto shared = std::make_shared<const LedgerState>(snapshot);
        for (auto v : kValidators) {
            list.emplace_back(net.id(v), KeyPair::from_seed(net.scheme(), std::string("view:") + v));
            list.back().refresh(shared);
        }
    }

    Result<SignedQueryResponse> ask(std::size_t i, const Net& net, const std::string& who, Query q) {
        QueryEcho echo{net.id(who), q};
        return list[i].answer(make_query_request(echo, list[i].issue_challenge(), net.key(who)));
    }
};

Query balance_of(const Net& net, const std::string& who) { return Query{QueryKind::OwnBalance, net.id(who), 0, 0}; }

}  // namespace

TEST_CASE("rate limiter arithmetic") {
    RateLimiter rl;
    AccountId a;
    RateConfig cfg{10, 1, 1};
    for (int i = 0; i < 10; ++i) CHECK(rl.check(a, 1, false, cfg));
    CHECK_FALSE(rl.check(a, 1, false, cfg));
    CHECK(rl.check(a, 2, false, cfg));
    CHECK_FALSE(rl.check(a, 2, false, cfg));
    CHECK(rl.check(a, 2, true, cfg));
    CHECK(rl.tokens(a, cfg) == 0);

    rl.check(a, 1000, false, cfg);
    CHECK(rl.tokens(a, cfg) == 9);

    SUBCASE("fractional refill") {
        RateLimiter slow;
        RateConfig half{1, 1, 2};
        CHECK(slow.check(a, 0, false, half));
        CHECK_FALSE(slow.check(a, 1, false, half));
        CHECK(slow.check(a, 2, false, half));
    }
}

TEST_CASE("admission") {
    Net net = world();
    SecurityGateway gw(net.id("v1"));
    auto raw = [&](const std::string& who, std::uint64_t nonce) {
        return net.make(who, Transfer{net.id("shop"), 1}, nonce).encode();
    };

    CHECK(gw.admit(raw("alice", 0), 1, net.state).accepted());
    for (std::uint64_t n = 1; n < 10; ++n) CHECK(gw.admit(raw("alice", n), 1, net.state).accepted());
    CHECK(gw.admit(raw("alice", 10), 1, net.state).status.code() == ErrorCode::Throttled);
    CHECK(gw.admit(raw("alice", 10), 2, net.state).accepted());

    CHECK(gw.admit(Bytes{1, 2, 3}, 1, net.state).status.code() == ErrorCode::Malformed);
    CHECK(gw.admit(raw("idle", 0), 1, net.state).status.code() == ErrorCode::NoRole);
    Net other({actor("z", {Role::User})});
    CHECK(gw.admit(other.make("z", Transfer{other.id("z"), 1}).encode(), 1, net.state).status.code() ==
          ErrorCode::UnknownSender);
    auto forged = net.make("bob", Transfer{net.id("shop"), 1});
    forged.signature = net.key("alice").sign(forged.signing_bytes());
    CHECK(gw.admit(forged.encode(), 1, net.state).status.code() == ErrorCode::BadSignature);
}

TEST_CASE("whitelisted sender is never throttled") {
    Net probe = world();
    Options o;
    o.policies = {SetPolicy{"rate.whitelist", encode_account_list({probe.id("alice")}), PermanenceTemporary{}}};
    Net net = world(o);
    SecurityGateway gw(net.id("v1"));
    int accepted = 0;
    for (std::uint64_t n = 0; n < 50; ++n)
        accepted += gw.admit(net.make("alice", Transfer{net.id("shop"), 1}, n).encode(), 1, net.state).accepted();
    CHECK(accepted == 50);
}

TEST_CASE("visibility rules") {
    Net net = world();
    REQUIRE(net.run("sec", SetFrozen{net.id("bob"), true}));
    auto mk = [&](const std::string& who, Query q) {
        QueryEcho echo{net.id(who), q};
        return make_query_request(echo, Bytes{1, 2, 3}, net.key(who));
    };
    CHECK(authorize_query(mk("alice", Query{QueryKind::OwnHistory, net.id("alice"), 0, 0}), net.state));
    CHECK(authorize_query(mk("alice", balance_of(net, "bob")), net.state).code() == ErrorCode::NotOwner);
    CHECK(authorize_query(mk("alice", Query{QueryKind::Claimable, net.id("bob"), 0, 0}), net.state).code() ==
          ErrorCode::NotOwner);
    CHECK(authorize_query(mk("alice", Query{QueryKind::ValidationServerAddress, net.id("v1"), 0, 0}), net.state)
              .code() == ErrorCode::NotValidator);
    CHECK(authorize_query(mk("v2", Query{QueryKind::ValidationServerAddress, net.id("v1"), 0, 0}), net.state));

    auto log_q = mk("alice", Query{QueryKind::ManagementLog, {}, 0, 10});
    CHECK(authorize_query(log_q, net.state));
    auto log = std::get<std::vector<LogEntry>>(compute_answer(net.state, log_q.echo));
    REQUIRE(log.size() == 1);
    CHECK(log[0].kind == "SetFrozen");

    auto bad = mk("alice", balance_of(net, "alice"));
    bad.challenge_signature = net.key("bob").sign(QueryRequest::signing_bytes(bad.echo, bad.challenge));
    CHECK(authorize_query(bad, net.state).code() == ErrorCode::BadChallenge);
}

TEST_CASE("signed answers") {
    Net net = world();
    Gateways gws(net, net.state);

    auto honest = gws.ask(0, net, "alice", balance_of(net, "alice"));
    REQUIRE(honest);
    CHECK(decode_amount_answer(honest->result) == 500);
    CHECK(honest->as_of_height == net.state.height);
    CHECK(verify_response(honest.value(), net.state));

    gws.list[1].set_faults({true, 100});
    auto lying = gws.ask(1, net, "alice", balance_of(net, "alice"));
    REQUIRE(lying);
    CHECK(decode_amount_answer(lying->result) == 600);
    CHECK(verify_response(lying.value(), net.state));

    auto resigned = honest.value();
    resigned.signature = KeyPair::from_seed(net.scheme(), "not-the-view-key").sign(resigned.signing_bytes());
    CHECK_FALSE(verify_response(resigned, net.state));

    CHECK(gws.ask(0, net, "alice", balance_of(net, "bob")).code() == ErrorCode::NotOwner);

    QueryEcho echo{net.id("alice"), balance_of(net, "alice")};
    auto challenge = gws.list[2].issue_challenge();
    auto req = make_query_request(echo, challenge, net.key("alice"));
    CHECK(gws.list[2].answer(req));
    CHECK(gws.list[2].answer(req).code() == ErrorCode::BadChallenge);
    CHECK(gws.list[3].answer(req).code() == ErrorCode::BadChallenge);
}

TEST_CASE("comparing answers") {
    Net net = world();
    net.state.height = 10;
    Gateways gws(net, net.state);
    gws.list[3].set_faults({true, 100});
    std::vector<SignedQueryResponse> rs;
    for (std::size_t i = 0; i < 4; ++i) rs.push_back(gws.ask(i, net, "alice", balance_of(net, "alice")).value());

    std::vector<SignedQueryResponse> honest(rs.begin(), rs.begin() + 3);
    CHECK(std::holds_alternative<Consistent>(compare_responses(honest, 20, 3, net.state).value()));

    auto cmp = compare_responses(rs, 20, 3, net.state).value();
    REQUIRE(std::holds_alternative<DiscrepancyEvidence>(cmp));
    const auto& ev = std::get<DiscrepancyEvidence>(cmp);
    CHECK(ev.second.gateway_validator == net.id("v4"));
    CHECK(ev.first.gateway_validator != net.id("v4"));
    net.state.height = 20;
    CHECK(verify_evidence(ev, net.state));

    CHECK(std::holds_alternative<Consistent>(compare_responses(rs, 12, 3, net.state).value()));
    CHECK(std::holds_alternative<DiscrepancyEvidence>(compare_responses(rs, 13, 3, net.state).value()));

    CHECK(compare_responses(std::span(rs).first(1), 20, 3, net.state).code() == ErrorCode::InsufficientResponses);
    std::vector<SignedQueryResponse> same{rs[0], rs[0]};
    CHECK(compare_responses(same, 20, 3, net.state).code() == ErrorCode::InsufficientResponses);
}

TEST_CASE("filing evidence") {
    Net net = world();
    Gateways gws(net, net.state);
    gws.list[2].set_faults({true, 7});
    auto a = gws.ask(0, net, "alice", balance_of(net, "alice")).value();
    auto b = gws.ask(2, net, "alice", balance_of(net, "alice")).value();
    DiscrepancyEvidence ev{a, b};

    auto tx = file_discrepancy(ev, net.id("alice"), net.account("alice").nonce, net.key("alice"), net.state);
    REQUIRE(tx);
    CHECK(apply_transaction(net.state, tx.value()).ok());
    auto log = management_log(net.state, 0, 100);
    REQUIRE(log.size() == 1);
    CHECK(log[0].kind == "DiscrepancyEvent");
    CHECK(log[0].parties == std::vector<AccountId>{net.id("v1"), net.id("v3")});

    auto forged = ev;
    forged.second.signature[0] ^= 1;
    CHECK(file_discrepancy(forged, net.id("alice"), 1, net.key("alice"), net.state).code() ==
          ErrorCode::InvalidEvidence);
    auto agree = DiscrepancyEvidence{a, gws.ask(1, net, "alice", balance_of(net, "alice")).value()};
    CHECK(verify_evidence(agree, net.state).code() == ErrorCode::InvalidEvidence);
    auto shifted = ev;
    shifted.second.as_of_height += 1;
    CHECK(verify_evidence(shifted, net.state).code() == ErrorCode::InvalidEvidence);
}
