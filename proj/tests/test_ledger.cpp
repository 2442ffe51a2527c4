#include <doctest.h>

#include "harness.hpp"

using namespace fiatchain;
using namespace fiatchain::testing;

namespace {

ActorDef with_recovery(ActorDef a, RecoveryPolicy r) {
    a.recovery = std::move(r);
    return a;
}

Net basic(Options opts = {}) {
    return Net({actor("sec", {Role::SystemSecurity}), actor("ap", {Role::AccountProvider}),
                actor("alice", {Role::User}, 100, "ap"), actor("bob", {Role::User}, 0, "ap"),
                actor("escrow", {Role::User}, 0, "ap"), actor("nobody", {})},
               [&] {
                   if (!opts.escrow) opts.escrow = "escrow";
                   return opts;
               }());
}

Approval approve(const Net& net, const std::string& who, const std::string& target, const PublicKey& next) {
    auto msg = RotateKey::approval_bytes(net.id(target), net.account(target).public_key, next);
    return Approval{net.id(who), net.key(who).sign(msg)};
}

}  // namespace

TEST_CASE("envelope checks") {
    Net net = basic();
    auto r = net.tx("alice", Transfer{net.id("bob"), 10});
    CHECK(r.ok());
    CHECK(r.nonce_consumed);
    CHECK(net.account("alice").nonce == 1);

    SUBCASE("replay is rejected") {
        auto tx = net.make("alice", Transfer{net.id("bob"), 10}, 0);
        auto again = apply_transaction(net.state, tx);
        CHECK(again.status.code() == ErrorCode::BadNonce);
        CHECK_FALSE(again.nonce_consumed);
        CHECK(net.balance("bob") == 10);
    }
    SUBCASE("sender without roles") {
        auto before = net.state.digest();
        CHECK(net.run("nobody", Transfer{net.id("bob"), 1}).code() == ErrorCode::NoRole);
        CHECK(net.state.digest() == before);
    }
    SUBCASE("wrong signer") {
        auto tx = net.make("alice", Transfer{net.id("bob"), 1});
        tx.signature = net.key("bob").sign(tx.signing_bytes());
        CHECK(apply_transaction(net.state, tx).status.code() == ErrorCode::BadSignature);
    }
    SUBCASE("unknown sender") {
        Net other({actor("x", {Role::User}, 5)});
        auto tx = other.make("x", Transfer{other.id("x"), 1});
        CHECK(apply_transaction(net.state, tx).status.code() == ErrorCode::UnknownSender);
    }
    SUBCASE("failed payload still consumes the nonce") {
        auto f = net.tx("alice", Transfer{net.id("bob"), 1000});
        CHECK(f.status.code() == ErrorCode::InsufficientFunds);
        CHECK(f.nonce_consumed);
        CHECK(net.account("alice").nonce == 2);
    }
}

TEST_CASE("transfer") {
    Net net = basic();
    CHECK(net.run("alice", Transfer{net.id("bob"), 40}));
    CHECK(net.balance("alice") == 60);
    CHECK(net.balance("bob") == 40);

    CHECK(net.run("alice", Transfer{net.id("sec"), 1}).code() == ErrorCode::RecipientNotAuthorized);
    CHECK(net.run("alice", Transfer{net.id("bob"), 0}).code() == ErrorCode::ZeroAmount);
    CHECK(net.run("alice", Transfer{net.id("bob"), 61}).code() == ErrorCode::InsufficientFunds);
    CHECK(net.run("sec", Transfer{net.id("bob"), 1}).code() == ErrorCode::NoRole);
    CHECK(net.balance("alice") == 60);
    CHECK(check_conservation(net.state));
}

TEST_CASE("freeze and unfreeze") {
    Net net = basic();
    CHECK(net.run("sec", SetFrozen{net.id("alice"), true}));
    CHECK(net.account("alice").frozen);
    CHECK(net.run("alice", Transfer{net.id("bob"), 1}).code() == ErrorCode::SenderFrozen);
    CHECK(net.run("sec", SetFrozen{net.id("alice"), false}));
    CHECK(net.run("alice", Transfer{net.id("bob"), 1}));

    CHECK(net.run("bob", SetFrozen{net.id("alice"), true}).code() == ErrorCode::NotSecurityRole);

    SUBCASE("disabled by policy") {
        Net off = basic({{policy("security.freeze.enabled", 0)}});
        CHECK(off.run("sec", SetFrozen{off.id("alice"), true}).code() == ErrorCode::FeatureDisabled);
    }
    SUBCASE("vote required by policy") {
        Net voted = basic({{policy("security.freeze.requires_vote", 1)}});
        CHECK(voted.run("sec", SetFrozen{voted.id("alice"), true}).code() == ErrorCode::VoteRequired);
    }
}

TEST_CASE("freeze log entry is public") {
    Net net = basic();
    CHECK(net.run("sec", SetFrozen{net.id("alice"), true}));
    auto log = management_log(net.state, 0, 100);
    REQUIRE(log.size() == 1);
    CHECK(log[0].kind == "SetFrozen");
    CHECK(log[0].parties == std::vector<AccountId>{net.id("alice")});
}

TEST_CASE("confiscate") {
    Net net = basic();
    CHECK(net.run("alice", Transfer{net.id("bob"), 20}));  // alice 80
    CHECK(net.run("sec", Confiscate{net.id("alice"), net.id("escrow"), 50}));
    CHECK(net.balance("alice") == 30);
    CHECK(net.balance("escrow") == 50);

    CHECK(net.run("sec", Confiscate{net.id("alice"), net.id("escrow"), 31}).code() == ErrorCode::InsufficientFunds);
    CHECK(net.run("sec", Confiscate{net.id("alice"), net.id("bob"), 1}).code() == ErrorCode::VoteRequired);

    CHECK(net.run("sec", SetFrozen{net.id("alice"), true}));
    CHECK(net.run("sec", Confiscate{net.id("alice"), net.id("escrow"), 30}));
    CHECK(net.balance("alice") == 0);
    CHECK(check_conservation(net.state));
}

TEST_CASE("reverse") {
    Net net = basic();
    auto r = net.tx("alice", Transfer{net.id("bob"), 40});
    REQUIRE(r.ok());
    CHECK(net.run("sec", Reverse{r.tx_id}));
    CHECK(net.balance("alice") == 100);
    CHECK(net.balance("bob") == 0);
    CHECK(net.run("sec", Reverse{r.tx_id}).code() == ErrorCode::AlreadyReversed);

    auto r2 = net.tx("alice", Transfer{net.id("bob"), 40});
    CHECK(net.run("bob", Transfer{net.id("alice"), 30}));
    CHECK(net.run("sec", Reverse{r2.tx_id}).code() == ErrorCode::InsufficientRecipientFunds);
    CHECK(net.balance("bob") == 10);

    auto freeze = net.tx("sec", SetFrozen{net.id("bob"), true});
    CHECK(net.run("sec", Reverse{freeze.tx_id}).code() == ErrorCode::NotATransfer);
}

TEST_CASE("rotation under provider-only recovery") {
    Net net = basic();
    auto next = KeyPair::from_seed(net.scheme(), "alice-2");
    auto old_key = net.key("alice");
    CHECK(net.run("ap", RotateKey{net.id("alice"), next.public_key(), {approve(net, "ap", "alice", next.public_key())}}));
    CHECK(net.account("alice").public_key == next.public_key());
    CHECK(net.account("alice").id == derive_account_id(old_key.public_key()).value());

    auto stale = net.make("alice", Transfer{net.id("bob"), 1});
    CHECK(apply_transaction(net.state, stale).status.code() == ErrorCode::BadSignature);
    net.set_key("alice", next);
    CHECK(net.run("alice", Transfer{net.id("bob"), 1}));
}

TEST_CASE("rotation approvals") {
    auto guarded = with_recovery(actor("carol", {Role::User}, 10, "ap"), RecoveryGuardians{});
    Net probe({actor("g1", {Role::User}), actor("g2", {Role::User}), actor("g3", {Role::User})});
    guarded.recovery = RecoveryGuardians{{probe.id("g1"), probe.id("g2"), probe.id("g3")}, 2};
    auto dual = with_recovery(actor("dave", {Role::User}, 10, "ap"), RecoveryProviderPlusSecurity{});

    Net net({actor("ap", {Role::AccountProvider}), actor("sec", {Role::SystemSecurity}), actor("g1", {Role::User}),
             actor("g2", {Role::User}), actor("g3", {Role::User}), guarded, dual});
    auto next = KeyPair::from_seed(net.scheme(), "rotated").public_key();

    SUBCASE("guardians") {
        CHECK(net.run("g1", RotateKey{net.id("carol"), next, {approve(net, "g1", "carol", next)}}).code() ==
              ErrorCode::InsufficientApprovals);
        CHECK(net.run("g1", RotateKey{net.id("carol"), next,
                                      {approve(net, "g1", "carol", next), approve(net, "g1", "carol", next)}})
                  .code() == ErrorCode::InsufficientApprovals);
        CHECK(net.run("ap", RotateKey{net.id("carol"), next, {approve(net, "ap", "carol", next)}}).code() ==
              ErrorCode::ApproverNotEligible);
        CHECK(net.run("g1", RotateKey{net.id("carol"), next,
                                      {approve(net, "g1", "carol", next), approve(net, "g2", "carol", next)}}));
        CHECK(net.account("carol").public_key == next);
    }
    SUBCASE("provider plus security") {
        CHECK(net.run("ap", RotateKey{net.id("dave"), next, {approve(net, "ap", "dave", next)}}).code() ==
              ErrorCode::InsufficientApprovals);
        CHECK(net.run("sec", RotateKey{net.id("dave"), next, {approve(net, "sec", "dave", next)}}).code() ==
              ErrorCode::InsufficientApprovals);
        CHECK(net.run("ap", RotateKey{net.id("dave"), next,
                                      {approve(net, "ap", "dave", next), approve(net, "sec", "dave", next)}}));
    }
    SUBCASE("forged approval") {
        auto a = approve(net, "g1", "carol", next);
        auto b = approve(net, "g2", "carol", next);
        b.signature = a.signature;
        CHECK(net.run("g1", RotateKey{net.id("carol"), next, {a, b}}).code() == ErrorCode::BadSignature);
    }
    SUBCASE("malformed new key") {
        PublicKey bad{KeyScheme::Ed25519, Bytes(5, 1)};
        CHECK(net.run("ap", RotateKey{net.id("dave"), bad, {}}).code() == ErrorCode::InvalidKey);
    }
}

TEST_CASE("balance and history") {
    Net net({actor("ap", {Role::AccountProvider}), actor("alice", {Role::User}, 100, "ap"),
             actor("bob", {Role::User}, 0, "ap")});
    CHECK(get_balance(net.state, net.id("bob")).value() == 0);
    CHECK(get_history(net.state, net.id("bob"))->empty());
    CHECK(net.run("alice", Transfer{net.id("bob"), 40}));
    CHECK(get_balance(net.state, net.id("bob")).value() == 40);
    auto h = get_history(net.state, net.id("bob")).value();
    REQUIRE(h.size() == 1);
    CHECK(h[0].amount == 40);
    CHECK_FALSE(h[0].is_public);
    CHECK(management_log(net.state, 0, 100).empty());

    Net stranger({actor("z", {Role::User})});
    CHECK(get_balance(net.state, stranger.id("z")).code() == ErrorCode::UnknownAccount);
}
