#include <doctest.h>

#include <memory>

#include "harness.hpp"

using namespace fiatchain;
using namespace fiatchain::testing;

namespace {

// Validator names sorted by account id, so "first" means rotation slot 0.
std::vector<std::string> by_id(const ChainNet& c, std::vector<std::string> names) {
    std::sort(names.begin(), names.end(), [&](const auto& a, const auto& b) { return c.net.id(a) < c.net.id(b); });
    return names;
}

ChainNet four(Options o = {}) {
    return ChainNet({actor("pm", {Role::PlatformManager}), actor("ap", {Role::AccountProvider}),
                     actor("alice", {Role::User}, 100, "ap"), actor("bob", {Role::User}, 0, "ap"),
                     actor("v1", {Role::Validator}), actor("v2", {Role::Validator}), actor("v3", {Role::Validator}),
                     actor("v4", {Role::Validator}), actor("v5", {Role::User}, 0, "ap")},
                    std::move(o));
}

Transaction sign_tx(const ChainNet& c, const std::string& who, Payload p, std::uint64_t offset = 0) {
    return c.net.make(who, std::move(p), c.nonce(who) + offset);
}

}  // namespace

TEST_CASE("pure rotation") {
    ChainNet c = four();
    auto order = by_id(c, {"v1", "v2", "v3", "v4"});
    for (int h = 1; h <= 8; ++h) {
        auto who = c.next();
        REQUIRE(who);
        CHECK(c.name_of(who.value()) == order[(h - 1) % 4]);
        REQUIRE(c.produce());
    }
    CHECK(c.chain.head_height() == 8);
}

TEST_CASE("offline validator is skipped and spacing holds") {
    ChainNet c = four();
    auto o = by_id(c, {"v1", "v2", "v3", "v4"});
    const AccountId down = c.net.id(o[1]);
    std::vector<std::string> seen;
    for (int h = 1; h <= 8; ++h) {
        LivenessFn live;
        if (h == 2) live = [&](const AccountId& id) { return id != down; };
        auto who = c.next(live);
        REQUIRE(who);
        seen.push_back(c.name_of(who.value()));
        REQUIRE(c.produce({}, live));
    }
    // Hand-enumerated schedule for spacing 2.
    std::vector<std::string> expect{o[0], o[2], o[3], o[0], o[1], o[2], o[3], o[0]};
    CHECK(seen == expect);
}

TEST_CASE("single validator publishes every block") {
    ChainNet c({actor("v", {Role::Validator}), actor("u", {Role::User}, 5)});
    CHECK(spacing_for(1, 50) == 0);
    for (int h = 0; h < 5; ++h) REQUIRE(c.produce());
    CHECK(c.chain.head_height() == 5);
}

TEST_CASE("schedule arithmetic") {
    CHECK(spacing_for(4, 50) == 2);
    CHECK(spacing_for(5, 50) == 2);
    CHECK(spacing_for(4, 100) == 4);
    CHECK(spacing_for(4, 0) == 0);

    std::vector<AccountId> vs(3);
    for (std::uint8_t i = 0; i < 3; ++i) vs[i].digest.bytes[0] = i + 1;
    auto none = [](const AccountId&) { return false; };
    CHECK(expected_publisher(1, vs, {}, 1, none).code() == ErrorCode::NoEligiblePublisher);
    CHECK(expected_publisher(1, {}, {}, 0).code() == ErrorCode::NoEligiblePublisher);
    std::vector<AccountId> recent{vs[1], vs[2]};
    CHECK(expected_publisher(2, vs, recent, 2).value() == vs[0]);
    recent.push_back(vs[0]);
    CHECK(expected_publisher(2, vs, recent, 3).code() == ErrorCode::NoEligiblePublisher);
}

TEST_CASE("build_block") {
    ChainNet c = four();
    auto who = c.next().value();
    auto key = c.net.key(c.name_of(who));

    auto empty = build_block(c.chain, c.state, who, key, {}, 1);
    REQUIRE(empty);
    CHECK(empty->txs.empty());
    CHECK(empty->height == 1);
    CHECK(empty->prev_hash == c.chain.head_hash());
    CHECK(validate_block(empty.value(), c.state, c.chain).empty());

    std::vector<Transaction> txs{sign_tx(c, "alice", Transfer{c.net.id("bob"), 1}),
                                 sign_tx(c, "alice", Transfer{c.net.id("bob"), 2}, 1),
                                 sign_tx(c, "alice", Transfer{c.net.id("bob"), 3}, 2)};
    auto full = build_block(c.chain, c.state, who, key, txs, 1);
    REQUIRE(full);
    CHECK(full->txs == txs);

    auto other = c.state.validators().front() == who ? c.state.validators().back() : c.state.validators().front();
    CHECK(build_block(c.chain, c.state, other, c.net.key(c.name_of(other)), {}, 1).code() ==
          ErrorCode::WrongPublisher);
}

TEST_CASE("validate_block violations") {
    ChainNet c = four();
    auto who = c.next().value();
    auto key = c.net.key(c.name_of(who));
    auto good = build_block(c.chain, c.state, who, key, {}, 1).value();

    auto resign = [&](Block b, const KeyPair& k) {
        b.signature = k.sign(b.signing_bytes());
        return b;
    };
    auto kinds = [&](const Block& b) {
        std::vector<ViolationKind> out;
        for (const auto& v : validate_block(b, c.state, c.chain)) out.push_back(v.kind);
        return out;
    };

    Block tampered = good;
    tampered.prev_hash.bytes[0] ^= 1;
    CHECK(kinds(resign(tampered, key)) == std::vector{ViolationKind::HashMismatch});

    Block outsider = good;
    outsider.publisher = c.net.id("alice");
    CHECK(kinds(resign(outsider, c.net.key("alice"))) == std::vector{ViolationKind::NotAValidator});

    Block gap = good;
    gap.height = 5;
    CHECK(kinds(resign(gap, key)) == std::vector{ViolationKind::HeightGap});

    Block unsigned_block = good;
    unsigned_block.signature[0] ^= 1;
    CHECK(kinds(unsigned_block) == std::vector{ViolationKind::BadBlockSignature});

    Block forged_tx = good;
    auto tx = sign_tx(c, "alice", Transfer{c.net.id("bob"), 1});
    tx.signature = c.net.key("bob").sign(tx.signing_bytes());
    forged_tx.txs.push_back(tx);
    CHECK(kinds(resign(forged_tx, key)) == std::vector{ViolationKind::MalformedTransaction});

    REQUIRE(append_block(c.chain, c.state, good));
    Block again = build_block(c.chain, c.state, c.next().value(), c.net.key(c.name_of(c.next().value())), {}, 2).value();
    again.publisher = who;
    CHECK(kinds(resign(again, key)) == std::vector{ViolationKind::SpacingViolation});
}

TEST_CASE("failed transactions still make a valid block") {
    ChainNet c = four();
    auto r = c.produce({sign_tx(c, "alice", Transfer{c.net.id("bob"), 1000})});
    REQUIRE(r);
    CHECK(r->at(0).status.code() == ErrorCode::InsufficientFunds);
    CHECK(c.chain.head().txs.size() == 1);
    CHECK(verify_chain(c.chain).ok);
}

TEST_CASE("append_block rejects invalid blocks without side effects") {
    ChainNet c = four();
    auto who = c.next().value();
    auto block = build_block(c.chain, c.state, who, c.net.key(c.name_of(who)),
                             {sign_tx(c, "alice", Transfer{c.net.id("bob"), 5})}, 1)
                     .value();
    block.prev_hash.bytes[3] ^= 0xff;
    auto digest = c.state.digest();
    auto r = append_block(c.chain, c.state, block);
    CHECK(r.code() == ErrorCode::InvalidBlock);
    CHECK(c.state.digest() == digest);
    CHECK(c.chain.head_height() == 0);
}

TEST_CASE("interest boundary inside a block accrues once") {
    Options o;
    o.policies = {policy("interest.requires_vote", 0)};
    auto actors = std::vector<ActorDef>{actor("cm", {Role::CurrencyManager}), actor("alice", {Role::User}, 1000),
                                        actor("v1", {Role::Validator})};
    ChainNet c(actors, o);
    REQUIRE(c.produce({sign_tx(c, "cm", SetInterestRule{1, 100, 3, 2, AccrualMode::Push, std::nullopt})}));
    for (int i = 0; i < 4; ++i) REQUIRE(c.produce());
    CHECK(c.state.height == 5);
    CHECK(c.state.find(c.net.id("alice"))->balance == 1010);
    int accruals = 0;
    for (const auto& e : c.state.tx_log) accruals += e.kind == "Accrual";
    CHECK(accruals == 1);
}

TEST_CASE("added validator publishes from the next block") {
    ChainNet c = four();
    auto action = std::make_shared<const Payload>(AssignRole{c.net.id("v5"), Role::Validator});
    REQUIRE(c.produce({sign_tx(c, "v1", CreateProposal{action, Role::Validator})}));
    std::vector<Transaction> votes;
    for (auto v : {"v1", "v2", "v3"}) votes.push_back(sign_tx(c, v, CastVote{1, true}));
    REQUIRE(c.produce(votes));
    const Height passed_at = c.chain.head_height();
    CHECK(c.state.proposals.at(1).status == ProposalStatus::Passed);
    CHECK(c.state.validators().size() == 5);

    Height first = 0;
    for (int i = 0; i < 10 && first == 0; ++i) {
        if (c.name_of(c.next().value()) == "v5") first = c.chain.head_height() + 1;
        REQUIRE(c.produce());
    }
    CHECK(first > passed_at);
    CHECK(verify_chain(c.chain).ok);
}

TEST_CASE("endpoint registry") {
    ChainNet c = four();
    ValidatorRecord rec;
    rec.account = c.net.id("v1");
    rec.security_gateways = {"sg.v1"};
    rec.visibility_gateways = {"vg-a.v1", "vg-b.v1"};
    rec.validation_server = "10.0.0.1";
    rec.view_key = KeyPair::from_seed(c.net.scheme(), "view2:v1").public_key();
    rec.contact = "ops@v1";
    REQUIRE(c.produce({sign_tx(c, "v1", RegisterEndpoints{rec})}));
    CHECK(c.state.validator_registry.at(c.net.id("v1")) == rec);

    auto directory = [&](const std::string& who) {
        QueryEcho echo{c.net.id(who), Query{QueryKind::GatewayDirectory, {}, 0, 0}};
        return std::get<std::vector<DirectoryEntry>>(compute_answer(c.state, echo));
    };
    for (const auto& e : directory("alice")) {
        CHECK(e.server_redacted);
        CHECK(e.record.validation_server.empty());
        if (e.record.account == rec.account) CHECK(e.record.visibility_gateways.size() == 2);
    }
    for (const auto& e : directory("v2")) {
        CHECK_FALSE(e.server_redacted);
        if (e.record.account == rec.account) CHECK(e.record.validation_server == "10.0.0.1");
    }

    rec.validation_server = "10.0.0.2";
    REQUIRE(c.produce({sign_tx(c, "v1", RegisterEndpoints{rec})}));
    CHECK(c.state.validator_registry.at(c.net.id("v1")).validation_server == "10.0.0.2");

    auto bad = rec;
    bad.contact.clear();
    auto r = c.produce({sign_tx(c, "v1", RegisterEndpoints{bad}), sign_tx(c, "alice", RegisterEndpoints{rec})});
    REQUIRE(r);
    CHECK(r->at(0).status.code() == ErrorCode::MalformedRecord);
    CHECK(r->at(1).status.code() == ErrorCode::NotValidator);
}

TEST_CASE("dump round trip and verification") {
    ChainNet c = four();
    REQUIRE(c.produce({sign_tx(c, "alice", Transfer{c.net.id("bob"), 7})}));
    REQUIRE(c.produce());
    auto dump = export_chain(c.chain);
    auto back = import_chain(dump);
    CHECK(export_chain(back) == dump);
    auto report = verify_chain(back);
    CHECK(report.ok);
    CHECK(report.verified_height == 2);
    CHECK(report.state_digest == c.state.digest());
    CHECK(replay_to(back, 1)->height == 1);

    auto truncated = dump;
    truncated.pop_back();
    CHECK_THROWS_AS(import_chain(truncated), DecodeError);

    Chain relinked = back;
    relinked.blocks[1].tick += 1;
    CHECK_FALSE(verify_chain(relinked).ok);

    Chain regenesis = back;
    regenesis.genesis.accounts[2].balance += 1;
    CHECK_FALSE(verify_chain(regenesis).ok);
}
