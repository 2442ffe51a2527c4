#include <doctest.h>

#include "harness.hpp"

using namespace fiatchain;
using namespace fiatchain::testing;

namespace {

Options direct() {
    Options o;
    o.policies = {policy("mint.requires_vote", 0), policy("interest.requires_vote", 0)};
    return o;
}

Net money(Options o = direct()) {
    return Net({actor("cm", {Role::CurrencyManager}), actor("ap", {Role::AccountProvider}),
                actor("cb", {Role::User, Role::CurrencyManager}, 500, "ap"), actor("a", {Role::User}, 1000, "ap"),
                actor("b", {Role::User}, 1000, "ap"), actor("c", {Role::User}, 1000, "ap"),
                actor("sec", {Role::SystemSecurity})},
               o);
}

SetInterestRule rule(Height start, AccrualMode mode, std::optional<std::set<AccountId>> scope = std::nullopt) {
    return SetInterestRule{1, 100, 10, start, mode, std::move(scope)};
}

// Runs block boundaries until the rule's `period` boundary has fired.
void run_to_period(Net& net, RuleId id, std::uint64_t period) {
    while (net.state.interest_rules.at(id).last_period < period) net.end_block();
}

}  // namespace

TEST_CASE("mint and burn") {
    Net net = money();
    const auto base = net.state.supply;
    CHECK(net.run("cm", Mint{net.id("cb"), 1000}));
    CHECK(net.balance("cb") == 1500);
    CHECK(net.state.supply.minted == base.minted + 1000);

    CHECK(net.run("cm", Burn{net.id("cb"), 200}));
    CHECK(net.balance("cb") == 1300);
    CHECK(net.state.supply.burned == base.burned + 200);
    CHECK(net.run("cm", Burn{net.id("cb"), 1301}).code() == ErrorCode::InsufficientFunds);

    CHECK(net.run("cm", Burn{net.id("cb"), 800}));
    CHECK(net.state.supply.circulating() == base.circulating());

    Net ghost({actor("g", {Role::User})});
    CHECK(net.run("cm", Mint{ghost.id("g"), 1}).code() == ErrorCode::UnknownAccount);
    CHECK(net.run("a", Mint{net.id("a"), 1}).code() == ErrorCode::NotCurrencyManager);
    CHECK(net.run("cm", Mint{net.id("a"), 0}).code() == ErrorCode::ZeroAmount);
    CHECK(check_conservation(net.state));
}

TEST_CASE("mint needs a vote by default") {
    Net net = money({});
    CHECK(net.run("cm", Mint{net.id("cb"), 1000}).code() == ErrorCode::VoteRequired);
    CHECK(net.run("cm", SetInterestRule{1, 100, 10, 5}).code() == ErrorCode::VoteRequired);
}

TEST_CASE("fiat conversion") {
    Net net = money();
    const auto base = net.state.supply;
    CHECK(net.run("ap", ConvertFiat{net.id("a"), FiatDirection::In, 100}));
    CHECK(net.balance("a") == 1100);
    CHECK(net.state.supply.minted == base.minted + 100);
    CHECK(net.run("ap", ConvertFiat{net.id("a"), FiatDirection::Out, 1100}));
    CHECK(net.balance("a") == 0);
    CHECK(net.state.supply.burned == base.burned + 1100);

    CHECK(net.run("a", ConvertFiat{net.id("b"), FiatDirection::In, 1}).code() == ErrorCode::NotAuthorizedConverter);
    CHECK(net.run("ap", ConvertFiat{net.id("sec"), FiatDirection::In, 1}).code() ==
          ErrorCode::RecipientNotAuthorized);
    CHECK(net.run("sec", SetFrozen{net.id("b"), true}));
    CHECK(net.run("ap", ConvertFiat{net.id("b"), FiatDirection::Out, 1}).code() == ErrorCode::UserFrozen);
    CHECK(check_conservation(net.state));
}

TEST_CASE("interest rule construction") {
    Net net = money();
    auto r = net.tx("cm", rule(5, AccrualMode::Push));
    REQUIRE(r.ok());
    const auto& created = net.state.interest_rules.at(1);
    CHECK(created.active);
    CHECK(created.boundary(1) == 15);
    CHECK(net.run("cm", rule(5, AccrualMode::Pull)).code() == ErrorCode::OverlappingRule);
    CHECK(net.run("cm", rule(0, AccrualMode::Pull, std::set{net.id("a")})).code() == ErrorCode::StartInPast);
    CHECK(net.run("cm", SetInterestRule{1, 0, 10, 5}).code() == ErrorCode::MalformedPayload);
    CHECK(net.run("cm", SetInterestRule{1, 100, 0, 5}).code() == ErrorCode::MalformedPayload);
    CHECK(net.run("cm", rule(5, AccrualMode::Pull, std::set{net.id("a")})));
}

TEST_CASE("push and pull accrual") {
    Net net = money();
    REQUIRE(net.run("cm", rule(1, AccrualMode::Push, std::set{net.id("a")})));
    REQUIRE(net.run("cm", rule(1, AccrualMode::Pull, std::set{net.id("b")})));
    REQUIRE(net.run("cm", SetInterestRule{1, 100, 10, 1, AccrualMode::Pull, std::set{net.id("cb")}}));
    REQUIRE(net.run("cm", Burn{net.id("cb"), 450}));  // cb holds 50

    for (Height h = 1; h < 11; ++h) net.end_block();
    CHECK(net.balance("a") == 1000);
    net.end_block();  // boundary at 11
    CHECK(net.balance("a") == 1010);
    CHECK(net.balance("b") == 1000);
    CHECK(net.state.allowances.at(net.id("b")).at(2).accrued == std::map<std::uint64_t, Amount>{{1, 10}});
    CHECK(net.state.allowances.at(net.id("cb")).at(3).accrued == std::map<std::uint64_t, Amount>{{1, 0}});
    CHECK(net.balance("c") == 1000);
    CHECK_FALSE(net.state.allowances.count(net.id("c")));
    CHECK(check_conservation(net.state));

    CHECK(accrue_period(net.state, 1, 1).code() == ErrorCode::AlreadyAccrued);
    CHECK(accrue_period(net.state, 1, 3).code() == ErrorCode::MalformedPayload);
    CHECK(accrue_period(net.state, 9, 1).code() == ErrorCode::UnknownRule);
}

TEST_CASE("boundaries fire exactly once") {
    Net net = money();
    REQUIRE(net.run("cm", SetInterestRule{1, 100, 1, 1, AccrualMode::Push, std::set{net.id("a")}}));
    net.end_block();
    finish_block(net.state);
    finish_block(net.state);
    CHECK(net.balance("a") == 1010);
    CHECK(net.state.interest_rules.at(1).last_period == 1);
}

TEST_CASE("frozen users accrue nothing") {
    Net net = money();
    REQUIRE(net.run("cm", rule(1, AccrualMode::Push)));
    REQUIRE(net.run("sec", SetFrozen{net.id("a"), true}));
    run_to_period(net, 1, 1);
    CHECK(net.balance("a") == 1000);
    CHECK(net.balance("b") == 1010);
}

TEST_CASE("claiming allowances") {
    Net net = money();
    auto scope = std::set{net.id("a"), net.id("b")};
    REQUIRE(net.run("cm", rule(1, AccrualMode::Pull, scope)));
    run_to_period(net, 1, 3);

    CHECK(claimable_amount(net.state, net.id("a"), net.id("a")).value() == 30);
    CHECK(claimable_amount(net.state, net.id("b"), net.id("a")).code() == ErrorCode::NotOwner);
    CHECK(net.run("a", ClaimAllowance{1, 5}).code() == ErrorCode::PeriodNotYetAccrued);
    CHECK(net.run("a", ClaimAllowance{1, 2}));
    CHECK(net.balance("a") == 1020);
    CHECK(claimable_amount(net.state, net.id("a"), net.id("a")).value() == 10);
    CHECK(net.run("a", ClaimAllowance{1, 3}));
    CHECK(net.balance("a") == 1030);
    CHECK(net.run("a", ClaimAllowance{1, 3}).code() == ErrorCode::NothingToClaim);
    CHECK(net.run("c", ClaimAllowance{1, 3}).code() == ErrorCode::NotInScope);
    CHECK(net.run("a", ClaimAllowance{7, 1}).code() == ErrorCode::UnknownRule);

    CHECK(net.run("sec", SetFrozen{net.id("b"), true}));
    CHECK(net.run("b", ClaimAllowance{1, 3}).code() == ErrorCode::Frozen);
    CHECK(check_conservation(net.state));
}

TEST_CASE("claim covers every skipped period in one transaction") {
    Net net = money();
    REQUIRE(net.run("cm", rule(1, AccrualMode::Pull, std::set{net.id("a")})));
    run_to_period(net, 1, 3);
    auto before = net.state.tx_log.size();
    CHECK(net.run("a", ClaimAllowance{1, 3}));
    CHECK(net.balance("a") == 1030);
    CHECK(net.state.tx_log.size() == before + 1);
    CHECK(net.state.tx_log.back().amount == 30);
}

TEST_CASE("supply view adds mints and accruals") {
    Net net = money();
    const auto base = net.state.supply.minted;
    REQUIRE(net.run("cm", Mint{net.id("cb"), 1000}));
    REQUIRE(net.run("cm", SetInterestRule{1, 100, 10, 1, AccrualMode::Pull, std::set{net.id("a")}}));
    run_to_period(net, 1, 3);
    auto view = supply_view(net.state);
    CHECK(view.counters.minted == base + 1030);
    REQUIRE(view.created_per_rule.size() == 1);
    CHECK(view.created_per_rule[0].second == 30);
    CHECK(unclaimed_total(net.state) == 30);
}
