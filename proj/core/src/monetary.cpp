#include "fiatchain/monetary.hpp"

#include <limits>

#include "fiatchain/governance.hpp"
#include "internal.hpp"

namespace fiatchain {

namespace {

Status currency_gate(const LedgerState& state, const ExecContext& ctx, std::string_view vote_key) {
    if (ctx.via_proposal) return {};
    if (policy_u64(state, vote_key) != 0) return {ErrorCode::VoteRequired, std::string(vote_key)};
    if (!state.has_role(ctx.actor, Role::CurrencyManager)) return {ErrorCode::NotCurrencyManager};
    return {};
}

std::string rule_label(RuleId rule, std::uint64_t period) {
    return "rule #" + std::to_string(rule) + " period " + std::to_string(period);
}

}  // namespace

Status mint(LedgerState& state, const ExecContext& ctx, const Mint& request) {
    if (auto s = currency_gate(state, ctx, policy_keys::kMintRequiresVote); !s) return s;
    if (request.amount == 0) return {ErrorCode::ZeroAmount};
    Account* to = state.find(request.to);
    if (!to) return {ErrorCode::UnknownAccount};
    if (detail::add_overflows(state.supply.minted, request.amount)) return {ErrorCode::Overflow};
    to->balance += request.amount;
    state.supply.minted += request.amount;
    detail::log_action(state, ctx, "Mint", {request.to}, request.amount, true);
    return {};
}

Status burn(LedgerState& state, const ExecContext& ctx, const Burn& request) {
    if (auto s = currency_gate(state, ctx, policy_keys::kMintRequiresVote); !s) return s;
    if (request.amount == 0) return {ErrorCode::ZeroAmount};
    Account* from = state.find(request.from);
    if (!from) return {ErrorCode::UnknownAccount};
    if (from->balance < request.amount) return {ErrorCode::InsufficientFunds};
    from->balance -= request.amount;
    state.supply.burned += request.amount;
    detail::log_action(state, ctx, "Burn", {request.from}, request.amount, true);
    return {};
}

Status convert_fiat(LedgerState& state, const ExecContext& ctx, const ConvertFiat& request) {
    if (!state.has_role(ctx.actor, Role::AccountProvider) && !state.has_role(ctx.actor, Role::CurrencyManager))
        return {ErrorCode::NotAuthorizedConverter};
    if (request.amount == 0) return {ErrorCode::ZeroAmount};
    Account* user = state.find(request.user);
    if (!user) return {ErrorCode::UnknownAccount};
    if (!user->roles.has(Role::User)) return {ErrorCode::RecipientNotAuthorized};
    if (request.direction == FiatDirection::In) {
        if (detail::add_overflows(state.supply.minted, request.amount)) return {ErrorCode::Overflow};
        user->balance += request.amount;
        state.supply.minted += request.amount;
    } else {
        if (user->frozen) return {ErrorCode::UserFrozen};
        if (user->balance < request.amount) return {ErrorCode::InsufficientFunds};
        user->balance -= request.amount;
        state.supply.burned += request.amount;
    }
    detail::log_action(state, ctx, "ConvertFiat", {ctx.actor, request.user}, request.amount, false,
                       request.direction == FiatDirection::In ? "in" : "out");
    return {};
}

Result<RuleId> set_interest_rule(LedgerState& state, const ExecContext& ctx, const SetInterestRule& request) {
    if (auto s = currency_gate(state, ctx, policy_keys::kInterestRequiresVote); !s) return s;
    if (request.rate_den == 0 || request.period_blocks == 0)
        return Status(ErrorCode::MalformedPayload, "rate denominator and period must be positive");
    if (request.start_height < state.height) return Status(ErrorCode::StartInPast);
    if (!request.scope) {
        for (const auto& [id, rule] : state.interest_rules)
            if (rule.active && !rule.scope) return Status(ErrorCode::OverlappingRule, "rule #" + std::to_string(id));
    }

    InterestRule rule;
    rule.id = state.next_rule_id++;
    rule.rate_num = request.rate_num;
    rule.rate_den = request.rate_den;
    rule.period_blocks = request.period_blocks;
    rule.start_height = request.start_height;
    rule.mode = request.mode;
    rule.scope = request.scope;
    const RuleId id = rule.id;
    state.interest_rules.emplace(id, std::move(rule));
    detail::log_action(state, ctx, "SetInterestRule", {}, 0, true,
                       "#" + std::to_string(id) + " " + std::to_string(request.rate_num) + "/" +
                           std::to_string(request.rate_den) + " every " + std::to_string(request.period_blocks) +
                           (request.mode == AccrualMode::Push ? " push" : " pull"));
    return id;
}

Amount accrual_amount(Amount balance, std::uint64_t rate_num, std::uint64_t rate_den) {
    if (rate_den == 0) return 0;
    auto wide = static_cast<unsigned __int128>(balance) * rate_num / rate_den;
    if (wide > std::numeric_limits<Amount>::max()) return std::numeric_limits<Amount>::max();
    return static_cast<Amount>(wide);
}

Status accrue_period(LedgerState& state, RuleId rule_id, std::uint64_t period) {
    auto it = state.interest_rules.find(rule_id);
    if (it == state.interest_rules.end()) return {ErrorCode::UnknownRule};
    InterestRule& rule = it->second;
    if (!rule.active) return {ErrorCode::RuleInactive};
    if (period <= rule.last_period) return {ErrorCode::AlreadyAccrued};
    if (period != rule.last_period + 1) return {ErrorCode::MalformedPayload, "periods accrue in order"};

    Amount total = 0;
    for (auto& [id, account] : state.accounts) {
        if (!account.roles.has(Role::User) || !rule.in_scope(id)) continue;
        Amount amount = account.frozen ? 0 : accrual_amount(account.balance, rule.rate_num, rule.rate_den);
        if (detail::add_overflows(state.supply.minted, total) ||
            detail::add_overflows(state.supply.minted + total, amount))
            return {ErrorCode::Overflow};
        if (rule.mode == AccrualMode::Push)
            account.balance += amount;
        else
            state.allowances[id][rule_id].accrued[period] = amount;
        total += amount;
    }
    state.supply.minted += total;
    rule.created_total += total;
    rule.last_period = period;

    ExecContext ctx{AccountId{}, detail::system_event_id("accrual", rule_id, period), false, std::nullopt};
    detail::log_action(state, ctx, "Accrual", {}, total, true, rule_label(rule_id, period));
    return {};
}

void process_boundaries(LedgerState& state) {
    for (auto& [id, rule] : state.interest_rules) {
        while (rule.active && rule.boundary(rule.last_period + 1) <= state.height) {
            if (!accrue_period(state, id, rule.last_period + 1)) {
                rule.active = false;  // overflow: stop the rule rather than loop forever
                break;
            }
        }
    }
}

Status claim_allowance(LedgerState& state, const ExecContext& ctx, const ClaimAllowance& request) {
    auto it = state.interest_rules.find(request.rule);
    if (it == state.interest_rules.end()) return {ErrorCode::UnknownRule};
    const InterestRule& rule = it->second;
    if (rule.mode != AccrualMode::Pull) return {ErrorCode::NothingToClaim, "push rule"};
    Account* account = state.find(ctx.actor);
    if (!account) return {ErrorCode::UnknownAccount};
    if (!rule.in_scope(ctx.actor)) return {ErrorCode::NotInScope};
    if (!account->roles.has(Role::User)) return {ErrorCode::NoRole};
    if (account->frozen) return {ErrorCode::Frozen};
    if (request.up_to_period > rule.last_period) return {ErrorCode::PeriodNotYetAccrued};

    Allowance& allowance = state.allowances[ctx.actor][request.rule];
    if (request.up_to_period <= allowance.last_claimed_period) return {ErrorCode::NothingToClaim};
    Amount sum = 0;
    for (auto p = allowance.accrued.upper_bound(allowance.last_claimed_period);
         p != allowance.accrued.end() && p->first <= request.up_to_period; ++p)
        sum += p->second;
    account->balance += sum;
    allowance.last_claimed_period = request.up_to_period;
    detail::log_action(state, ctx, "ClaimAllowance", {ctx.actor}, sum, false,
                       rule_label(request.rule, request.up_to_period));
    return {};
}

Result<Amount> claimable_amount(const LedgerState& state, const AccountId& requester, const AccountId& account) {
    if (requester != account) return Status(ErrorCode::NotOwner);
    if (!state.accounts.count(account)) return Status(ErrorCode::UnknownAccount);
    Amount sum = 0;
    auto it = state.allowances.find(account);
    if (it != state.allowances.end())
        for (const auto& [rule, allowance] : it->second) sum += allowance.unclaimed();
    return sum;
}

Amount unclaimed_total(const LedgerState& state) {
    Amount sum = 0;
    for (const auto& [id, per_rule] : state.allowances)
        for (const auto& [rule, allowance] : per_rule) sum += allowance.unclaimed();
    return sum;
}

SupplyView supply_view(const LedgerState& state) {
    SupplyView view;
    view.counters = state.supply;
    for (const auto& [id, rule] : state.interest_rules) view.created_per_rule.emplace_back(id, rule.created_total);
    return view;
}

}  // namespace fiatchain
