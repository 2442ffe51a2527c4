#pragma once

#include <utility>
#include <vector>

#include "fiatchain/ledger.hpp"

namespace fiatchain {

Status mint(LedgerState& state, const ExecContext& ctx, const Mint& request);
Status burn(LedgerState& state, const ExecContext& ctx, const Burn& request);
Status convert_fiat(LedgerState& state, const ExecContext& ctx, const ConvertFiat& request);
Result<RuleId> set_interest_rule(LedgerState& state, const ExecContext& ctx, const SetInterestRule& request);

/// floor(num * balance / den) without intermediate overflow.
Amount accrual_amount(Amount balance, std::uint64_t rate_num, std::uint64_t rate_den);

/// Accrue one boundary of one rule. Only valid for period == last_period + 1.
Status accrue_period(LedgerState& state, RuleId rule, std::uint64_t period);
/// Fire every boundary at or below state.height that has not fired yet.
void process_boundaries(LedgerState& state);

Status claim_allowance(LedgerState& state, const ExecContext& ctx, const ClaimAllowance& request);
Result<Amount> claimable_amount(const LedgerState& state, const AccountId& requester, const AccountId& account);
Amount unclaimed_total(const LedgerState& state);

struct SupplyView {
    SupplyCounters counters;
    std::vector<std::pair<RuleId, Amount>> created_per_rule;
    bool operator==(const SupplyView&) const = default;
};

SupplyView supply_view(const LedgerState& state);

}  // namespace fiatchain
