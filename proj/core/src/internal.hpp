#pragma once

// Helpers shared by the state-machine translation units. Not installed.

#include <string>
#include <string_view>
#include <vector>

#include "fiatchain/ledger.hpp"

namespace fiatchain::detail {

void log_action(LedgerState& state, const ExecContext& ctx, std::string_view kind, std::vector<AccountId> parties,
                Amount amount, bool is_public, std::string detail = {});

/// Synthetic id for state changes that are not transactions (accruals, auto-finalization).
TxId system_event_id(std::string_view kind, std::uint64_t a, std::uint64_t b);

/// True when more than one PlatformManager exists and the action did not come
/// through a PlatformManager-electorate proposal.
bool manager_vote_required(const LedgerState& state, const ExecContext& ctx);

inline bool add_overflows(Amount a, Amount b) { return a > ~Amount{0} - b; }

}  // namespace fiatchain::detail
