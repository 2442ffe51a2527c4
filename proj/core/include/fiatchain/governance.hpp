#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fiatchain/ledger.hpp"

namespace fiatchain {

/// Reserved policy namespace. Values are integers unless noted; booleans are 0/1.
namespace policy_keys {
inline constexpr std::string_view kBootstrapWindow = "bootstrap.window_blocks";
inline constexpr std::string_view kVoteWindow = "vote.window_blocks";
inline constexpr std::string_view kVoteThreshold = "vote.threshold_percent";
inline constexpr std::string_view kFreezeEnabled = "security.freeze.enabled";
inline constexpr std::string_view kFreezeRequiresVote = "security.freeze.requires_vote";
inline constexpr std::string_view kConfiscateEnabled = "security.confiscate.enabled";
inline constexpr std::string_view kConfiscateRequiresVote = "security.confiscate.requires_vote";
inline constexpr std::string_view kReverseEnabled = "security.reverse.enabled";
inline constexpr std::string_view kReverseRequiresVote = "security.reverse.requires_vote";
inline constexpr std::string_view kMintRequiresVote = "mint.requires_vote";
inline constexpr std::string_view kInterestRequiresVote = "interest.requires_vote";
inline constexpr std::string_view kRateCapacity = "rate.capacity";
inline constexpr std::string_view kRateRefill = "rate.refill";
inline constexpr std::string_view kRateRefillDen = "rate.refill_den";
inline constexpr std::string_view kRateWhitelist = "rate.whitelist";  // bytes: concatenated 32-byte ids
inline constexpr std::string_view kDiversity = "consensus.diversity";  // percent
inline constexpr std::string_view kMaxTxsPerBlock = "consensus.max_txs_per_block";
inline constexpr std::string_view kDelayBlocks = "gateway.delay_blocks";
}  // namespace policy_keys

std::uint64_t policy_default(std::string_view key);
/// Integer policy value, falling back to the built-in default when unset.
std::uint64_t policy_u64(const LedgerState& state, std::string_view key);
std::vector<AccountId> policy_accounts(const LedgerState& state, std::string_view key);
Bytes encode_account_list(const std::vector<AccountId>& ids);

/// Permanent: never. Temporary: always. TimedExpiration: from expiry_height on.
bool is_mutable(const Policy& policy, Height height);
bool valid_policy_key(std::string_view key);

Status set_policy(LedgerState& state, const ExecContext& ctx, const SetPolicy& request);
Status assign_role(LedgerState& state, const ExecContext& ctx, const AssignRole& request);
Status revoke_role(LedgerState& state, const ExecContext& ctx, const RevokeRole& request);
Status bootstrap_set_validators(LedgerState& state, const ExecContext& ctx, const BootstrapValidators& request);

/// Which electorate may vote on `action`, or nullopt when it is not voteable.
std::optional<Role> electorate_for(const Payload& action);

Result<ProposalId> create_proposal(LedgerState& state, const ExecContext& ctx, const CreateProposal& request);
Status cast_vote(LedgerState& state, const ExecContext& ctx, const CastVote& request);

struct Tally {
    std::uint64_t yes = 0;
    std::uint64_t no = 0;
    std::uint64_t electorate = 0;
};

/// Votes from accounts that still hold the electorate role.
Tally tally(const LedgerState& state, const Proposal& proposal);
bool tally_passes(std::uint64_t yes, std::uint64_t electorate, std::uint64_t threshold_percent);
/// Passed, Failed, or Open when the outcome is not yet decided.
ProposalStatus decide(const Tally& t, std::uint64_t threshold_percent);

struct FinalizeOutcome {
    ProposalStatus status = ProposalStatus::Open;
    Status execution;
};

Result<FinalizeOutcome> finalize_proposal(LedgerState& state, const ExecContext& ctx, ProposalId id);
/// Finalizes every Open proposal that is decided or past expiry.
void finalize_due_proposals(LedgerState& state);

}  // namespace fiatchain
