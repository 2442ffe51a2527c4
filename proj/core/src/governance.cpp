#include "fiatchain/governance.hpp"

#include <algorithm>
#include <map>

#include "internal.hpp"

namespace fiatchain {

namespace {

const std::map<std::string_view, std::uint64_t>& defaults() {
    static const std::map<std::string_view, std::uint64_t> table = {
        {policy_keys::kBootstrapWindow, 10},
        {policy_keys::kVoteWindow, 10},
        {policy_keys::kVoteThreshold, 51},
        {policy_keys::kFreezeEnabled, 1},
        {policy_keys::kFreezeRequiresVote, 0},
        {policy_keys::kConfiscateEnabled, 1},
        {policy_keys::kConfiscateRequiresVote, 0},
        {policy_keys::kReverseEnabled, 1},
        {policy_keys::kReverseRequiresVote, 0},
        {policy_keys::kMintRequiresVote, 1},
        {policy_keys::kInterestRequiresVote, 1},
        {policy_keys::kRateCapacity, 10},
        {policy_keys::kRateRefill, 1},
        {policy_keys::kRateRefillDen, 1},
        {policy_keys::kDiversity, 50},
        {policy_keys::kMaxTxsPerBlock, 1000},
        {policy_keys::kDelayBlocks, 3},
    };
    return table;
}

Status check_policy_value(const SetPolicy& request) {
    const bool is_int = std::holds_alternative<std::uint64_t>(request.value);
    if (request.key == policy_keys::kRateWhitelist) {
        if (is_int || std::get<Bytes>(request.value).size() % 32 != 0)
            return {ErrorCode::MalformedPayload, "whitelist must be concatenated 32-byte ids"};
        return {};
    }
    if (!defaults().count(request.key)) return {};
    if (!is_int) return {ErrorCode::MalformedPayload, "integer policy expected"};
    auto v = std::get<std::uint64_t>(request.value);
    if (request.key == policy_keys::kVoteThreshold && (v < 1 || v > 100))
        return {ErrorCode::MalformedPayload, "threshold percent must be 1..100"};
    if (request.key == policy_keys::kDiversity && v > 100)
        return {ErrorCode::MalformedPayload, "diversity percent must be <= 100"};
    if ((request.key == policy_keys::kRateRefillDen || request.key == policy_keys::kRateCapacity ||
         request.key == policy_keys::kRateRefill || request.key == policy_keys::kMaxTxsPerBlock ||
         request.key == policy_keys::kVoteWindow) &&
        v == 0)
        return {ErrorCode::MalformedPayload, "value must be positive"};
    return {};
}

/// Authorization for PlatformManager-level actions (policies, non-user roles).
Status manager_gate(const LedgerState& state, const ExecContext& ctx, ErrorCode missing_role) {
    if (ctx.via_proposal) {
        if (ctx.electorate != Role::PlatformManager) return {missing_role};
        return {};
    }
    if (!state.has_role(ctx.actor, Role::PlatformManager)) return {missing_role};
    if (detail::manager_vote_required(state, ctx))
        return {ErrorCode::VoteRequired, "multiple platform managers: use a proposal"};
    return {};
}

bool validator_vote(const ExecContext& ctx) { return ctx.via_proposal && ctx.electorate == Role::Validator; }

void drop_validator(LedgerState& state, Account& account) {
    account.roles.remove(Role::Validator);
    state.validator_registry.erase(account.id);
}

}  // namespace

std::uint64_t policy_default(std::string_view key) {
    auto it = defaults().find(key);
    return it == defaults().end() ? 0 : it->second;
}

std::uint64_t policy_u64(const LedgerState& state, std::string_view key) {
    auto it = state.policies.find(std::string(key));
    if (it != state.policies.end())
        if (auto* v = std::get_if<std::uint64_t>(&it->second.value)) return *v;
    return policy_default(key);
}

std::vector<AccountId> policy_accounts(const LedgerState& state, std::string_view key) {
    std::vector<AccountId> out;
    auto it = state.policies.find(std::string(key));
    if (it == state.policies.end()) return out;
    auto* raw = std::get_if<Bytes>(&it->second.value);
    if (!raw) return out;
    for (std::size_t off = 0; off + 32 <= raw->size(); off += 32) {
        AccountId id;
        std::copy_n(raw->begin() + static_cast<std::ptrdiff_t>(off), 32, id.digest.bytes.begin());
        out.push_back(id);
    }
    return out;
}

Bytes encode_account_list(const std::vector<AccountId>& ids) {
    Bytes out;
    for (const auto& id : ids) out.insert(out.end(), id.digest.bytes.begin(), id.digest.bytes.end());
    return out;
}

bool is_mutable(const Policy& policy, Height height) {
    if (std::holds_alternative<PermanencePermanent>(policy.permanence)) return false;
    if (auto* timed = std::get_if<PermanenceTimed>(&policy.permanence)) return height >= timed->expiry_height;
    return true;
}

bool valid_policy_key(std::string_view key) {
    if (key.empty() || key.size() > 64 || key.front() == '.' || key.back() == '.') return false;
    char prev = 0;
    for (char c : key) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
        if (!ok || (c == '.' && prev == '.')) return false;
        prev = c;
    }
    return true;
}

Status set_policy(LedgerState& state, const ExecContext& ctx, const SetPolicy& request) {
    if (auto s = manager_gate(state, ctx, ErrorCode::NotPlatformManager); !s) return s;
    if (!valid_policy_key(request.key)) return {ErrorCode::MalformedPayload, "invalid policy key"};
    if (auto s = check_policy_value(request); !s) return s;
    auto it = state.policies.find(request.key);
    if (it != state.policies.end() && !is_mutable(it->second, state.height))
        return {ErrorCode::PolicyImmutable, request.key};

    state.policies[request.key] = Policy{request.key, request.value, request.permanence, ctx.actor, state.height};
    detail::log_action(state, ctx, "SetPolicy", {}, 0, true, request.key);
    return {};
}

Status assign_role(LedgerState& state, const ExecContext& ctx, const AssignRole& request) {
    if (request.role == Role::Validator) {
        if (!validator_vote(ctx)) return {ErrorCode::ValidatorRoleLocked, "validator role changes need a validator vote"};
    } else if (request.role == Role::User) {
        if (ctx.via_proposal || !state.has_role(ctx.actor, Role::AccountProvider))
            return {ErrorCode::NotAuthorizedForRole, "only account providers assign User"};
    } else if (auto s = manager_gate(state, ctx, ErrorCode::NotAuthorizedForRole); !s) {
        return s;
    }

    Account* existing = state.find(request.target);
    PublicKey key;
    if (existing) {
        key = existing->public_key;
    } else {
        if (!request.key) return {ErrorCode::UnknownAccount, "new account needs a public key"};
        auto derived = derive_account_id(*request.key);
        if (!derived) return derived.status();
        if (derived.value() != request.target) return {ErrorCode::MalformedPayload, "key does not match target"};
        key = *request.key;
    }

    if (request.role == Role::User) {
        if (!request.possession_proof ||
            !verify_signature(key, AssignRole::possession_bytes(request.target, ctx.actor), *request.possession_proof))
            return {ErrorCode::MissingPossessionProof};
    }

    RecoveryPolicy recovery = request.recovery.value_or(RecoveryPolicy{RecoveryProviderOnly{}});
    if (!existing)
        if (auto s = check_recovery(recovery, request.target); !s) return s;

    const bool by_provider = request.role == Role::User;
    if (!existing) {
        Account account;
        account.id = request.target;
        account.public_key = key;
        account.recovery = recovery;
        if (by_provider) account.provider = ctx.actor;
        existing = &state.accounts.emplace(request.target, std::move(account)).first->second;
    } else if (by_provider && !existing->provider) {
        existing->provider = ctx.actor;
    }
    existing->roles.add(request.role);
    detail::log_action(state, ctx, "AssignRole", {request.target}, 0, true, std::string(to_string(request.role)));
    return {};
}

Status revoke_role(LedgerState& state, const ExecContext& ctx, const RevokeRole& request) {
    Account* target = state.find(request.target);
    if (!target) return {ErrorCode::UnknownAccount};
    if (request.role == Role::Validator) {
        if (!validator_vote(ctx)) return {ErrorCode::ValidatorRoleLocked, "validator role changes need a validator vote"};
    } else if (request.role == Role::User) {
        if (ctx.via_proposal || !state.has_role(ctx.actor, Role::AccountProvider) || target->provider != ctx.actor)
            return {ErrorCode::NotAuthorizedForRole, "only the account's provider revokes User"};
    } else if (auto s = manager_gate(state, ctx, ErrorCode::NotAuthorizedForRole); !s) {
        return s;
    }
    if (!target->roles.has(request.role)) return {ErrorCode::RoleAbsent};
    if (request.role == Role::Validator && state.role_count(Role::Validator) == 1)
        return {ErrorCode::EmptyValidatorSet, "cannot remove the last validator"};

    if (request.role == Role::Validator)
        drop_validator(state, *target);
    else
        target->roles.remove(request.role);
    detail::log_action(state, ctx, "RevokeRole", {request.target}, 0, true, std::string(to_string(request.role)));
    return {};
}

Status bootstrap_set_validators(LedgerState& state, const ExecContext& ctx, const BootstrapValidators& request) {
    if (ctx.via_proposal || !state.has_role(ctx.actor, Role::PlatformManager)) return {ErrorCode::NotPlatformManager};
    if (state.height > policy_u64(state, policy_keys::kBootstrapWindow)) return {ErrorCode::BootstrapOver};
    if (request.validators.empty()) return {ErrorCode::EmptyValidatorSet};
    std::set<AccountId> wanted(request.validators.begin(), request.validators.end());
    for (const auto& id : wanted)
        if (!state.find(id)) return {ErrorCode::UnknownAccount, id.short_hex()};

    for (auto& [id, account] : state.accounts)
        if (account.roles.has(Role::Validator) && !wanted.count(id)) drop_validator(state, account);
    for (const auto& id : wanted) state.find(id)->roles.add(Role::Validator);
    detail::log_action(state, ctx, "BootstrapValidators", {wanted.begin(), wanted.end()}, 0, true);
    return {};
}

std::optional<Role> electorate_for(const Payload& action) {
    if (auto* p = action.as<AssignRole>()) {
        if (p->role == Role::Validator) return Role::Validator;
        if (p->role == Role::User) return std::nullopt;
        return Role::PlatformManager;
    }
    if (auto* p = action.as<RevokeRole>()) {
        if (p->role == Role::Validator) return Role::Validator;
        if (p->role == Role::User) return std::nullopt;
        return Role::PlatformManager;
    }
    if (action.as<SetPolicy>()) return Role::PlatformManager;
    if (action.as<SetFrozen>() || action.as<Confiscate>() || action.as<Reverse>()) return Role::SystemSecurity;
    if (action.as<Mint>() || action.as<Burn>() || action.as<SetInterestRule>()) return Role::CurrencyManager;
    return std::nullopt;
}

Result<ProposalId> create_proposal(LedgerState& state, const ExecContext& ctx, const CreateProposal& request) {
    if (!request.action) return Status(ErrorCode::MalformedPayload, "proposal without action");
    auto electorate = electorate_for(*request.action);
    if (!electorate || *electorate != request.electorate)
        return Status(ErrorCode::ActionNotVoteable, std::string(request.action->name()));
    if (!state.has_role(ctx.actor, request.electorate)) return Status(ErrorCode::NotEligibleProposer);

    Proposal proposal;
    proposal.id = state.next_proposal_id++;
    proposal.action = request.action;
    proposal.proposer = ctx.actor;
    proposal.electorate = request.electorate;
    proposal.created_at = state.height;
    proposal.expires_at = state.height + policy_u64(state, policy_keys::kVoteWindow);
    const ProposalId id = proposal.id;
    state.proposals.emplace(id, std::move(proposal));
    detail::log_action(state, ctx, "CreateProposal", {}, 0, true,
                       "#" + std::to_string(id) + " " + std::string(request.action->name()) + " electorate " +
                           std::string(to_string(request.electorate)));
    return id;
}

Status cast_vote(LedgerState& state, const ExecContext& ctx, const CastVote& request) {
    auto it = state.proposals.find(request.proposal);
    if (it == state.proposals.end()) return {ErrorCode::UnknownProposal};
    Proposal& p = it->second;
    if (p.status != ProposalStatus::Open || state.height > p.expires_at) return {ErrorCode::ProposalClosed};
    if (!state.has_role(ctx.actor, p.electorate)) return {ErrorCode::NotInElectorate};
    if (p.yes.count(ctx.actor) || p.no.count(ctx.actor)) return {ErrorCode::AlreadyVoted};

    (request.yes ? p.yes : p.no).insert(ctx.actor);
    detail::log_action(state, ctx, "CastVote", {}, 0, true,
                       "#" + std::to_string(request.proposal) + (request.yes ? " yes" : " no"));
    return {};
}

Tally tally(const LedgerState& state, const Proposal& proposal) {
    Tally t;
    t.electorate = state.role_count(proposal.electorate);
    for (const auto& v : proposal.yes)
        if (state.has_role(v, proposal.electorate)) ++t.yes;
    for (const auto& v : proposal.no)
        if (state.has_role(v, proposal.electorate)) ++t.no;
    return t;
}

bool tally_passes(std::uint64_t yes, std::uint64_t electorate, std::uint64_t threshold_percent) {
    if (electorate == 0 || threshold_percent == 0) return false;
    // threshold 51 => yes strictly above 50% of the electorate.
    return static_cast<unsigned __int128>(yes) * 100 >
           static_cast<unsigned __int128>(threshold_percent - 1) * electorate;
}

ProposalStatus decide(const Tally& t, std::uint64_t threshold_percent) {
    if (tally_passes(t.yes, t.electorate, threshold_percent)) return ProposalStatus::Passed;
    if (!tally_passes(t.electorate - std::min(t.no, t.electorate), t.electorate, threshold_percent))
        return ProposalStatus::Failed;
    return ProposalStatus::Open;
}

Result<FinalizeOutcome> finalize_proposal(LedgerState& state, const ExecContext& ctx, ProposalId id) {
    auto it = state.proposals.find(id);
    if (it == state.proposals.end()) return Status(ErrorCode::UnknownProposal);
    Proposal& p = it->second;
    if (p.status != ProposalStatus::Open) return Status(ErrorCode::AlreadyFinal);

    FinalizeOutcome outcome;
    outcome.status = decide(tally(state, p), policy_u64(state, policy_keys::kVoteThreshold));
    if (outcome.status == ProposalStatus::Open) {
        if (state.height <= p.expires_at) return Status(ErrorCode::ProposalUndecided);
        outcome.status = ProposalStatus::Expired;
    }
    p.status = outcome.status;

    std::string detail_text = "#" + std::to_string(id) + " " + std::string(to_string(outcome.status));
    if (outcome.status == ProposalStatus::Passed) {
        ExecContext exec{p.proposer, ctx.tx_id, true, p.electorate};
        auto action = p.action;  // keep alive independent of map mutation
        Outcome result = apply_payload(state, exec, *action);
        outcome.execution = result.status;
        if (!result.status) {
            state.proposals.at(id).execution_error = result.status.code();
            detail_text += " execution " + result.status.to_string();
        }
    }
    detail::log_action(state, ExecContext{ctx.actor, ctx.tx_id, false, std::nullopt}, "FinalizeProposal", {}, 0,
                       true, detail_text);
    return outcome;
}

void finalize_due_proposals(LedgerState& state) {
    const auto threshold = policy_u64(state, policy_keys::kVoteThreshold);
    std::vector<ProposalId> due;
    for (const auto& [id, p] : state.proposals) {
        if (p.status != ProposalStatus::Open) continue;
        if (decide(tally(state, p), threshold) != ProposalStatus::Open || state.height > p.expires_at)
            due.push_back(id);
    }
    for (ProposalId id : due) {
        // Earlier executions in this loop may have changed electorates; re-check.
        ExecContext ctx{AccountId{}, detail::system_event_id("finalize", id, state.height), false, std::nullopt};
        (void)finalize_proposal(state, ctx, id);
    }
}

}  // namespace fiatchain
