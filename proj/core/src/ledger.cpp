#include "fiatchain/ledger.hpp"

#include <algorithm>

#include "fiatchain/chain.hpp"
#include "fiatchain/gateway.hpp"
#include "fiatchain/governance.hpp"
#include "fiatchain/monetary.hpp"
#include "internal.hpp"

namespace fiatchain {

namespace detail {

void log_action(LedgerState& state, const ExecContext& ctx, std::string_view kind, std::vector<AccountId> parties,
                Amount amount, bool is_public, std::string detail) {
    if (ctx.via_proposal) detail += detail.empty() ? "via proposal" : " (via proposal)";
    state.tx_log.push_back(LogEntry{ctx.tx_id, state.height, std::string(kind), ctx.actor, std::move(parties),
                                    amount, is_public, std::move(detail)});
}

TxId system_event_id(std::string_view kind, std::uint64_t a, std::uint64_t b) {
    Encoder enc;
    enc.str("fiatchain/system-event");
    enc.str(kind);
    enc.u64(a);
    enc.u64(b);
    return TxId{sha256(enc.data())};
}

bool manager_vote_required(const LedgerState& state, const ExecContext& ctx) {
    if (ctx.via_proposal && ctx.electorate == Role::PlatformManager) return false;
    return state.role_count(Role::PlatformManager) > 1;
}

}  // namespace detail

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

enum class SecurityAction { Freeze, Confiscate, Reverse };

Status security_gate(const LedgerState& state, const ExecContext& ctx, SecurityAction action) {
    std::string_view enabled_key, vote_key;
    switch (action) {
        case SecurityAction::Freeze:
            enabled_key = policy_keys::kFreezeEnabled;
            vote_key = policy_keys::kFreezeRequiresVote;
            break;
        case SecurityAction::Confiscate:
            enabled_key = policy_keys::kConfiscateEnabled;
            vote_key = policy_keys::kConfiscateRequiresVote;
            break;
        case SecurityAction::Reverse:
            enabled_key = policy_keys::kReverseEnabled;
            vote_key = policy_keys::kReverseRequiresVote;
            break;
    }
    if (!ctx.via_proposal && !state.has_role(ctx.actor, Role::SystemSecurity))
        return {ErrorCode::NotSecurityRole, "actor lacks SystemSecurity role"};
    if (policy_u64(state, enabled_key) == 0) return {ErrorCode::FeatureDisabled, std::string(enabled_key)};
    if (!ctx.via_proposal && policy_u64(state, vote_key) != 0)
        return {ErrorCode::VoteRequired, std::string(vote_key)};
    return {};
}

}  // namespace

bool LogEntry::involves(const AccountId& account) const {
    return actor == account || std::find(parties.begin(), parties.end(), account) != parties.end();
}

void LogEntry::encode(Encoder& enc) const {
    id.encode(enc);
    enc.u64(height);
    enc.str(kind);
    actor.encode(enc);
    enc.u64(parties.size());
    for (const auto& p : parties) p.encode(enc);
    enc.u64(amount);
    enc.boolean(is_public);
    enc.str(detail);
}

LogEntry LogEntry::decode(Decoder& dec) {
    LogEntry e;
    e.id = TxId::decode(dec);
    e.height = dec.u64();
    e.kind = dec.str();
    e.actor = AccountId::decode(dec);
    auto n = dec.count();
    for (std::uint64_t i = 0; i < n; ++i) e.parties.push_back(AccountId::decode(dec));
    e.amount = dec.u64();
    e.is_public = dec.boolean();
    e.detail = dec.str();
    return e;
}

std::string_view to_string(ProposalStatus status) {
    switch (status) {
        case ProposalStatus::Open: return "Open";
        case ProposalStatus::Passed: return "Passed";
        case ProposalStatus::Failed: return "Failed";
        case ProposalStatus::Expired: return "Expired";
    }
    return "Unknown";
}

void Proposal::encode(Encoder& enc) const {
    enc.u64(id);
    action->encode(enc);
    proposer.encode(enc);
    enc.u8(static_cast<std::uint8_t>(electorate));
    enc.u64(yes.size());
    for (const auto& v : yes) v.encode(enc);
    enc.u64(no.size());
    for (const auto& v : no) v.encode(enc);
    enc.u64(created_at);
    enc.u64(expires_at);
    enc.u8(static_cast<std::uint8_t>(status));
    enc.boolean(execution_error.has_value());
    if (execution_error) enc.u8(static_cast<std::uint8_t>(*execution_error));
}

const Account* LedgerState::find(const AccountId& id) const {
    auto it = accounts.find(id);
    return it == accounts.end() ? nullptr : &it->second;
}

Account* LedgerState::find(const AccountId& id) {
    auto it = accounts.find(id);
    return it == accounts.end() ? nullptr : &it->second;
}

bool LedgerState::has_role(const AccountId& id, Role role) const {
    const auto* a = find(id);
    return a && a->roles.has(role);
}

std::size_t LedgerState::role_count(Role role) const {
    return static_cast<std::size_t>(
        std::count_if(accounts.begin(), accounts.end(), [&](const auto& kv) { return kv.second.roles.has(role); }));
}

std::vector<AccountId> LedgerState::validators() const {
    std::vector<AccountId> out;
    for (const auto& [id, account] : accounts)
        if (account.roles.has(Role::Validator)) out.push_back(id);
    return out;
}

void LedgerState::encode(Encoder& enc) const {
    enc.u64(accounts.size());
    for (const auto& [id, a] : accounts) a.encode(enc);
    enc.u64(policies.size());
    for (const auto& [k, p] : policies) p.encode(enc);
    enc.u64(proposals.size());
    for (const auto& [id, p] : proposals) p.encode(enc);
    enc.u64(next_proposal_id);
    enc.u64(interest_rules.size());
    for (const auto& [id, r] : interest_rules) r.encode(enc);
    enc.u64(next_rule_id);
    enc.u64(allowances.size());
    for (const auto& [account, rules] : allowances) {
        account.encode(enc);
        enc.u64(rules.size());
        for (const auto& [rule, allowance] : rules) {
            enc.u64(rule);
            enc.u64(allowance.last_claimed_period);
            enc.u64(allowance.accrued.size());
            for (const auto& [period, amount] : allowance.accrued) {
                enc.u64(period);
                enc.u64(amount);
            }
        }
    }
    enc.u64(supply.minted);
    enc.u64(supply.burned);
    enc.u64(tx_log.size());
    for (const auto& e : tx_log) e.encode(enc);
    enc.u64(height);
    enc.u64(validator_registry.size());
    for (const auto& [id, r] : validator_registry) r.encode(enc);
    enc.u64(transfers.size());
    for (const auto& [id, t] : transfers) {
        id.encode(enc);
        t.from.encode(enc);
        t.to.encode(enc);
        enc.u64(t.amount);
        enc.boolean(t.reversed);
    }
    enc.boolean(escrow.has_value());
    if (escrow) escrow->encode(enc);
}

Hash256 LedgerState::digest() const {
    Encoder enc;
    encode(enc);
    return sha256(enc.data());
}

Receipt apply_transaction(LedgerState& state, const Transaction& tx) {
    Receipt receipt;
    receipt.tx_id = tx.id();

    const Account* sender = state.find(tx.sender);
    if (!sender) {
        receipt.status = {ErrorCode::UnknownSender};
        return receipt;
    }
    if (!verify_signature(sender->public_key, tx.signing_bytes(), tx.signature)) {
        receipt.status = {ErrorCode::BadSignature};
        return receipt;
    }
    if (tx.nonce != sender->nonce) {
        receipt.status = {ErrorCode::BadNonce, "expected " + std::to_string(sender->nonce)};
        return receipt;
    }
    if (sender->roles.empty()) {
        receipt.status = {ErrorCode::NoRole};
        return receipt;
    }

    ExecContext ctx{tx.sender, receipt.tx_id, false, std::nullopt};
    Outcome outcome = apply_payload(state, ctx, tx.payload);
    // Accounts are never deleted, so the sender is still present.
    state.find(tx.sender)->nonce += 1;
    receipt.nonce_consumed = true;
    receipt.status = std::move(outcome.status);
    receipt.proposal_id = outcome.proposal_id;
    receipt.execution = std::move(outcome.execution);
    return receipt;
}

Outcome apply_payload(LedgerState& state, const ExecContext& ctx, const Payload& payload) {
    Outcome out;
    out.status = std::visit(
        Overloaded{
            [&](const Transfer& p) { return transfer(state, ctx, p.to, p.amount); },
            [&](const SetFrozen& p) { return set_frozen(state, ctx, p.target, p.frozen); },
            [&](const Confiscate& p) { return confiscate(state, ctx, p.from, p.to, p.amount); },
            [&](const Reverse& p) { return reverse_transaction(state, ctx, p.target); },
            [&](const RotateKey& p) { return rotate_key(state, ctx, p); },
            [&](const SetPolicy& p) { return set_policy(state, ctx, p); },
            [&](const AssignRole& p) { return assign_role(state, ctx, p); },
            [&](const RevokeRole& p) { return revoke_role(state, ctx, p); },
            [&](const BootstrapValidators& p) { return bootstrap_set_validators(state, ctx, p); },
            [&](const CreateProposal& p) {
                auto r = create_proposal(state, ctx, p);
                if (r) out.proposal_id = r.value();
                return r.status();
            },
            [&](const CastVote& p) { return cast_vote(state, ctx, p); },
            [&](const FinalizeProposal& p) {
                auto r = finalize_proposal(state, ctx, p.proposal);
                if (r && r->status == ProposalStatus::Passed) out.execution = r->execution;
                return r.status();
            },
            [&](const Mint& p) { return mint(state, ctx, p); },
            [&](const Burn& p) { return burn(state, ctx, p); },
            [&](const ConvertFiat& p) { return convert_fiat(state, ctx, p); },
            [&](const SetInterestRule& p) { return set_interest_rule(state, ctx, p).status(); },
            [&](const ClaimAllowance& p) { return claim_allowance(state, ctx, p); },
            [&](const RegisterEndpoints& p) { return register_endpoints(state, ctx, p); },
            [&](const DiscrepancyEvent& p) { return record_discrepancy(state, ctx, p); },
        },
        payload.value);
    return out;
}

Status transfer(LedgerState& state, const ExecContext& ctx, const AccountId& to, Amount amount) {
    Account* from = state.find(ctx.actor);
    if (!from) return {ErrorCode::UnknownAccount, "sender"};
    if (!from->roles.has(Role::User)) return {ErrorCode::NoRole, "sender lacks User role"};
    if (from->frozen) return {ErrorCode::SenderFrozen};
    if (amount == 0) return {ErrorCode::ZeroAmount};
    Account* dest = state.find(to);
    if (!dest || !dest->roles.has(Role::User)) return {ErrorCode::RecipientNotAuthorized};
    if (from->balance < amount) return {ErrorCode::InsufficientFunds};

    if (from != dest) {
        from->balance -= amount;
        dest->balance += amount;
    }
    state.transfers[ctx.tx_id] = TransferRecord{ctx.actor, to, amount, false};
    detail::log_action(state, ctx, "Transfer", {ctx.actor, to}, amount, false);
    return {};
}

Status set_frozen(LedgerState& state, const ExecContext& ctx, const AccountId& target, bool frozen) {
    if (auto s = security_gate(state, ctx, SecurityAction::Freeze); !s) return s;
    Account* account = state.find(target);
    if (!account) return {ErrorCode::UnknownAccount};
    account->frozen = frozen;
    detail::log_action(state, ctx, "SetFrozen", {target}, 0, true, frozen ? "frozen" : "unfrozen");
    return {};
}

Status confiscate(LedgerState& state, const ExecContext& ctx, const AccountId& from, const AccountId& to,
                  Amount amount) {
    if (auto s = security_gate(state, ctx, SecurityAction::Confiscate); !s) return s;
    if (amount == 0) return {ErrorCode::ZeroAmount};
    Account* src = state.find(from);
    Account* dest = state.find(to);
    if (!src || !dest) return {ErrorCode::UnknownAccount};
    if (from == to) return {ErrorCode::MalformedPayload, "source equals destination"};
    bool to_escrow = state.escrow && *state.escrow == to;
    if (!to_escrow) {
        if (!ctx.via_proposal) return {ErrorCode::VoteRequired, "confiscation outside escrow needs a proposal"};
        if (!dest->roles.has(Role::User)) return {ErrorCode::RecipientNotAuthorized};
    }
    if (src->balance < amount) return {ErrorCode::InsufficientFunds};

    src->balance -= amount;
    dest->balance += amount;
    detail::log_action(state, ctx, "Confiscate", {from, to}, amount, true);
    return {};
}

Status reverse_transaction(LedgerState& state, const ExecContext& ctx, const TxId& target) {
    if (auto s = security_gate(state, ctx, SecurityAction::Reverse); !s) return s;
    auto it = state.transfers.find(target);
    if (it == state.transfers.end()) return {ErrorCode::NotATransfer};
    TransferRecord& record = it->second;
    if (record.reversed) return {ErrorCode::AlreadyReversed};
    Account* recipient = state.find(record.to);
    Account* original = state.find(record.from);
    if (recipient->balance < record.amount) return {ErrorCode::InsufficientRecipientFunds};

    recipient->balance -= record.amount;
    original->balance += record.amount;
    record.reversed = true;
    detail::log_action(state, ctx, "Reverse", {record.from, record.to}, record.amount, true,
                       "reverses " + target.hex());
    return {};
}

Status rotate_key(LedgerState& state, const ExecContext& ctx, const RotateKey& request) {
    Account* target = state.find(request.target);
    if (!target) return {ErrorCode::UnknownAccount};
    if (!request.new_key.well_formed()) return {ErrorCode::InvalidKey};
    if (request.new_key == target->public_key) return {ErrorCode::MalformedPayload, "key unchanged"};

    const Bytes message = RotateKey::approval_bytes(request.target, target->public_key, request.new_key);
    const auto& recovery = target->recovery;
    std::set<AccountId> approvers;
    bool security_approved = false;
    for (const auto& approval : request.approvals) {
        const Account* approver = state.find(approval.approver);
        if (!approver) return {ErrorCode::ApproverNotEligible, "unknown approver"};
        bool is_provider = target->provider && *target->provider == approval.approver;
        bool is_security = approver->roles.has(Role::SystemSecurity) && !is_provider;
        bool eligible = std::visit(Overloaded{
                                       [&](const RecoveryProviderOnly&) { return is_provider; },
                                       [&](const RecoveryGuardians& g) { return g.guardians.count(approval.approver) > 0; },
                                       [&](const RecoveryProviderPlusSecurity&) { return is_provider || is_security; },
                                   },
                                   recovery);
        if (!eligible) return {ErrorCode::ApproverNotEligible, approval.approver.short_hex()};
        if (!verify_signature(approver->public_key, message, approval.signature))
            return {ErrorCode::BadSignature, "approval from " + approval.approver.short_hex()};
        approvers.insert(approval.approver);
        security_approved = security_approved || is_security;
    }

    bool provider_approved = target->provider && approvers.count(*target->provider);
    bool sufficient = std::visit(Overloaded{
                                     [&](const RecoveryProviderOnly&) { return provider_approved; },
                                     [&](const RecoveryGuardians& g) { return approvers.size() >= g.threshold; },
                                     [&](const RecoveryProviderPlusSecurity&) {
                                         return provider_approved && security_approved;
                                     },
                                 },
                                 recovery);
    if (!sufficient) return {ErrorCode::InsufficientApprovals};

    target->public_key = request.new_key;
    detail::log_action(state, ctx, "RotateKey", {request.target}, 0, true);
    return {};
}

Result<Amount> get_balance(const LedgerState& state, const AccountId& account) {
    const Account* a = state.find(account);
    if (!a) return Status(ErrorCode::UnknownAccount);
    return a->balance;
}

Result<std::vector<LogEntry>> get_history(const LedgerState& state, const AccountId& account) {
    if (!state.find(account)) return Status(ErrorCode::UnknownAccount);
    std::vector<LogEntry> out;
    for (const auto& e : state.tx_log)
        if (e.involves(account)) out.push_back(e);
    return out;
}

std::vector<LogEntry> management_log(const LedgerState& state, Height from, Height to) {
    std::vector<LogEntry> out;
    for (const auto& e : state.tx_log)
        if (e.is_public && e.height >= from && e.height <= to) out.push_back(e);
    return out;
}

void finish_block(LedgerState& state) {
    process_boundaries(state);
    finalize_due_proposals(state);
}

Amount total_balances(const LedgerState& state) {
    Amount sum = 0;
    for (const auto& [id, a] : state.accounts) sum += a.balance;
    return sum;
}

bool check_conservation(const LedgerState& state) {
    if (state.supply.burned > state.supply.minted) return false;
    unsigned __int128 held = 0;
    for (const auto& [id, a] : state.accounts) held += a.balance;
    held += unclaimed_total(state);
    return held == static_cast<unsigned __int128>(state.supply.minted - state.supply.burned);
}

}  // namespace fiatchain
