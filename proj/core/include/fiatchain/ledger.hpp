#pragma once

// The account/balance state machine. All mutation goes through
// apply_transaction (or apply_payload for proposal execution); every operation
// validates fully before touching state, so a failed operation leaves the
// state exactly as it found it.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fiatchain/payload.hpp"
#include "fiatchain/transaction.hpp"
#include "fiatchain/types.hpp"

namespace fiatchain {

struct LogEntry {
    TxId id;
    Height height = 0;
    std::string kind;
    AccountId actor;
    std::vector<AccountId> parties;
    Amount amount = 0;
    bool is_public = false;  // management records are public, fund movements private
    std::string detail;

    bool involves(const AccountId& account) const;
    void encode(Encoder& enc) const;
    static LogEntry decode(Decoder& dec);
    bool operator==(const LogEntry&) const = default;
};

struct TransferRecord {
    AccountId from;
    AccountId to;
    Amount amount = 0;
    bool reversed = false;
};

enum class ProposalStatus : std::uint8_t { Open = 0, Passed = 1, Failed = 2, Expired = 3 };
std::string_view to_string(ProposalStatus status);

struct Proposal {
    ProposalId id = 0;
    std::shared_ptr<const Payload> action;
    AccountId proposer;
    Role electorate = Role::Validator;
    std::set<AccountId> yes;
    std::set<AccountId> no;
    Height created_at = 0;
    Height expires_at = 0;
    ProposalStatus status = ProposalStatus::Open;
    std::optional<ErrorCode> execution_error;  // set when Passed but the action failed

    void encode(Encoder& enc) const;
};

struct LedgerState {
    std::map<AccountId, Account> accounts;
    std::map<std::string, Policy> policies;
    std::map<ProposalId, Proposal> proposals;
    ProposalId next_proposal_id = 1;
    std::map<RuleId, InterestRule> interest_rules;
    RuleId next_rule_id = 1;
    std::map<AccountId, std::map<RuleId, Allowance>> allowances;
    SupplyCounters supply;
    std::vector<LogEntry> tx_log;
    Height height = 0;
    std::map<AccountId, ValidatorRecord> validator_registry;
    std::map<TxId, TransferRecord> transfers;
    std::optional<AccountId> escrow;

    const Account* find(const AccountId& id) const;
    Account* find(const AccountId& id);
    bool has_role(const AccountId& id, Role role) const;
    std::size_t role_count(Role role) const;
    /// Validator-role holders in ascending AccountId order.
    std::vector<AccountId> validators() const;

    void encode(Encoder& enc) const;
    Hash256 digest() const;
};

/// Who is acting. Proposal execution runs with the authority of the passed
/// vote: role checks are replaced by the electorate check done at creation.
struct ExecContext {
    AccountId actor;
    TxId tx_id;
    bool via_proposal = false;
    std::optional<Role> electorate;
};

struct Outcome {
    Status status;
    std::optional<ProposalId> proposal_id;
    std::optional<Status> execution;  // FinalizeProposal that passed: result of running the action
};

struct Receipt {
    TxId tx_id;
    Status status;
    bool nonce_consumed = false;
    std::optional<ProposalId> proposal_id;
    std::optional<Status> execution;

    bool ok() const { return status.is_ok(); }
};

Receipt apply_transaction(LedgerState& state, const Transaction& tx);
Outcome apply_payload(LedgerState& state, const ExecContext& ctx, const Payload& payload);

Status transfer(LedgerState& state, const ExecContext& ctx, const AccountId& to, Amount amount);
Status set_frozen(LedgerState& state, const ExecContext& ctx, const AccountId& target, bool frozen);
Status confiscate(LedgerState& state, const ExecContext& ctx, const AccountId& from, const AccountId& to,
                  Amount amount);
Status reverse_transaction(LedgerState& state, const ExecContext& ctx, const TxId& target);
Status rotate_key(LedgerState& state, const ExecContext& ctx, const RotateKey& request);

Result<Amount> get_balance(const LedgerState& state, const AccountId& account);
Result<std::vector<LogEntry>> get_history(const LedgerState& state, const AccountId& account);
std::vector<LogEntry> management_log(const LedgerState& state, Height from, Height to);

/// Block-boundary processing: interest boundaries, then proposal finalization.
void finish_block(LedgerState& state);

Amount total_balances(const LedgerState& state);
/// Σ balances + Σ unclaimed accruals == minted − burned (and burned <= minted).
bool check_conservation(const LedgerState& state);

}  // namespace fiatchain
