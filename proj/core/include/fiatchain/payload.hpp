#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "fiatchain/query.hpp"
#include "fiatchain/types.hpp"

namespace fiatchain {

// Transaction payloads. The variant index is the 1-byte wire tag, so the order
// of alternatives in `Payload` is frozen.

struct Transfer {
    AccountId to;
    Amount amount = 0;
    bool operator==(const Transfer&) const = default;
};

struct SetFrozen {
    AccountId target;
    bool frozen = true;
    bool operator==(const SetFrozen&) const = default;
};

struct Confiscate {
    AccountId from;
    AccountId to;
    Amount amount = 0;
    bool operator==(const Confiscate&) const = default;
};

struct Reverse {
    TxId target;
    bool operator==(const Reverse&) const = default;
};

struct Approval {
    AccountId approver;
    Signature signature;
    bool operator==(const Approval&) const = default;
};

struct RotateKey {
    AccountId target;
    PublicKey new_key;
    std::vector<Approval> approvals;

    /// What each approver signs: target, its current key and the new key.
    static Bytes approval_bytes(const AccountId& target, const PublicKey& current, const PublicKey& next);
    bool operator==(const RotateKey&) const = default;
};

struct SetPolicy {
    std::string key;
    PolicyValue value;
    Permanence permanence = PermanenceTemporary{};
    bool operator==(const SetPolicy&) const = default;
};

struct AssignRole {
    AccountId target;
    Role role = Role::User;
    std::optional<PublicKey> key;                 // required when the account does not exist yet
    std::optional<Signature> possession_proof;    // required for Role::User
    std::optional<RecoveryPolicy> recovery;       // applied on account creation

    /// Message the target key signs to prove possession to `provider`.
    static Bytes possession_bytes(const AccountId& target, const AccountId& provider);
    bool operator==(const AssignRole&) const = default;
};

struct RevokeRole {
    AccountId target;
    Role role = Role::User;
    bool operator==(const RevokeRole&) const = default;
};

struct BootstrapValidators {
    std::vector<AccountId> validators;
    bool operator==(const BootstrapValidators&) const = default;
};

struct Payload;

struct CreateProposal {
    std::shared_ptr<const Payload> action;
    Role electorate = Role::Validator;
    bool operator==(const CreateProposal& other) const;
};

struct CastVote {
    ProposalId proposal = 0;
    bool yes = true;
    bool operator==(const CastVote&) const = default;
};

struct FinalizeProposal {
    ProposalId proposal = 0;
    bool operator==(const FinalizeProposal&) const = default;
};

struct Mint {
    AccountId to;
    Amount amount = 0;
    bool operator==(const Mint&) const = default;
};

struct Burn {
    AccountId from;
    Amount amount = 0;
    bool operator==(const Burn&) const = default;
};

enum class FiatDirection : std::uint8_t { In = 0, Out = 1 };

struct ConvertFiat {
    AccountId user;
    FiatDirection direction = FiatDirection::In;
    Amount amount = 0;
    bool operator==(const ConvertFiat&) const = default;
};

struct SetInterestRule {
    std::uint64_t rate_num = 0;
    std::uint64_t rate_den = 1;
    std::uint64_t period_blocks = 1;
    Height start_height = 0;
    AccrualMode mode = AccrualMode::Push;
    std::optional<std::set<AccountId>> scope;
    bool operator==(const SetInterestRule&) const = default;
};

struct ClaimAllowance {
    RuleId rule = 0;
    std::uint64_t up_to_period = 0;
    bool operator==(const ClaimAllowance&) const = default;
};

struct RegisterEndpoints {
    ValidatorRecord record;
    bool operator==(const RegisterEndpoints&) const = default;
};

struct DiscrepancyEvent {
    DiscrepancyEvidence evidence;
    bool operator==(const DiscrepancyEvent&) const = default;
};

using PayloadVariant =
    std::variant<Transfer, SetFrozen, Confiscate, Reverse, RotateKey, SetPolicy, AssignRole, RevokeRole,
                 BootstrapValidators, CreateProposal, CastVote, FinalizeProposal, Mint, Burn, ConvertFiat,
                 SetInterestRule, ClaimAllowance, RegisterEndpoints, DiscrepancyEvent>;

struct Payload {
    PayloadVariant value;

    template <class T>
        requires(!std::is_same_v<std::decay_t<T>, Payload> && std::is_constructible_v<PayloadVariant, T>)
    Payload(T v) : value(std::move(v)) {}

    std::uint8_t tag() const { return static_cast<std::uint8_t>(value.index()); }
    std::string_view name() const;
    void encode(Encoder& enc) const;
    static Payload decode(Decoder& dec);

    template <class T>
    const T* as() const { return std::get_if<T>(&value); }

    bool operator==(const Payload&) const = default;
};

std::string_view payload_name(std::uint8_t tag);

/// Management actions are logged publicly; fund movements between users are not.
bool is_management(const Payload& payload);

}  // namespace fiatchain
