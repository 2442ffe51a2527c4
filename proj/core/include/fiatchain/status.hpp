#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace fiatchain {

// Every failure reason the engine can report. Names are part of the scenario
// file format (receipt assertions) so they must stay stable.
enum class ErrorCode : std::uint8_t {
    Ok = 0,
    // envelope / ledger-state
    InvalidKey,
    BadSignature,
    BadNonce,
    UnknownSender,
    NoRole,
    RecipientNotAuthorized,
    SenderFrozen,
    InsufficientFunds,
    ZeroAmount,
    NotSecurityRole,
    FeatureDisabled,
    VoteRequired,
    NotATransfer,
    AlreadyReversed,
    InsufficientRecipientFunds,
    InsufficientApprovals,
    UnknownAccount,
    ApproverNotEligible,
    MalformedPayload,
    Overflow,
    // governance
    NotPlatformManager,
    PolicyImmutable,
    NotAuthorizedForRole,
    ValidatorRoleLocked,
    MissingPossessionProof,
    RoleAbsent,
    BootstrapOver,
    EmptyValidatorSet,
    NotEligibleProposer,
    ActionNotVoteable,
    ProposalClosed,
    NotInElectorate,
    AlreadyVoted,
    UnknownProposal,
    AlreadyFinal,
    ProposalUndecided,
    // monetary
    NotCurrencyManager,
    NotAuthorizedConverter,
    UserFrozen,
    OverlappingRule,
    StartInPast,
    AlreadyAccrued,
    RuleInactive,
    UnknownRule,
    NotInScope,
    NothingToClaim,
    Frozen,
    PeriodNotYetAccrued,
    NotOwner,
    // consensus-chain
    NotValidator,
    MalformedRecord,
    NoEligiblePublisher,
    WrongPublisher,
    InvalidBlock,
    // gateway-net
    Malformed,
    Throttled,
    BadChallenge,
    InsufficientResponses,
    InvalidEvidence,
};

std::string_view to_string(ErrorCode code);
/// Inverse of to_string; returns false for unknown names.
bool parse_error_code(std::string_view name, ErrorCode& out);

class Status {
public:
    Status() = default;
    Status(ErrorCode code, std::string detail = {}) : code_(code), detail_(std::move(detail)) {}

    static Status ok() { return {}; }

    bool is_ok() const { return code_ == ErrorCode::Ok; }
    explicit operator bool() const { return is_ok(); }
    ErrorCode code() const { return code_; }
    const std::string& detail() const { return detail_; }
    std::string to_string() const;

private:
    ErrorCode code_ = ErrorCode::Ok;
    std::string detail_;
};

/// Value-or-error. `value()` on an error throws std::logic_error: callers are
/// expected to test first.
template <class T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(Status status) : v_(std::move(status)) {
        if (std::get<Status>(v_).is_ok()) throw std::logic_error("Result constructed from ok Status without value");
    }
    Result(ErrorCode code, std::string detail = {}) : Result(Status(code, std::move(detail))) {}

    bool is_ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return is_ok(); }

    const T& value() const& { return checked(); }
    T& value() & { return const_cast<T&>(checked()); }
    T&& value() && { return std::move(const_cast<T&>(checked())); }
    const T& operator*() const& { return value(); }
    const T* operator->() const { return &value(); }

    Status status() const { return is_ok() ? Status{} : std::get<Status>(v_); }
    ErrorCode code() const { return is_ok() ? ErrorCode::Ok : std::get<Status>(v_).code(); }

private:
    const T& checked() const {
        if (!is_ok()) throw std::logic_error("Result::value on error: " + std::get<Status>(v_).to_string());
        return std::get<T>(v_);
    }
    std::variant<T, Status> v_;
};

}  // namespace fiatchain
