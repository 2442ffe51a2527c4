#include "fiatchain/status.hpp"

#include <array>

namespace fiatchain {

namespace {

constexpr std::array<std::string_view, 60> kNames = {
    "Ok",
    "InvalidKey",
    "BadSignature",
    "BadNonce",
    "UnknownSender",
    "NoRole",
    "RecipientNotAuthorized",
    "SenderFrozen",
    "InsufficientFunds",
    "ZeroAmount",
    "NotSecurityRole",
    "FeatureDisabled",
    "VoteRequired",
    "NotATransfer",
    "AlreadyReversed",
    "InsufficientRecipientFunds",
    "InsufficientApprovals",
    "UnknownAccount",
    "ApproverNotEligible",
    "MalformedPayload",
    "Overflow",
    "NotPlatformManager",
    "PolicyImmutable",
    "NotAuthorizedForRole",
    "ValidatorRoleLocked",
    "MissingPossessionProof",
    "RoleAbsent",
    "BootstrapOver",
    "EmptyValidatorSet",
    "NotEligibleProposer",
    "ActionNotVoteable",
    "ProposalClosed",
    "NotInElectorate",
    "AlreadyVoted",
    "UnknownProposal",
    "AlreadyFinal",
    "ProposalUndecided",
    "NotCurrencyManager",
    "NotAuthorizedConverter",
    "UserFrozen",
    "OverlappingRule",
    "StartInPast",
    "AlreadyAccrued",
    "RuleInactive",
    "UnknownRule",
    "NotInScope",
    "NothingToClaim",
    "Frozen",
    "PeriodNotYetAccrued",
    "NotOwner",
    "NotValidator",
    "MalformedRecord",
    "NoEligiblePublisher",
    "WrongPublisher",
    "InvalidBlock",
    "Malformed",
    "Throttled",
    "BadChallenge",
    "InsufficientResponses",
    "InvalidEvidence",
};

}  // namespace

std::string_view to_string(ErrorCode code) {
    auto i = static_cast<std::size_t>(code);
    return i < kNames.size() ? kNames[i] : std::string_view("Unknown");
}

bool parse_error_code(std::string_view name, ErrorCode& out) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) {
            out = static_cast<ErrorCode>(i);
            return true;
        }
    }
    return false;
}

std::string Status::to_string() const {
    std::string s(fiatchain::to_string(code_));
    if (!detail_.empty()) s += ": " + detail_;
    return s;
}

}  // namespace fiatchain
