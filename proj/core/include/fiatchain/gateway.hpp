#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fiatchain/ledger.hpp"
#include "fiatchain/monetary.hpp"
#include "fiatchain/query.hpp"

namespace fiatchain {

// Security gateway: admission and rate limiting ------------------------------

struct RateConfig {
    std::uint64_t capacity = 10;
    std::uint64_t refill_num = 1;  // tokens per tick = refill_num / refill_den
    std::uint64_t refill_den = 1;

    static RateConfig from_policies(const LedgerState& state);
};

/// Per-sender token bucket. Tokens are stored scaled by refill_den so the
/// refill rate can be any positive rational without rounding.
class RateLimiter {
public:
    /// Refills for the ticks elapsed since the sender's last check, then
    /// consumes one token. Whitelisted senders always pass and consume nothing.
    bool check(const AccountId& sender, Tick tick, bool whitelisted, const RateConfig& config);
    /// Current token count (unscaled, rounded down); full capacity for unseen senders.
    std::uint64_t tokens(const AccountId& sender, const RateConfig& config) const;

private:
    struct Bucket {
        std::uint64_t scaled = 0;
        Tick last = 0;
    };
    std::map<AccountId, Bucket> buckets_;
};

struct Admission {
    Status status;  // Ok, Malformed, UnknownSender, NoRole, BadSignature or Throttled
    std::optional<Transaction> tx;

    bool accepted() const { return status.is_ok(); }
};

class SecurityGateway {
public:
    explicit SecurityGateway(AccountId validator) : validator_(validator) {}

    /// Total over byte inputs. Checks run cheapest-first and the rate bucket is
    /// only charged for otherwise valid transactions.
    Admission admit(ByteView raw, Tick tick, const LedgerState& snapshot);

    const AccountId& validator() const { return validator_; }

private:
    AccountId validator_;
    RateLimiter limiter_;
};

// Visibility gateway ---------------------------------------------------------

struct DirectoryEntry {
    ValidatorRecord record;  // validation_server emptied when redacted
    bool server_redacted = true;
    bool operator==(const DirectoryEntry&) const = default;
};

using Answer = std::variant<Amount, std::vector<LogEntry>, SupplyView, std::vector<DirectoryEntry>, std::string>;

/// Ownership and role rules, without the key-possession check.
Status check_visibility(const LedgerState& state, const QueryEcho& echo);
/// Challenge signature under the requester's current key, then visibility.
Status authorize_query(const QueryRequest& request, const LedgerState& state);

/// Answer computed from `state` as seen by `requester`. Callers authorize first.
Answer compute_answer(const LedgerState& state, const QueryEcho& echo);
Bytes encode_answer(const Answer& answer);
/// Balance/Claimable results are a single 8-byte integer.
std::optional<Amount> decode_amount_answer(ByteView result);

struct GatewayFaults {
    bool corrupt_results = false;
    Amount corrupt_delta = 100;
};

class VisibilityGateway {
public:
    VisibilityGateway(AccountId validator, KeyPair view_key)
        : validator_(validator), view_key_(std::move(view_key)) {}

    void refresh(std::shared_ptr<const LedgerState> snapshot) { snapshot_ = std::move(snapshot); }
    void set_faults(GatewayFaults faults) { faults_ = faults; }
    const GatewayFaults& faults() const { return faults_; }
    const AccountId& validator() const { return validator_; }

    /// Fresh single-use challenge nonce.
    Bytes issue_challenge();
    Result<SignedQueryResponse> answer(const QueryRequest& request);

private:
    AccountId validator_;
    KeyPair view_key_;
    std::shared_ptr<const LedgerState> snapshot_;
    std::set<Bytes> outstanding_;
    std::uint64_t challenge_counter_ = 0;
    GatewayFaults faults_;
};

QueryRequest make_query_request(const QueryEcho& echo, Bytes challenge, const KeyPair& requester_key);

/// Signature check against the view key in the validator registry.
bool verify_response(const SignedQueryResponse& response, const LedgerState& registry);

// Client comparator ----------------------------------------------------------

struct Consistent {
    bool operator==(const Consistent&) const = default;
};
using Comparison = std::variant<Consistent, DiscrepancyEvidence>;

/// Drops responses with bad signatures, ignores those newer than
/// head - delay_window, and reports the first conflicting pair with equal
/// echo and as_of_height: a majority answer against an outlier.
Result<Comparison> compare_responses(std::span<const SignedQueryResponse> responses, Height head,
                                     Height delay_window, const LedgerState& registry);

Status verify_evidence(const DiscrepancyEvidence& evidence, const LedgerState& registry);

/// Builds the signed DiscrepancyEvent transaction after checking the evidence.
Result<Transaction> file_discrepancy(const DiscrepancyEvidence& evidence, const AccountId& submitter,
                                     std::uint64_t nonce, const KeyPair& submitter_key,
                                     const LedgerState& registry);

/// On-chain handling of DiscrepancyEvent: re-verifies and records a public log entry.
Status record_discrepancy(LedgerState& state, const ExecContext& ctx, const DiscrepancyEvent& event);

}  // namespace fiatchain
