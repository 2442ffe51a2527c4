#include "fiatchain/gateway.hpp"

#include <algorithm>
#include <limits>

#include "fiatchain/governance.hpp"
#include "internal.hpp"

namespace fiatchain {

RateConfig RateConfig::from_policies(const LedgerState& state) {
    RateConfig c;
    c.capacity = policy_u64(state, policy_keys::kRateCapacity);
    c.refill_num = policy_u64(state, policy_keys::kRateRefill);
    c.refill_den = std::max<std::uint64_t>(1, policy_u64(state, policy_keys::kRateRefillDen));
    return c;
}

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    auto wide = static_cast<unsigned __int128>(a) * b;
    return wide > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                             : static_cast<std::uint64_t>(wide);
}

}  // namespace

bool RateLimiter::check(const AccountId& sender, Tick tick, bool whitelisted, const RateConfig& config) {
    if (whitelisted) return true;
    const std::uint64_t den = std::max<std::uint64_t>(1, config.refill_den);
    const std::uint64_t cap = sat_mul(config.capacity, den);
    auto [it, fresh] = buckets_.try_emplace(sender, Bucket{cap, tick});
    Bucket& b = it->second;
    if (!fresh && tick > b.last) {
        std::uint64_t add = sat_mul(tick - b.last, config.refill_num);
        b.scaled = (cap - std::min(cap, b.scaled) < add) ? cap : b.scaled + add;
        b.last = tick;
    }
    b.scaled = std::min(b.scaled, cap);
    if (b.scaled < den) return false;
    b.scaled -= den;
    return true;
}

std::uint64_t RateLimiter::tokens(const AccountId& sender, const RateConfig& config) const {
    auto it = buckets_.find(sender);
    if (it == buckets_.end()) return config.capacity;
    return it->second.scaled / std::max<std::uint64_t>(1, config.refill_den);
}

Admission SecurityGateway::admit(ByteView raw, Tick tick, const LedgerState& snapshot) {
    Transaction tx;
    try {
        tx = Transaction::decode(raw);
    } catch (const DecodeError& e) {
        return {Status(ErrorCode::Malformed, e.what()), std::nullopt};
    }
    const Account* sender = snapshot.find(tx.sender);
    if (!sender) return {Status(ErrorCode::UnknownSender), std::nullopt};
    if (sender->roles.empty()) return {Status(ErrorCode::NoRole), std::nullopt};
    if (!verify_signature(sender->public_key, tx.signing_bytes(), tx.signature))
        return {Status(ErrorCode::BadSignature), std::nullopt};
    auto whitelist = policy_accounts(snapshot, policy_keys::kRateWhitelist);
    bool whitelisted = std::find(whitelist.begin(), whitelist.end(), tx.sender) != whitelist.end();
    if (!limiter_.check(tx.sender, tick, whitelisted, RateConfig::from_policies(snapshot)))
        return {Status(ErrorCode::Throttled), std::nullopt};
    return {Status(), std::move(tx)};
}

// Visibility -----------------------------------------------------------------

Status check_visibility(const LedgerState& state, const QueryEcho& echo) {
    switch (echo.query.kind) {
        case QueryKind::OwnBalance:
        case QueryKind::OwnHistory:
        case QueryKind::Claimable:
            if (echo.query.subject != echo.requester) return {ErrorCode::NotOwner};
            if (!state.find(echo.query.subject)) return {ErrorCode::UnknownAccount};
            return {};
        case QueryKind::ManagementLog:
        case QueryKind::SupplyView:
        case QueryKind::GatewayDirectory:
            return {};
        case QueryKind::ValidationServerAddress:
            if (!state.has_role(echo.requester, Role::Validator)) return {ErrorCode::NotValidator};
            return {};
    }
    return {ErrorCode::Malformed, "unknown query kind"};
}

Status authorize_query(const QueryRequest& request, const LedgerState& state) {
    const Account* requester = state.find(request.echo.requester);
    if (!requester) return {ErrorCode::BadChallenge, "unknown requester"};
    if (!verify_signature(requester->public_key, QueryRequest::signing_bytes(request.echo, request.challenge),
                          request.challenge_signature))
        return {ErrorCode::BadChallenge, "challenge signature"};
    return check_visibility(state, request.echo);
}

Answer compute_answer(const LedgerState& state, const QueryEcho& echo) {
    const Query& q = echo.query;
    switch (q.kind) {
        case QueryKind::OwnBalance: {
            const Account* a = state.find(q.subject);
            return Amount{a ? a->balance : 0};
        }
        case QueryKind::OwnHistory: {
            auto h = get_history(state, q.subject);
            return h ? h.value() : std::vector<LogEntry>{};
        }
        case QueryKind::ManagementLog:
            return management_log(state, q.from_height, q.to_height);
        case QueryKind::SupplyView:
            return supply_view(state);
        case QueryKind::GatewayDirectory: {
            const bool privileged = state.has_role(echo.requester, Role::Validator);
            std::vector<DirectoryEntry> out;
            for (const auto& [id, record] : state.validator_registry) {
                DirectoryEntry e{record, !privileged};
                if (e.server_redacted) e.record.validation_server.clear();
                out.push_back(std::move(e));
            }
            return out;
        }
        case QueryKind::ValidationServerAddress: {
            auto it = state.validator_registry.find(q.subject);
            return it == state.validator_registry.end() ? std::string{} : it->second.validation_server;
        }
        case QueryKind::Claimable: {
            auto c = claimable_amount(state, echo.requester, q.subject);
            return Amount{c ? c.value() : 0};
        }
    }
    return std::string{};
}

Bytes encode_answer(const Answer& answer) {
    Encoder enc;
    enc.u8(static_cast<std::uint8_t>(answer.index()));
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Amount>) {
                enc.u64(v);
            } else if constexpr (std::is_same_v<T, std::vector<LogEntry>>) {
                enc.u64(v.size());
                for (const auto& e : v) e.encode(enc);
            } else if constexpr (std::is_same_v<T, SupplyView>) {
                enc.u64(v.counters.minted);
                enc.u64(v.counters.burned);
                enc.u64(v.created_per_rule.size());
                for (const auto& [rule, amount] : v.created_per_rule) {
                    enc.u64(rule);
                    enc.u64(amount);
                }
            } else if constexpr (std::is_same_v<T, std::vector<DirectoryEntry>>) {
                enc.u64(v.size());
                for (const auto& e : v) {
                    e.record.encode(enc);
                    enc.boolean(e.server_redacted);
                }
            } else {
                enc.str(v);
            }
        },
        answer);
    return enc.take();
}

std::optional<Amount> decode_amount_answer(ByteView result) {
    try {
        Decoder dec(result);
        if (dec.u8() != 0) return std::nullopt;
        Amount v = dec.u64();
        dec.expect_end();
        return v;
    } catch (const DecodeError&) {
        return std::nullopt;
    }
}

Bytes VisibilityGateway::issue_challenge() {
    Encoder enc;
    enc.str("fiatchain/challenge");
    validator_.encode(enc);
    enc.u64(++challenge_counter_);
    enc.bytes(view_key_.public_key().bytes);
    auto digest = sha256(enc.data());
    Bytes challenge(digest.bytes.begin(), digest.bytes.end());
    outstanding_.insert(challenge);
    return challenge;
}

Result<SignedQueryResponse> VisibilityGateway::answer(const QueryRequest& request) {
    if (!snapshot_) return Status(ErrorCode::Malformed, "gateway has no snapshot");
    if (outstanding_.erase(request.challenge) == 0) return Status(ErrorCode::BadChallenge, "unknown or used challenge");
    if (auto s = authorize_query(request, *snapshot_); !s) return s;

    Answer result = compute_answer(*snapshot_, request.echo);
    SignedQueryResponse response;
    response.gateway_validator = validator_;
    response.echo = request.echo;
    if (faults_.corrupt_results) {
        if (auto* amount = std::get_if<Amount>(&result)) {
            *amount += faults_.corrupt_delta;
            response.result = encode_answer(result);
        } else {
            response.result = encode_answer(result);
            response.result.push_back(0xff);
        }
    } else {
        response.result = encode_answer(result);
    }
    response.as_of_height = snapshot_->height;
    response.signature = view_key_.sign(response.signing_bytes());
    return response;
}

QueryRequest make_query_request(const QueryEcho& echo, Bytes challenge, const KeyPair& requester_key) {
    QueryRequest request;
    request.echo = echo;
    request.challenge_signature = requester_key.sign(QueryRequest::signing_bytes(echo, challenge));
    request.challenge = std::move(challenge);
    return request;
}

bool verify_response(const SignedQueryResponse& response, const LedgerState& registry) {
    auto it = registry.validator_registry.find(response.gateway_validator);
    if (it == registry.validator_registry.end()) return false;
    return verify_signature(it->second.view_key, response.signing_bytes(), response.signature);
}

// Comparator -----------------------------------------------------------------

Result<Comparison> compare_responses(std::span<const SignedQueryResponse> responses, Height head,
                                     Height delay_window, const LedgerState& registry) {
    std::vector<const SignedQueryResponse*> valid;
    std::set<AccountId> distinct;
    for (const auto& r : responses)
        if (verify_response(r, registry)) {
            valid.push_back(&r);
            distinct.insert(r.gateway_validator);
        }
    if (distinct.size() < 2) return Status(ErrorCode::InsufficientResponses);

    // Group by (echo, as_of_height); only settled heights are comparable.
    std::map<std::pair<Bytes, Height>, std::vector<const SignedQueryResponse*>> groups;
    for (const auto* r : valid) {
        if (r->as_of_height > head || head - r->as_of_height < delay_window) continue;
        Encoder enc;
        r->echo.encode(enc);
        groups[{enc.take(), r->as_of_height}].push_back(r);
    }
    for (auto& [key, group] : groups) {
        std::sort(group.begin(), group.end(), [](const auto* a, const auto* b) {
            return std::tie(a->gateway_validator, a->result) < std::tie(b->gateway_validator, b->result);
        });
        std::map<Bytes, std::size_t> counts;
        for (const auto* r : group) ++counts[r->result];
        if (counts.size() < 2) continue;
        // Majority result; ties go to the lexicographically smallest.
        const Bytes* majority = nullptr;
        std::size_t best = 0;
        for (const auto& [result, n] : counts)
            if (n > best) {
                best = n;
                majority = &result;
            }
        for (const auto* outlier : group) {
            if (outlier->result == *majority) continue;
            for (const auto* rep : group)
                if (rep->result == *majority && rep->gateway_validator != outlier->gateway_validator)
                    return Comparison{DiscrepancyEvidence{*rep, *outlier}};
        }
    }
    return Comparison{Consistent{}};
}

Status verify_evidence(const DiscrepancyEvidence& evidence, const LedgerState& registry) {
    const auto& a = evidence.first;
    const auto& b = evidence.second;
    if (!verify_response(a, registry) || !verify_response(b, registry))
        return {ErrorCode::InvalidEvidence, "signature"};
    if (a.gateway_validator == b.gateway_validator) return {ErrorCode::InvalidEvidence, "same validator"};
    if (a.echo != b.echo) return {ErrorCode::InvalidEvidence, "different queries"};
    if (a.as_of_height != b.as_of_height) return {ErrorCode::InvalidEvidence, "different heights"};
    if (a.result == b.result) return {ErrorCode::InvalidEvidence, "answers agree"};
    if (a.as_of_height > registry.height) return {ErrorCode::InvalidEvidence, "height in the future"};
    return {};
}

Result<Transaction> file_discrepancy(const DiscrepancyEvidence& evidence, const AccountId& submitter,
                                     std::uint64_t nonce, const KeyPair& submitter_key,
                                     const LedgerState& registry) {
    if (auto s = verify_evidence(evidence, registry); !s) return s;
    return make_transaction(submitter, nonce, Payload{DiscrepancyEvent{evidence}}, submitter_key);
}

Status record_discrepancy(LedgerState& state, const ExecContext& ctx, const DiscrepancyEvent& event) {
    if (auto s = verify_evidence(event.evidence, state); !s) return s;
    const auto& e = event.evidence;
    detail::log_action(state, ctx, "DiscrepancyEvent", {e.first.gateway_validator, e.second.gateway_validator}, 0,
                       true,
                       std::string(to_string(e.first.echo.query.kind)) + " as of " +
                           std::to_string(e.first.as_of_height));
    return {};
}

}  // namespace fiatchain
