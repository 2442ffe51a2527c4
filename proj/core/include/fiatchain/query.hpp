#pragma once

// Wire types shared by the visibility gateways and the on-chain discrepancy
// event. Gateway behavior lives in gateway.hpp.

#include <cstdint>
#include <optional>
#include <string_view>

#include "fiatchain/types.hpp"

namespace fiatchain {

enum class QueryKind : std::uint8_t {
    OwnBalance = 0,
    OwnHistory = 1,
    ManagementLog = 2,
    SupplyView = 3,
    GatewayDirectory = 4,
    ValidationServerAddress = 5,
    Claimable = 6,
};

std::string_view to_string(QueryKind kind);
std::optional<QueryKind> parse_query_kind(std::string_view name);

struct Query {
    QueryKind kind = QueryKind::OwnBalance;
    // OwnBalance/OwnHistory/Claimable: the account asked about.
    // ValidationServerAddress: the validator. Unused otherwise.
    AccountId subject;
    // ManagementLog: inclusive height range.
    Height from_height = 0;
    Height to_height = 0;

    void encode(Encoder& enc) const;
    static Query decode(Decoder& dec);
    bool operator==(const Query&) const = default;
};

/// What a gateway echoes back: who asked and what.
struct QueryEcho {
    AccountId requester;
    Query query;

    void encode(Encoder& enc) const;
    static QueryEcho decode(Decoder& dec);
    bool operator==(const QueryEcho&) const = default;
};

struct QueryRequest {
    QueryEcho echo;
    Bytes challenge;
    Signature challenge_signature;

    /// Bytes the requester signs to prove key possession for this challenge.
    static Bytes signing_bytes(const QueryEcho& echo, ByteView challenge);
    void encode(Encoder& enc) const;
    static QueryRequest decode(Decoder& dec);
};

struct SignedQueryResponse {
    AccountId gateway_validator;
    QueryEcho echo;
    Bytes result;
    Height as_of_height = 0;
    Signature signature;  // under the validator's registered view key

    Bytes signing_bytes() const;
    void encode(Encoder& enc) const;
    static SignedQueryResponse decode(Decoder& dec);
    bool operator==(const SignedQueryResponse&) const = default;
};

struct DiscrepancyEvidence {
    SignedQueryResponse first;
    SignedQueryResponse second;

    void encode(Encoder& enc) const;
    static DiscrepancyEvidence decode(Decoder& dec);
    bool operator==(const DiscrepancyEvidence&) const = default;
};

}  // namespace fiatchain
