#include "fiatchain/query.hpp"

#include <array>

namespace fiatchain {

namespace {
constexpr std::array<std::string_view, 7> kKindNames = {
    "balance", "history", "management-log", "supply", "directory", "validation-server", "claimable",
};
constexpr std::string_view kChallengeDomain = "fiatchain/query-challenge";
constexpr std::string_view kResponseDomain = "fiatchain/query-response";
}  // namespace

std::string_view to_string(QueryKind kind) {
    auto i = static_cast<std::size_t>(kind);
    return i < kKindNames.size() ? kKindNames[i] : std::string_view("unknown");
}

std::optional<QueryKind> parse_query_kind(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == name) return static_cast<QueryKind>(i);
    return std::nullopt;
}

void Query::encode(Encoder& enc) const {
    enc.u8(static_cast<std::uint8_t>(kind));
    subject.encode(enc);
    enc.u64(from_height);
    enc.u64(to_height);
}

Query Query::decode(Decoder& dec) {
    Query q;
    auto tag = dec.u8();
    if (tag >= kKindNames.size()) throw DecodeError("invalid query kind");
    q.kind = static_cast<QueryKind>(tag);
    q.subject = AccountId::decode(dec);
    q.from_height = dec.u64();
    q.to_height = dec.u64();
    return q;
}

void QueryEcho::encode(Encoder& enc) const {
    requester.encode(enc);
    query.encode(enc);
}

QueryEcho QueryEcho::decode(Decoder& dec) {
    QueryEcho e;
    e.requester = AccountId::decode(dec);
    e.query = Query::decode(dec);
    return e;
}

Bytes QueryRequest::signing_bytes(const QueryEcho& echo, ByteView challenge) {
    Encoder enc;
    enc.str(kChallengeDomain);
    echo.encode(enc);
    enc.bytes(challenge);
    return enc.take();
}

void QueryRequest::encode(Encoder& enc) const {
    echo.encode(enc);
    enc.bytes(challenge);
    enc.bytes(challenge_signature);
}

QueryRequest QueryRequest::decode(Decoder& dec) {
    QueryRequest r;
    r.echo = QueryEcho::decode(dec);
    r.challenge = dec.bytes();
    r.challenge_signature = dec.bytes();
    return r;
}

Bytes SignedQueryResponse::signing_bytes() const {
    Encoder enc;
    enc.str(kResponseDomain);
    gateway_validator.encode(enc);
    echo.encode(enc);
    enc.bytes(result);
    enc.u64(as_of_height);
    return enc.take();
}

void SignedQueryResponse::encode(Encoder& enc) const {
    gateway_validator.encode(enc);
    echo.encode(enc);
    enc.bytes(result);
    enc.u64(as_of_height);
    enc.bytes(signature);
}

SignedQueryResponse SignedQueryResponse::decode(Decoder& dec) {
    SignedQueryResponse r;
    r.gateway_validator = AccountId::decode(dec);
    r.echo = QueryEcho::decode(dec);
    r.result = dec.bytes();
    r.as_of_height = dec.u64();
    r.signature = dec.bytes();
    return r;
}

void DiscrepancyEvidence::encode(Encoder& enc) const {
    first.encode(enc);
    second.encode(enc);
}

DiscrepancyEvidence DiscrepancyEvidence::decode(Decoder& dec) {
    DiscrepancyEvidence e;
    e.first = SignedQueryResponse::decode(dec);
    e.second = SignedQueryResponse::decode(dec);
    return e;
}

}  // namespace fiatchain
