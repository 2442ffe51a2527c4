#include "fiatchain/payload.hpp"

#include <array>

namespace fiatchain {

namespace {

constexpr std::array<std::string_view, std::variant_size_v<PayloadVariant>> kNames = {
    "Transfer",        "SetFrozen",        "Confiscate",   "Reverse",          "RotateKey",
    "SetPolicy",       "AssignRole",       "RevokeRole",   "BootstrapValidators", "CreateProposal",
    "CastVote",        "FinalizeProposal", "Mint",         "Burn",             "ConvertFiat",
    "SetInterestRule", "ClaimAllowance",   "RegisterEndpoints", "DiscrepancyEvent",
};

constexpr std::string_view kRotateDomain = "fiatchain/rotate-key";
constexpr std::string_view kPossessionDomain = "fiatchain/possession";

template <class T>
void encode_optional(Encoder& enc, const std::optional<T>& v, auto&& fn) {
    enc.boolean(v.has_value());
    if (v) fn(*v);
}

void encode_scope(Encoder& enc, const std::optional<std::set<AccountId>>& scope) {
    enc.boolean(scope.has_value());
    if (!scope) return;
    enc.u64(scope->size());
    for (const auto& a : *scope) a.encode(enc);
}

std::optional<std::set<AccountId>> decode_scope(Decoder& dec) {
    if (!dec.boolean()) return std::nullopt;
    std::set<AccountId> out;
    auto n = dec.count();
    for (std::uint64_t i = 0; i < n; ++i) out.insert(AccountId::decode(dec));
    return out;
}

struct PayloadEncoder {
    Encoder& enc;

    void operator()(const Transfer& p) {
        p.to.encode(enc);
        enc.u64(p.amount);
    }
    void operator()(const SetFrozen& p) {
        p.target.encode(enc);
        enc.boolean(p.frozen);
    }
    void operator()(const Confiscate& p) {
        p.from.encode(enc);
        p.to.encode(enc);
        enc.u64(p.amount);
    }
    void operator()(const Reverse& p) { p.target.encode(enc); }
    void operator()(const RotateKey& p) {
        p.target.encode(enc);
        p.new_key.encode(enc);
        enc.u64(p.approvals.size());
        for (const auto& a : p.approvals) {
            a.approver.encode(enc);
            enc.bytes(a.signature);
        }
    }
    void operator()(const SetPolicy& p) {
        enc.str(p.key);
        encode(enc, p.value);
        encode(enc, p.permanence);
    }
    void operator()(const AssignRole& p) {
        p.target.encode(enc);
        enc.u8(static_cast<std::uint8_t>(p.role));
        encode_optional(enc, p.key, [&](const PublicKey& k) { k.encode(enc); });
        encode_optional(enc, p.possession_proof, [&](const Signature& s) { enc.bytes(s); });
        encode_optional(enc, p.recovery, [&](const RecoveryPolicy& r) { encode(enc, r); });
    }
    void operator()(const RevokeRole& p) {
        p.target.encode(enc);
        enc.u8(static_cast<std::uint8_t>(p.role));
    }
    void operator()(const BootstrapValidators& p) {
        enc.u64(p.validators.size());
        for (const auto& v : p.validators) v.encode(enc);
    }
    void operator()(const CreateProposal& p) {
        p.action->encode(enc);
        enc.u8(static_cast<std::uint8_t>(p.electorate));
    }
    void operator()(const CastVote& p) {
        enc.u64(p.proposal);
        enc.boolean(p.yes);
    }
    void operator()(const FinalizeProposal& p) { enc.u64(p.proposal); }
    void operator()(const Mint& p) {
        p.to.encode(enc);
        enc.u64(p.amount);
    }
    void operator()(const Burn& p) {
        p.from.encode(enc);
        enc.u64(p.amount);
    }
    void operator()(const ConvertFiat& p) {
        p.user.encode(enc);
        enc.u8(static_cast<std::uint8_t>(p.direction));
        enc.u64(p.amount);
    }
    void operator()(const SetInterestRule& p) {
        enc.u64(p.rate_num);
        enc.u64(p.rate_den);
        enc.u64(p.period_blocks);
        enc.u64(p.start_height);
        enc.u8(static_cast<std::uint8_t>(p.mode));
        encode_scope(enc, p.scope);
    }
    void operator()(const ClaimAllowance& p) {
        enc.u64(p.rule);
        enc.u64(p.up_to_period);
    }
    void operator()(const RegisterEndpoints& p) { p.record.encode(enc); }
    void operator()(const DiscrepancyEvent& p) { p.evidence.encode(enc); }
};

Payload decode_payload(Decoder& dec, bool allow_proposal) {
    auto tag = dec.u8();
    switch (tag) {
        case 0: {
            Transfer p;
            p.to = AccountId::decode(dec);
            p.amount = dec.u64();
            return p;
        }
        case 1: {
            SetFrozen p;
            p.target = AccountId::decode(dec);
            p.frozen = dec.boolean();
            return p;
        }
        case 2: {
            Confiscate p;
            p.from = AccountId::decode(dec);
            p.to = AccountId::decode(dec);
            p.amount = dec.u64();
            return p;
        }
        case 3: return Reverse{TxId::decode(dec)};
        case 4: {
            RotateKey p;
            p.target = AccountId::decode(dec);
            p.new_key = PublicKey::decode(dec);
            auto n = dec.count();
            for (std::uint64_t i = 0; i < n; ++i) {
                Approval a;
                a.approver = AccountId::decode(dec);
                a.signature = dec.bytes();
                p.approvals.push_back(std::move(a));
            }
            return p;
        }
        case 5: {
            SetPolicy p;
            p.key = dec.str();
            p.value = decode_policy_value(dec);
            p.permanence = decode_permanence(dec);
            return p;
        }
        case 6: {
            AssignRole p;
            p.target = AccountId::decode(dec);
            p.role = decode_role(dec);
            if (dec.boolean()) p.key = PublicKey::decode(dec);
            if (dec.boolean()) p.possession_proof = dec.bytes();
            if (dec.boolean()) p.recovery = decode_recovery(dec);
            return p;
        }
        case 7: {
            RevokeRole p;
            p.target = AccountId::decode(dec);
            p.role = decode_role(dec);
            return p;
        }
        case 8: {
            BootstrapValidators p;
            auto n = dec.count();
            for (std::uint64_t i = 0; i < n; ++i) p.validators.push_back(AccountId::decode(dec));
            return p;
        }
        case 9: {
            if (!allow_proposal) throw DecodeError("nested proposal");
            CreateProposal p;
            p.action = std::make_shared<const Payload>(decode_payload(dec, false));
            p.electorate = decode_role(dec);
            return p;
        }
        case 10: {
            CastVote p;
            p.proposal = dec.u64();
            p.yes = dec.boolean();
            return p;
        }
        case 11: return FinalizeProposal{dec.u64()};
        case 12: {
            Mint p;
            p.to = AccountId::decode(dec);
            p.amount = dec.u64();
            return p;
        }
        case 13: {
            Burn p;
            p.from = AccountId::decode(dec);
            p.amount = dec.u64();
            return p;
        }
        case 14: {
            ConvertFiat p;
            p.user = AccountId::decode(dec);
            auto d = dec.u8();
            if (d > 1) throw DecodeError("invalid fiat direction");
            p.direction = static_cast<FiatDirection>(d);
            p.amount = dec.u64();
            return p;
        }
        case 15: {
            SetInterestRule p;
            p.rate_num = dec.u64();
            p.rate_den = dec.u64();
            p.period_blocks = dec.u64();
            p.start_height = dec.u64();
            auto m = dec.u8();
            if (m > 1) throw DecodeError("invalid accrual mode");
            p.mode = static_cast<AccrualMode>(m);
            p.scope = decode_scope(dec);
            return p;
        }
        case 16: {
            ClaimAllowance p;
            p.rule = dec.u64();
            p.up_to_period = dec.u64();
            return p;
        }
        case 17: return RegisterEndpoints{ValidatorRecord::decode(dec)};
        case 18: return DiscrepancyEvent{DiscrepancyEvidence::decode(dec)};
    }
    throw DecodeError("unknown payload tag " + std::to_string(tag));
}

}  // namespace

bool CreateProposal::operator==(const CreateProposal& other) const {
    if (electorate != other.electorate) return false;
    if (!action || !other.action) return action == other.action;
    return *action == *other.action;
}

Bytes RotateKey::approval_bytes(const AccountId& target, const PublicKey& current, const PublicKey& next) {
    Encoder enc;
    enc.str(kRotateDomain);
    target.encode(enc);
    current.encode(enc);
    next.encode(enc);
    return enc.take();
}

Bytes AssignRole::possession_bytes(const AccountId& target, const AccountId& provider) {
    Encoder enc;
    enc.str(kPossessionDomain);
    target.encode(enc);
    provider.encode(enc);
    return enc.take();
}

std::string_view payload_name(std::uint8_t tag) { return tag < kNames.size() ? kNames[tag] : "Unknown"; }

std::string_view Payload::name() const { return payload_name(tag()); }

void Payload::encode(Encoder& enc) const {
    if (auto* p = as<CreateProposal>(); p && !p->action) throw std::invalid_argument("proposal without action");
    enc.u8(tag());
    std::visit(PayloadEncoder{enc}, value);
}

Payload Payload::decode(Decoder& dec) { return decode_payload(dec, true); }

bool is_management(const Payload& payload) {
    return !(payload.as<Transfer>() || payload.as<ClaimAllowance>() || payload.as<ConvertFiat>());
}

}  // namespace fiatchain
