#include "fiatchain/types.hpp"

namespace fiatchain {

std::optional<AccountId> AccountId::from_hex(std::string_view hex) {
    auto h = Hash256::from_hex(hex);
    if (!h) return std::nullopt;
    return AccountId{*h};
}

Result<AccountId> derive_account_id(const PublicKey& key) {
    if (!key.well_formed()) return Status(ErrorCode::InvalidKey, "malformed public key");
    Encoder enc;
    key.encode(enc);
    return AccountId{sha256(enc.data())};
}

std::string_view to_string(Role role) {
    switch (role) {
        case Role::PlatformManager: return "PlatformManager";
        case Role::AccountProvider: return "AccountProvider";
        case Role::SystemSecurity: return "SystemSecurity";
        case Role::User: return "User";
        case Role::CurrencyManager: return "CurrencyManager";
        case Role::Validator: return "Validator";
    }
    return "Unknown";
}

std::optional<Role> parse_role(std::string_view name) {
    for (Role r : kAllRoles)
        if (to_string(r) == name) return r;
    return std::nullopt;
}

Role decode_role(Decoder& dec) {
    auto tag = dec.u8();
    if (tag > static_cast<std::uint8_t>(Role::Validator)) throw DecodeError("invalid role tag");
    return static_cast<Role>(tag);
}

std::vector<Role> RoleSet::list() const {
    std::vector<Role> out;
    for (Role r : kAllRoles)
        if (has(r)) out.push_back(r);
    return out;
}

RoleSet RoleSet::from_bits(std::uint8_t bits) {
    if (bits >= 1u << kAllRoles.size()) throw DecodeError("invalid role bits");
    RoleSet s;
    s.bits_ = bits;
    return s;
}

void encode(Encoder& enc, const RecoveryPolicy& policy) {
    enc.u8(static_cast<std::uint8_t>(policy.index()));
    if (auto* g = std::get_if<RecoveryGuardians>(&policy)) {
        enc.u64(g->guardians.size());
        for (const auto& id : g->guardians) id.encode(enc);
        enc.u64(g->threshold);
    }
}

RecoveryPolicy decode_recovery(Decoder& dec) {
    switch (dec.u8()) {
        case 0: return RecoveryProviderOnly{};
        case 1: {
            RecoveryGuardians g;
            auto n = dec.count();
            for (std::uint64_t i = 0; i < n; ++i) g.guardians.insert(AccountId::decode(dec));
            g.threshold = dec.u64();
            return g;
        }
        case 2: return RecoveryProviderPlusSecurity{};
    }
    throw DecodeError("invalid recovery policy tag");
}

Status check_recovery(const RecoveryPolicy& policy, const AccountId& owner) {
    if (auto* g = std::get_if<RecoveryGuardians>(&policy)) {
        if (g->threshold < 1 || g->threshold > g->guardians.size())
            return {ErrorCode::MalformedPayload, "guardian threshold out of range"};
        if (g->guardians.count(owner)) return {ErrorCode::MalformedPayload, "account cannot guard itself"};
    }
    return {};
}

void Account::encode(Encoder& enc) const {
    id.encode(enc);
    public_key.encode(enc);
    enc.u8(roles.bits());
    enc.u64(balance);
    enc.boolean(frozen);
    fiatchain::encode(enc, recovery);
    enc.u64(nonce);
    enc.boolean(provider.has_value());
    if (provider) provider->encode(enc);
}

void encode(Encoder& enc, const PolicyValue& value) {
    enc.u8(static_cast<std::uint8_t>(value.index()));
    if (auto* n = std::get_if<std::uint64_t>(&value))
        enc.u64(*n);
    else
        enc.bytes(std::get<Bytes>(value));
}

PolicyValue decode_policy_value(Decoder& dec) {
    switch (dec.u8()) {
        case 0: return dec.u64();
        case 1: return dec.bytes();
    }
    throw DecodeError("invalid policy value tag");
}

void encode(Encoder& enc, const Permanence& permanence) {
    enc.u8(static_cast<std::uint8_t>(permanence.index()));
    if (auto* t = std::get_if<PermanenceTimed>(&permanence)) enc.u64(t->expiry_height);
}

Permanence decode_permanence(Decoder& dec) {
    switch (dec.u8()) {
        case 0: return PermanencePermanent{};
        case 1: return PermanenceTemporary{};
        case 2: return PermanenceTimed{dec.u64()};
    }
    throw DecodeError("invalid permanence tag");
}

void Policy::encode(Encoder& enc) const {
    enc.str(key);
    fiatchain::encode(enc, value);
    fiatchain::encode(enc, permanence);
    set_by.encode(enc);
    enc.u64(set_at);
}

void InterestRule::encode(Encoder& enc) const {
    enc.u64(id);
    enc.u64(rate_num);
    enc.u64(rate_den);
    enc.u64(period_blocks);
    enc.u64(start_height);
    enc.u8(static_cast<std::uint8_t>(mode));
    enc.boolean(scope.has_value());
    if (scope) {
        enc.u64(scope->size());
        for (const auto& a : *scope) a.encode(enc);
    }
    enc.boolean(active);
    enc.u64(last_period);
    enc.u64(created_total);
}

Amount Allowance::unclaimed() const {
    Amount sum = 0;
    for (auto it = accrued.upper_bound(last_claimed_period); it != accrued.end(); ++it) sum += it->second;
    return sum;
}

void ValidatorRecord::encode(Encoder& enc) const {
    account.encode(enc);
    enc.u64(security_gateways.size());
    for (const auto& s : security_gateways) enc.str(s);
    enc.u64(visibility_gateways.size());
    for (const auto& s : visibility_gateways) enc.str(s);
    enc.str(validation_server);
    view_key.encode(enc);
    enc.str(contact);
}

ValidatorRecord ValidatorRecord::decode(Decoder& dec) {
    ValidatorRecord r;
    r.account = AccountId::decode(dec);
    auto n = dec.count();
    for (std::uint64_t i = 0; i < n; ++i) r.security_gateways.push_back(dec.str());
    n = dec.count();
    for (std::uint64_t i = 0; i < n; ++i) r.visibility_gateways.push_back(dec.str());
    r.validation_server = dec.str();
    r.view_key = PublicKey::decode(dec);
    r.contact = dec.str();
    return r;
}

}  // namespace fiatchain
