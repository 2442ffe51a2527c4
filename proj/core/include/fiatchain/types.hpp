#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fiatchain/bytes.hpp"
#include "fiatchain/codec.hpp"
#include "fiatchain/crypto.hpp"
#include "fiatchain/status.hpp"

namespace fiatchain {

using Amount = std::uint64_t;   // minor currency units
using Height = std::uint64_t;
using Tick = std::uint64_t;
using ProposalId = std::uint64_t;
using RuleId = std::uint64_t;

/// Ledger identity: sha256 of the canonical encoding of the account's
/// original public key. Survives key rotation.
struct AccountId {
    Hash256 digest;

    std::string hex() const { return digest.hex(); }
    std::string short_hex() const { return digest.hex().substr(0, 12); }
    static std::optional<AccountId> from_hex(std::string_view hex);

    void encode(Encoder& enc) const { enc.hash(digest); }
    static AccountId decode(Decoder& dec) { return {dec.hash()}; }

    auto operator<=>(const AccountId&) const = default;
};

Result<AccountId> derive_account_id(const PublicKey& key);

struct TxId {
    Hash256 digest;

    std::string hex() const { return digest.hex(); }
    void encode(Encoder& enc) const { enc.hash(digest); }
    static TxId decode(Decoder& dec) { return {dec.hash()}; }

    auto operator<=>(const TxId&) const = default;
};

enum class Role : std::uint8_t {
    PlatformManager = 0,
    AccountProvider = 1,
    SystemSecurity = 2,
    User = 3,
    CurrencyManager = 4,
    Validator = 5,
};

inline constexpr std::array<Role, 6> kAllRoles = {
    Role::PlatformManager, Role::AccountProvider, Role::SystemSecurity,
    Role::User,            Role::CurrencyManager, Role::Validator,
};

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view name);
Role decode_role(Decoder& dec);

class RoleSet {
public:
    RoleSet() = default;
    RoleSet(std::initializer_list<Role> roles) {
        for (Role r : roles) add(r);
    }

    bool has(Role r) const { return bits_ & bit(r); }
    void add(Role r) { bits_ |= bit(r); }
    void remove(Role r) { bits_ &= static_cast<std::uint8_t>(~bit(r)); }
    bool empty() const { return bits_ == 0; }
    std::uint8_t bits() const { return bits_; }
    std::vector<Role> list() const;

    static RoleSet from_bits(std::uint8_t bits);

    bool operator==(const RoleSet&) const = default;

private:
    static std::uint8_t bit(Role r) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(r)); }
    std::uint8_t bits_ = 0;
};

struct RecoveryProviderOnly {
    bool operator==(const RecoveryProviderOnly&) const = default;
};
struct RecoveryGuardians {
    std::set<AccountId> guardians;
    std::uint64_t threshold = 1;
    bool operator==(const RecoveryGuardians&) const = default;
};
struct RecoveryProviderPlusSecurity {
    bool operator==(const RecoveryProviderPlusSecurity&) const = default;
};
using RecoveryPolicy = std::variant<RecoveryProviderOnly, RecoveryGuardians, RecoveryProviderPlusSecurity>;

void encode(Encoder& enc, const RecoveryPolicy& policy);
RecoveryPolicy decode_recovery(Decoder& dec);
/// Guardians: 1 <= threshold <= |guardians| and the owner is not a guardian.
Status check_recovery(const RecoveryPolicy& policy, const AccountId& owner);

struct Account {
    AccountId id;
    PublicKey public_key;
    RoleSet roles;
    Amount balance = 0;
    bool frozen = false;
    RecoveryPolicy recovery = RecoveryProviderOnly{};
    std::uint64_t nonce = 0;
    std::optional<AccountId> provider;

    void encode(Encoder& enc) const;
};

// Policies -------------------------------------------------------------------

using PolicyValue = std::variant<std::uint64_t, Bytes>;

struct PermanencePermanent {
    bool operator==(const PermanencePermanent&) const = default;
};
struct PermanenceTemporary {
    bool operator==(const PermanenceTemporary&) const = default;
};
struct PermanenceTimed {
    Height expiry_height = 0;
    bool operator==(const PermanenceTimed&) const = default;
};
using Permanence = std::variant<PermanencePermanent, PermanenceTemporary, PermanenceTimed>;

void encode(Encoder& enc, const PolicyValue& value);
PolicyValue decode_policy_value(Decoder& dec);
void encode(Encoder& enc, const Permanence& permanence);
Permanence decode_permanence(Decoder& dec);

struct Policy {
    std::string key;
    PolicyValue value;
    Permanence permanence = PermanenceTemporary{};
    AccountId set_by;
    Height set_at = 0;

    void encode(Encoder& enc) const;
};

// Monetary -------------------------------------------------------------------

struct SupplyCounters {
    Amount minted = 0;
    Amount burned = 0;

    Amount circulating() const { return minted - burned; }
    bool operator==(const SupplyCounters&) const = default;
};

enum class AccrualMode : std::uint8_t { Push = 0, Pull = 1 };

struct InterestRule {
    RuleId id = 0;
    std::uint64_t rate_num = 0;
    std::uint64_t rate_den = 1;
    std::uint64_t period_blocks = 1;
    Height start_height = 0;
    AccrualMode mode = AccrualMode::Push;
    std::optional<std::set<AccountId>> scope;  // nullopt: all users
    bool active = true;
    std::uint64_t last_period = 0;  // highest boundary index already accrued
    Amount created_total = 0;

    Height boundary(std::uint64_t period) const { return start_height + period * period_blocks; }
    bool in_scope(const AccountId& id) const { return !scope || scope->count(id) != 0; }
    void encode(Encoder& enc) const;
};

struct Allowance {
    std::uint64_t last_claimed_period = 0;
    std::map<std::uint64_t, Amount> accrued;  // period index -> recorded amount

    Amount unclaimed() const;
};

// Consensus ------------------------------------------------------------------

struct ValidatorRecord {
    AccountId account;
    std::vector<std::string> security_gateways;
    std::vector<std::string> visibility_gateways;
    std::string validation_server;
    PublicKey view_key;
    std::string contact;

    void encode(Encoder& enc) const;
    static ValidatorRecord decode(Decoder& dec);
    bool operator==(const ValidatorRecord&) const = default;
};

}  // namespace fiatchain
