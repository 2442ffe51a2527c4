#pragma once

// Scenario parsing helpers shared by scenario.cpp and sim.cpp. Not installed.

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "fiatchain/sim.hpp"

namespace fiatchain::sim::detail {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg);

/// Strict reader for one JSON object: unknown members are rejected up front.
class Fields {
public:
    Fields(const Json& j, std::string path, std::initializer_list<std::string_view> allowed);

    bool has(std::string_view key) const;
    const Json& raw(std::string_view key) const;
    std::string at(std::string_view key) const { return path_ + "." + std::string(key); }
    const std::string& path() const { return path_; }

    std::string str(std::string_view key) const;
    std::optional<std::string> opt_str(std::string_view key) const;
    std::uint64_t u64(std::string_view key) const;
    std::uint64_t u64_or(std::string_view key, std::uint64_t fallback) const;
    std::optional<std::uint64_t> opt_u64(std::string_view key) const;
    bool boolean_or(std::string_view key, bool fallback) const;
    std::vector<std::string> str_list(std::string_view key) const;
    Role role(std::string_view key) const;

private:
    const Json& j_;
    std::string path_;
};

std::uint64_t as_u64(const Json& j, const std::string& path);
Role as_role(const Json& j, const std::string& path);

/// Name and key lookups the payload builder needs. The loader implements it
/// to validate references; the runner implements it against live state.
class PayloadEnv {
public:
    virtual ~PayloadEnv() = default;
    virtual AccountId id(const std::string& name, const std::string& path) const = 0;
    virtual const KeyPair& key(const std::string& name) const = 0;
    virtual TxId tx(const std::string& label, const std::string& path) const = 0;
    virtual bool exists(const AccountId& id) const = 0;
    virtual KeyScheme scheme() const = 0;

    std::string sender;  // actor submitting the payload being built
};

Payload build_payload(const Json& j, const std::string& path, const PayloadEnv& env);
RecoveryPolicy build_recovery(const Json& j, const std::string& path, const PayloadEnv& env);
FaultProfile build_faults(const Json& j, const std::string& path, FaultProfile base);


/// Schema check for one assertion body; evaluation lives in sim.cpp.
void check_assert(const Json& j, const std::string& path, const PayloadEnv& env,
                  const std::vector<std::string>& tx_labels, const std::vector<std::string>& query_labels);

}  // namespace fiatchain::sim::detail
