#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fiatchain/ledger.hpp"

namespace fiatchain {

struct GenesisAccount {
    std::string label;  // human-readable name, public
    PublicKey key;
    RoleSet roles;
    Amount balance = 0;
    RecoveryPolicy recovery = RecoveryProviderOnly{};
    std::optional<AccountId> provider;

    void encode(Encoder& enc) const;
    static GenesisAccount decode(Decoder& dec);
};

struct GenesisConfig {
    std::vector<GenesisAccount> accounts;
    std::vector<SetPolicy> policies;
    std::vector<AccountId> validators;
    std::optional<AccountId> escrow;
    std::vector<ValidatorRecord> endpoints;

    void encode(Encoder& enc) const;
    static GenesisConfig decode(Decoder& dec);
    Hash256 digest() const;
    std::optional<std::string> label_of(const AccountId& id) const;
    std::optional<AccountId> find_label(std::string_view label) const;
};

/// Initial ledger state. Genesis balances count as minted; the bootstrap
/// window policy is always present and Permanent.
Result<LedgerState> genesis_state(const GenesisConfig& genesis);

struct Block {
    Height height = 0;
    Hash256 prev_hash;
    AccountId publisher;
    Tick tick = 0;
    std::vector<Transaction> txs;
    Signature signature;

    /// Header and body without the signature.
    Bytes signing_bytes() const;
    void encode(Encoder& enc) const;
    static Block decode(Decoder& dec);
    Hash256 digest() const;
};

/// Blocks 0..n. Block 0 carries no transactions and no publisher; its
/// prev_hash is the genesis config digest, which ties the config into the
/// hash chain.
struct Chain {
    GenesisConfig genesis;
    std::vector<Block> blocks;

    static Chain create(GenesisConfig genesis);

    Height head_height() const { return blocks.back().height; }
    Hash256 head_hash() const { return blocks.back().digest(); }
    const Block& head() const { return blocks.back(); }
    /// Publishers of the last `count` blocks, oldest first. Genesis excluded.
    std::vector<AccountId> recent_publishers(std::size_t count) const;
};

using LivenessFn = std::function<bool(const AccountId&)>;

/// floor(diversity_percent * n / 100): blocks a publisher must sit out.
std::uint64_t spacing_for(std::size_t validator_count, std::uint64_t diversity_percent);

/// Round robin starting at validators[(height-1) mod n], skipping candidates
/// that are offline or published within the last `spacing` blocks.
/// `validators` must be sorted ascending; `recent` is oldest-first.
Result<AccountId> expected_publisher(Height height, std::span<const AccountId> validators,
                                     std::span<const AccountId> recent, std::uint64_t spacing,
                                     const LivenessFn& live = {});

/// expected_publisher for the block after chain.head() under the state's policies.
Result<AccountId> next_publisher(const Chain& chain, const LedgerState& state, const LivenessFn& live = {});

Result<Block> build_block(const Chain& chain, const LedgerState& state, const AccountId& publisher,
                          const KeyPair& publisher_key, std::vector<Transaction> pending, Tick tick,
                          const LivenessFn& live = {});

enum class ViolationKind : std::uint8_t {
    HeightGap,
    HashMismatch,
    NotAValidator,
    SpacingViolation,
    BadBlockSignature,
    MalformedTransaction,
    TooManyTransactions,
    TickRegression,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string detail;
};

/// Total function: checks the block against the parent state and chain.
/// Transactions only need valid envelopes, not successful execution.
std::vector<Violation> validate_block(const Block& block, const LedgerState& state, const Chain& chain);

/// Validates, applies every transaction, runs block-boundary processing and
/// appends. On InvalidBlock neither chain nor state changes.
Result<std::vector<Receipt>> append_block(Chain& chain, LedgerState& state, const Block& block);

Status register_endpoints(LedgerState& state, const ExecContext& ctx, const RegisterEndpoints& request);

// Chain dumps ----------------------------------------------------------------

Bytes export_chain(const Chain& chain);
/// Throws DecodeError on any malformed or trailing input.
Chain import_chain(ByteView data);

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> errors;
    Height verified_height = 0;
    Hash256 state_digest;
};

/// Replays the whole chain from genesis: hash links, publisher schedule,
/// signatures and the conservation invariant at every block boundary.
VerifyReport verify_chain(const Chain& chain);

/// Replays the chain up to `height` (inclusive) and returns that state.
Result<LedgerState> replay_to(const Chain& chain, std::optional<Height> height = std::nullopt);

}  // namespace fiatchain
