#include "fiatchain/chain.hpp"

#include <algorithm>

#include "fiatchain/governance.hpp"
#include "internal.hpp"

namespace fiatchain {

namespace {

constexpr std::string_view kDumpMagic = "FIATCHAIN-DUMP";
constexpr std::uint64_t kDumpVersion = 1;

template <class T, class F>
void encode_seq(Encoder& enc, const std::vector<T>& items, F&& each) {
    enc.u64(items.size());
    for (const auto& item : items) each(item);
}

}  // namespace

void GenesisAccount::encode(Encoder& enc) const {
    enc.str(label);
    key.encode(enc);
    enc.u8(roles.bits());
    enc.u64(balance);
    fiatchain::encode(enc, recovery);
    enc.boolean(provider.has_value());
    if (provider) provider->encode(enc);
}

GenesisAccount GenesisAccount::decode(Decoder& dec) {
    GenesisAccount a;
    a.label = dec.str();
    a.key = PublicKey::decode(dec);
    a.roles = RoleSet::from_bits(dec.u8());
    a.balance = dec.u64();
    a.recovery = decode_recovery(dec);
    if (dec.boolean()) a.provider = AccountId::decode(dec);
    return a;
}

void GenesisConfig::encode(Encoder& enc) const {
    encode_seq(enc, accounts, [&](const GenesisAccount& a) { a.encode(enc); });
    encode_seq(enc, policies, [&](const SetPolicy& p) {
        enc.str(p.key);
        fiatchain::encode(enc, p.value);
        fiatchain::encode(enc, p.permanence);
    });
    encode_seq(enc, validators, [&](const AccountId& v) { v.encode(enc); });
    enc.boolean(escrow.has_value());
    if (escrow) escrow->encode(enc);
    encode_seq(enc, endpoints, [&](const ValidatorRecord& r) { r.encode(enc); });
}

GenesisConfig GenesisConfig::decode(Decoder& dec) {
    GenesisConfig g;
    for (auto n = dec.count(); n > 0; --n) g.accounts.push_back(GenesisAccount::decode(dec));
    for (auto n = dec.count(); n > 0; --n) {
        SetPolicy p;
        p.key = dec.str();
        p.value = decode_policy_value(dec);
        p.permanence = decode_permanence(dec);
        g.policies.push_back(std::move(p));
    }
    for (auto n = dec.count(); n > 0; --n) g.validators.push_back(AccountId::decode(dec));
    if (dec.boolean()) g.escrow = AccountId::decode(dec);
    for (auto n = dec.count(); n > 0; --n) g.endpoints.push_back(ValidatorRecord::decode(dec));
    return g;
}

Hash256 GenesisConfig::digest() const {
    Encoder enc;
    enc.str("fiatchain/genesis");
    encode(enc);
    return sha256(enc.data());
}

std::optional<std::string> GenesisConfig::label_of(const AccountId& id) const {
    for (const auto& a : accounts) {
        auto derived = derive_account_id(a.key);
        if (derived && derived.value() == id) return a.label;
    }
    return std::nullopt;
}

std::optional<AccountId> GenesisConfig::find_label(std::string_view label) const {
    for (const auto& a : accounts)
        if (a.label == label) {
            auto derived = derive_account_id(a.key);
            if (derived) return derived.value();
        }
    return std::nullopt;
}

Result<LedgerState> genesis_state(const GenesisConfig& genesis) {
    LedgerState state;
    for (const auto& ga : genesis.accounts) {
        auto id = derive_account_id(ga.key);
        if (!id) return Status(id.code(), "genesis account " + ga.label);
        if (state.accounts.count(id.value()))
            return Status(ErrorCode::MalformedPayload, "duplicate genesis account " + ga.label);
        if (auto s = check_recovery(ga.recovery, id.value()); !s) return s;
        if (detail::add_overflows(state.supply.minted, ga.balance)) return Status(ErrorCode::Overflow);
        Account account;
        account.id = id.value();
        account.public_key = ga.key;
        account.roles = ga.roles;
        account.balance = ga.balance;
        account.recovery = ga.recovery;
        account.provider = ga.provider;
        state.supply.minted += ga.balance;
        state.accounts.emplace(account.id, std::move(account));
    }
    for (const auto& v : genesis.validators) {
        Account* a = state.find(v);
        if (!a) return Status(ErrorCode::UnknownAccount, "genesis validator " + v.short_hex());
        a->roles.add(Role::Validator);
    }
    if (state.role_count(Role::Validator) == 0) return Status(ErrorCode::EmptyValidatorSet);
    if (genesis.escrow) {
        if (!state.find(*genesis.escrow)) return Status(ErrorCode::UnknownAccount, "escrow account");
        state.escrow = genesis.escrow;
    }
    for (const auto& p : genesis.policies) {
        if (!valid_policy_key(p.key)) return Status(ErrorCode::MalformedPayload, "policy key " + p.key);
        state.policies[p.key] = Policy{p.key, p.value, p.permanence, AccountId{}, 0};
    }
    // The bootstrap window can never be changed after genesis.
    const std::string window(policy_keys::kBootstrapWindow);
    auto it = state.policies.find(window);
    if (it == state.policies.end())
        state.policies[window] = Policy{window, policy_default(window), PermanencePermanent{}, AccountId{}, 0};
    else
        it->second.permanence = PermanencePermanent{};

    for (const auto& record : genesis.endpoints) {
        if (!state.has_role(record.account, Role::Validator))
            return Status(ErrorCode::NotValidator, "endpoint record " + record.account.short_hex());
        state.validator_registry[record.account] = record;
    }
    return state;
}

// Blocks ---------------------------------------------------------------------

Bytes Block::signing_bytes() const {
    Encoder enc;
    enc.str("fiatchain/block");
    enc.u64(height);
    enc.hash(prev_hash);
    publisher.encode(enc);
    enc.u64(tick);
    enc.u64(txs.size());
    for (const auto& tx : txs) enc.bytes(tx.encode());
    return enc.take();
}

void Block::encode(Encoder& enc) const {
    enc.u64(height);
    enc.hash(prev_hash);
    publisher.encode(enc);
    enc.u64(tick);
    enc.u64(txs.size());
    for (const auto& tx : txs) enc.bytes(tx.encode());
    enc.bytes(signature);
}

Block Block::decode(Decoder& dec) {
    Block b;
    b.height = dec.u64();
    b.prev_hash = dec.hash();
    b.publisher = AccountId::decode(dec);
    b.tick = dec.u64();
    for (auto n = dec.count(); n > 0; --n) {
        Bytes raw = dec.bytes();
        b.txs.push_back(Transaction::decode(ByteView(raw)));
    }
    b.signature = dec.bytes();
    return b;
}

Hash256 Block::digest() const {
    Encoder enc;
    encode(enc);
    return sha256(enc.data());
}

Chain Chain::create(GenesisConfig genesis) {
    Chain chain;
    Block zero;
    zero.prev_hash = genesis.digest();
    chain.genesis = std::move(genesis);
    chain.blocks.push_back(std::move(zero));
    return chain;
}

std::vector<AccountId> Chain::recent_publishers(std::size_t count) const {
    std::vector<AccountId> out;
    for (auto it = blocks.rbegin(); it != blocks.rend() && out.size() < count; ++it) {
        if (it->height == 0) break;
        out.push_back(it->publisher);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

// Schedule -------------------------------------------------------------------

std::uint64_t spacing_for(std::size_t validator_count, std::uint64_t diversity_percent) {
    return static_cast<std::uint64_t>(validator_count) * std::min<std::uint64_t>(diversity_percent, 100) / 100;
}

Result<AccountId> expected_publisher(Height height, std::span<const AccountId> validators,
                                     std::span<const AccountId> recent, std::uint64_t spacing,
                                     const LivenessFn& live) {
    const std::size_t n = validators.size();
    if (n == 0) return Status(ErrorCode::NoEligiblePublisher, "no validators");
    auto window = recent.size() > spacing ? recent.subspan(recent.size() - spacing) : recent;
    const std::size_t start = height == 0 ? 0 : static_cast<std::size_t>((height - 1) % n);
    for (std::size_t i = 0; i < n; ++i) {
        const AccountId& c = validators[(start + i) % n];
        if (live && !live(c)) continue;
        if (std::find(window.begin(), window.end(), c) != window.end()) continue;
        return c;
    }
    return Status(ErrorCode::NoEligiblePublisher);
}

namespace {

std::uint64_t spacing_of(const LedgerState& state, std::size_t n) {
    return spacing_for(n, policy_u64(state, policy_keys::kDiversity));
}

}  // namespace

Result<AccountId> next_publisher(const Chain& chain, const LedgerState& state, const LivenessFn& live) {
    auto validators = state.validators();
    auto spacing = spacing_of(state, validators.size());
    auto recent = chain.recent_publishers(spacing);
    return expected_publisher(chain.head_height() + 1, validators, recent, spacing, live);
}

Result<Block> build_block(const Chain& chain, const LedgerState& state, const AccountId& publisher,
                          const KeyPair& publisher_key, std::vector<Transaction> pending, Tick tick,
                          const LivenessFn& live) {
    auto expected = next_publisher(chain, state, live);
    if (!expected) return expected.status();
    if (expected.value() != publisher)
        return Status(ErrorCode::WrongPublisher, "expected " + expected.value().short_hex());
    const auto cap = policy_u64(state, policy_keys::kMaxTxsPerBlock);
    if (pending.size() > cap) pending.resize(cap);

    Block block;
    block.height = chain.head_height() + 1;
    block.prev_hash = chain.head_hash();
    block.publisher = publisher;
    block.tick = std::max(tick, chain.head().tick);
    block.txs = std::move(pending);
    block.signature = publisher_key.sign(block.signing_bytes());
    return block;
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::HeightGap: return "HeightGap";
        case ViolationKind::HashMismatch: return "HashMismatch";
        case ViolationKind::NotAValidator: return "NotAValidator";
        case ViolationKind::SpacingViolation: return "SpacingViolation";
        case ViolationKind::BadBlockSignature: return "BadBlockSignature";
        case ViolationKind::MalformedTransaction: return "MalformedTransaction";
        case ViolationKind::TooManyTransactions: return "TooManyTransactions";
        case ViolationKind::TickRegression: return "TickRegression";
    }
    return "?";
}

std::vector<Violation> validate_block(const Block& block, const LedgerState& state, const Chain& chain) {
    std::vector<Violation> out;
    const Block& parent = chain.head();
    if (block.height != parent.height + 1)
        out.push_back({ViolationKind::HeightGap, "height " + std::to_string(block.height) + " after " +
                                                     std::to_string(parent.height)});
    if (block.prev_hash != parent.digest()) out.push_back({ViolationKind::HashMismatch, {}});
    if (block.tick < parent.tick) out.push_back({ViolationKind::TickRegression, {}});

    const Account* publisher = state.find(block.publisher);
    if (!publisher || !publisher->roles.has(Role::Validator)) {
        out.push_back({ViolationKind::NotAValidator, block.publisher.short_hex()});
    } else {
        auto spacing = spacing_of(state, state.role_count(Role::Validator));
        auto recent = chain.recent_publishers(spacing);
        if (std::find(recent.begin(), recent.end(), block.publisher) != recent.end())
            out.push_back({ViolationKind::SpacingViolation, block.publisher.short_hex()});
    }
    if (!publisher || !verify_signature(publisher->public_key, block.signing_bytes(), block.signature))
        out.push_back({ViolationKind::BadBlockSignature, {}});

    if (block.txs.size() > policy_u64(state, policy_keys::kMaxTxsPerBlock))
        out.push_back({ViolationKind::TooManyTransactions, std::to_string(block.txs.size())});
    for (std::size_t i = 0; i < block.txs.size(); ++i) {
        const auto& tx = block.txs[i];
        const Account* sender = state.find(tx.sender);
        if (!sender || !verify_signature(sender->public_key, tx.signing_bytes(), tx.signature))
            out.push_back({ViolationKind::MalformedTransaction, "tx " + std::to_string(i)});
    }
    return out;
}

Result<std::vector<Receipt>> append_block(Chain& chain, LedgerState& state, const Block& block) {
    auto violations = validate_block(block, state, chain);
    if (!violations.empty()) {
        std::string detail;
        for (const auto& v : violations) {
            if (!detail.empty()) detail += ", ";
            detail += to_string(v.kind);
            if (!v.detail.empty()) detail += " (" + v.detail + ")";
        }
        return Status(ErrorCode::InvalidBlock, detail);
    }
    state.height = block.height;
    std::vector<Receipt> receipts;
    receipts.reserve(block.txs.size());
    for (const auto& tx : block.txs) receipts.push_back(apply_transaction(state, tx));
    finish_block(state);
    chain.blocks.push_back(block);
    return receipts;
}

Status register_endpoints(LedgerState& state, const ExecContext& ctx, const RegisterEndpoints& request) {
    const Account* actor = state.find(ctx.actor);
    if (!actor || !actor->roles.has(Role::Validator)) return {ErrorCode::NotValidator};
    const ValidatorRecord& record = request.record;
    if (record.account != ctx.actor) return {ErrorCode::MalformedRecord, "record names another account"};
    if (!record.view_key.well_formed()) return {ErrorCode::MalformedRecord, "bad view key"};
    if (record.view_key == actor->public_key) return {ErrorCode::MalformedRecord, "view key equals account key"};
    if (record.contact.empty()) return {ErrorCode::MalformedRecord, "missing contact"};
    state.validator_registry[ctx.actor] = record;

    std::string gateways;
    for (const auto& g : record.security_gateways) gateways += (gateways.empty() ? "" : " ") + g;
    for (const auto& g : record.visibility_gateways) gateways += (gateways.empty() ? "" : " ") + g;
    detail::log_action(state, ctx, "RegisterEndpoints", {ctx.actor}, 0, true, gateways);
    return {};
}

// Dumps ----------------------------------------------------------------------

Bytes export_chain(const Chain& chain) {
    Encoder enc;
    enc.str(kDumpMagic);
    enc.u64(kDumpVersion);
    Encoder g;
    chain.genesis.encode(g);
    enc.bytes(g.data());
    enc.u64(chain.blocks.size());
    for (const auto& b : chain.blocks) {
        Encoder be;
        b.encode(be);
        enc.bytes(be.data());
    }
    return enc.take();
}

Chain import_chain(ByteView data) {
    Decoder dec(data);
    if (dec.str() != kDumpMagic) throw DecodeError("not a chain dump");
    if (dec.u64() != kDumpVersion) throw DecodeError("unsupported dump version");
    Chain chain;
    {
        Bytes raw = dec.bytes();
        Decoder g(raw);
        chain.genesis = GenesisConfig::decode(g);
        g.expect_end();
    }
    for (auto n = dec.count(); n > 0; --n) {
        Bytes raw = dec.bytes();
        Decoder b(raw);
        chain.blocks.push_back(Block::decode(b));
        b.expect_end();
    }
    dec.expect_end();
    if (chain.blocks.empty()) throw DecodeError("chain dump without genesis block");
    return chain;
}

namespace {

std::optional<std::string> check_block_zero(const Chain& chain) {
    const Block& zero = chain.blocks.front();
    if (zero.height != 0) return "block 0 has height " + std::to_string(zero.height);
    if (zero.prev_hash != chain.genesis.digest()) return "block 0 does not commit to the genesis config";
    if (!zero.txs.empty() || !zero.signature.empty() || zero.publisher != AccountId{} || zero.tick != 0)
        return "block 0 must be empty";
    return std::nullopt;
}

}  // namespace

VerifyReport verify_chain(const Chain& chain) {
    VerifyReport report;
    auto fail = [&](std::string msg) {
        report.ok = false;
        report.errors.push_back(std::move(msg));
    };
    if (chain.blocks.empty()) {
        fail("empty chain");
        return report;
    }
    if (auto err = check_block_zero(chain)) fail(*err);
    auto genesis = genesis_state(chain.genesis);
    if (!genesis) {
        fail("genesis: " + genesis.status().to_string());
        return report;
    }
    LedgerState state = std::move(genesis.value());
    if (!check_conservation(state)) fail("genesis: conservation violated");

    Chain replay{chain.genesis, {chain.blocks.front()}};
    for (std::size_t i = 1; i < chain.blocks.size() && report.ok; ++i) {
        auto r = append_block(replay, state, chain.blocks[i]);
        if (!r) {
            fail("block " + std::to_string(i) + ": " + r.status().to_string());
            break;
        }
        if (!check_conservation(state)) fail("block " + std::to_string(i) + ": conservation violated");
    }
    report.verified_height = replay.head_height();
    report.state_digest = state.digest();
    return report;
}

Result<LedgerState> replay_to(const Chain& chain, std::optional<Height> height) {
    if (chain.blocks.empty()) return Status(ErrorCode::InvalidBlock, "empty chain");
    if (auto err = check_block_zero(chain)) return Status(ErrorCode::InvalidBlock, *err);
    auto genesis = genesis_state(chain.genesis);
    if (!genesis) return genesis.status();
    LedgerState state = std::move(genesis.value());
    Chain replay{chain.genesis, {chain.blocks.front()}};
    for (std::size_t i = 1; i < chain.blocks.size(); ++i) {
        if (height && chain.blocks[i].height > *height) break;
        auto r = append_block(replay, state, chain.blocks[i]);
        if (!r) return Status(ErrorCode::InvalidBlock, "block " + std::to_string(i) + ": " + r.status().detail());
    }
    return state;
}

}  // namespace fiatchain
