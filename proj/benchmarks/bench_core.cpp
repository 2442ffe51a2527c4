#include <benchmark/benchmark.h>

#include <filesystem>
#include <map>

#include "fiatchain/chain.hpp"
#include "fiatchain/gateway.hpp"
#include "fiatchain/sim.hpp"

using namespace fiatchain;

namespace {

// Two validators and `users` funded users, keyed by name.
struct World {
    explicit World(KeyScheme scheme, int users = 2) {
        auto add = [&](const std::string& name, RoleSet roles, Amount balance) {
            keys.emplace(name, KeyPair::from_seed(scheme, name));
            ids.emplace(name, derive_account_id(keys.at(name).public_key()).value());
            GenesisAccount a;
            a.label = name;
            a.key = keys.at(name).public_key();
            a.roles = roles;
            a.balance = balance;
            genesis.accounts.push_back(a);
        };
        add("v1", {}, 0);
        add("v2", {}, 0);
        genesis.validators = {ids.at("v1"), ids.at("v2")};
        for (int i = 0; i < users; ++i) add("u" + std::to_string(i), {Role::User}, 1'000'000'000);
        state = genesis_state(genesis).value();
        chain = Chain::create(genesis);
    }

    Transaction transfer(int from, int to, std::uint64_t nonce) const {
        const auto f = "u" + std::to_string(from);
        return make_transaction(ids.at(f), nonce, Transfer{ids.at("u" + std::to_string(to)), 1}, keys.at(f));
    }

    const KeyPair& key_of(const AccountId& id) const {
        for (const auto& [name, i] : ids)
            if (i == id) return keys.at(name);
        throw std::logic_error("unknown id");
    }

    // Publishes one block of `n` transfers from u0 to u1.
    void produce(int n) {
        std::vector<Transaction> txs;
        const std::uint64_t base = state.find(ids.at("u0"))->nonce;
        for (int i = 0; i < n; ++i) txs.push_back(transfer(0, 1, base + static_cast<std::uint64_t>(i)));
        auto pub = next_publisher(chain, state).value();
        auto block = build_block(chain, state, pub, key_of(pub), std::move(txs), chain.head_height() + 1).value();
        append_block(chain, state, block).value();
    }

    GenesisConfig genesis;
    LedgerState state;
    Chain chain;
    std::map<std::string, KeyPair> keys;
    std::map<std::string, AccountId> ids;
};

KeyScheme scheme_arg(const benchmark::State& s) { return s.range(0) ? KeyScheme::Ed25519 : KeyScheme::MockHmac; }

void BM_ApplyTransfer(benchmark::State& s) {
    World w(scheme_arg(s));
    std::uint64_t nonce = 0;
    for (auto _ : s) {
        s.PauseTiming();
        auto tx = w.transfer(0, 1, nonce++);
        s.ResumeTiming();
        benchmark::DoNotOptimize(apply_transaction(w.state, tx));
    }
}
BENCHMARK(BM_ApplyTransfer)->Arg(0)->Arg(1);

void BM_SignTransfer(benchmark::State& s) {
    World w(scheme_arg(s));
    std::uint64_t nonce = 0;
    for (auto _ : s) benchmark::DoNotOptimize(w.transfer(0, 1, nonce++));
}
BENCHMARK(BM_SignTransfer)->Arg(0)->Arg(1);

void BM_TxEncodeDecode(benchmark::State& s) {
    World w(KeyScheme::Ed25519);
    const Bytes raw = w.transfer(0, 1, 0).encode();
    for (auto _ : s) benchmark::DoNotOptimize(Transaction::decode(raw).encode());
    s.SetBytesProcessed(static_cast<std::int64_t>(s.iterations() * raw.size()));
}
BENCHMARK(BM_TxEncodeDecode);

void BM_ProduceBlock(benchmark::State& s) {
    World w(KeyScheme::Ed25519);
    for (auto _ : s) w.produce(static_cast<int>(s.range(0)));
    s.SetItemsProcessed(s.iterations() * s.range(0));
}
BENCHMARK(BM_ProduceBlock)->Arg(10)->Arg(100);

void BM_VerifyChain(benchmark::State& s) {
    World w(KeyScheme::Ed25519);
    for (int i = 0; i < s.range(0); ++i) w.produce(20);
    const Bytes dump = export_chain(w.chain);
    for (auto _ : s) benchmark::DoNotOptimize(verify_chain(import_chain(dump)));
    s.SetItemsProcessed(s.iterations() * s.range(0) * 20);
}
BENCHMARK(BM_VerifyChain)->Arg(10)->Arg(50);

void BM_Admission(benchmark::State& s) {
    World w(KeyScheme::Ed25519);
    SecurityGateway gw(w.ids.at("v1"));
    const Bytes raw = w.transfer(0, 1, 0).encode();
    Tick tick = 0;
    for (auto _ : s) benchmark::DoNotOptimize(gw.admit(raw, tick++, w.state));
}
BENCHMARK(BM_Admission);

void BM_RateLimiter(benchmark::State& s) {
    RateLimiter rl;
    RateConfig cfg;
    std::vector<AccountId> senders(64);
    for (std::size_t i = 0; i < senders.size(); ++i) senders[i].digest.bytes[0] = static_cast<std::uint8_t>(i);
    Tick tick = 0;
    std::size_t i = 0;
    for (auto _ : s) {
        benchmark::DoNotOptimize(rl.check(senders[i++ % senders.size()], tick, false, cfg));
        tick += i % 16 == 0;
    }
}
BENCHMARK(BM_RateLimiter);

void BM_ScenarioRun(benchmark::State& s) {
    auto scenario = sim::load_scenario(
        (std::filesystem::path(FIATCHAIN_SOURCE_DIR) / "scenarios/discrepancy.json").string());
    for (auto _ : s) benchmark::DoNotOptimize(sim::run(scenario));
}
BENCHMARK(BM_ScenarioRun);

}  // namespace

BENCHMARK_MAIN();
