// fiatchain: run scenarios and examine chain dumps.
//
// exit codes: 0 pass, 1 assertion/verification failure, 2 load or schema
// error, 3 internal invariant violation.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fiatchain/sim.hpp"

using namespace fiatchain;
using sim::Json;

namespace {

enum Exit { kPass = 0, kFail = 1, kLoad = 2, kInternal = 3 };

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Chain read_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string data = buf.str();
    try {
        return import_chain(as_bytes(data));
    } catch (const DecodeError& e) {
        throw LoadError(path + ": " + e.what());
    }
}

bool write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    return static_cast<bool>(out);
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& report_path,
            const std::string& dump_path) {
    sim::Scenario scenario;
    try {
        scenario = sim::load_scenario(path);
    } catch (const sim::ScenarioError& e) {
        std::cerr << (e.kind() == sim::ScenarioError::Kind::Parse ? "parse error: " : "schema violation: ")
                  << e.what() << "\n";
        return kLoad;
    }
    auto result = sim::run(scenario, seed);
    const auto& r = result.report;
    if (!report_path.empty() && !write_file(report_path, r.to_json().dump(2) + "\n")) {
        std::cerr << "cannot write report to " << report_path << "\n";
        return kLoad;
    }
    if (!dump_path.empty()) {
        Bytes dump = export_chain(result.chain);
        if (!write_file(dump_path, std::string_view(reinterpret_cast<const char*>(dump.data()), dump.size()))) {
            std::cerr << "cannot write chain dump to " << dump_path << "\n";
            return kLoad;
        }
    }

    std::size_t passed = 0;
    for (const auto& a : r.assertions) {
        passed += a.pass;
        if (!a.pass) std::cout << "FAIL step " << a.step << " tick " << a.tick << ": " << a.what << " (" << a.detail << ")\n";
    }
    std::cout << r.scenario << ": " << r.blocks_produced << " blocks, height " << r.height << ", " << passed << "/"
              << r.assertions.size() << " assertions passed, state " << r.state_digest.hex().substr(0, 16) << "\n";
    if (r.fatal) {
        std::cerr << "internal invariant violation: " << *r.fatal << "\n";
        return kInternal;
    }
    return r.all_passed() ? kPass : kFail;
}

int cmd_inspect(const std::string& path, std::optional<Height> height) {
    Chain chain = read_dump(path);
    auto name = sim::genesis_namer(chain.genesis);
    Json out;
    Json accounts = Json::array();
    for (const auto& a : chain.genesis.accounts) {
        Json roles = Json::array();
        for (Role r : a.roles.list()) roles.push_back(std::string(to_string(r)));
        auto id = derive_account_id(a.key);
        accounts.push_back(Json{{"label", a.label}, {"id", id ? id.value().hex() : "invalid"}, {"roles", roles}});
    }
    out["genesis"] = Json{{"digest", chain.genesis.digest().hex()}, {"accounts", accounts}};

    Json blocks = Json::array();
    for (const auto& b : chain.blocks) {
        if (height && b.height > *height) break;
        blocks.push_back(sim::block_summary(b, name));
    }
    out["blocks"] = blocks;

    auto state = replay_to(chain, height);
    if (!state) {
        out["state"] = Json{{"error", state.status().to_string()}};
        std::cout << out.dump(2) << "\n";
        return kFail;
    }
    const LedgerState& st = state.value();
    Json validators = Json::array();
    for (const auto& v : st.validators()) validators.push_back(name(v));
    Json policies = Json::object();
    for (const auto& [key, p] : st.policies) {
        if (auto* v = std::get_if<std::uint64_t>(&p.value))
            policies[key] = *v;
        else
            policies[key] = to_hex(std::get<Bytes>(p.value));
    }
    Json proposals = Json::array();
    for (const auto& [id, p] : st.proposals)
        proposals.push_back(Json{{"id", id},
                                 {"action", std::string(p.action->name())},
                                 {"electorate", std::string(to_string(p.electorate))},
                                 {"status", std::string(to_string(p.status))}});
    out["state"] = Json{{"height", st.height},
                        {"digest", st.digest().hex()},
                        {"supply", Json{{"minted", st.supply.minted},
                                        {"burned", st.supply.burned},
                                        {"circulating", st.supply.circulating()}}},
                        {"validators", validators},
                        {"policies", policies},
                        {"proposals", proposals}};
    std::cout << out.dump(2) << "\n";
    return kPass;
}

std::optional<AccountId> resolve_actor(const Chain& chain, const std::string& who) {
    if (auto id = chain.genesis.find_label(who)) return id;
    return AccountId::from_hex(who);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) parts.push_back(part);
    return parts;
}

int cmd_query(const std::string& path, const std::string& as, const std::string& text) {
    Chain chain = read_dump(path);
    auto requester = resolve_actor(chain, as);
    if (!requester) throw LoadError("unknown actor '" + as + "'");

    // kind[:arg[:arg]]
    auto parts = split(text, ':');
    if (parts.empty()) throw LoadError("empty query");
    auto kind = parse_query_kind(parts[0]);
    if (!kind) throw LoadError("unknown query kind '" + parts[0] + "'");
    QueryEcho echo;
    echo.requester = *requester;
    echo.query.kind = *kind;
    echo.query.subject = *requester;
    echo.query.to_height = std::numeric_limits<Height>::max();
    try {
        if (*kind == QueryKind::ManagementLog) {
            if (parts.size() > 1) echo.query.from_height = std::stoull(parts[1]);
            if (parts.size() > 2) echo.query.to_height = std::stoull(parts[2]);
        } else if (parts.size() > 1) {
            auto subject = resolve_actor(chain, parts[1]);
            if (!subject) throw LoadError("unknown actor '" + parts[1] + "'");
            echo.query.subject = *subject;
        }
    } catch (const std::logic_error&) {
        throw LoadError("bad height in query '" + text + "'");
    }

    auto state = replay_to(chain);
    if (!state) {
        std::cerr << "replay failed: " << state.status().to_string() << "\n";
        return kFail;
    }
    if (auto s = check_visibility(state.value(), echo); !s) {
        std::cout << "denied: " << s.to_string() << "\n";
        return kFail;
    }
    Json out = sim::to_json(compute_answer(state.value(), echo), sim::genesis_namer(chain.genesis));
    out["as_of_height"] = state.value().height;
    std::cout << out.dump(2) << "\n";
    return kPass;
}

int cmd_verify(const std::string& path) {
    Chain chain = read_dump(path);
    auto report = verify_chain(chain);
    for (const auto& e : report.errors) std::cout << "error: " << e << "\n";
    std::cout << (report.ok ? "ok" : "FAILED") << ": verified to height " << report.verified_height << " of "
              << chain.head_height() << ", state " << report.state_digest.hex() << "\n";
    return report.ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fiatchain: permissioned ledger simulator"};
    app.require_subcommand(1);

    std::string scenario_path, report_path, dump_path, chain_path, as, query_text;
    std::optional<std::uint64_t> seed;
    std::optional<Height> height;

    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("scenario", scenario_path, "Scenario JSON")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--report", report_path, "Write the JSON report here");
    run->add_option("--dump", dump_path, "Write the binary chain dump here");

    auto* inspect = app.add_subcommand("inspect", "Show blocks and state summary of a chain dump");
    inspect->add_option("chaindump", chain_path)->required();
    inspect->add_option("--height", height, "Stop at this height");

    auto* query = app.add_subcommand("query", "Answer a query as an actor, with visibility rules enforced");
    query->add_option("chaindump", chain_path)->required();
    query->add_option("--as", as, "Genesis label or account id")->required();
    query->add_option("query", query_text,
                      "balance | history | claimable | supply | directory | management-log[:from[:to]] | "
                      "validation-server:<validator>")
        ->required();

    auto* verify = app.add_subcommand("verify", "Replay and re-check a chain dump");
    verify->add_option("chaindump", chain_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kLoad;
    }

    try {
        if (*run) return cmd_run(scenario_path, seed, report_path, dump_path);
        if (*inspect) return cmd_inspect(chain_path, height);
        if (*query) return cmd_query(chain_path, as, query_text);
        if (*verify) return cmd_verify(chain_path);
    } catch (const LoadError& e) {
        std::cerr << "load error: " << e.what() << "\n";
        return kLoad;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
