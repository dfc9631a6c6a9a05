// qnr: command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 domain error, 3 I/O error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qnr/qnr.hpp"

namespace {

using nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 1, kDomain = 2, kIo = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string format;  // empty: subcommand default
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qnr::IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw qnr::IoError("error reading '" + path + "'");
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw qnr::IoError("error writing to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw qnr::IoError("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw qnr::IoError("error writing '" + path + "'");
}

nlohmann::json parse_json(const std::string& text, const std::string& what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw qnr::ParseError(what + ": " + e.what());
    }
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string resolve_format(const Globals& g, const std::string& fallback, std::initializer_list<const char*> allowed,
                           const std::string& cmd) {
    const std::string f = g.format.empty() ? fallback : g.format;
    for (const char* a : allowed) {
        if (f == a) return f;
    }
    throw UsageError(cmd + " does not support --format " + f);
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------

std::string cmd_oracle(const Globals& g, std::uint64_t p) {
    const auto fmt = resolve_format(g, "text", {"text", "json", "csv"}, "oracle");
    const auto fast = qnr::qnr_set(p);
    if (fast != qnr::qnr_set_bruteforce(p)) throw qnr::InvalidArgument("oracle cross-check failed");
    if (fmt == "json") return dump(ordered_json{{"prime", p}, {"qnrs", fast}});
    std::string s = fmt == "csv" ? "qnr\n" : "";
    for (std::size_t i = 0; i < fast.size(); ++i) {
        s += std::to_string(fast[i]);
        s += fmt == "csv" ? "\n" : (i + 1 < fast.size() ? " " : "\n");
    }
    return s;
}

std::string cmd_angle(const Globals& g, std::uint64_t p) {
    const auto fmt = resolve_format(g, "text", {"text", "json", "csv"}, "angle");
    const auto inst = qnr::ProblemInstance::from_prime(p);
    if (fmt == "json") {
        return dump(ordered_json{{"prime", p}, {"n", inst.n}, {"N", inst.big_n}, {"theta", inst.theta}});
    }
    if (fmt == "csv") return "prime,n,N,theta\n" + std::to_string(p) + "," + std::to_string(inst.n) + "," +
                             std::to_string(inst.big_n) + "," + fmt17(inst.theta) + "\n";
    return fmt17(inst.theta) + "\n";
}

std::string cmd_gen(const Globals& g, std::optional<std::uint64_t> prime, bool fermat, bool reduced17) {
    resolve_format(g, "json", {"json"}, "gen");
    if (fermat && reduced17) throw UsageError("--fermat and --reduced17 are exclusive");
    qnr::Circuit c;
    if (reduced17) {
        if (prime && *prime != 17) throw UsageError("--reduced17 only applies to --prime 17");
        c = qnr::build_qnr17_reduced(qnr::SynthConfig::from_env());
    } else {
        if (!prime) throw UsageError("gen needs --prime");
        const auto inst = qnr::ProblemInstance::from_prime(*prime);
        c = fermat ? qnr::build_fermat_circuit(inst) : qnr::build_general_circuit(inst);
    }
    return dump(qnr::to_json(c));
}

qnr::Circuit load_circuit(const std::string& path) {
    return qnr::circuit_from_json(parse_json(read_input(path), "circuit JSON"));
}

std::string cmd_lower(const Globals& g, const std::string& in, bool nn) {
    resolve_format(g, "json", {"json"}, "lower");
    return dump(qnr::to_json(qnr::lower(load_circuit(in), nn)));
}

std::string cmd_emit_qasm(const Globals& g, const std::string& in) {
    resolve_format(g, "text", {"text"}, "emit-qasm");
    return qnr::emit_qasm(load_circuit(in));
}

std::string cmd_parse_qasm(const Globals& g, const std::string& in) {
    resolve_format(g, "json", {"json"}, "parse-qasm");
    return dump(qnr::to_json(qnr::parse_qasm(read_input(in))));
}

std::string cmd_sim(const Globals& g, const std::string& in, std::optional<std::uint64_t> shots,
                    const std::string& noise_spec, const std::string& timestamp) {
    const auto c = load_circuit(in);
    const auto noise = qnr::NoiseModel::parse(noise_spec);
    if (shots) {
        resolve_format(g, "json", {"json"}, "sim --shots");
        auto r = qnr::run_noisy(c, noise, *shots, g.seed);
        r.timestamp = timestamp;
        return dump(qnr::to_json(r));
    }
    if (noise.kind != qnr::NoiseModel::Kind::none) throw UsageError("--noise needs --shots");
    const auto fmt = resolve_format(g, "json", {"json", "csv", "text"}, "sim");
    const auto measured = c.measured_qubits();
    const auto probs = qnr::probabilities(qnr::run(c), measured);
    constexpr double cutoff = 1e-12;
    if (fmt == "json") {
        ordered_json dist = ordered_json::object();
        for (std::size_t x = 0; x < probs.size(); ++x) {
            if (probs[x] > cutoff) dist[qnr::to_bitstring(x, measured.size())] = probs[x];
        }
        ordered_json j;
        j["prime"] = c.metadata().prime.value_or(0);
        j["measured"] = measured;
        j["probabilities"] = std::move(dist);
        return dump(j);
    }
    std::string s = fmt == "csv" ? "outcome,value,probability\n" : "";
    for (std::size_t x = 0; x < probs.size(); ++x) {
        if (probs[x] <= cutoff) continue;
        const auto bits = qnr::to_bitstring(x, measured.size());
        s += fmt == "csv" ? bits + "," + std::to_string(x) + "," + fmt17(probs[x]) + "\n"
                          : bits + " " + std::to_string(x) + " " + fmt17(probs[x]) + "\n";
    }
    return s;
}

std::string cmd_baseline(const Globals& g, std::uint64_t p, std::uint64_t trials, std::optional<std::uint64_t> advice) {
    const auto fmt = resolve_format(g, "json", {"json", "text"}, "baseline");
    if (trials == 0) throw UsageError("--trials must be positive");
    ordered_json j;
    j["prime"] = p;
    j["trials"] = trials;
    j["seed"] = g.seed;
    if (!advice) {
        const auto exact = qnr::algorithm2_exact_success(p);
        const double rate = qnr::algorithm2_success_rate(p, trials, g.seed);
        j["algorithm"] = "single-jacobi";
        j["success_rate"] = rate;
        j["exact_success"] = exact.str();
        j["exact_success_value"] = exact.value();
        if (fmt == "text") return "success_rate " + fmt17(rate) + "\nexact " + exact.str() + "\n";
        return dump(j);
    }
    std::mt19937_64 rng(g.seed);
    std::map<std::uint64_t, std::uint64_t> hist;
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto x = qnr::algorithm4_sample(p, *advice, rng);
        ++hist[x];
        hits += qnr::jacobi(static_cast<std::int64_t>(x), static_cast<std::int64_t>(p)) == -1 ? 1u : 0u;
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(trials);
    j["algorithm"] = "advice";
    j["advice"] = *advice;
    j["success_rate"] = rate;
    ordered_json counts = ordered_json::object();
    for (auto [x, n] : hist) counts[std::to_string(x)] = n;
    j["counts"] = std::move(counts);
    if (fmt == "text") return "success_rate " + fmt17(rate) + "\ndistinct " + std::to_string(hist.size()) + "\n";
    return dump(j);
}

std::string cmd_score(const Globals& g, const std::string& results, std::optional<std::uint64_t> prime) {
    resolve_format(g, "json", {"json"}, "score");
    const auto r = qnr::run_result_from_json(parse_json(read_input(results), "RunResult JSON"));
    const std::uint64_t p = prime ? *prime : r.prime;
    if (p == 0) throw UsageError("score needs --prime (the run does not name one)");
    return dump(qnr::to_json(qnr::score(r, p)));
}

std::string cmd_plotdata(const Globals& g, const std::string& dir, std::optional<std::uint64_t> prime) {
    resolve_format(g, "csv", {"csv"}, "plotdata");
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw qnr::IoError("'" + dir + "' is not a readable directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    if (ec) throw qnr::IoError("cannot list '" + dir + "': " + ec.message());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw qnr::IoError("no .json result files in '" + dir + "'");
    std::vector<std::pair<std::string, qnr::ScoreReport>> reports;
    for (const auto& f : files) {
        const auto r = qnr::run_result_from_json(parse_json(read_input(f.string()), f.filename().string()));
        const std::uint64_t p = prime ? *prime : r.prime;
        if (p == 0) throw UsageError(f.filename().string() + " does not name a prime; pass --prime");
        reports.emplace_back(r.device.empty() ? f.stem().string() : r.device, qnr::score(r, p));
    }
    return qnr::plot_data(reports);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadratic nonresidue sampling benchmark toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--out", g.out, "Output file ('-' for stdout)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));

    std::uint64_t prime = 0;
    std::optional<std::uint64_t> opt_prime;
    std::string in = "-";
    bool fermat = false, reduced17 = false, nn = false;
    std::optional<std::uint64_t> shots;
    std::string noise = "none";
    std::string timestamp = qnr::kDefaultTimestamp;
    std::uint64_t trials = 0;
    std::optional<std::uint64_t> advice;
    std::string results = "-";

    auto* oracle = app.add_subcommand("oracle", "List the nonresidues of a prime");
    oracle->add_option("--prime", prime, "Odd prime")->required();
    auto* angle = app.add_subcommand("angle", "Rotation angle theta for a prime = 1 mod 8");
    angle->add_option("--prime", prime, "Prime = 1 mod 8")->required();
    auto* gen = app.add_subcommand("gen", "Generate a benchmark circuit as JSON");
    gen->add_option("--prime", opt_prime, "Prime = 1 mod 8");
    gen->add_flag("--fermat", fermat, "Fermat-prime circuit");
    gen->add_flag("--reduced17", reduced17, "Reduced 4-qubit circuit for p = 17");
    auto* lower = app.add_subcommand("lower", "Decompose into H, X, Phase, CNOT, CZ");
    lower->add_option("--in", in, "Circuit JSON ('-' for stdin)");
    lower->add_flag("--nn", nn, "Restrict 2-qubit gates to a line");
    auto* emit = app.add_subcommand("emit-qasm", "Lowered circuit JSON to OpenQASM 2.0");
    emit->add_option("--in", in, "Circuit JSON ('-' for stdin)");
    auto* parse = app.add_subcommand("parse-qasm", "OpenQASM 2.0 to circuit JSON");
    parse->add_option("--in", in, "QASM file ('-' for stdin)");
    auto* sim = app.add_subcommand("sim", "Simulate: probabilities, or a RunResult with --shots");
    sim->add_option("--in", in, "Circuit JSON ('-' for stdin)");
    sim->add_option("--shots", shots, "Number of measurements")->check(CLI::PositiveNumber);
    sim->add_option("--noise", noise, "none | depolarizing:EPS | readout:EPS");
    sim->add_option("--timestamp", timestamp, "Timestamp recorded in the RunResult");
    auto* baseline = app.add_subcommand("baseline", "Classical sampler statistics");
    baseline->add_option("--prime", prime, "Odd prime")->required();
    baseline->add_option("--trials", trials, "Number of samples")->required();
    baseline->add_option("--advice", advice, "Known nonresidue (switches to the a*r^2 sampler)");
    auto* score = app.add_subcommand("score", "Score a RunResult");
    score->add_option("--results", results, "RunResult JSON ('-' for stdin)");
    score->add_option("--prime", opt_prime, "Prime the run targets");
    auto* plot = app.add_subcommand("plotdata", "CSV of score and p-value per run file");
    plot->add_option("--results", results, "Directory of RunResult JSON files")->required();
    plot->add_option("--prime", opt_prime, "Prime for runs that do not name one");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "qnr: " << e.what() << "\n";
        return kUsage;
    }

    try {
        std::string text;
        if (oracle->parsed()) text = cmd_oracle(g, prime);
        else if (angle->parsed()) text = cmd_angle(g, prime);
        else if (gen->parsed()) text = cmd_gen(g, opt_prime, fermat, reduced17);
        else if (lower->parsed()) text = cmd_lower(g, in, nn);
        else if (emit->parsed()) text = cmd_emit_qasm(g, in);
        else if (parse->parsed()) text = cmd_parse_qasm(g, in);
        else if (sim->parsed()) text = cmd_sim(g, in, shots, noise, timestamp);
        else if (baseline->parsed()) text = cmd_baseline(g, prime, trials, advice);
        else if (score->parsed()) text = cmd_score(g, results, opt_prime);
        else if (plot->parsed()) text = cmd_plotdata(g, results, opt_prime);
        write_output(g.out, text);
    } catch (const UsageError& e) {
        std::cerr << "qnr: usage: " << e.what() << "\n";
        return kUsage;
    } catch (const qnr::Error& e) {
        std::cerr << "qnr: " << e.what() << "\n";
        return e.kind() == qnr::ErrorKind::io ? kIo : kDomain;
    } catch (const std::bad_alloc&) {
        std::cerr << "qnr: out of memory\n";
        return kDomain;
    }
    return kOk;
}
