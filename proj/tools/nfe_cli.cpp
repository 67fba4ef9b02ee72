// Command-line front end. Exit codes: 0 success/accept, 1 reject,
// 2 usage error, 3 missing or malformed input.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nfe/nfe.hpp"
#include "nfe/report_io.hpp"

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

nfe::EmbeddingSet load_embeddings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nfe::FormatError("cannot open embedding file '" + path + "'");
    return nfe::load_embedding_set(in);
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw nfe::FormatError("cannot open '" + path + "'");
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const void* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw nfe::FormatError("cannot open '" + path + "' for writing");
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw nfe::FormatError("write failed for '" + path + "'");
}

void write_file(const std::string& path, const std::string& text) {
    write_file(path, text.data(), text.size());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    write_file(path, bytes.data(), bytes.size());
}

std::vector<std::size_t> parse_layer_dims(const std::string& text) {
    std::vector<std::size_t> dims;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find(',', pos);
        const auto end = (next == std::string::npos) ? text.size() : next;
        std::size_t value = 0;
        auto res = std::from_chars(text.data() + pos, text.data() + end, value);
        if (res.ec != std::errc{} || res.ptr != text.data() + end || value == 0)
            throw std::invalid_argument("--layers: expected comma-separated positive integers");
        dims.push_back(value);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (dims.size() < 2) throw std::invalid_argument("--layers: need at least input,output");
    return dims;
}

std::uint16_t code_id_from_flag(int code) {
    return code == 7 ? nfe::kCodeIdHamming7 : nfe::kCodeIdHamming15;
}

struct GenArgs {
    std::size_t users = 0, samples = 0, dim = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

struct TrainArgs {
    std::string embeddings, layers, out;
    std::uint64_t seed = 0;
    nfe::TrainConfig config;
};

struct EnrollArgs {
    std::string store, embeddings, expander, user;
    std::string scheme = "lattice";
    double quantile = 0.95;
    double inflation = 0.10;
    int code = 7;
};

struct VerifyArgs {
    std::string store, expander, user, probe;
};

struct EvalArgs {
    std::string embeddings, expander, csv, json;
    std::string scheme = "lattice";
    std::string multipliers = "1";
    double train_fraction = 0.8;
    double quantile = 0.95;
    double inflation = 0.10;
    int code = 7;
    std::uint64_t seed = 0;
};

struct ReportArgs {
    std::string embeddings, expander, out;
    double quantile = 0.95;
    double inflation = 0.10;
};

int run_gen(const GenArgs& a) {
    const auto set = nfe::generate_synthetic(a.users, a.samples, a.dim, a.sigma, a.seed);
    write_file(a.out, nfe::save_embedding_set(set));
    std::cout << "wrote " << set.items.size() << " embeddings to " << a.out << "\n";
    return kExitAccept;
}

int run_train(const TrainArgs& a) {
    const auto set = load_embeddings_file(a.embeddings);
    const auto dims = parse_layer_dims(a.layers);
    if (dims.front() != set.dim)
        throw std::invalid_argument("--layers: first dim must match the embedding dim (" +
                                    std::to_string(set.dim) + ")");
    nfe::TrainConfig config = a.config;
    config.seed = a.seed;
    const auto initial = nfe::init_params(dims, a.seed);
    const auto result = nfe::train(initial, set, config);
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
        std::cout << "epoch " << e + 1 << " loss " << nfe::detail::format_double(result.epoch_loss[e])
                  << "\n";
    if (result.degenerate_outputs > 0)
        std::cerr << "warning: " << result.degenerate_outputs << " degenerate network outputs\n";
    write_file(a.out, nfe::save_expander_params(result.params));
    std::cout << "wrote expander params to " << a.out << "\n";
    return kExitAccept;
}

int run_enroll(const EnrollArgs& a) {
    const auto set = load_embeddings_file(a.embeddings);
    const auto expander = nfe::load_expander_params(read_file_bytes(a.expander));
    if (set.dim != expander.input_dim())
        throw std::invalid_argument("embedding dim does not match the expander input dim");

    std::vector<nfe::Vec> user_vectors;
    std::vector<nfe::Vec> all_outputs;
    all_outputs.reserve(set.items.size());
    for (const auto& item : set.items) {
        all_outputs.push_back(nfe::forward(expander, item.vector));
        if (item.user_id == a.user) user_vectors.push_back(item.vector);
    }
    if (user_vectors.empty())
        throw nfe::FormatError("user '" + a.user + "' not found in " + a.embeddings);

    nfe::EnrollConfig config;
    config.scheme = nfe::scheme_from_name(a.scheme);
    config.quantile = a.quantile;
    config.support = nfe::fit_support_sphere(all_outputs, a.inflation);
    config.code_id = code_id_from_flag(a.code);
    config.pepper = nfe::pepper_from_env();

    nfe::RecordStore store;
    if (std::filesystem::exists(a.store)) store = nfe::load_store_file(a.store);
    nfe::enroll_user(store, a.user, user_vectors, expander, config);
    nfe::save_store_file(store, a.store);
    std::cout << "enrolled " << a.user << " (" << a.scheme << ") in " << a.store << "\n";
    return kExitAccept;
}

int run_verify(const VerifyArgs& a) {
    const auto store = nfe::load_store_file(a.store);
    const auto* record = store.find(a.user);
    if (record == nullptr) throw nfe::FormatError("user '" + a.user + "' not found in " + a.store);
    const auto expander = nfe::load_expander_params(read_file_bytes(a.expander));

    const auto probe_set = load_embeddings_file(a.probe);
    if (probe_set.items.size() != 1)
        throw nfe::FormatError("probe file must contain exactly one record");

    const auto result =
        nfe::verify_user(*record, probe_set.items.front().vector, expander, nfe::pepper_from_env());
    if (result == nfe::VerifyResult::accept) {
        std::cout << "ACCEPT\n";
        return kExitAccept;
    }
    std::cout << "REJECT\n";
    return kExitReject;
}

int run_eval(const EvalArgs& a) {
    const auto set = load_embeddings_file(a.embeddings);
    const auto expander = nfe::load_expander_params(read_file_bytes(a.expander));

    std::vector<double> multipliers;
    std::size_t pos = 0;
    while (pos <= a.multipliers.size()) {
        const auto next = a.multipliers.find(',', pos);
        const auto end = (next == std::string::npos) ? a.multipliers.size() : next;
        multipliers.push_back(nfe::detail::parse_double(
            std::string_view(a.multipliers).substr(pos, end - pos), 1));
        if (next == std::string::npos) break;
        pos = next + 1;
    }

    const auto [train_set, test_set] = nfe::split(set, a.train_fraction, a.seed);
    nfe::SweepConfig config;
    config.quantile = a.quantile;
    config.support_inflation = a.inflation;
    config.code_id = code_id_from_flag(a.code);
    const auto report = nfe::far_frr_sweep(train_set, test_set, expander, multipliers,
                                           nfe::scheme_from_name(a.scheme), a.seed, config);

    write_file(a.csv, nfe::eval_csv(report));
    std::cout << "wrote " << a.csv << "\n";
    if (!a.json.empty()) {
        write_file(a.json, nfe::eval_json(report));
        std::cout << "wrote " << a.json << "\n";
    }
    return kExitAccept;
}

int run_report(const ReportArgs& a) {
    const auto set = load_embeddings_file(a.embeddings);
    const auto expander = nfe::load_expander_params(read_file_bytes(a.expander));
    if (set.dim != expander.input_dim())
        throw std::invalid_argument("embedding dim does not match the expander input dim");

    std::vector<double> radii;
    for (const auto& [user, indices] : set.by_user()) {
        std::vector<nfe::Vec> outputs;
        outputs.reserve(indices.size());
        for (auto idx : indices) outputs.push_back(nfe::forward(expander, set.items[idx].vector));
        radii.push_back(nfe::fit_user_region(outputs, a.quantile, user).radius);
    }
    const auto summary = nfe::security_report(set, expander, radii, a.inflation);
    write_file(a.out, nfe::security_json(summary, expander.output_dim(), radii.size()));
    std::cout << "wrote " << a.out << "\n";
    return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"neural fuzzy extractor toolkit"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic embedding file");
    gen_cmd->add_option("--users", gen.users, "number of users")->required();
    gen_cmd->add_option("--samples", gen.samples, "samples per user")->required();
    gen_cmd->add_option("--dim", gen.dim, "embedding dimension")->required();
    gen_cmd->add_option("--sigma", gen.sigma, "intra-user noise sigma")->required();
    gen_cmd->add_option("--seed", gen.seed, "PRNG seed")->required();
    gen_cmd->add_option("--out", gen.out, "output embedding file")->required();

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "train an expander network");
    train_cmd->add_option("--embeddings", train.embeddings, "input embedding file")->required();
    train_cmd->add_option("--layers", train.layers, "layer dims, e.g. 16,12,8")->required();
    train_cmd->add_option("--out", train.out, "output params file")->required();
    train_cmd->add_option("--seed", train.seed, "PRNG seed")->required();
    train_cmd->add_option("--epochs", train.config.epochs, "training epochs");
    train_cmd->add_option("--alpha", train.config.alpha, "triplet margin");
    train_cmd->add_option("--lr", train.config.learning_rate, "learning rate");
    train_cmd->add_option("--momentum", train.config.momentum, "SGD momentum");
    train_cmd->add_option("--batch", train.config.batch_size, "batch size");
    train_cmd->add_option("--hard-fraction", train.config.hard_fraction, "hard triplet fraction");

    EnrollArgs enroll;
    auto* enroll_cmd = app.add_subcommand("enroll", "enroll a user into the record store");
    enroll_cmd->add_option("--store", enroll.store, "record store file")->required();
    enroll_cmd->add_option("--embeddings", enroll.embeddings, "enrollment embedding file")->required();
    enroll_cmd->add_option("--expander", enroll.expander, "expander params file")->required();
    enroll_cmd->add_option("--user", enroll.user, "user id to enroll")->required();
    enroll_cmd->add_option("--scheme", enroll.scheme, "lattice or binary")
        ->check(CLI::IsMember({"lattice", "binary"}));
    enroll_cmd->add_option("--quantile", enroll.quantile, "user radius quantile");
    enroll_cmd->add_option("--inflation", enroll.inflation, "support sphere inflation");
    enroll_cmd->add_option("--code", enroll.code, "binary block code (7 or 15)")
        ->check(CLI::IsMember({7, 15}));

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "verify a probe against an enrolled user");
    verify_cmd->add_option("--store", verify.store, "record store file")->required();
    verify_cmd->add_option("--expander", verify.expander, "expander params file")->required();
    verify_cmd->add_option("--user", verify.user, "claimed user id")->required();
    verify_cmd->add_option("--probe", verify.probe, "single-record embedding file")->required();

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "FRR/FAR sweep over radius multipliers");
    eval_cmd->add_option("--embeddings", eval.embeddings, "input embedding file")->required();
    eval_cmd->add_option("--expander", eval.expander, "expander params file")->required();
    eval_cmd->add_option("--seed", eval.seed, "PRNG seed (split and salts)")->required();
    eval_cmd->add_option("--csv", eval.csv, "output CSV file")->required();
    eval_cmd->add_option("--json", eval.json, "output JSON report file");
    eval_cmd->add_option("--multipliers", eval.multipliers, "comma-separated radius multipliers");
    eval_cmd->add_option("--scheme", eval.scheme, "lattice or binary")
        ->check(CLI::IsMember({"lattice", "binary"}));
    eval_cmd->add_option("--train-fraction", eval.train_fraction, "per-user train split fraction");
    eval_cmd->add_option("--quantile", eval.quantile, "user radius quantile");
    eval_cmd->add_option("--inflation", eval.inflation, "support sphere inflation");
    eval_cmd->add_option("--code", eval.code, "binary block code (7 or 15)")
        ->check(CLI::IsMember({7, 15}));

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "entropy-based security summary");
    report_cmd->add_option("--embeddings", report.embeddings, "input embedding file")->required();
    report_cmd->add_option("--expander", report.expander, "expander params file")->required();
    report_cmd->add_option("--out", report.out, "output JSON file")->required();
    report_cmd->add_option("--quantile", report.quantile, "user radius quantile");
    report_cmd->add_option("--inflation", report.inflation, "support sphere inflation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*train_cmd) return run_train(train);
        if (*enroll_cmd) return run_enroll(enroll);
        if (*verify_cmd) return run_verify(verify);
        if (*eval_cmd) return run_eval(eval);
        if (*report_cmd) return run_report(report);
    } catch (const nfe::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
