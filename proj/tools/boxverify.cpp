#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "boxverify/ce.hpp"
#include "boxverify/errors.hpp"
#include "boxverify/verify.hpp"

namespace {

using boxverify::RunRecord;
using boxverify::VerifyOptions;

std::string default_ce_path(const std::string& spec_path) {
    return std::filesystem::path(spec_path).stem().string() + ".ce";
}

std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", s);
    return buf;
}

struct ManifestEntry {
    std::string model;
    std::string spec;
    bool ok = true;
};

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw boxverify::FileError("cannot open manifest: " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos)
            continue;
        line = line.substr(start);
        if (line.empty() || line[0] == '#')
            continue;
        ManifestEntry e;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            e.model = line;
            e.ok = false;
        } else {
            e.model = line.substr(0, comma);
            e.spec = line.substr(comma + 1);
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

int run_verify(const std::string& model, const std::string& spec, const VerifyOptions& opts,
               std::string ce_out) {
    RunRecord rec = boxverify::verify_instance(model, spec, opts);

    if (!rec.diagnostic.empty())
        std::cerr << rec.diagnostic << "\n";
    if (rec.verdict == "violated") {
        if (ce_out.empty())
            ce_out = default_ce_path(spec);
        try {
            boxverify::write_counterexample_file(ce_out, rec.ce_input, rec.ce_output);
            rec.ce_path = ce_out;
            std::cerr << "counterexample written to " << ce_out << "\n";
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
        }
    }
    std::cout << rec.verdict << "\n";
    return rec.file_error ? 2 : 0;
}

int run_batch(const std::string& manifest_path, const VerifyOptions& opts, int jobs,
              const std::string& ce_dir) {
    std::vector<ManifestEntry> entries;
    try {
        entries = read_manifest(manifest_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    std::vector<RunRecord> records(entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= entries.size())
                return;
            const ManifestEntry& e = entries[i];
            if (!e.ok) {
                RunRecord rec;
                rec.model_path = e.model;
                rec.verdict = "unknown";
                rec.diagnostic = "malformed manifest line";
                rec.seed = opts.seed;
                records[i] = std::move(rec);
                continue;
            }
            records[i] = boxverify::verify_instance(e.model, e.spec, opts);
        }
    };

    const int thread_count = std::max(1, jobs);
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    if (!ce_dir.empty())
        std::filesystem::create_directories(ce_dir);

    std::cout << "model,spec,result,time_seconds,seed\n";
    std::size_t holds = 0, violated = 0, unknown = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const RunRecord& rec = records[i];
        if (!rec.diagnostic.empty())
            std::cerr << "[" << i << "] " << rec.model_path << "," << rec.spec_path << ": "
                      << rec.diagnostic << "\n";
        if (rec.verdict == "holds")
            ++holds;
        else if (rec.verdict == "violated")
            ++violated;
        else
            ++unknown;
        total += rec.wall_seconds;
        if (rec.verdict == "violated" && !ce_dir.empty()) {
            const std::string path =
                (std::filesystem::path(ce_dir) /
                 (std::to_string(i) + "_" + std::filesystem::path(rec.spec_path).stem().string() +
                  ".ce"))
                    .string();
            try {
                boxverify::write_counterexample_file(path, rec.ce_input, rec.ce_output);
                records[i].ce_path = path;
            } catch (const std::exception& e) {
                std::cerr << e.what() << "\n";
            }
        }
        std::cout << rec.model_path << "," << rec.spec_path << "," << rec.verdict << ","
                  << format_seconds(rec.wall_seconds) << "," << rec.seed << "\n";
    }
    std::cout << "holds=" << holds << " violated=" << violated << " unknown=" << unknown
              << " total_time=" << format_seconds(total) << "\n";
    return 0;
}

int run_validate(const std::string& model, const std::string& spec, const std::string& ce) {
    std::string message;
    const bool ok = boxverify::validate_counterexample(model, spec, ce, &message);
    if (!message.empty())
        std::cerr << message << "\n";
    std::cout << (ok ? "valid" : "invalid") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "boxverify - output-bound estimation and safety-property falsification for\n"
        "feedforward ONNX networks. Bounds come from Latin hypercube sampling plus\n"
        "L-BFGS-B refinement; they are estimates of attainable values, so `holds`\n"
        "means the violation is refuted against the estimated bounds, not a formal\n"
        "proof. `violated` always ships a re-checkable counterexample."};
    app.require_subcommand(1);

    VerifyOptions opts;
    std::string cache_dir;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", opts.seed, "RNG seed for sampling")->capture_default_str();
        cmd->add_option("--samples-per-input", opts.samples_per_input,
                        "LHS samples per input dimension")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--cache-dir", cache_dir, "directory for reusable bounds files");
        cmd->add_option("--timeout", opts.timeout_seconds,
                        "soft per-instance timeout in seconds (0 = off)")
            ->capture_default_str();
        cmd->add_option("--opt-memory", opts.opt.memory, "L-BFGS-B history pairs")
            ->capture_default_str();
        cmd->add_option("--opt-max-iterations", opts.opt.max_iterations,
                        "refinement iteration cap")
            ->capture_default_str();
        cmd->add_option("--opt-grad-tolerance", opts.opt.grad_tolerance,
                        "projected-gradient stop tolerance")
            ->capture_default_str();
        cmd->add_option("--opt-f-tolerance", opts.opt.f_tolerance,
                        "relative objective-decrease stop tolerance")
            ->capture_default_str();
        cmd->add_option("--opt-fd-step", opts.opt.fd_step, "relative finite-difference step")
            ->capture_default_str();
    };

    std::string model_path, spec_path, ce_out;
    CLI::App* verify = app.add_subcommand("verify", "verify one (model, spec) instance");
    verify->add_option("model", model_path, "ONNX model file")->required();
    verify->add_option("spec", spec_path, "VNNLIB specification file")->required();
    verify->add_option("--ce-out", ce_out,
                       "counterexample output path (default: <spec-stem>.ce)");
    add_common(verify);

    std::string manifest_path, ce_dir;
    int jobs = 1;
    CLI::App* batch = app.add_subcommand("batch", "run a manifest of model,spec pairs");
    batch->add_option("manifest", manifest_path, "CSV manifest, one `model,spec` per line")
        ->required();
    batch->add_option("--jobs", jobs, "parallel instances")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    batch->add_option("--ce-dir", ce_dir, "write counterexamples for violated rows here");
    add_common(batch);

    std::string v_model, v_spec, v_ce;
    CLI::App* validate =
        app.add_subcommand("validate-ce", "re-check a counterexample file from scratch");
    validate->add_option("model", v_model, "ONNX model file")->required();
    validate->add_option("spec", v_spec, "VNNLIB specification file")->required();
    validate->add_option("ce", v_ce, "counterexample file")->required();

    CLI11_PARSE(app, argc, argv);

    if (!cache_dir.empty())
        opts.cache_dir = cache_dir;

    if (verify->parsed())
        return run_verify(model_path, spec_path, opts, ce_out);
    if (batch->parsed())
        return run_batch(manifest_path, opts, jobs, ce_dir);
    if (validate->parsed())
        return run_validate(v_model, v_spec, v_ce);
    return 1;
}
