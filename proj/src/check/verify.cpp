#include "boxverify/verify.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "boxverify/bounds.hpp"
#include "boxverify/ce.hpp"
#include "boxverify/checker.hpp"
#include "boxverify/errors.hpp"
#include "boxverify/onnx.hpp"
#include "boxverify/vnnlib.hpp"

namespace boxverify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

RunRecord verify_instance(const std::string& model_path, const std::string& spec_path,
                          const VerifyOptions& options) {
    RunRecord rec;
    rec.model_path = model_path;
    rec.spec_path = spec_path;
    rec.seed = options.seed;
    rec.verdict = "unknown";

    const auto start = Clock::now();
    std::optional<Clock::time_point> deadline;
    if (options.timeout_seconds > 0.0)
        deadline = start + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(options.timeout_seconds));
    auto out_of_time = [&]() { return deadline && Clock::now() > *deadline; };

    try {
        const SpecFile spec = parse_spec_file(spec_path);

        if (has_complex_input_disjunction(spec)) {
            rec.diagnostic = "specification has a disjunction over input variables";
            rec.wall_seconds = seconds_since(start);
            return rec;
        }

        const Box box = extract_input_box(spec);
        const Network net = load_network_file(model_path);

        if (net.input_dim != static_cast<std::size_t>(spec.input_count) ||
            net.output_dim != static_cast<std::size_t>(spec.output_count)) {
            rec.diagnostic = "specification declares " + std::to_string(spec.input_count) +
                             " inputs / " + std::to_string(spec.output_count) +
                             " outputs but the network has " + std::to_string(net.input_dim) +
                             " / " + std::to_string(net.output_dim);
            rec.wall_seconds = seconds_since(start);
            return rec;
        }
        if (out_of_time())
            throw TimeoutExpired("timeout before bounds estimation");

        BoundsConfig bounds_cfg;
        bounds_cfg.opt = options.opt;
        bounds_cfg.samples_per_input = options.samples_per_input;
        bounds_cfg.cache_dir = options.cache_dir;
        bounds_cfg.deadline = deadline;

        BoundsResult bounds = estimate_output_bounds(net, box, options.seed, bounds_cfg);
        rec.bounds_provenance =
            bounds.bounds.provenance == Provenance::Cache ? "cache" : "fresh";

        if (out_of_time())
            throw TimeoutExpired("timeout before the verdict stage");

        // on a cache hit the sample scan regenerates the identical sample set
        std::optional<EvaluatedSamples> lazy;
        auto provider = [&]() -> const EvaluatedSamples& {
            if (bounds.run)
                return *bounds.run;
            if (!lazy) {
                const std::size_t n =
                    static_cast<std::size_t>(options.samples_per_input) * net.input_dim;
                lazy = evaluate_samples(network_fn(net), lhsmdu(n, box, options.seed));
            }
            return *lazy;
        };

        const Verdict verdict = decide(spec, net, box, bounds.bounds, provider);
        switch (verdict.kind) {
        case Verdict::Kind::Holds:
            rec.verdict = "holds";
            break;
        case Verdict::Kind::Violated:
            rec.verdict = "violated";
            rec.ce_input = verdict.ce_input;
            rec.ce_output = verdict.ce_output;
            break;
        case Verdict::Kind::Unknown:
            rec.verdict = "unknown";
            rec.diagnostic = "analysis inconclusive within the sample budget";
            break;
        }
    } catch (const FileError& e) {
        rec.diagnostic = e.what();
        rec.file_error = true;
    } catch (const TimeoutExpired& e) {
        rec.diagnostic = e.what();
    } catch (const Error& e) {
        rec.diagnostic = e.what();
    } catch (const std::exception& e) {
        rec.diagnostic = std::string("internal error: ") + e.what();
    }

    rec.wall_seconds = seconds_since(start);
    return rec;
}

bool validate_counterexample(const std::string& model_path, const std::string& spec_path,
                             const std::string& ce_path, std::string* message) {
    auto say = [&](const std::string& m) {
        if (message)
            *message = m;
    };
    try {
        const SpecFile spec = parse_spec_file(spec_path);
        const Network net = load_network_file(model_path);
        const Counterexample ce = read_counterexample_file(ce_path);

        if (ce.x.size() != net.input_dim) {
            say("counterexample assigns " + std::to_string(ce.x.size()) +
                " inputs, network expects " + std::to_string(net.input_dim));
            return false;
        }
        for (double v : ce.x) {
            if (!std::isfinite(v)) {
                say("counterexample contains a non-finite input");
                return false;
            }
        }
        const std::vector<double> y = infer(net, ce.x);
        if (!ce.y.empty()) {
            if (ce.y.size() != y.size()) {
                say("counterexample lists " + std::to_string(ce.y.size()) +
                    " outputs, network produces " + std::to_string(y.size()));
                return false;
            }
            for (std::size_t j = 0; j < y.size(); ++j) {
                if (std::abs(ce.y[j] - y[j]) > 1e-9) {
                    say("stored output Y_" + std::to_string(j) +
                        " differs from recomputed inference by more than 1e-9");
                    return false;
                }
            }
        }
        if (!eval_point(spec.assertion, ce.x, y)) {
            say("point does not satisfy the violation formula");
            return false;
        }
        say("counterexample reproduces the violation");
        return true;
    } catch (const std::exception& e) {
        say(e.what());
        return false;
    }
}

}  // namespace boxverify
