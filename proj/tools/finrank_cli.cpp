// finrank: moment matrices, Toeplitz ranks and atom recovery from the shell.
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 check or recovery failure,
// 3 numerical failure or inconsistent ranks.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "finrank/error.hpp"
#include "finrank/generate.hpp"
#include "finrank/io.hpp"
#include "finrank/moments.hpp"
#include "finrank/operators.hpp"
#include "finrank/recovery.hpp"
#include "finrank/verify.hpp"

namespace {

using finrank::io::json;

enum Exit : int { kOk = 0, kUsage = 1, kFailure = 2, kNumerical = 3 };

struct RunSpec {
    std::string command;
    std::string input;
    std::string output;
    int degree = 4;
    std::string kernel = "bargmann";
    std::uint64_t seed = 0;
    finrank::RecoveryConfig config;
    // gen
    std::size_t dimension = 1;
    std::size_t count = 0;
    double separation = 0.1;

    json to_json() const
    {
        json j = {{"command", command}};
        if (command == "gen") {
            j["dimension"] = dimension;
            j["count"] = count;
            j["separation"] = separation;
            j["seed"] = seed;
            j["output"] = output;
            return j;
        }
        j["input"] = input;
        j["output"] = output;
        j["degree"] = degree;
        if (command == "galerkin" || command == "spectrum") j["kernel"] = kernel;
        j["seed"] = seed;
        j["rank_tol"] = config.rank_tol;
        if (command == "recover" || command == "verify") {
            j["match_tol"] = config.match_tol;
            j["epsilon"] = config.epsilon;
            j["max_retries"] = config.max_retries;
        }
        return j;
    }
};

json with_header(const RunSpec& spec, const json& body)
{
    json out = {{"run", spec.to_json()}};
    for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
    return out;
}

void emit(const RunSpec& spec, const json& body)
{
    const json doc = with_header(spec, body);
    if (spec.output.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        finrank::io::write_json_file(spec.output, doc);
    }
}

finrank::MomentMatrix moments_from_input(const json& doc, int degree)
{
    if (doc.contains("entries")) return finrank::io::moment_matrix_from_json(doc);
    return std::visit([&](const auto& m) { return finrank::moment_matrix(m, degree); },
                      finrank::io::any_measure_from_json(doc));
}

finrank::KernelSpec kernel_for(const RunSpec& spec, const finrank::io::AnyMeasure& input)
{
    if (spec.kernel == "bargmann") return finrank::KernelSpec::bargmann();
    if (const auto* m = std::get_if<finrank::DiscreteMeasure>(&input)) {
        return finrank::KernelSpec::bergman(finrank::enclosing_polydisk(*m));
    }
    return finrank::KernelSpec::bergman(std::get<finrank::DensityMeasure>(input).domain());
}

finrank::GalerkinMatrix galerkin_for(const RunSpec& spec, const finrank::io::AnyMeasure& input)
{
    const auto kernel = kernel_for(spec, input);
    if (const auto* m = std::get_if<finrank::DiscreteMeasure>(&input)) {
        return finrank::galerkin_matrix(kernel, *m, spec.degree);
    }
    const auto& density = std::get<finrank::DensityMeasure>(input);
    for (const auto& c : density.domain().center().coords()) {
        if (kernel.kind() == finrank::KernelKind::bergman_polydisk && c != finrank::cplx{0.0, 0.0}) {
            throw finrank::InvalidArgument("Bergman Galerkin matrices of densities need a polydisk centered at 0");
        }
    }
    return finrank::galerkin_from_moments(kernel, finrank::moment_matrix(density, spec.degree));
}

int run(const RunSpec& spec)
{
    using namespace finrank;
    if (spec.command == "gen") {
        GenerateOptions o;
        o.dimension = spec.dimension;
        o.count = spec.count;
        o.seed = spec.seed;
        o.separation = spec.separation;
        emit(spec, io::to_json(random_measure(o)));
        return kOk;
    }

    const json doc = io::read_json_file(spec.input);
    if (spec.command == "moments") {
        emit(spec, io::to_json(moments_from_input(doc, spec.degree)));
        return kOk;
    }
    if (spec.command == "rank") {
        const auto r = numerical_rank(moments_from_input(doc, spec.degree), spec.config.rank_tol);
        emit(spec, {{"rank", r.rank}, {"singular_values", r.singular_values}, {"ill_conditioned", r.ill_conditioned}});
        return kOk;
    }
    if (spec.command == "galerkin") {
        const auto g = galerkin_for(spec, io::any_measure_from_json(doc));
        const auto r = numerical_rank(g.entries, spec.config.rank_tol);
        json body = io::to_json(g);
        body["rank"] = r.rank;
        emit(spec, body);
        return kOk;
    }
    if (spec.command == "spectrum") {
        const auto ev = spectrum(galerkin_for(spec, io::any_measure_from_json(doc)));
        std::ostringstream csv;
        csv << "# run " << spec.to_json().dump() << '\n';
        io::write_spectrum_csv(csv, ev);
        if (spec.output.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream out(spec.output);
            if (!(out << csv.str())) throw std::runtime_error("cannot write " + spec.output);
        }
        return kOk;
    }
    if (spec.command == "recover") {
        RecoveryConfig cfg = spec.config;
        cfg.seed = spec.seed;
        emit(spec, io::to_json(recover_atoms(moments_from_input(doc, spec.degree), cfg)));
        return kOk;
    }
    if (spec.command == "verify") {
        RecoveryConfig cfg = spec.config;
        cfg.seed = spec.seed;
        const Verdict v = run_battery(io::any_measure_from_json(doc), spec.degree, spec.seed, cfg);
        emit(spec, to_json(v));
        return v.passed ? kOk : kFailure;
    }
    throw InvalidArgument("unknown command " + spec.command);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Moment matrices, Toeplitz ranks and atomic measure recovery"};
    app.require_subcommand(1);
    RunSpec spec;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input", spec.input, "Input JSON file");
        if (needs_input) in->required()->check(CLI::ExistingFile);
        sub->add_option("--output", spec.output, "Output file (stdout when omitted)");
        sub->add_option("--seed", spec.seed, "Random seed");
    };
    auto add_numeric = [&](CLI::App* sub) {
        sub->add_option("--degree", spec.degree, "Truncation degree D")->check(CLI::NonNegativeNumber);
        sub->add_option("--rank-tol", spec.config.rank_tol, "Relative SVD threshold");
    };
    auto add_recovery = [&](CLI::App* sub) {
        sub->add_option("--match-tol", spec.config.match_tol, "Location matching distance");
        sub->add_option("--epsilon", spec.config.epsilon, "Size of the g perturbation");
        sub->add_option("--max-retries", spec.config.max_retries, "Retries on degenerate projections");
    };

    auto* gen = app.add_subcommand("gen", "Generate a random atomic measure");
    add_common(gen, false);
    gen->add_option("--dim", spec.dimension, "Dimension d")->check(CLI::PositiveNumber);
    gen->add_option("--count", spec.count, "Number of atoms N");
    gen->add_option("--separation", spec.separation, "Minimum pairwise distance");

    for (const auto& [name, help] : {std::pair{"moments", "Truncated moment matrix"},
                                     std::pair{"rank", "Numerical rank of the moment matrix"},
                                     std::pair{"galerkin", "Galerkin matrix of the Toeplitz operator"},
                                     std::pair{"spectrum", "Eigenvalues of the Galerkin matrix (CSV)"},
                                     std::pair{"recover", "Recover atoms from a moment matrix"},
                                     std::pair{"verify", "Run the invariant battery"}}) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, true);
        add_numeric(sub);
        if (std::string(name) == "galerkin" || std::string(name) == "spectrum") {
            sub->add_option("--kernel", spec.kernel, "bargmann or bergman")
                ->check(CLI::IsMember({"bargmann", "bergman"}));
        }
        if (std::string(name) == "recover" || std::string(name) == "verify") add_recovery(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    spec.command = app.get_subcommands().front()->get_name();

    try {
        spec.config.validate();
        return run(spec);
    } catch (const finrank::RecoveryFailed& e) {
        std::cerr << "finrank: " << e.what() << '\n';
        return kFailure;
    } catch (const finrank::InconsistentRank& e) {
        std::cerr << "finrank: " << e.what() << '\n';
        return kNumerical;
    } catch (const finrank::NumericalError& e) {
        std::cerr << "finrank: " << e.what() << '\n';
        return kNumerical;
    } catch (const finrank::Error& e) {
        std::cerr << "finrank: " << e.what() << '\n';
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "finrank: malformed input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "finrank: " << e.what() << '\n';
        return kUsage;
    }
}
