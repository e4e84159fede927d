// odecert command-line front end: analyze / solve / reduce / system-analyze /
// lif / profile over ODE problem files.

#include <CLI11.hpp>

#include "odecert/analyzer.hpp"
#include "odecert/lif.hpp"
#include "odecert/profiler.hpp"
#include "odecert/solver.hpp"
#include "odecert/spec_file.hpp"

#include <fstream>
#include <iostream>

using namespace odecert;

namespace {

// --t accepts only exactly representable times: integers, p/2^k, rationals
// that happen to be dyadic, and decimal literals that are dyadic. No silent
// float parsing.
Dyadic parse_time(const std::string& text) {
    std::string s = text;
    mpq_class q;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        mpz_class n(num);
        mpz_class d;
        auto caret = den.find('^');
        if (caret != std::string::npos) {
            if (den.substr(0, caret) != "2")
                throw validation_error("--t power form must be p/2^k");
            unsigned long k = std::stoul(den.substr(caret + 1));
            mpz_ui_pow_ui(d.get_mpz_t(), 2, k);
        } else {
            d = mpz_class(den);
        }
        if (d == 0) throw validation_error("--t has zero denominator");
        q = mpq_class(n, d);
        q.canonicalize();
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot);
        std::string fp = s.substr(dot + 1);
        if (fp.empty()) fp = "0";
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg) ip = ip.substr(1);
        if (ip.empty()) ip = "0";
        mpz_class whole(ip);
        mpq_class val = mpq_class(whole) + mpq_class(mpz_class(fp), scale);
        q = neg ? mpq_class(-val) : val;
        q.canonicalize();
    } else {
        q = mpq_class(mpz_class(s));
    }
    if (!Dyadic::rational_is_dyadic(q))
        throw validation_error("--t value " + text + " is not exactly representable as a dyadic");
    Dyadic t = Dyadic::from_rational_exact(q);
    if (t.sign() < 0 || t > Dyadic(1)) throw validation_error("--t must lie in [0,1]");
    return t;
}

std::size_t digits_for(long bits) { return static_cast<std::size_t>(bits * 302 / 1000 + 3); }

struct Output {
    std::ostream* human = &std::cout;
    std::string csv_path;
    bool quiet = false;

    void say(const std::string& line) const {
        if (!quiet) *human << line << "\n";
    }
    void emit_csv(const std::string& content) const {
        if (csv_path.empty()) {
            std::cout << content;
        } else {
            std::ofstream f(csv_path, std::ios::binary);
            if (!f) throw validation_error("cannot write '" + csv_path + "'");
            f << content;
        }
    }
};

int cmd_analyze(const LoadedSpec& spec, const Output& out) {
    if (spec.kind != LoadedSpec::Kind::Scalar)
        throw validation_error("analyze needs an [ode] file; use system-analyze for systems");
    Verdict v = classify_scalar(spec.ode);
    out.say("verdict: " + verdict_summary(v));
    if (const auto* t = std::get_if<TrivialNoBlowup>(&v)) {
        out.say("Q = " + t->Q.to_string());
    } else if (const auto* b = std::get_if<Blowup>(&v)) {
        out.say("witness = " + b->witness.to_string(12));
        if (b->pu_at_minus_a0) out.say("P_u(-a0) = " + b->pu_at_minus_a0->to_string());
    }
    return verdict_exit_code(v);
}

int cmd_system_analyze(const LoadedSpec& spec, const Output& out) {
    const ODESystem* sys = nullptr;
    ODESystem lif_sys;
    if (spec.kind == LoadedSpec::Kind::System) {
        sys = &spec.sys;
    } else if (spec.kind == LoadedSpec::Kind::Lif) {
        lif_sys = build_lif(spec.lif.tau_m, spec.lif.tau_s, spec.lif.v_rest, spec.lif.v0,
                            spec.lif.i0);
        sys = &lif_sys;
    } else {
        throw validation_error("system-analyze needs a [system] or [lif] file");
    }
    Verdict v = classify_system(*sys);
    out.say("verdict: " + verdict_summary(v));
    auto print_matrices = [&](const QMatrix& k, const QMatrix& literal) {
        out.say("criterion matrix sum_j (A1^-1 B_j)(-A1^-1 A0)^j = " + k.to_string());
        out.say("literal theorem expression P_y(-A1^-1 A0) = " + literal.to_string());
        out.say("note: the literal expression vanishes identically for every order-(1,n) "
                "system, so it cannot separate the LIF model's known blowup; the criterion "
                "above uses the right-hand coefficient matrices instead (see README).");
    };
    if (const auto* b = std::get_if<SystemBlowup>(&v)) print_matrices(b->criterion, b->literal_py_eval);
    if (const auto* c = std::get_if<SystemNoBlowupCandidate>(&v))
        print_matrices(c->criterion, c->literal_py_eval);
    return verdict_exit_code(v);
}

int cmd_solve(const LoadedSpec& spec, const Dyadic& t, long bits, const std::string& backend_name,
              const Output& out) {
    SolveOptions opts;
    if (backend_name == "closed-form") opts.backend = Backend::ClosedForm;
    else if (backend_name == "quadrature") opts.backend = Backend::Quadrature;

    std::vector<ComplexBox> values;
    std::string backend_used;
    if (spec.kind == LoadedSpec::Kind::Scalar) {
        SolutionResult r = solve_cascade(spec.ode, spec.signals[0], {t, bits}, opts);
        values = r.value;
        backend_used = r.backend;
    } else if (spec.kind == LoadedSpec::Kind::System) {
        SolutionResult r = solve_system(spec.sys, spec.signals, {t, bits}, opts);
        values = r.value;
        backend_used = r.backend;
    } else {
        LIFConfig cfg = LIFConfig::from_params(spec.lif, spec.signals[0]);
        auto [v, i] = simulate_lif(cfg, t, bits);
        values = {v, i};
        backend_used = "closed-form";
    }
    out.say("backend: " + backend_used);
    std::size_t digits = digits_for(bits);
    for (std::size_t c = 0; c < values.size(); ++c)
        out.say("y[" + std::to_string(c) + "](" + t.to_decimal(6, false) + ") = " +
                values[c].to_string(digits));
    return 0;
}

int cmd_reduce(const LoadedSpec& spec, long bits, const Output& out) {
    if (spec.kind != LoadedSpec::Kind::Scalar)
        throw validation_error("reduce needs an [ode] file");
    auto chain = deflation_chain(spec.ode, bits);
    std::size_t digits = digits_for(bits);
    for (std::size_t k = 0; k < chain.size(); ++k) {
        std::string line = "sigma_" + std::to_string(k + 1) + " = " + chain[k].sigma.to_string(digits) +
                           "  reduced: ";
        for (std::size_t i = 0; i < chain[k].reduced_coeffs.size(); ++i) {
            if (i) line += ", ";
            line += chain[k].reduced_coeffs[i].to_string(digits);
        }
        out.say(line);
    }
    return 0;
}

int cmd_lif(const LoadedSpec& spec, const std::string& theta_override, long bits,
            const Output& out) {
    if (spec.kind != LoadedSpec::Kind::Lif) throw validation_error("lif needs a [lif] file");
    LIFConfig cfg = LIFConfig::from_params(spec.lif, spec.signals[0]);
    if (!theta_override.empty()) cfg.theta = parse_gaussian_rational(theta_override);
    auto train = spike_train(cfg, bits);
    std::size_t digits = digits_for(bits);
    std::string csv = "t_lo,t_hi,status\n";
    for (const auto& rep : train) {
        RealInterval box = rep.t_box;
        if (rep.status == SpikeReport::Status::Indeterminate && !rep.candidates.empty()) {
            box = rep.candidates.front();
            for (const auto& c : rep.candidates) box = RealInterval::hull(box, c);
        }
        csv += box.lo().to_decimal(digits, false) + "," + box.hi().to_decimal(digits, true) + "," +
               to_string(rep.status) + "\n";
    }
    out.emit_csv(csv);
    return 0;
}

int cmd_profile(const LoadedSpec& spec, long from, long to, long step,
                const std::string& backend_name, const Output& out) {
    if (spec.kind != LoadedSpec::Kind::Scalar)
        throw validation_error("profile needs an [ode] file");
    Backend backend = Backend::Auto;
    if (backend_name == "closed-form") backend = Backend::ClosedForm;
    else if (backend_name == "quadrature") backend = Backend::Quadrature;
    if (step <= 0 || to < from) throw validation_error("bad --bits range");
    std::vector<long> levels;
    for (long n = from; n <= to; n += step) levels.push_back(n);

    ProfileProblem p;
    p.ode = spec.ode;
    p.u = spec.signals[0];
    p.t = Dyadic(1);
    auto rows = run_profile(p, levels, backend);
    out.emit_csv(profile_csv(rows));
    if (rows.size() >= 4) {
        try {
            FitReport fit = fit_scaling(rows);
            out.say("fit: " + std::string(to_string(fit.classification)) +
                    " (poly degree " + std::to_string(fit.poly_degree) + ", exp base " +
                    std::to_string(fit.exp_base) + ")");
        } catch (const insufficient_rows&) {
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rigorous linear-ODE blowup analysis and guaranteed-accuracy solving"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string input, csv;
    bool quiet = false;
    app.add_option("-i,--input", input, "problem file")->required();
    app.add_option("--csv", csv, "write CSV output to this path");
    app.add_flag("-q,--quiet", quiet, "suppress human-readable output");

    std::string t_text = "1";
    long bits = 30;
    std::string backend = "auto";
    std::string theta;
    long bits_from = 8, bits_to = 40, bits_step = 8;

    CLI::App* analyze = app.add_subcommand("analyze", "scalar blowup criterion");
    CLI::App* system_analyze = app.add_subcommand("system-analyze", "system blowup criterion");
    CLI::App* solve = app.add_subcommand("solve", "enclosure of the solution at t");
    solve->add_option("--t", t_text, "query time in [0,1], exact dyadic");
    solve->add_option("--bits", bits, "output accuracy 2^-bits");
    solve->add_option("--backend", backend, "auto|closed-form|quadrature");
    CLI::App* reduce = app.add_subcommand("reduce", "print the root-deflation chain");
    reduce->add_option("--bits", bits, "root enclosure accuracy");
    CLI::App* lif = app.add_subcommand("lif", "spike detection for a LIF file");
    lif->add_option("--theta", theta, "threshold override (rational)");
    lif->add_option("--bits", bits, "crossing-time accuracy");
    CLI::App* profile = app.add_subcommand("profile", "work-vs-precision sweep");
    profile->add_option("--bits-from", bits_from, "first bit level");
    profile->add_option("--bits-to", bits_to, "last bit level");
    profile->add_option("--step", bits_step, "bit level step");
    profile->add_option("--backend", backend, "auto|closed-form|quadrature");

    CLI11_PARSE(app, argc, argv);

    Output out;
    out.csv_path = csv;
    out.quiet = quiet;

    try {
        LoadedSpec spec = load_spec(input);
        if (analyze->parsed()) return cmd_analyze(spec, out);
        if (system_analyze->parsed()) return cmd_system_analyze(spec, out);
        if (solve->parsed()) return cmd_solve(spec, parse_time(t_text), bits, backend, out);
        if (reduce->parsed()) return cmd_reduce(spec, bits, out);
        if (lif->parsed()) return cmd_lif(spec, theta, bits, out);
        if (profile->parsed()) return cmd_profile(spec, bits_from, bits_to, bits_step, backend, out);
    } catch (const error& e) {
        std::cout << e.code() << " " << e.what() << "\n";
        if (e.code() == "E_PARSE" || e.code() == "E_VALIDATE") return 1;
        return 4;
    } catch (const std::exception& e) {
        std::cout << "E_INTERNAL " << e.what() << "\n";
        return 4;
    }
    return 0;
}
