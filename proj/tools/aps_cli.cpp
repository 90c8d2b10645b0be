/** Command-line surface for the substitution-spectra library.
 *
 *  Subcommands: analyze, generate, palindromes, index, spectrum, eigenvalue.
 *  Exit codes: 0 success, 2 usage/malformed input, 3 degenerate substitution,
 *  4 budget overflow.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aps/palindromes.hpp"
#include "aps/repetition.hpp"
#include "aps/returnwords.hpp"
#include "aps/spectral.hpp"
#include "aps/substitution.hpp"
#include "aps/words.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_degenerate = 3;
constexpr int exit_budget = 4;

struct SubstitutionArgs {
    long long p = 0;
    std::string ks_csv;
    std::string config_path;
};

void add_substitution_options(CLI::App* cmd, SubstitutionArgs& args) {
    cmd->add_option("--p", args.p, "exponent of the a-image");
    cmd->add_option("--ks", args.ks_csv, "comma-separated a-block exponents of the b-image");
    cmd->add_option("--config", args.config_path, "JSON file {\"p\": int, \"ks\": [int,...]}");
}

aps::Substitution parse_substitution(const SubstitutionArgs& args) {
    long long p = args.p;
    std::vector<long long> ks;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw aps::input_error("cannot open config file: " + args.config_path);
        json j;
        try {
            in >> j;
            p = j.at("p").get<long long>();
            ks = j.at("ks").get<std::vector<long long>>();
        } catch (const json::exception& e) {
            throw aps::input_error(std::string("malformed substitution JSON: ") + e.what());
        }
    } else {
        if (args.ks_csv.empty()) throw aps::input_error("missing --ks (or --config)");
        std::stringstream ss(args.ks_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                ks.push_back(std::stoll(tok));
            } catch (const std::exception&) {
                throw aps::input_error("bad --ks entry: " + tok);
            }
        }
    }
    return aps::Substitution(p, std::move(ks));
}

std::pair<long long, long long> parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) throw aps::input_error("range must be lo..hi");
    try {
        long long lo = std::stoll(text.substr(0, dots));
        long long hi = std::stoll(text.substr(dots + 2));
        if (hi < lo) throw aps::input_error("range must satisfy lo <= hi");
        return {lo, hi};
    } catch (const aps::input_error&) {
        throw;
    } catch (const std::exception&) {
        throw aps::input_error("bad range: " + text);
    }
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw aps::input_error("cannot open output file: " + out_path);
        out << text;
    }
}

json substitution_echo(const aps::Substitution& s) {
    return json{{"p", s.p}, {"ks", s.ks}};
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const SubstitutionArgs& sub_args, const std::string& out_path) {
    aps::Substitution s = parse_substitution(sub_args);
    aps::Classification cls = aps::classify(s);
    if (cls.tag != aps::SubstitutionClass::AlmostPrimitive) {
        std::cerr << "analyze: substitution is " << cls.name()
                  << ", not almost primitive; nothing to analyze\n";
        return exit_degenerate;
    }
    json report;
    report["schema"] = "aperiodic-spectra/1";
    report["substitution"] = substitution_echo(s);
    report["classification"] = cls.name();
    aps::SubstitutionMatrix m = aps::matrix_of(s);
    report["matrix"] = json::array({json::array({m.m[0][0], m.m[0][1]}),
                                    json::array({m.m[1][0], m.m[1][1]})});

    aps::ComplexityProfile prof = aps::complexity_profile(s, 40);
    report["complexity"]["class"] = aps::name(aps::complexity_class(s));
    json samples = json::object();
    for (long long n : {1, 2, 5, 10, 20, 40})
        samples[std::to_string(n)] = prof.counts[static_cast<std::size_t>(n)];
    report["complexity"]["samples"] = samples;
    report["complexity"]["stabilization_depth"] = prof.stabilization_depth;

    aps::PalindromeRegime reg = aps::regime(s);
    report["palindrome_regime"]["name"] = reg.name();
    if (reg.tag == aps::RegimeTag::CriticalB) report["palindrome_regime"]["B_prime"] = reg.b_prime;

    aps::IndexBounds idx = aps::index_b_bounds(s, 8);
    report["index"]["lower_strict"] = idx.lower;
    if (idx.upper_valid) {
        report["index"]["upper"] = idx.upper;
        report["index"]["equality"] = idx.equality;
        if (idx.equality) report["index"]["value"] = idx.upper;
    }
    report["index"]["witness"] = aps::letters_string(idx.witness_y);

    aps::GordonVerdict gordon = aps::gordon_criterion(s);
    report["gordon"]["holds"] = gordon.holds;
    if (gordon.holds) report["gordon"]["witness_u"] = aps::ab_string(gordon.witness_u);

    json measures = json::array();
    for (const std::string& u : {"b", "a", "ba"}) {
        aps::MeasureSample ms = aps::measure_cylinder(s, aps::word_ab(u), 6);
        measures.push_back(json{{"word", u}, {"value", ms.value.str()}, {"next", ms.next.str()}});
    }
    report["measure_samples"] = measures;
    report["notes"] = json::array({"complexity counts use a heuristic stabilization rule",
                                   "measure samples are finite-depth quotients"});
    emit(out_path, report.dump(2) + "\n");
    return exit_ok;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

int cmd_generate(const SubstitutionArgs& sub_args, const std::string& digits_csv,
                 bool fixedpoint, const std::string& range_text, const std::string& alphabet,
                 const std::string& out_path) {
    aps::Substitution s = parse_substitution(sub_args);
    auto [lo, hi] = parse_range(range_text);
    if (alphabet != "ab" && alphabet != "return")
        throw aps::input_error("--alphabet must be ab or return");
    if (fixedpoint == !digits_csv.empty())
        throw aps::input_error("choose exactly one of --fixedpoint and --digits");

    std::ostringstream out;
    if (fixedpoint) {
        // one-sided fixed point: plain symbol string over the chosen alphabet
        if (lo < 0) throw aps::input_error("the fixed point is one-sided: range needs lo >= 0");
        if (alphabet == "ab") {
            long long depth = 1;
            while (aps::iterate_length(s, aps::sym_b, depth) <= hi) {
                ++depth;
                if (aps::iterate_length(s, aps::sym_b, depth) > aps::default_length_budget)
                    throw aps::budget_error("generate: window exceeds budget",
                                            aps::iterate_length(s, aps::sym_b, depth));
            }
            aps::Word w = aps::iterate(s, aps::sym_b, depth);
            out << aps::ab_string(aps::Word(w.begin() + lo, w.begin() + hi + 1));
        } else {
            aps::Word x{s.ks[0]};
            while (static_cast<long long>(x.size()) <= hi) {
                x = aps::rbar_apply(s, x);
                if (static_cast<long long>(x.size()) > aps::default_length_budget)
                    throw aps::budget_error("generate: window exceeds budget",
                                            static_cast<long long>(x.size()));
            }
            out << aps::letters_string(aps::Word(x.begin() + lo, x.begin() + hi + 1));
        }
        out << "\n";
    } else {
        // Toeplitz approximant window for an explicit odometer address,
        // dumped one cell per line as index<TAB>value ('?' when undetermined)
        std::vector<long long> digits;
        std::stringstream ss(digits_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) digits.push_back(std::stoll(tok));
        aps::OdometerPrefix prefix(s.r(), digits);
        aps::ToeplitzWindow w = aps::approximant_window(s, prefix, lo, hi);
        for (std::size_t i = 0; i < w.cells.size(); ++i) {
            out << (w.offset + static_cast<long long>(i)) << '\t';
            if (w.cells[i]) out << aps::letters_string({*w.cells[i]});
            else out << '?';
            out << '\n';
        }
    }
    emit(out_path, out.str());
    return exit_ok;
}

// ---------------------------------------------------------------------------
// palindromes / index
// ---------------------------------------------------------------------------

int cmd_palindromes(const SubstitutionArgs& sub_args, const std::string& out_path) {
    aps::Substitution s = parse_substitution(sub_args);
    aps::PalindromeRegime reg = aps::regime(s);
    json report;
    report["schema"] = "aperiodic-spectra/1";
    report["substitution"] = substitution_echo(s);
    report["prefix_palindromic"] = aps::prefix_palindromic(s);
    report["regime"] = reg.name();
    if (reg.tag == aps::RegimeTag::CriticalB) {
        report["B_prime"] = reg.b_prime;
        report["B_prime_exponent"] = reg.b_prime_exponent.str();
    }
    emit(out_path, report.dump(2) + "\n");
    return exit_ok;
}

int cmd_index(const SubstitutionArgs& sub_args, long long n_max, const std::string& out_path) {
    aps::Substitution s = parse_substitution(sub_args);
    aps::IndexBounds idx = aps::index_b_bounds(s, n_max);
    aps::GordonVerdict gordon = aps::gordon_criterion(s);
    json report;
    report["schema"] = "aperiodic-spectra/1";
    report["substitution"] = substitution_echo(s);
    report["lower_strict"] = idx.lower;
    report["upper_valid"] = idx.upper_valid;
    if (idx.upper_valid) {
        report["upper"] = idx.upper;
        report["equality"] = idx.equality;
    }
    report["witness"] = aps::letters_string(idx.witness_y);
    report["gordon"] = gordon.holds;
    emit(out_path, report.dump(2) + "\n");
    return exit_ok;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

int cmd_spectrum(const SubstitutionArgs& sub_args, double va, double vb,
                 const std::string& grid_text, long long depth, const std::string& out_path) {
    aps::Substitution s = parse_substitution(sub_args);
    double lo, hi, step;
    if (std::sscanf(grid_text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
        throw aps::input_error("--grid must be lo:hi:step");
    if (step <= 0.0) throw aps::input_error("grid step must be positive");
    std::vector<double> grid;
    for (long long i = 0;; ++i) {
        double e = lo + step * static_cast<double>(i);
        if (e > hi + step / 2) break;
        grid.push_back(e);
    }
    if (grid.empty()) throw aps::input_error("empty grid");
    aps::SpectrumEstimate est = aps::spectrum_estimate(s, {va, vb}, grid, depth);
    std::ostringstream out;
    out << "E,in_spectrum,trace_b_period,trace_a\n";
    char line[160];
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
        std::snprintf(line, sizeof line, "%.10g,%d,%.10g,%.10g\n", est.grid[i],
                      est.membership[i] ? 1 : 0, est.trace_b[i], est.trace_a[i]);
        out << line;
    }
    emit(out_path, out.str());
    return exit_ok;
}

// ---------------------------------------------------------------------------
// eigenvalue
// ---------------------------------------------------------------------------

int cmd_eigenvalue(const std::string& family, long long p, long long m_max,
                   const std::string& series_dir, const std::string& out_path) {
    if (family != "bab4") throw aps::input_error("only --family bab4 is implemented");
    if (p <= 5) {
        std::cerr << "eigenvalue: the decay construction requires p > 5 "
                  << "(the b-image has 5 b's)\n";
        return exit_usage;
    }
    aps::Substitution s(p, {1, 0, 0, 0, 0});
    std::vector<aps::EigenSolution> sols = aps::solve_switch_system(s);
    json report;
    report["schema"] = "aperiodic-spectra/1";
    report["family"] = family;
    report["p"] = p;
    report["solutions"] = json::array();
    for (std::size_t i = 0; i < sols.size(); ++i) {
        const aps::EigenSolution& e = sols[i];
        aps::DecayReport decay = aps::eigenstate_decay(s, e, m_max);
        std::string series_path = series_dir + "/decay_sol" + std::to_string(i + 1) + ".csv";
        {
            std::ofstream series(series_path);
            if (!series) throw aps::input_error("cannot open series file: " + series_path);
            series << "m,ell,log_s\n";
            char line[96];
            for (std::size_t m = 0; m < decay.log_s.size(); ++m) {
                std::snprintf(line, sizeof line, "%zu,%lld,%.10g\n", m + 1,
                              static_cast<long long>(decay.ell[m]), decay.log_s[m]);
                series << line;
            }
        }
        report["solutions"].push_back(json{{"x_a", e.x_a},
                                           {"x_b", e.x_b},
                                           {"mu", e.mu},
                                           {"residuals", json::array({e.res1, e.res2})},
                                           {"decay_rate", decay.gamma},
                                           {"decaying", decay.decaying},
                                           {"switch_residual", decay.switch_residual},
                                           {"s_m_series_path", series_path}});
    }
    emit(out_path, report.dump(2) + "\n");
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "substitution-spectra: combinatorial and spectral analysis of almost "
        "primitive binary substitutions\n"
        "exit codes: 0 ok, 2 usage/malformed input, 3 degenerate substitution, 4 budget"};
    app.require_subcommand(1);

    SubstitutionArgs an_sub, gen_sub, pal_sub, idx_sub, spec_sub;
    std::string an_out, gen_out, pal_out, idx_out, spec_out, eig_out;

    CLI::App* analyze = app.add_subcommand("analyze", "full combinatorial/spectral report");
    add_substitution_options(analyze, an_sub);
    analyze->add_option("--out", an_out, "write JSON here instead of stdout");

    CLI::App* generate = app.add_subcommand("generate", "emit fixed-point or approximant windows");
    add_substitution_options(generate, gen_sub);
    std::string gen_digits, gen_range = "0..31", gen_alphabet = "return";
    bool gen_fixedpoint = false;
    generate->add_option("--digits", gen_digits, "odometer digits d1,d2,... for a window dump");
    generate->add_flag("--fixedpoint", gen_fixedpoint, "emit the one-sided fixed point");
    generate->add_option("--range", gen_range, "inclusive index range lo..hi");
    generate->add_option("--alphabet", gen_alphabet, "ab or return");
    generate->add_option("--out", gen_out, "write here instead of stdout");

    CLI::App* palindromes = app.add_subcommand("palindromes", "palindrome regime report");
    add_substitution_options(palindromes, pal_sub);
    palindromes->add_option("--out", pal_out, "write JSON here instead of stdout");

    CLI::App* index = app.add_subcommand("index", "b-index bounds and the Gordon verdict");
    add_substitution_options(index, idx_sub);
    long long idx_n_max = 8;
    index->add_option("--n-max", idx_n_max, "largest threshold tested");
    index->add_option("--out", idx_out, "write JSON here instead of stdout");

    CLI::App* spectrum = app.add_subcommand("spectrum", "periodic-approximant spectrum CSV");
    add_substitution_options(spectrum, spec_sub);
    double va = 0.0, vb = 1.0;
    std::string grid = "-3:3:0.01";
    long long depth = 5;
    spectrum->add_option("--va", va, "potential value on a");
    spectrum->add_option("--vb", vb, "potential value on b");
    spectrum->add_option("--grid", grid, "energy grid lo:hi:step");
    spectrum->add_option("--depth", depth, "approximant depth n");
    spectrum->add_option("--out", spec_out, "write CSV here instead of stdout");

    CLI::App* eigenvalue = app.add_subcommand("eigenvalue", "switch-system eigenvalue report");
    std::string family = "bab4", series_dir = ".";
    long long eig_p = 7, eig_m_max = 40;
    eigenvalue->add_option("--family", family, "substitution family (bab4)");
    eigenvalue->add_option("--p", eig_p, "a-image exponent, must be > 5");
    eigenvalue->add_option("--m-max", eig_m_max, "number of recorded decay blocks");
    eigenvalue->add_option("--series-dir", series_dir, "directory for the decay series CSVs");
    eigenvalue->add_option("--out", eig_out, "write JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(an_sub, an_out);
        if (generate->parsed())
            return cmd_generate(gen_sub, gen_digits, gen_fixedpoint, gen_range, gen_alphabet,
                                gen_out);
        if (palindromes->parsed()) return cmd_palindromes(pal_sub, pal_out);
        if (index->parsed()) return cmd_index(idx_sub, idx_n_max, idx_out);
        if (spectrum->parsed()) return cmd_spectrum(spec_sub, va, vb, grid, depth, spec_out);
        if (eigenvalue->parsed())
            return cmd_eigenvalue(family, eig_p, eig_m_max, series_dir, eig_out);
    } catch (const aps::budget_error& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return exit_budget;
    } catch (const aps::degenerate_error& e) {
        std::cerr << "degenerate: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const aps::input_error& e) {
        std::cerr << "input: " << e.what() << "\n";
        return exit_usage;
    } catch (const aps::precondition_error& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return exit_usage;
    } catch (const aps::depth_error& e) {
        std::cerr << "depth: " << e.what() << "\n";
        return exit_budget;
    }
    return exit_usage;
}
