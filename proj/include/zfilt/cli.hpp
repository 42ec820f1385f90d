#ifndef ZFILT_CLI_HPP
#define ZFILT_CLI_HPP

// Batch front end: every subcommand builds a report and serializes it as TSV
// or JSON. Integers are written as decimal strings in JSON.
//
// Exit codes: 0 success, 1 a checked mathematical claim failed, 2 usage or
// parse error, 3 resource cap exceeded.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arith.hpp"
#include "liegraded.hpp"
#include "magnus.hpp"
#include "modlat.hpp"
#include "permw.hpp"

namespace zfilt::cli {

using json = nlohmann::json;

enum class Format { Tsv, Json };

struct RunConfig {
    std::string subcommand;
    unsigned r = 2;
    std::uint32_t p = 2;
    std::optional<unsigned> n_max;
    std::size_t budget = 1'000'000;
    std::uint64_t seed = 1;
    Format format = Format::Tsv;
    std::string out;  // empty: standard output
    std::vector<std::string> images;
    std::string instance;
    bool general_linear = false;
    std::size_t samples = 200;
    unsigned threads = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCap = 3;

class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

template <class T>
std::string dec(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline std::string valuation_string(int v) { return v == kInfiniteValuation ? "inf" : std::to_string(v); }

inline std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

/// Output of one subcommand: serialized text plus exit code.
struct Result {
    std::string text;
    int exit_code = kExitOk;
};

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- witt

inline Result cmd_witt(const RunConfig& c) {
    if (c.r < 1) throw UsageError("witt: --r must be >= 1");
    require_prime(c.p);
    const unsigned n_max = c.n_max.value_or(10);
    auto prof = dim_profile(c.r, c.p, n_max);
    json rows = json::array();
    std::ostringstream tsv;
    tsv << "n\tw_n\tc_n\tcumlog\n";
    for (unsigned n = 1; n <= n_max; ++n) {
        std::string w = dec(witt(c.r, n)), cn = dec(prof.dims[n - 1]), cum = dec(prof.cumlog[n - 1]);
        tsv << n << '\t' << w << '\t' << cn << '\t' << cum << '\n';
        rows.push_back({{"n", std::to_string(n)}, {"w_n", w}, {"c_n", cn}, {"cumlog", cum}});
    }
    if (c.format == Format::Tsv) return {tsv.str()};
    json j{{"command", "witt"}, {"r", dec(c.r)}, {"p", dec(c.p)}, {"n_max", dec(n_max)}, {"rows", rows}};
    return {dump(j)};
}

// ---------------------------------------------------------------- scan27

inline json threshold_json(const ThresholdResult& t, const std::string& inequality) {
    json ex = json::array();
    for (auto n : t.exceptions) ex.push_back(dec(n));
    return {{"inequality", inequality},
            {"threshold", t.threshold ? json(dec(*t.threshold)) : json(nullptr)},
            {"holds_through_range", t.threshold.has_value()},
            {"exceptions", ex}};
}

inline std::string list_string(const std::vector<std::uint64_t>& v) {
    if (v.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline Result cmd_scan27(const RunConfig& c) {
    if (c.r < 1) throw UsageError("scan27: --r must be >= 1");
    require_prime(c.p);
    const unsigned n_max = c.n_max.value_or(40);
    if (n_max < 2) throw UsageError("scan27: --nmax must be >= 2");
    auto rep = scan_growth_inequalities(c.r, c.p, n_max);
    const std::string ineq_a = "2*n*c_n >= r^n", ineq_b = "15*c_n > sum_{k<=n} c_k";
    if (c.format == Format::Tsv) {
        std::ostringstream os;
        os << "n\tc_n\tcumlog\tr_pow_n\tdimension_bound\tindex_bound\n";
        for (unsigned n = 1; n <= n_max; ++n)
            os << n << '\t' << rep.profile.dims[n - 1] << '\t' << rep.profile.cumlog[n - 1] << '\t'
               << int_pow(c.r, n) << '\t' << int(rep.dimension_bound.holds[n - 1]) << '\t'
               << int(rep.index_bound.holds[n - 1]) << '\n';
        auto line = [&](const char* name, const ThresholdResult& t, const std::string& ineq) {
            os << "# " << name << '\t' << ineq << "\tthreshold=" << (t.threshold ? dec(*t.threshold) : "none")
               << "\texceptions=" << list_string(t.exceptions) << '\n';
        };
        line("dimension_bound", rep.dimension_bound, ineq_a);
        line("index_bound", rep.index_bound, ineq_b);
        return {os.str()};
    }
    json rows = json::array();
    for (unsigned n = 1; n <= n_max; ++n)
        rows.push_back({{"n", dec(n)},
                        {"c_n", dec(rep.profile.dims[n - 1])},
                        {"cumlog", dec(rep.profile.cumlog[n - 1])},
                        {"r_pow_n", dec(int_pow(c.r, n))},
                        {"dimension_bound", bool(rep.dimension_bound.holds[n - 1])},
                        {"index_bound", bool(rep.index_bound.holds[n - 1])}});
    json j{{"command", "scan27"},
           {"r", dec(c.r)},
           {"p", dec(c.p)},
           {"n_max", dec(n_max)},
           {"rows", rows},
           {"dimension_bound", threshold_json(rep.dimension_bound, ineq_a)},
           {"index_bound", threshold_json(rep.index_bound, ineq_b)}};
    return {dump(j)};
}

// ---------------------------------------------------------------- lemma22

inline Endomorphism parse_endomorphism(const std::vector<std::string>& images, unsigned r) {
    if (images.size() != r)
        throw UsageError("lemma22: expected " + std::to_string(r) + " --image words (one per generator), got " +
                         std::to_string(images.size()));
    Endomorphism phi;
    for (std::size_t i = 0; i < images.size(); ++i) {
        try {
            phi.images.push_back(FreeWord::parse(images[i], r));
        } catch (const WordParseError& e) {
            throw UsageError("image of x" + std::to_string(i + 1) + " \"" + images[i] + "\": " + e.what());
        }
    }
    return phi;
}

inline Result cmd_lemma22(const RunConfig& c) {
    if (c.r < 2) throw UsageError("lemma22: --r must be >= 2");
    require_prime(c.p);
    const unsigned n_max = c.n_max.value_or(6);
    if (n_max < 1) throw UsageError("lemma22: --nmax must be >= 1");
    Endomorphism phi = parse_endomorphism(c.images, c.r);
    auto rep = check_graded_triviality(phi, c.p, n_max);
    const std::string verdict = !rep.precondition_ok ? "precondition-failed" : rep.pass() ? "pass" : "violation";
    const int code = !rep.precondition_ok ? kExitUsage : rep.pass() ? kExitOk : kExitViolation;
    const std::string note =
        "checked on graded basis representatives g: valuation of phi(g) g^-1 must exceed n; "
        "phi is any endomorphism trivial mod D_2 (invertibility not required)";
    if (c.format == Format::Tsv) {
        std::ostringstream os;
        os << "# phi: " << rep.phi << '\n'
           << "# r=" << rep.rank << " p=" << rep.p << " n_max=" << rep.n_max << " truncation=" << rep.trunc << '\n'
           << "# " << note << '\n'
           << "# precondition: " << (rep.precondition_ok ? "pass" : "fail (phi is not trivial mod D_2)") << '\n'
           << "n\tbasis_element\tvaluation\tverdict\n";
        for (const auto& e : rep.entries)
            os << e.n << '\t' << e.basis_element << '\t' << valuation_string(e.valuation) << '\t'
               << (e.pass ? "pass" : "fail") << '\n';
        os << "# verdict: " << verdict << " violations=" << rep.violations() << '\n';
        return {os.str(), code};
    }
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"phi", rep.phi},
                           {"n", dec(e.n)},
                           {"basis_element", e.basis_element},
                           {"valuation", valuation_string(e.valuation)},
                           {"verdict", e.pass ? "pass" : "fail"}});
    json j{{"command", "lemma22"},
           {"phi", rep.phi},
           {"r", dec(rep.rank)},
           {"p", dec(rep.p)},
           {"n_max", dec(rep.n_max)},
           {"truncation", dec(rep.trunc)},
           {"note", note},
           {"precondition", rep.precondition_ok ? "pass" : "fail"},
           {"entries", entries},
           {"violations", dec(rep.violations())},
           {"verdict", verdict}};
    return {dump(j), code};
}

// ---------------------------------------------------------------- census

inline Result cmd_census(const RunConfig& c) {
    if (c.r < 2) throw UsageError("census: --r must be >= 2");
    require_prime(c.p);
    const unsigned n_max = c.n_max.value_or(4);
    if (n_max < 1) throw UsageError("census: --nmax must be >= 1");
    const ActingGroup group = c.general_linear ? ActingGroup::GeneralLinear : ActingGroup::SignedSpecialLinear;
    Census census = characteristic_census(c.r, c.p, 1, n_max, c.budget, group, c.threads);
    GrowthFit fit = fit_growth(census.rows, c.p);
    const std::string group_name = c.general_linear ? "GL" : "SL+-1";

    if (c.format == Format::Tsv) {
        std::ostringstream os;
        os << "n\tdimU\tindex_exponent\tcount\texact\n";
        for (const auto& row : census.rows)
            os << row.n << '\t' << row.dim_u << '\t' << row.index_exponent << '\t' << row.count << '\t'
               << (row.exact ? "exact" : "partial") << '\n';
        os << "# group: " << group_name << "_" << c.r << "(F_" << c.p << ")\n";
        os << "# cumulative\tindex_exponent\tcount\n";
        for (std::size_t i = 0; i < fit.exponents.size(); ++i)
            os << "# cumulative\t" << fit.exponents[i] << '\t' << fit.cumulative[i] << '\n';
        if (fit.sufficient) {
            os << "# fit\tlog2(count) ~ a + b*(log2 index)^2\ta=" << fixed(fit.intercept)
               << "\tb=" << fixed(fit.coefficient) << '\n';
            os << "# residuals\t";
            for (std::size_t i = 0; i < fit.residuals.size(); ++i) os << (i ? "," : "") << fixed(fit.residuals[i]);
            os << '\n';
        } else {
            os << "# fit\tinsufficient data\n";
        }
        if (!census.exact()) os << "# partial: counts in rows marked partial are lower bounds\n";
        return {os.str()};
    }
    json rows = json::array();
    for (const auto& row : census.rows)
        rows.push_back({{"n", dec(row.n)},
                        {"dimU", dec(row.dim_u)},
                        {"index_exponent", dec(row.index_exponent)},
                        {"count", dec(row.count)},
                        {"exact", row.exact}});
    json cumulative = json::array();
    for (std::size_t i = 0; i < fit.exponents.size(); ++i)
        cumulative.push_back({{"index_exponent", dec(fit.exponents[i])}, {"count", dec(fit.cumulative[i])}});
    json fit_j{{"model", "log2(count) ~ intercept + coefficient*(log2 index)^2"}};
    if (fit.sufficient) {
        fit_j["status"] = "ok";
        fit_j["intercept"] = fit.intercept;
        fit_j["coefficient"] = fit.coefficient;
        fit_j["residuals"] = fit.residuals;
    } else {
        fit_j["status"] = "insufficient data";
    }
    json layers = json::array();
    for (const auto& l : census.layers)
        layers.push_back({{"n", dec(l.n)},
                          {"layer_dim", dec(l.layer_dim)},
                          {"cumlog", dec(l.cumlog)},
                          {"submodules", dec(l.lattice.count())},
                          {"exact", l.lattice.exact}});
    json j{{"command", "census"}, {"r", dec(c.r)},        {"p", dec(c.p)},
           {"group", group_name}, {"n_max", dec(n_max)}, {"rows", rows},
           {"layers", layers},    {"cumulative", cumulative}, {"fit", fit_j},
           {"exact", census.exact()}};
    return {dump(j)};
}

// ---------------------------------------------------------------- wreath

inline json normal_orders_json(const std::vector<NormalSubgroup>& ns) {
    json a = json::array();
    for (const auto& n : ns) a.push_back(dec(n.order()));
    return a;
}

inline json dichotomy_json(const WreathDichotomyReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"order", dec(e.order)},
                           {"index", dec(e.index)},
                           {"kind", e.kind},
                           {"block_order", dec(e.block_order)}});
    return {{"group_order", dec(rep.group_order)},
            {"h_order", dec(rep.h_order)},
            {"k_order", dec(rep.k_order)},
            {"blocks", dec(rep.blocks)},
            {"hypotheses",
             {{"non_abelian", rep.hypothesis.non_abelian},
              {"no_prime_index_normal", rep.hypothesis.no_prime_index_normal},
              {"centerless", rep.hypothesis.centerless},
              {"k_transitive", rep.k_transitive},
              {"ok", rep.hypotheses_ok()}}},
            {"normal_subgroup_count", dec(rep.entries.size())},
            {"entries", entries},
            {"violations", dec(rep.violations)},
            {"index_bound_ok", rep.index_bound_ok},
            {"dichotomy", rep.dichotomy_holds() ? "holds" : "fails"}};
}

inline TowerSpec parse_tower(const std::string& text) {
    TowerSpec spec;
    if (text.empty()) return spec;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        TowerLevel lvl;
        std::string powtext = item;
        if (auto caret = item.find('^'); caret != std::string::npos) {
            lvl.label = item.substr(0, caret);
            powtext = item.substr(caret + 1);
        }
        if (powtext.empty() || powtext.size() > 3 || powtext.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("tower: bad level '" + item + "' (expected m or LABEL^m)");
        lvl.power = static_cast<unsigned>(std::stoul(powtext));
        if (lvl.power < 1) throw UsageError("tower: powers must be >= 1");
        groups::by_label(lvl.label);  // validates the label
        spec.push_back(lvl);
    }
    return spec;
}

inline Result cmd_wreath(const RunConfig& c) {
    const std::string& inst = c.instance;
    json j{{"command", "wreath"}, {"instance", inst}};
    int code = kExitOk;
    std::ostringstream tsv;
    tsv << "key\tvalue\n";
    auto put = [&](const std::string& k, const std::string& v) { tsv << k << '\t' << v << '\n'; };

    if (inst == "a5" || inst == "a4") {
        auto g = inst == "a5" ? groups::alternating5() : groups::alternating4();
        auto ns = normal_subgroups(g);
        j["group_order"] = dec(g.order());
        j["conjugacy_classes"] = dec(g.classes().size());
        j["normal_subgroup_count"] = dec(ns.size());
        j["normal_subgroup_orders"] = normal_orders_json(ns);
        put("group_order", dec(g.order()));
        put("conjugacy_classes", dec(g.classes().size()));
        put("normal_subgroup_count", dec(ns.size()));
    } else if (inst == "a5wrc2" || inst == "d8-negative-control") {
        const bool control = inst != "a5wrc2";
        auto h = control ? groups::cyclic(2) : groups::alternating5();
        auto rep = verify_wreath_dichotomy(h, groups::cyclic(2), c.budget);
        j["dichotomy"] = dichotomy_json(rep);
        put("group_order", dec(rep.group_order));
        put("normal_subgroup_count", dec(rep.entries.size()));
        put("hypotheses_ok", rep.hypotheses_ok() ? "true" : "false");
        put("violations", dec(rep.violations));
        put("dichotomy", rep.dichotomy_holds() ? "holds" : "fails");
        if (control) {
            // The hypotheses fail here; the dichotomy is expected to fail too.
            const bool control_ok = !rep.hypotheses_ok() && !rep.dichotomy_holds();
            j["control"] = control_ok ? "pass" : "fail";
            put("control", control_ok ? "pass" : "fail");
            if (!control_ok) code = kExitViolation;
        } else {
            j["verdict"] = rep.dichotomy_holds() && rep.index_bound_ok ? "pass" : "fail";
            put("verdict", rep.dichotomy_holds() && rep.index_bound_ok ? "pass" : "fail");
            if (!rep.dichotomy_holds() || !rep.index_bound_ok) code = kExitViolation;
        }
    } else if (inst.rfind("tower:", 0) == 0) {
        TowerSpec spec = parse_tower(inst.substr(6));
        ArbInt formula = tower_normal_count(spec);
        json levels = json::array();
        for (const auto& l : spec) levels.push_back({{"label", l.label}, {"power", dec(l.power)}});
        j["tower"] = levels;
        j["formula_count"] = dec(formula);
        put("levels", dec(spec.size()));
        put("formula_count", dec(formula));
        try {
            ArbInt structural = tower_structural_count(spec);
            j["structural_count"] = dec(structural);
            j["verification"] = "structural";
            j["verdict"] = structural == formula ? "match" : "mismatch";
            put("structural_count", dec(structural));
            put("verdict", structural == formula ? "match" : "mismatch");
            if (structural != formula) code = kExitViolation;
        } catch (const CapExceeded&) {
            j["structural_count"] = nullptr;
            j["verification"] = "formula only: a level S^m exceeds the enumeration cap";
            put("structural_count", "unavailable");
        }
    } else {
        throw UsageError("wreath: unknown --instance '" + inst +
                         "' (expected a5wrc2, a5, a4, d8-negative-control or tower:m1,m2,...)");
    }
    if (c.format == Format::Tsv) return {tsv.str(), code};
    return {dump(j), code};
}

// ---------------------------------------------------------------- filtration

inline Result cmd_filtration(const RunConfig& c) {
    if (c.r < 2) throw UsageError("filtration: --r must be >= 2");
    require_prime(c.p);
    const unsigned n_max = c.n_max.value_or(5);
    if (n_max < 2) throw UsageError("filtration: --nmax must be >= 2");
    auto rep = verify_recursive_filtration(c.r, c.p, n_max, c.samples, 0, c.seed);
    const int code = rep.pass() ? kExitOk : kExitViolation;
    if (c.format == Format::Tsv) {
        std::ostringstream os;
        os << "n\tkind\tsamples\tmin_valuation\tviolations\n";
        for (const auto& ch : rep.checks)
            os << ch.n << '\t' << ch.kind << '\t' << ch.samples << '\t' << valuation_string(ch.min_valuation) << '\t'
               << ch.violations << '\n';
        return {os.str(), code};
    }
    json checks = json::array();
    for (const auto& ch : rep.checks)
        checks.push_back({{"n", dec(ch.n)},
                          {"kind", ch.kind},
                          {"samples", dec(ch.samples)},
                          {"min_valuation", valuation_string(ch.min_valuation)},
                          {"violations", dec(ch.violations)}});
    json j{{"command", "filtration"}, {"r", dec(c.r)},         {"p", dec(c.p)},
           {"n_max", dec(n_max)},     {"truncation", dec(rep.trunc)}, {"seed", dec(c.seed)},
           {"checks", checks},        {"verdict", rep.pass() ? "pass" : "violation"}};
    return {dump(j), code};
}

// ---------------------------------------------------------------- dispatch

inline Result dispatch(const RunConfig& c) {
    if (c.subcommand == "witt") return cmd_witt(c);
    if (c.subcommand == "scan27") return cmd_scan27(c);
    if (c.subcommand == "lemma22") return cmd_lemma22(c);
    if (c.subcommand == "census") return cmd_census(c);
    if (c.subcommand == "wreath") return cmd_wreath(c);
    if (c.subcommand == "filtration") return cmd_filtration(c);
    throw UsageError("unknown subcommand '" + c.subcommand + "'");
}

/// Runs a validated config, writing the report to c.out (or `out`).
inline int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
    Result res;
    try {
        res = dispatch(c);
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kExitCap;
    } catch (const std::invalid_argument& e) {  // UsageError, WordParseError, bad p, ...
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (c.out.empty()) {
        out << res.text;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) {
            err << "error: cannot open output file " << c.out << '\n';
            return kExitUsage;
        }
        f << res.text;
    }
    if (res.exit_code == kExitUsage && c.subcommand == "lemma22")
        err << "error: precondition failed: phi does not act trivially modulo D_2\n";
    return res.exit_code;
}

inline unsigned threads_from_env() {
    if (const char* t = std::getenv("ZFILT_THREADS")) {
        try {
            int v = std::stoi(t);
            if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return 1;
}

/// Parses argv (without the program name) and runs the subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact computations on the Zassenhaus filtration of free groups"};
    app.require_subcommand(1);
    RunConfig c;
    c.threads = threads_from_env();
    std::string format = "tsv";
    unsigned n_max = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--r", c.r, "rank of the free group")->check(CLI::Range(1u, 16u));
        sub->add_option("--p", c.p, "prime")->check(CLI::Range(2u, 65521u));
        sub->add_option("--nmax", n_max, "largest degree / layer");
        sub->add_option("--budget", c.budget, "lattice size / element cap");
        sub->add_option("--seed", c.seed, "sampler seed");
        sub->add_option("--format", format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
        sub->add_option("--out", c.out, "output file (default: standard output)");
    };
    auto* witt_cmd = app.add_subcommand("witt", "Witt numbers, layer dimensions, cumulative indices");
    auto* scan_cmd = app.add_subcommand("scan27", "exact threshold scan of the growth inequalities");
    auto* lemma_cmd = app.add_subcommand("lemma22", "check that phi acts trivially on every layer");
    auto* census_cmd = app.add_subcommand("census", "characteristic subgroup census from invariant subspaces");
    auto* wreath_cmd = app.add_subcommand("wreath", "normal subgroups of wreath products and towers");
    auto* filt_cmd = app.add_subcommand("filtration", "sampled check of the recursive filtration containments");
    for (auto* s : {witt_cmd, scan_cmd, lemma_cmd, census_cmd, wreath_cmd, filt_cmd}) common(s);
    lemma_cmd->add_option("--image", c.images, "image word of x1, x2, ... (repeat once per generator)");
    census_cmd->add_flag("--general-linear", c.general_linear, "act by GL_r(F_p) instead of SL+-1_r(F_p)");
    wreath_cmd->add_option("--instance", c.instance, "a5wrc2 | a5 | a4 | d8-negative-control | tower:m1,m2,...")
        ->required();
    filt_cmd->add_option("--samples", c.samples, "samples per (power | commutator split)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    c.format = format == "json" ? Format::Json : Format::Tsv;
    if (app.get_subcommands().front()->count("--nmax")) c.n_max = n_max;
    return execute(c, out, err);
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

}  // namespace zfilt::cli

#endif  // ZFILT_CLI_HPP
