// semitree: command-line front end for the semi-homogeneous tree library.
//
// Every subcommand emits one table, either as CSV (default) with `# key=value`
// metadata lines above a fixed header row, or as a JSON object with the same
// content. All floating-point text goes through "%.17g" in the C locale, so a
// rerun with identical arguments produces byte-identical output.
//
// Exit codes: 0 ok (including --help), 1 usage or invalid input, 2 verification
// failure, 3 truncation capacity exceeded.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "semitree/branch.hpp"
#include "semitree/oracle.hpp"
#include "semitree/rational.hpp"
#include "semitree/spectra.hpp"
#include "semitree/spherical.hpp"
#include "semitree/tree.hpp"
#include "semitree/verify.hpp"

namespace {

using semitree::cplx;
using semitree::Parity;
using semitree::TreeParams;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// A table cell: empty (not applicable), text, number, or flag.
using Cell = std::variant<std::monostate, std::string, double, long long, bool>;

struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void meta_kv(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }
    void meta_kv(const std::string& k, double v) { meta.emplace_back(k, fmt_double(v)); }
    void meta_kv(const std::string& k, long long v) { meta.emplace_back(k, std::to_string(v)); }
};

std::string cell_csv(const Cell& c) {
    switch (c.index()) {
    case 1: return std::get<std::string>(c);
    case 2: {
        const double x = std::get<double>(c);
        if (std::isnan(x)) return ""; // overflowed or undefined entry
        if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
        return fmt_double(x);
    }
    case 3: return std::to_string(std::get<long long>(c));
    case 4: return std::get<bool>(c) ? "true" : "false";
    default: return "";
    }
}

nlohmann::ordered_json cell_json(const Cell& c) {
    switch (c.index()) {
    case 1: return std::get<std::string>(c);
    case 2: {
        const double x = std::get<double>(c);
        if (std::isnan(x)) return nullptr; // JSON has no NaN
        if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
        return x;
    }
    case 3: return std::get<long long>(c);
    case 4: return std::get<bool>(c);
    default: return nullptr;
    }
}

void emit(const Table& t, const std::string& format, const std::string& out_path) {
    std::ostringstream os;
    if (format == "csv") {
        for (const auto& [k, v] : t.meta) os << "# " << k << "=" << v << "\n";
        for (size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << "\n";
        for (const auto& row : t.rows) {
            for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_csv(row[i]);
            os << "\n";
        }
    } else {
        nlohmann::ordered_json j;
        for (const auto& [k, v] : t.meta) j["meta"][k] = v;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json r;
            for (size_t i = 0; i < row.size() && i < t.columns.size(); ++i)
                r[t.columns[i]] = cell_json(row[i]);
            j["rows"].push_back(std::move(r));
        }
        os << j.dump(2) << "\n";
    }
    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw CLI::ValidationError("--out", "cannot open '" + out_path + "' for writing");
        f << os.str();
    }
}

// "--gamma RE,IM" (or a bare real part); whitespace is not accepted.
cplx parse_gamma(const std::string& s) {
    const auto bad = [&]() -> CLI::ValidationError {
        return CLI::ValidationError("--gamma", "expected RE or RE,IM, got '" + s + "'");
    };
    const auto comma = s.find(',');
    const auto num = [&](const std::string& part) {
        double v = 0;
        const char* b = part.data();
        const char* e = b + part.size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e) throw bad();
        return v;
    };
    if (comma == std::string::npos) return cplx(num(s), 0.0);
    return cplx(num(s.substr(0, comma)), num(s.substr(comma + 1)));
}

// "--p NUM" with "inf" accepted for the supremum norm.
double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") return kInf;
    double v = 0;
    const char* b = s.data();
    auto [p, ec] = std::from_chars(b, b + s.size(), v);
    if (ec != std::errc() || p != b + s.size() || !(v >= 1.0))
        throw CLI::ValidationError("--p", "expected a number >= 1 or 'inf', got '" + s + "'");
    return v;
}

std::string gamma_str(cplx g) { return fmt_double(g.real()) + "," + fmt_double(g.imag()); }

// Options shared by every subcommand.
struct Common {
    long long q_plus = 3, q_minus = 2;
    std::string format = "csv";
    std::string out;
    std::string root = "plus";

    TreeParams tree() const {
        if (q_plus < 2 || q_minus < 2)
            throw CLI::ValidationError("--q-plus/--q-minus", "degrees must be >= 2");
        return TreeParams(int(q_plus), int(q_minus),
                          root == "minus" ? Parity::minus : Parity::plus);
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--q-plus", c.q_plus, "Branching number of the + class (>= 2)")
        ->capture_default_str();
    cmd->add_option("--q-minus", c.q_minus, "Branching number of the - class (>= 2)")
        ->capture_default_str();
    cmd->add_option("--root", c.root, "Class of the reference vertex: plus or minus")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    cmd->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", c.out, "Write the table to this file instead of stdout");
}

void meta_common(Table& t, const std::string& sub, const Common& c) {
    t.meta_kv("tool", std::string("semitree"));
    t.meta_kv("subcommand", sub);
    t.meta_kv("q_plus", c.q_plus);
    t.meta_kv("q_minus", c.q_minus);
    t.meta_kv("root", c.root);
}

void push_flag_cell(std::vector<Cell>& row, const semitree::FValue& f) {
    if (f.usable()) {
        row.emplace_back(f.value.real());
        row.emplace_back(f.value.imag());
    } else {
        row.emplace_back();
        row.emplace_back();
    }
}

const char* verdict_name(semitree::Verdict v) {
    switch (v) {
    case semitree::Verdict::inside: return "inside";
    case semitree::Verdict::boundary: return "boundary";
    default: return "outside";
    }
}

const char* zero_name(semitree::ZeroStatus z) {
    switch (z) {
    case semitree::ZeroStatus::in_spectrum: return "in_spectrum";
    case semitree::ZeroStatus::not_in_spectrum: return "not_in_spectrum";
    case semitree::ZeroStatus::undetermined: return "undetermined";
    default: return "not_isolated";
    }
}

const char* kind_name(semitree::SphericalKind k) {
    switch (k) {
    case semitree::SphericalKind::generic: return "generic";
    case semitree::SphericalKind::degenerate_plus: return "degenerate_plus";
    case semitree::SphericalKind::degenerate_minus: return "degenerate_minus";
    default: return "zero";
    }
}

// --- subcommand bodies ------------------------------------------------------

int run_spectrum(const Common& c, const std::string& p_text) {
    const TreeParams t = c.tree();
    const double p = parse_p(p_text);
    const auto e = semitree::sigma_p(t, p);
    const auto [a, b] = semitree::endpoints(t);

    Table tab;
    meta_common(tab, "spectrum", c);
    tab.meta_kv("p", p_text);
    tab.meta_kv("cut_a", a);
    tab.meta_kv("cut_b", b);
    tab.columns = {"center",     "semi_real", "semi_imag",      "focus_low", "focus_high",
                   "rho_p",      "p_crit",    "split_exponent", "conjugate_split"};
    const double split = semitree::split_exponent(t);
    tab.rows.push_back({e.center, e.semi_real, e.semi_imag, e.focus_low, e.focus_high,
                        semitree::spectral_radius(t, p), semitree::p_crit(t), split,
                        split / (split - 1.0)});
    emit(tab, c.format, c.out);
    return 0;
}

int run_radius_curve(const Common& c, const std::string& p_text, long long samples) {
    const TreeParams t = c.tree();
    const double p = parse_p(p_text);
    Table tab;
    meta_common(tab, "radius-curve", c);
    tab.meta_kv("p", p_text);
    tab.meta_kv("rho_p", semitree::spectral_radius(t, p));
    tab.columns = {"theta",      "gamma_sq_re", "gamma_sq_im", "sheet1_re", "sheet1_im",
                   "sheet2_re",  "sheet2_im",   "abs_sheet1"};
    for (const auto& bp : semitree::boundary_curve(t, p, int(samples))) {
        tab.rows.push_back({bp.theta, bp.gamma_sq.real(), bp.gamma_sq.imag(),
                            bp.gamma_sheet1.real(), bp.gamma_sheet1.imag(),
                            bp.gamma_sheet2.real(), bp.gamma_sheet2.imag(),
                            std::abs(bp.gamma_sheet1)});
    }
    emit(tab, c.format, c.out);
    return 0;
}

int run_spherical(const Common& c, const std::string& gamma_text, long long depth) {
    const TreeParams t = c.tree();
    const cplx g = parse_gamma(gamma_text);
    const auto prof = semitree::recurrence_eval(t, g, int(depth));

    Table tab;
    meta_common(tab, "spherical", c);
    tab.meta_kv("gamma", gamma_str(g));
    tab.meta_kv("depth", depth);
    tab.columns = {"n",         "recurrence_re", "recurrence_im", "closed_re",
                   "closed_im", "arc_re",        "arc_im"};
    const bool cut = semitree::on_cut(t, g);
    const bool zero = g == cplx(0, 0);
    for (long long n = 0; n <= depth; ++n) {
        std::vector<Cell> row;
        row.emplace_back(n);
        row.emplace_back(prof.values[size_t(n)].real());
        row.emplace_back(prof.values[size_t(n)].imag());
        if (cut) {
            row.emplace_back();
            row.emplace_back();
        } else {
            const cplx v = semitree::closed_form(t, g, int(n));
            row.emplace_back(v.real());
            row.emplace_back(v.imag());
        }
        if (cut || zero) {
            row.emplace_back();
            row.emplace_back();
        } else {
            const cplx v = semitree::arc_sum_eval(t, g, int(n));
            row.emplace_back(v.real());
            row.emplace_back(v.imag());
        }
        tab.rows.push_back(std::move(row));
    }
    emit(tab, c.format, c.out);
    return 0;
}

int run_hitting(const Common& c, const std::string& gamma_text, long long series_n,
                long long walks, unsigned long long seed) {
    const TreeParams t = c.tree();
    const cplx g = parse_gamma(gamma_text);

    Table tab;
    meta_common(tab, "hitting", c);
    tab.meta_kv("gamma", gamma_str(g));
    tab.meta_kv("series_terms", series_n);
    tab.meta_kv("walks", walks);
    tab.meta_kv("seed", (long long)seed);
    tab.columns = {"start_class", "closed_re",        "closed_im",   "alt_re",
                   "alt_im",      "series_re",        "series_im",   "series_converged",
                   "mc_estimate", "mc_std_error",     "mc_unabsorbed"};

    for (Parity s : {Parity::plus, Parity::minus}) {
        std::vector<Cell> row;
        row.emplace_back(std::string(semitree::parity_name(s)));
        push_flag_cell(row, semitree::hitting_F(t, g, s));
        push_flag_cell(row, semitree::hitting_Ft(t, g, s));
        const auto ser = semitree::F_series(t, semitree::opposite(s), g, int(series_n));
        row.emplace_back(ser.value.real());
        row.emplace_back(ser.value.imag());
        row.emplace_back(ser.converged);
        if (walks > 0 && g == cplx(1, 0)) {
            const auto mc = semitree::monte_carlo_hitting(t, s, std::uint64_t(walks), seed);
            row.emplace_back(mc.estimate);
            row.emplace_back(mc.std_error);
            row.emplace_back(mc.unabsorbed);
        } else {
            row.emplace_back();
            row.emplace_back();
            row.emplace_back();
        }
        tab.rows.push_back(std::move(row));
    }
    emit(tab, c.format, c.out);
    return 0;
}

int run_poisson(const Common& c, long long depth, const std::string& gamma_text) {
    const TreeParams t = c.tree();
    std::optional<cplx> g;
    if (!gamma_text.empty()) g = parse_gamma(gamma_text);

    Table tab;
    meta_common(tab, "poisson", c);
    tab.meta_kv("n", depth);
    if (g) tab.meta_kv("gamma", gamma_str(*g));
    tab.columns = {"k",    "h",    "nu_exact", "nu",    "poisson",
                   "K_re", "K_im", "Kt_re",    "Kt_im"};

    const auto part = semitree::arc_partition(t, int(depth));
    const Parity v_class = t.parity_at_depth(depth);
    for (long long k = 0; k <= depth; ++k) {
        const long long h = semitree::horospherical_index(int(k), int(depth));
        std::vector<Cell> row;
        row.emplace_back(k);
        row.emplace_back(h);
        row.emplace_back(semitree::to_string(part.nu[size_t(k)]));
        row.emplace_back(semitree::to_double(part.nu[size_t(k)]));
        row.emplace_back(semitree::poisson_kernel(t, int(depth), int(k)));
        if (g) {
            push_flag_cell(row, semitree::generalized_poisson(t, v_class, int(h), *g));
            push_flag_cell(row, semitree::alt_generalized_poisson(t, v_class, int(h), *g));
        } else {
            row.insert(row.end(), 4, Cell{});
        }
        tab.rows.push_back(std::move(row));
    }
    emit(tab, c.format, c.out);
    return 0;
}

int run_zmap(const Common& c, const std::string& gamma_text) {
    const TreeParams t = c.tree();
    const cplx g = parse_gamma(gamma_text);
    if (semitree::on_cut(t, g))
        throw CLI::ValidationError("--gamma", "gamma lies strictly inside a cut");
    const cplx z = semitree::z_of_gamma(t, g);
    const cplx back = semitree::gamma_squared_of_z(t, z);
    const double period = 3.14159265358979323846 / std::log(t.qm());

    Table tab;
    meta_common(tab, "zmap", c);
    tab.meta_kv("gamma", gamma_str(g));
    tab.meta_kv("preimage_family", std::string("z+k*i*period and 1-z+k*i*period"));
    tab.meta_kv("period_im", period);
    tab.columns = {"z_re",      "z_im",      "mirror_re",         "mirror_im",
                   "gamma_sq_re", "gamma_sq_im", "roundtrip_residual"};
    tab.rows.push_back({z.real(), z.imag(), 1.0 - z.real(), -z.imag(), back.real(),
                        back.imag(), std::abs(back - g * g)});
    emit(tab, c.format, c.out);
    return 0;
}

int run_classify(const Common& c, const std::string& gamma_text, const std::string& p_text) {
    const TreeParams t = c.tree();
    const cplx g = parse_gamma(gamma_text);

    Table tab;
    meta_common(tab, "classify", c);
    tab.meta_kv("gamma", gamma_str(g));
    tab.columns = {"kind",  "abs_B", "growth_exponent", "p_threshold", "bounded",
                   "empty", "p",     "verdict",         "zero_status", "margin"};

    std::vector<Cell> row;
    if (semitree::on_cut(t, g)) {
        // On the cuts the profile oscillates at the l2 critical rate.
        const auto lim = semitree::branch_cut_limit(t, g.real());
        row = {std::string("cut"), std::abs(lim.B), 1.0, 2.0, true, false};
    } else {
        const auto r = semitree::lp_range_of_spherical(t, g);
        const auto bp = semitree::B_of_gamma(t, g);
        const double absB = std::abs(bp.B);
        const double L = g == cplx(0, 0) ? std::numeric_limits<double>::quiet_NaN()
                                         : -std::log(absB) / std::log(t.qm());
        row = {std::string(kind_name(r.kind)),
               absB,
               L,
               r.empty ? Cell{} : Cell{r.p_threshold},
               r.bounded,
               r.empty};
    }
    if (p_text.empty()) {
        row.insert(row.end(), 4, Cell{});
    } else {
        const double p = parse_p(p_text);
        const auto q = semitree::membership(t, p, g);
        row.emplace_back(p);
        row.emplace_back(std::string(verdict_name(q.verdict)));
        row.emplace_back(std::string(zero_name(q.zero_status)));
        row.emplace_back(q.margin);
    }
    tab.rows.push_back(std::move(row));
    emit(tab, c.format, c.out);
    return 0;
}

int run_verify(const Common& c, double perturb, unsigned long long seed, long long samples) {
    semitree::VerifyOptions opt;
    opt.perturb = perturb;
    opt.seed = seed;
    opt.gammas_per_pair = int(samples);
    const auto results = semitree::run_verification(opt);

    Table tab;
    meta_common(tab, "verify", c);
    tab.meta_kv("perturb", perturb);
    tab.meta_kv("seed", (long long)seed);
    tab.meta_kv("samples", samples);
    tab.columns = {"check", "residual", "tolerance", "pass"};
    bool all_pass = true;
    for (const auto& r : results) {
        tab.rows.push_back({r.name, r.residual, r.tol, r.pass});
        all_pass = all_pass && r.pass;
    }
    tab.meta_kv("all_pass", std::string(all_pass ? "true" : "false"));
    // Move the summary line ahead of the per-check metadata block.
    std::rotate(tab.meta.begin() + 5, tab.meta.end() - 1, tab.meta.end());
    emit(tab, c.format, c.out);
    return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hitting series, kernels, spherical functions and lp spectra on "
                 "semi-homogeneous trees"};
    app.require_subcommand(1);

    Common c_spec, c_curve, c_sph, c_hit, c_poi, c_zmap, c_cls, c_ver;
    std::string p_spec = "2", p_curve = "2", p_cls;
    std::string g_sph = "1", g_hit = "1", g_poi, g_zmap = "2", g_cls = "1";
    long long depth_sph = 20, series_hit = 200, walks = 0, depth_poi = 4, samples_curve = 64,
              samples_ver = 60;
    unsigned long long seed_hit = 1, seed_ver = 0x5eed5eedULL;
    double perturb = 0;

    auto* spectrum = app.add_subcommand("spectrum", "Sigma_p geometry and radii");
    add_common(spectrum, c_spec);
    spectrum->add_option("--p", p_spec, "Exponent in [1, inf]")->capture_default_str();

    auto* curve = app.add_subcommand("radius-curve", "Boundary curve of Sigma_p with gamma sheets");
    add_common(curve, c_curve);
    curve->add_option("--p", p_curve, "Exponent in [1, inf]")->capture_default_str();
    curve->add_option("--samples", samples_curve, "Number of theta samples")
        ->check(CLI::Range(1LL, 1000000LL))
        ->capture_default_str();

    auto* sph = app.add_subcommand("spherical", "phi_n by recurrence, closed form and arc sum");
    add_common(sph, c_sph);
    sph->add_option("--gamma", g_sph, "Eigenvalue RE or RE,IM")->capture_default_str();
    sph->add_option("--depth", depth_sph, "Largest n (arc sums cost O(n) kernel calls per row)")
        ->check(CLI::Range(0LL, 500LL))
        ->capture_default_str();

    auto* hit = app.add_subcommand("hitting", "F continuations vs series (and walks at gamma=1)");
    add_common(hit, c_hit);
    hit->add_option("--gamma", g_hit, "Eigenvalue RE or RE,IM")->capture_default_str();
    hit->add_option("--series-terms", series_hit, "Series truncation order (exact rationals)")
        ->check(CLI::Range(1LL, 500LL))
        ->capture_default_str();
    hit->add_option("--walks", walks, "Monte Carlo walk count (0 disables; gamma must be 1)")
        ->check(CLI::Range(0LL, 2000000000LL))
        ->capture_default_str();
    hit->add_option("--seed", seed_hit, "Monte Carlo seed")->capture_default_str();

    auto* poi = app.add_subcommand("poisson", "Arc partition and kernels on the sphere |v| = n");
    add_common(poi, c_poi);
    poi->add_option("--depth", depth_poi, "Sphere radius n")->check(CLI::Range(0LL, 20000LL))
        ->capture_default_str();
    poi->add_option("--gamma", g_poi, "Optional eigenvalue for the generalized kernels");

    auto* zm = app.add_subcommand("zmap", "Eigenvalue parameter z with its preimage family");
    add_common(zm, c_zmap);
    zm->add_option("--gamma", g_zmap, "Eigenvalue RE or RE,IM")->capture_default_str();

    auto* cls = app.add_subcommand("classify", "lp classification of the spherical function");
    add_common(cls, c_cls);
    cls->add_option("--gamma", g_cls, "Eigenvalue RE or RE,IM")->capture_default_str();
    cls->add_option("--p", p_cls, "Also test membership in S_p for this exponent");

    auto* ver = app.add_subcommand("verify", "Run the cross-module identity checks");
    add_common(ver, c_ver);
    ver->add_option("--perturb", perturb, "Multiply B by (1 + perturb) inside the identity checks")
        ->capture_default_str();
    ver->add_option("--seed", seed_ver, "Sample seed")->capture_default_str();
    ver->add_option("--samples", samples_ver, "Gamma samples per degree pair")
        ->check(CLI::Range(4LL, 100000LL))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
        if (spectrum->parsed()) return run_spectrum(c_spec, p_spec);
        if (curve->parsed()) return run_radius_curve(c_curve, p_curve, samples_curve);
        if (sph->parsed()) return run_spherical(c_sph, g_sph, depth_sph);
        if (hit->parsed()) return run_hitting(c_hit, g_hit, series_hit, walks, seed_hit);
        if (poi->parsed()) return run_poisson(c_poi, depth_poi, g_poi);
        if (zm->parsed()) return run_zmap(c_zmap, g_zmap);
        if (cls->parsed()) return run_classify(c_cls, g_cls, p_cls);
        if (ver->parsed()) return run_verify(c_ver, perturb, seed_ver, samples_ver);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const semitree::CapacityError& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
