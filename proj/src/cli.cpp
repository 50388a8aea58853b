#include "asymcom/cli.hpp"

#include "asymcom/comotion.hpp"
#include "asymcom/inversion.hpp"
#include "asymcom/oracle.hpp"
#include "asymcom/singular.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace asymcom {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

cplx get_cplx(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("complex values must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<cplx> get_cplx_list(const json& j) {
    std::vector<cplx> out;
    for (const auto& e : j) out.push_back(get_cplx(e));
    return out;
}

json put_cplx(cplx z) { return json::array({z.real(), z.imag()}); }

struct JobConfig {
    OdeSpec ode;
    json raw;

    bool has(const char* key) const { return raw.contains(key); }
    cplx complex_at(const char* key) const {
        if (!raw.contains(key)) throw ConfigError(std::string("missing key: ") + key);
        return get_cplx(raw.at(key));
    }
    double number_or(const char* key, double def) const {
        return raw.contains(key) ? raw.at(key).get<double>() : def;
    }
};

JobConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.contains("ode") || !j["ode"].contains("P"))
        throw ConfigError("config needs ode.P (coefficient lists per P_k)");
    std::vector<ComplexPoly> P;
    for (const auto& coeffs : j["ode"]["P"]) P.emplace_back(get_cplx_list(coeffs));
    const int n = j["ode"].value("n", 2);
    if (n < 0 || n > 8) throw ConfigError("ode.n must be between 0 and 8");
    JobConfig cfg;
    cfg.ode = OdeSpec(std::move(P), n);
    cfg.raw = std::move(j);
    return cfg;
}

Contour contour_from(const JobConfig& cfg) {
    if (!cfg.has("contour")) throw ConfigError("missing key: contour");
    const json& c = cfg.raw.at("contour");
    const int idx = c.at("root_index").get<int>();
    if (idx < 0 || idx >= (int)cfg.ode.roots.roots.size())
        throw ConfigError("contour.root_index out of range");
    Contour out = default_contour(cfg.ode.roots, idx, c.value("winding", 1));
    if (c.contains("radius")) out.radii[(size_t)idx] = c.at("radius").get<double>();
    if (c.contains("orientation")) out.orientation = c.at("orientation").get<int>();
    return out;
}

Path xpath_from(const JobConfig& cfg) {
    if (!cfg.has("x_path")) throw ConfigError("missing key: x_path");
    Path p;
    p.plane = Plane::X;
    p.nodes = get_cplx_list(cfg.raw.at("x_path"));
    if (p.nodes.size() < 2) throw ConfigError("x_path needs at least two nodes");
    return p;
}

ConstantSeries series_from(const JobConfig& cfg) {
    ConstantSeries s = build_constant(cfg.ode, contour_from(cfg),
                                      cfg.complex_at("base_y"), cfg.ode.n);
    if (cfg.has("anchors")) {
        for (const auto& a : cfg.raw.at("anchors"))
            anchor_level(s, a.at("level").get<int>(), get_cplx(a.at("y")),
                         get_cplx(a.at("value")));
    }
    return s;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) throw ConfigError("cannot write output file: " + name);
    return f;
}

void emit(const json& j, bool verbose) {
    std::cout << j.dump(2) << "\n";
    (void)verbose;
}

int cmd_roots(const JobConfig& cfg, const std::string& out, bool verbose) {
    const auto& rs = cfg.ode.roots;
    const ComplexPoly dP0 = cfg.ode.P[0].derivative();
    json j;
    j["min_separation"] = rs.min_separation;
    for (size_t i = 0; i < rs.roots.size(); ++i) {
        const cplx p = rs.roots[i];
        const double margin =
            std::abs(dP0.eval(p)) /
            (cfg.ode.P[0].max_coeff() *
             std::pow(1.0 + std::abs(p), (double)cfg.ode.P[0].degree() - 1.0));
        j["roots"].push_back({{"value", put_cplx(p)}, {"simplicity_margin", margin}});
    }
    auto f = open_out(out, "roots.json");
    f << j.dump(2) << "\n";
    emit(j, verbose);
    return 0;
}

int cmd_com(const JobConfig& cfg, const std::string& out, bool verbose) {
    ConstantSeries s = series_from(cfg);
    json j;
    j["a"] = put_cplx(s.a);
    for (const cplx& c : s.c) j["c"].push_back(put_cplx(c));
    j["n"] = s.n;
    j["base_y"] = put_cplx(s.base_y);
    auto fj = open_out(out, "com_summary.json");
    fj << j.dump(2) << "\n";

    auto fc = open_out(out, "com_ftable.csv");
    fc << "y_re,y_im";
    for (int k = 0; k <= s.n; ++k) fc << ",F" << k << "_re,F" << k << "_im";
    fc << "\n";
    if (cfg.has("y_grid")) {
        char buf[64];
        for (cplx y : get_cplx_list(cfg.raw.at("y_grid"))) {
            FContinuation fcont(s);
            fcont.move_to(y);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", y.real(), y.imag());
            fc << buf;
            for (int k = 0; k <= s.n; ++k) {
                const cplx v = fcont.state().F[(size_t)k] + s.offsets[(size_t)k];
                std::snprintf(buf, sizeof buf, ",%.17g,%.17g", v.real(), v.imag());
                fc << buf;
            }
            fc << "\n";
        }
    }
    emit(j, verbose);
    return 0;
}

int cmd_invert(const JobConfig& cfg, const std::string& out, bool verbose) {
    ConstantSeries s = series_from(cfg);
    const Path xp = xpath_from(cfg);
    const cplx y0 = cfg.complex_at("y0");
    cplx K{};
    const bool pinned = cfg.has("K");
    if (pinned) K = cfg.complex_at("K");
    auto samples = continue_trajectory(s, xp, y0, pinned ? &K : nullptr);

    const double tol = cfg.number_or("rk_tol", 1e-10);
    auto rk = rk_integrate(cfg.ode, xp, y0, tol);
    auto rk_params = path_params(xp, rk.xs);
    std::vector<cplx> sample_x;
    for (const auto& t : samples) sample_x.push_back(t.x);
    auto s_params = path_params(xp, sample_x);

    auto f = open_out(out, "invert.csv");
    f << "x_re,x_im,y_re,y_im,K_check_re,K_check_im,region,y_rk_re,y_rk_im,rel_err\n";
    char buf[256];
    double max_err = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const cplx yr = rk_value_at(rk, rk_params, s_params[i]);
        const double err = std::abs(samples[i].y - yr) / std::max(std::abs(yr), 1e-300);
        max_err = std::max(max_err, err);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.6e\n",
                      samples[i].x.real(), samples[i].x.imag(), samples[i].y.real(),
                      samples[i].y.imag(), samples[i].K_check.real(),
                      samples[i].K_check.imag(), samples[i].region.c_str(), yr.real(),
                      yr.imag(), err);
        f << buf;
    }
    json j;
    j["samples"] = samples.size();
    j["K"] = put_cplx(pinned ? K : samples.front().K_check);
    j["max_rel_err_vs_rk"] = max_err;
    emit(j, verbose);
    return 0;
}

int cmd_sing(const JobConfig& cfg, const std::string& out, bool verbose) {
    const cplx dir = cfg.has("direction") ? cfg.complex_at("direction") : cplx(1.0);
    auto sing = build_singular(cfg.ode, dir, cfg.ode.n, cfg.number_or("Y_max", 1e3));
    const cplx x0 = cfg.complex_at("x0");
    const cplx y0 = cfg.complex_at("y0");
    std::vector<std::vector<int>> shifts{{}};
    if (cfg.has("shifts")) {
        shifts.clear();
        for (const auto& sh : cfg.raw.at("shifts"))
            shifts.push_back(sh.get<std::vector<int>>());
    }
    auto reports = singularity_array(sing, x0, y0, shifts);
    const SingularityReport base = locate_singularity(sing, x0, y0);
    const bool verify = !cfg.has("verify") || cfg.raw.at("verify").get<bool>();
    bool all_ok = true;
    json j = json::array();
    for (auto& r : reports) {
        if (verify) {
            try {
                r = verify_singularity(cfg.ode, r, cfg.number_or("rk_tol", 1e-10),
                                       verification_waypoints(cfg.ode, base, r));
            } catch (const NoBlowup&) {
                r.shot = true;
                r.verified = false;
            }
            all_ok = all_ok && r.verified;
        }
        json e;
        e["x_sing"] = put_cplx(r.x_sing);
        e["branch_shift"] = r.branch_shift;
        e["order_used"] = r.order_used;
        e["shot"] = r.shot;
        e["verified"] = r.verified;
        e["digits"] = r.digits;
        j.push_back(e);
    }
    auto f = open_out(out, "sing.json");
    f << j.dump(2) << "\n";
    emit(j, verbose);
    if (verify && !all_ok) {
        std::cerr << "VerificationFailed: singularity predictions not confirmed\n";
        return 4;
    }
    return 0;
}

int cmd_phase(const JobConfig& cfg, const std::string& out, bool verbose) {
    const cplx x0 = cfg.complex_at("x0");
    const double t = cfg.raw.at("t").get<double>();
    std::vector<cplx> grid;
    if (cfg.has("grid")) {
        const json& g = cfg.raw.at("grid");
        const auto re = g.at("re").get<std::vector<double>>();
        const auto im = g.at("im").get<std::vector<double>>();
        if (re.size() != 3 || im.size() != 3)
            throw ConfigError("grid.re / grid.im must be [min, max, count]");
        const int nre = (int)re[2], nim = (int)im[2];
        for (int i = 0; i < nim; ++i)
            for (int k = 0; k < nre; ++k)
                grid.push_back({re[0] + (re[1] - re[0]) * k / std::max(1, nre - 1),
                                im[0] + (im[1] - im[0]) * i / std::max(1, nim - 1)});
    }
    auto pf = phase_field(cfg.ode, x0, t, grid);
    auto f = open_out(out, "phase_field.csv");
    f << "y_re,y_im,v_re,v_im\n";
    char buf[160];
    for (const auto& [y, v] : pf.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", y.real(), y.imag(),
                      v.real(), v.imag());
        f << buf;
    }
    json j = json::array();
    for (const auto& eq : pf.equilibria)
        j.push_back({{"p", put_cplx(eq.p)},
                     {"indicator", eq.indicator},
                     {"stability", eq.stability}});
    auto fj = open_out(out, "phase_equilibria.json");
    fj << j.dump(2) << "\n";
    emit(j, verbose);
    return 0;
}

int cmd_regions(const JobConfig& cfg, const std::string& out, bool verbose) {
    const Path xp = xpath_from(cfg);
    const cplx y0 = cfg.complex_at("y0");
    const double eps_near = cfg.number_or("eps_near", 0.05);
    const double R0 = cfg.number_or("R0", 10.0);
    auto rk = rk_integrate(cfg.ode, xp, y0, cfg.number_or("rk_tol", 1e-10));

    auto f = open_out(out, "regions.csv");
    f << "x_re,x_im,y_re,y_im,region,root_index,handoff_resid\n";
    std::vector<RegionTag> tags;
    for (size_t i = 0; i < rk.xs.size(); ++i)
        tags.push_back(detect_region(cfg.ode, rk.xs[i], rk.ys[i], eps_near, R0));

    // per-episode transseries fits feed the overlap-band handoff residual;
    // entry and exit bands carry independent constants (the decaying mode
    // drops below the truncation error inside the episode), so each side is
    // fitted on the adjacent samples only
    std::vector<double> handoff(rk.xs.size(), -1.0);
    const int fit_n = cfg.ode.n;
    std::vector<double> argx(rk.xs.size());
    argx[0] = std::arg(rk.xs[0]);
    for (size_t m = 1; m < rk.xs.size(); ++m)
        argx[m] = argx[m - 1] + std::arg(rk.xs[m] / rk.xs[m - 1]);
    size_t i = 0;
    while (i < tags.size()) {
        if (tags[i].kind != RegionKind::NearRoot) { ++i; continue; }
        const int root = tags[i].root_index;
        size_t j = i;
        while (j < tags.size() && tags[j].kind == RegionKind::NearRoot &&
               tags[j].root_index == root)
            ++j;
        if (j - i >= 32) {
            try {
                auto exp = power_series_at_root(cfg.ode, cfg.ode.roots.roots[(size_t)root], fit_n);
                auto in_band = [&](size_t m) {
                    const double d = std::abs(rk.ys[m] - exp.p);
                    return d > cfg.ode.eps_root && d < eps_near;
                };
                auto fill_side = [&](size_t b0, size_t b1, size_t w0, size_t w1) {
                    if (b0 >= b1) return;
                    try {
                        auto fit = transseries_fit(exp, rk, {w0, w1});
                        for (size_t m = b0; m < b1; ++m) {
                            const cplx logx(std::log(std::abs(rk.xs[m])), argx[m]);
                            const cplx ytr = root_expansion_eval(exp, rk.xs[m]) +
                                             fit.C_trans * std::exp(exp.nu * logx + exp.mu * rk.xs[m]);
                            handoff[m] = std::abs(rk.ys[m] - ytr);
                        }
                    } catch (const MathError&) {
                        // side too unstable to fit; leave the column empty
                    }
                };
                size_t e1 = i;
                while (e1 < j && in_band(e1)) ++e1;
                size_t s0 = j;
                while (s0 > i && in_band(s0 - 1)) --s0;
                fill_side(i, e1, i, i + 16);
                fill_side(s0, j, j - 16, j);
            } catch (const MathError&) {
                // root expansion unavailable; leave the column empty
            }
        }
        i = j;
    }

    char buf[200];
    json seq = json::array();
    std::string last;
    for (size_t i = 0; i < rk.xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s,%d,", rk.xs[i].real(),
                      rk.xs[i].imag(), rk.ys[i].real(), rk.ys[i].imag(),
                      tags[i].name().c_str(), tags[i].root_index);
        f << buf;
        if (handoff[i] >= 0.0) {
            std::snprintf(buf, sizeof buf, "%.6e", handoff[i]);
            f << buf;
        }
        f << "\n";
        std::string cur = tags[i].name();
        if (tags[i].kind == RegionKind::NearRoot)
            cur += "(" + std::to_string(tags[i].root_index) + ")";
        if (cur != last) { seq.push_back(cur); last = cur; }
    }
    json j;
    j["sequence"] = seq;
    emit(j, verbose);
    return 0;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"asymptotic constants of motion for complex ODEs"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    bool verbose = false;
    app.add_option("--config", config_path, "JSON job configuration")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--verbose", verbose, "chatty diagnostics");

    const char* names[] = {"roots", "com", "invert", "sing", "phase", "regions"};
    const char* descs[] = {"roots of P0 with simplicity margins",
                           "build a constant of motion",
                           "invert the constant along an x path",
                           "locate and verify movable singularities",
                           "phase portrait field and equilibria",
                           "region sequence along an x path"};
    for (int i = 0; i < 6; ++i) app.add_subcommand(names[i], descs[i])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        JobConfig cfg = load_config(config_path);
        if (app.got_subcommand("roots")) return cmd_roots(cfg, out_dir, verbose);
        if (app.got_subcommand("com")) return cmd_com(cfg, out_dir, verbose);
        if (app.got_subcommand("invert")) return cmd_invert(cfg, out_dir, verbose);
        if (app.got_subcommand("sing")) return cmd_sing(cfg, out_dir, verbose);
        if (app.got_subcommand("phase")) return cmd_phase(cfg, out_dir, verbose);
        if (app.got_subcommand("regions")) return cmd_regions(cfg, out_dir, verbose);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "ConfigError: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "ConfigError: " << e.what() << "\n";
        return 2;
    } catch (const NoBlowup& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const MathError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
}

} // namespace asymcom
