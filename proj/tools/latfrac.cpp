// latfrac: lattice fractional-series operator toolkit.
//
// Subcommands: apply, riesz, maximal, atom gen|check, hardy maximal|norm,
// spec validate, exp tail|lplq|atom-uniform|maximal-bound|domination|regions.
// Exit codes: 0 success, 1 experiment assertion failure, 2 input or
// validation error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latfrac/experiments.hpp"
#include "latfrac/rng.hpp"
#include "latfrac/io.hpp"

using namespace latfrac;
using nlohmann::json;

namespace {

struct WindowFlags {
    std::vector<std::int64_t> center;
    std::int64_t radius = -1;

    std::optional<CubeWindow> resolve(int n) const {
        if (radius < 0) return std::nullopt;
        CubeWindow w;
        w.radius = radius;
        w.center = center.empty() ? LatticeIndex(static_cast<std::size_t>(n), 0) : center;
        if (static_cast<int>(w.center.size()) != n)
            throw invalid_parameter("--window-center: expected " + std::to_string(n) +
                                    " coordinates");
        return w;
    }
};

void add_window_flags(CLI::App* cmd, WindowFlags& wf) {
    cmd->add_option("--window-center", wf.center, "output window center (list of ints)");
    cmd->add_option("--window-radius", wf.radius, "output window radius");
}

FractionalSpec load_spec(const std::string& spec_file, const std::string& preset) {
    if (!preset.empty()) {
        if (preset == "riesz-1d") return preset_riesz_1d();
        if (preset == "sym-1d") return preset_sym_1d();
        throw invalid_parameter("unknown preset '" + preset + "' (riesz-1d, sym-1d)");
    }
    if (spec_file.empty()) throw invalid_parameter("either --spec or --preset is required");
    return spec_from_json(load_json_file(spec_file));
}

void emit_report(const ExperimentReport& rep, const std::string& out_base,
                 const std::string& format) {
    if (!out_base.empty()) {
        if (format == "csv" || format == "both")
            save_text_file(out_base + ".csv", to_csv(rep));
        if (format == "json" || format == "both")
            save_text_file(out_base + ".json", report_json(rep).dump(2) + "\n");
    }
    json summary{{"experiment", rep.experiment},
                 {"rows", rep.rows.size()},
                 {"pass", rep.pass},
                 {"summary", rep.summary},
                 {"wall_ms", rep.wall_ms}};
    std::cout << summary.dump(2) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"lattice fractional-series operator toolkit"};
    app.require_subcommand(1);

    // ---- apply ----------------------------------------------------------
    auto* apply_cmd = app.add_subcommand("apply", "evaluate the series operator on a window");
    std::string apply_spec, apply_preset, apply_input, apply_out;
    WindowFlags apply_wf;
    double apply_q = 0.0;
    bool apply_riesz_flag = false;
    double apply_alpha = 0.5;
    int apply_n = 1;
    apply_cmd->add_option("--spec", apply_spec, "operator spec file (JSON)");
    apply_cmd->add_option("--preset", apply_preset, "built-in spec preset (riesz-1d, sym-1d)");
    apply_cmd->add_flag("--riesz", apply_riesz_flag, "use the m=1, A=Id reduction");
    apply_cmd->add_option("--alpha", apply_alpha, "alpha for --riesz");
    apply_cmd->add_option("--n", apply_n, "dimension for --riesz");
    apply_cmd->add_option("--input", apply_input, "input sequence file")->required();
    apply_cmd->add_option("--out", apply_out, "output file (JSON)")->required();
    apply_cmd->add_option("--q", apply_q, "attach a certified l^q tail bound for this q");
    add_window_flags(apply_cmd, apply_wf);

    // ---- riesz ----------------------------------------------------------
    auto* riesz_cmd = app.add_subcommand("riesz", "evaluate the lattice Riesz potential");
    std::string riesz_input, riesz_out;
    double riesz_alpha = 0.5, riesz_q = 0.0;
    WindowFlags riesz_wf;
    riesz_cmd->add_option("--alpha", riesz_alpha, "alpha in (0, n)")->required();
    riesz_cmd->add_option("--input", riesz_input, "input sequence file")->required();
    riesz_cmd->add_option("--out", riesz_out, "output file (JSON)")->required();
    riesz_cmd->add_option("--q", riesz_q, "attach a certified l^q tail bound for this q");
    add_window_flags(riesz_cmd, riesz_wf);

    // ---- maximal --------------------------------------------------------
    auto* maximal_cmd = app.add_subcommand("maximal", "centered fractional maximal sequence");
    std::string maximal_input, maximal_out;
    double maximal_alpha = 0.0;
    bool maximal_reference = false;
    WindowFlags maximal_wf;
    maximal_cmd->add_option("--alpha", maximal_alpha, "alpha in [0, n)");
    maximal_cmd->add_option("--input", maximal_input, "input sequence file")->required();
    maximal_cmd->add_option("--out", maximal_out, "output file (JSON)")->required();
    maximal_cmd->add_flag("--reference", maximal_reference,
                          "force the literal serial reference path");
    add_window_flags(maximal_cmd, maximal_wf);

    // ---- atom gen / atom check -----------------------------------------
    auto* atom_cmd = app.add_subcommand("atom", "atom construction and validation");
    atom_cmd->require_subcommand(1);
    auto* atom_gen = atom_cmd->add_subcommand("gen", "generate seeded random atoms");
    std::vector<std::int64_t> atom_center;
    std::int64_t atom_radius = 1;
    double atom_p = 1.0;
    std::uint64_t atom_seed = 1;
    int atom_n = 1;
    int atom_count = 1;
    std::string atom_out;
    atom_gen->add_option("--n", atom_n, "dimension");
    atom_gen->add_option("--center", atom_center, "cube center (list of ints)");
    atom_gen->add_option("--radius", atom_radius, "cube radius")->required();
    atom_gen->add_option("--p", atom_p, "p in (0, 1]");
    atom_gen->add_option("--seed", atom_seed, "master seed");
    atom_gen->add_option("--count", atom_count, "corpus size (> 1 writes a manifest)");
    atom_gen->add_option("--out", atom_out, "output atom file (or corpus base path)")->required();

    auto* atom_check = atom_cmd->add_subcommand("check", "validate an atom file");
    std::string atom_in;
    atom_check->add_option("--input", atom_in, "atom file")->required();

    // ---- hardy maximal / hardy norm -------------------------------------
    auto* hardy_cmd = app.add_subcommand("hardy", "dilation maximal function and quasi-norm");
    hardy_cmd->require_subcommand(1);
    auto* hardy_max = hardy_cmd->add_subcommand("maximal", "grid supremum of dilated convolutions");
    std::string hmax_input, hmax_out;
    WindowFlags hmax_wf;
    DilationGrid hmax_grid;
    hardy_max->add_option("--input", hmax_input, "input sequence file")->required();
    hardy_max->add_option("--out", hmax_out, "output file (JSON)")->required();
    hardy_max->add_option("--t-min", hmax_grid.t_min, "smallest dilation");
    hardy_max->add_option("--t-max", hmax_grid.t_max, "largest dilation");
    hardy_max->add_option("--per-octave", hmax_grid.per_octave, "grid points per octave");
    add_window_flags(hardy_max, hmax_wf);

    auto* hardy_norm = hardy_cmd->add_subcommand("norm", "quasi-norm estimate");
    std::string hn_input;
    double hn_p = 1.0;
    std::int64_t hn_radius = 0;
    DilationGrid hn_grid;
    hardy_norm->add_option("--input", hn_input, "input sequence file")->required();
    hardy_norm->add_option("--p", hn_p, "p in (0, 1]");
    hardy_norm->add_option("--window-radius", hn_radius, "0 = default policy");
    hardy_norm->add_option("--t-min", hn_grid.t_min, "smallest dilation");
    hardy_norm->add_option("--t-max", hn_grid.t_max, "largest dilation");
    hardy_norm->add_option("--per-octave", hn_grid.per_octave, "grid points per octave");

    // ---- spec validate ---------------------------------------------------
    auto* spec_cmd = app.add_subcommand("spec", "spec utilities");
    spec_cmd->require_subcommand(1);
    auto* spec_validate = spec_cmd->add_subcommand("validate", "check every structural rule");
    std::string sv_file;
    spec_validate->add_option("--spec", sv_file, "spec file (JSON)")->required();

    // ---- exp ------------------------------------------------------------
    auto* exp_cmd = app.add_subcommand("exp", "verification experiments");
    exp_cmd->require_subcommand(1);
    std::string exp_out, exp_format = "both";
    std::string exp_spec_file, exp_preset;
    std::uint64_t exp_seed = 1;

    auto add_common = [&](CLI::App* c, bool with_spec) {
        c->add_option("--out", exp_out, "output base path (writes .csv/.json)");
        c->add_option("--format", exp_format, "csv|json|both")
            ->check(CLI::IsMember({"csv", "json", "both"}));
        c->add_option("--seed", exp_seed, "master seed");
        if (with_spec) {
            c->add_option("--spec", exp_spec_file, "operator spec file (JSON)");
            c->add_option("--preset", exp_preset, "built-in preset (riesz-1d, sym-1d)");
        }
    };

    auto* e_tail = exp_cmd->add_subcommand("tail", "tail sums vs the closed-form bound");
    TailParams tail_params;
    e_tail->add_option("--n-list", tail_params.ns, "dimensions");
    e_tail->add_option("--eps-list", tail_params.eps, "exponents");
    e_tail->add_option("--N-list", tail_params.Ns, "inner radii");
    e_tail->add_option("--point-budget", tail_params.point_budget, "per-row direct-sum budget");
    add_common(e_tail, false);

    auto* e_lplq = exp_cmd->add_subcommand("lplq", "norm-ratio stability of the operator");
    LplqParams lplq_params;
    e_lplq->add_option("--p", lplq_params.p, "p in (1, n/alpha)");
    e_lplq->add_option("--trials", lplq_params.trials, "trials per radius and family");
    e_lplq->add_option("--radii", lplq_params.radii, "support radii");
    add_common(e_lplq, true);

    auto* e_atom = exp_cmd->add_subcommand("atom-uniform", "uniform atom estimate shadow");
    AtomUniformParams atom_params;
    e_atom->add_option("--p", atom_params.p, "p in (0, 1]");
    e_atom->add_option("--atoms", atom_params.atom_count, "atoms per (N, center kind) pair x2");
    e_atom->add_option("--N-list", atom_params.Ns, "cube radii");
    add_common(e_atom, true);

    auto* e_max = exp_cmd->add_subcommand("maximal-bound", "maximal operator norm ratios");
    MaximalBoundParams max_params;
    e_max->add_option("--n", max_params.n, "dimension");
    e_max->add_option("--p", max_params.p, "p in (1, n/alpha)");
    e_max->add_option("--alpha", max_params.alpha, "alpha in [0, n)");
    e_max->add_option("--trials", max_params.trials, "trials per radius and family");
    e_max->add_option("--radii", max_params.radii, "support radii");
    add_common(e_max, false);

    auto* e_dom = exp_cmd->add_subcommand("domination", "pointwise domination on R");
    DominationParams dom_params;
    e_dom->add_option("--p", dom_params.p, "p in (0, 1]");
    e_dom->add_option("--atoms", dom_params.atoms_per_N, "atoms per (N, center kind)");
    e_dom->add_option("--N-list", dom_params.Ns, "cube radii");
    e_dom->add_option("--samples", dom_params.samples, "sample points per atom");
    add_common(e_dom, true);

    auto* e_reg = exp_cmd->add_subcommand("regions", "region split majorants, alpha = 0");
    RegionsParams reg_params;
    e_reg->add_option("--trials", reg_params.trials, "random draws");
    e_reg->add_option("--p", reg_params.p, "reference exponent for the far partial sum");
    add_common(e_reg, true);

    CLI11_PARSE(app, argc, argv);
    apply_thread_cap_from_env();

    // ---- dispatch ---------------------------------------------------------
    if (apply_cmd->parsed()) {
        FractionalSpec spec;
        if (apply_riesz_flag) {
            spec = FractionalSpec::riesz(apply_n, apply_alpha);
        } else {
            spec = load_spec(apply_spec, apply_preset);
        }
        const auto rep = validate_spec(spec);
        if (!rep.valid()) {
            for (const auto& iss : rep.issues)
                std::cerr << "spec: [" << iss.rule << "] " << iss.detail << "\n";
            return 2;
        }
        const auto b = sequence_from_json(load_json_file(apply_input));
        const auto window = apply_wf.resolve(spec.n).value_or(default_output_window(spec, b));
        OperatorResult res = apply_T(spec, b, window);
        if (apply_q > 0.0) {
            const auto geom = support_geometry(b);
            const auto tn = truncated_lq_norm(res, apply_q, geom.l1, spec, geom);
            res.meta.has_tail = !tn.divergent;
            res.meta.tail_bound = tn.tail;
            res.meta.q = apply_q;
            if (tn.divergent) std::cerr << "note: tail flagged divergent for q = " << apply_q << "\n";
        }
        save_json_file(apply_out, operator_result_to_json(res));
        return 0;
    }

    if (riesz_cmd->parsed()) {
        const auto b = sequence_from_json(load_json_file(riesz_input));
        const auto spec = FractionalSpec::riesz(b.dim(), riesz_alpha);
        const auto window = riesz_wf.resolve(b.dim()).value_or(default_output_window(spec, b));
        OperatorResult res = apply_riesz(b, riesz_alpha, window);
        if (riesz_q > 0.0) {
            const auto geom = support_geometry(b);
            const auto tn = truncated_lq_norm(res, riesz_q, geom.l1, spec, geom);
            res.meta.has_tail = !tn.divergent;
            res.meta.tail_bound = tn.tail;
            res.meta.q = riesz_q;
        }
        save_json_file(riesz_out, operator_result_to_json(res));
        return 0;
    }

    if (maximal_cmd->parsed()) {
        const auto b = sequence_from_json(load_json_file(maximal_input));
        CubeWindow window;
        if (auto w = maximal_wf.resolve(b.dim())) {
            window = *w;
        } else {
            CubeWindow hull;
            window = b.support_hull(hull)
                         ? CubeWindow{hull.center, 4 * hull.radius + 16}
                         : CubeWindow{LatticeIndex(static_cast<std::size_t>(b.dim()), 0), 16};
        }
        const bool use_fast = b.is_dense() && !maximal_reference;
        const auto values = use_fast ? fractional_maximal_fast(b, maximal_alpha, window)
                                     : fractional_maximal(b, maximal_alpha, window);
        json out = sequence_to_json(values);
        out["metadata"] = {{"alpha", maximal_alpha},
                           {"window", window_to_json(window)},
                           {"path", use_fast ? "prefix-sum" : "reference"}};
        save_json_file(maximal_out, out);
        return 0;
    }

    if (atom_gen->parsed()) {
        LatticeIndex center = atom_center.empty()
                                  ? LatticeIndex(static_cast<std::size_t>(atom_n), 0)
                                  : atom_center;
        const CubeWindow cube{center, atom_radius};
        if (atom_count <= 1) {
            save_json_file(atom_out, atom_to_json(make_atom(cube, atom_p, atom_seed)));
            return 0;
        }
        // Corpus: per-atom seeds derived from the master seed, recorded in a
        // manifest next to the files.
        std::string base = atom_out;
        if (base.size() > 5 && base.substr(base.size() - 5) == ".json")
            base = base.substr(0, base.size() - 5);
        json manifest = json::array();
        for (int k = 0; k < atom_count; ++k) {
            Rng stream = Rng::derive(atom_seed, static_cast<std::uint64_t>(k));
            const std::uint64_t seed_k = stream.next_u64();
            const Atom a = make_atom(cube, atom_p, seed_k);
            char name[64];
            std::snprintf(name, sizeof name, "%s_%03d.json", base.c_str(), k);
            save_json_file(name, atom_to_json(a));
            manifest.push_back({{"file", name},
                                {"seed", seed_k},
                                {"p", atom_p},
                                {"cube", window_to_json(cube)}});
        }
        save_json_file(base + "_manifest.json", manifest);
        return 0;
    }

    if (atom_check->parsed()) {
        const Atom a = atom_from_json(load_json_file(atom_in));
        const AtomValidation v =
            a.has_certificate() ? validate_atom(a) : validate_atom(a.seq, a.cube, a.p);
        json report{{"valid", v.valid()},
                    {"support_ok", v.support_ok},
                    {"sup_ok", v.sup_ok},
                    {"moments_ok", v.moments_ok},
                    {"exact", a.has_certificate()},
                    {"issues", v.issues}};
        std::cout << report.dump(2) << "\n";
        return v.valid() ? 0 : 2;
    }

    if (hardy_max->parsed()) {
        const auto b = sequence_from_json(load_json_file(hmax_input));
        CubeWindow window;
        if (auto w = hmax_wf.resolve(b.dim())) {
            window = *w;
        } else {
            CubeWindow hull;
            window = b.support_hull(hull)
                         ? CubeWindow{hull.center, 4 * hull.radius + 16}
                         : CubeWindow{LatticeIndex(static_cast<std::size_t>(b.dim()), 0), 16};
        }
        const auto values = hardy_maximal(b, hmax_grid, window);
        json out = sequence_to_json(values);
        out["metadata"] = {{"t_min", hmax_grid.t_min},
                           {"t_max", hmax_grid.t_max},
                           {"per_octave", hmax_grid.per_octave},
                           {"window", window_to_json(window)}};
        save_json_file(hmax_out, out);
        return 0;
    }

    if (hardy_norm->parsed()) {
        const auto b = sequence_from_json(load_json_file(hn_input));
        const auto est = hp_quasinorm(b, hn_p, hn_grid, hn_radius);
        json out{{"value", est.value},
                 {"divergent", est.divergent},
                 {"gamma", est.gamma},
                 {"lp_part", est.lp_part},
                 {"maximal_part", est.maximal_part},
                 {"window_radius", est.window_radius},
                 {"grid", {{"t_min", hn_grid.t_min},
                           {"t_max", hn_grid.t_max},
                           {"per_octave", hn_grid.per_octave}}},
                 {"profile", "gaussian"}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    if (spec_validate->parsed()) {
        const auto spec = spec_from_json(load_json_file(sv_file));
        const auto rep = validate_spec(spec);
        json issues = json::array();
        for (const auto& iss : rep.issues) issues.push_back({{"rule", iss.rule}, {"detail", iss.detail}});
        std::cout << json{{"valid", rep.valid()}, {"issues", issues}}.dump(2) << "\n";
        return rep.valid() ? 0 : 2;
    }

    // Experiments: exit 1 when an asserted inequality or stability window fails.
    if (e_tail->parsed()) {
        const auto rep = exp_tail(tail_params);
        emit_report(rep, exp_out, exp_format);
        return rep.pass ? 0 : 1;
    }
    if (e_lplq->parsed()) {
        lplq_params.spec = load_spec(exp_spec_file, exp_preset);
        lplq_params.seed = exp_seed;
        const auto rep = exp_lplq(lplq_params);
        emit_report(rep, exp_out, exp_format);
        return rep.pass ? 0 : 1;
    }
    if (e_atom->parsed()) {
        atom_params.spec = load_spec(exp_spec_file, exp_preset);
        atom_params.seed = exp_seed;
        const auto rep = exp_atom_uniform(atom_params);
        emit_report(rep, exp_out, exp_format);
        return rep.pass ? 0 : 1;
    }
    if (e_max->parsed()) {
        max_params.seed = exp_seed;
        const auto rep = exp_maximal_bound(max_params);
        emit_report(rep, exp_out, exp_format);
        return rep.pass ? 0 : 1;
    }
    if (e_dom->parsed()) {
        dom_params.spec = load_spec(exp_spec_file, exp_preset);
        dom_params.seed = exp_seed;
        const auto rep = exp_domination(dom_params);
        emit_report(rep, exp_out, exp_format);
        return rep.pass ? 0 : 1;
    }
    if (e_reg->parsed()) {
        reg_params.spec = load_spec(exp_spec_file, exp_preset);
        reg_params.seed = exp_seed;
        const auto rep = exp_regions(reg_params);
        emit_report(rep, exp_out, exp_format);
        return rep.pass ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_parameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const singular_matrix& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cannot_construct& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const budget_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
