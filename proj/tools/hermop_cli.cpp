// hermop: command-line front end for the Hermite-spectral operator calculus
// library. Subcommands: generate, factorize, classify, decay, quantize,
// kernel, sharp, factorize-symbol, schatten, verify.
//
// Exit codes: 0 success, 1 validation error (bad flags/inputs, zero tensor),
// 2 numerical failure (inadequate window, degenerate fit).

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hermop/hermop.hpp"

namespace {

using hermop::Branch;
using hermop::Complex;
using hermop::Json;
using hermop::ValidationError;

struct GlobalFlags {
    std::string output;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string grid_spec = "-8,8,256";
};

void add_global_flags(CLI::App* cmd, GlobalFlags& g) {
    cmd->add_option("--output", g.output, "output path (stdout when omitted)");
    cmd->add_option("--format", g.format, "output format (json)");
    cmd->add_option("--seed", g.seed, "RNG seed (u64)")->each([&g](const std::string&) {
        g.seed_given = true;
    });
    cmd->add_option("--grid", g.grid_spec, "grid as min,max,n (square)");
}

void emit(const Json& j, const GlobalFlags& g) {
    if (g.format != "json")
        throw ValidationError("unsupported --format: " + g.format);
    if (g.output.empty())
        std::cout << hermop::dump_canonical(j);
    else
        hermop::save_json(j, g.output);
}

hermop::MultiIndex parse_multi_index(const std::string& text) {
    std::vector<int> entries;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
        entries.push_back(std::stoi(part));
    if (entries.empty())
        throw ValidationError("empty multi-index");
    return hermop::MultiIndex(std::move(entries));
}

hermop::PhaseGrid parse_grid(const std::string& text) {
    std::stringstream ss(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ','))
        parts.push_back(part);
    if (parts.size() != 3)
        throw ValidationError("--grid expects min,max,n");
    return hermop::square_grid(std::stod(parts[0]), std::stod(parts[1]),
                               std::stoi(parts[2]));
}

double parse_order(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF")
        return hermop::schatten_inf();
    const double p = std::stod(text);
    if (!(p > 0.0))
        throw ValidationError("Schatten order must be positive");
    return p;
}

Branch parse_space(const std::string& text) {
    if (text == "Ss")
        return Branch::Roumieu;
    if (text == "Sigmas")
        return Branch::Beurling;
    if (text == "schwartz")
        return Branch::Schwartz;
    throw ValidationError("--space must be one of schwartz|Ss|Sigmas");
}

hermop::CoeffTensor load_tensor(const std::string& path) {
    return hermop::coeff_tensor_from_json(hermop::load_json(path));
}

hermop::HermiteWeight load_weight_or_unit(const std::string& path, int dim) {
    if (path.empty())
        return hermop::HermiteWeight(dim);
    hermop::HermiteWeight w = hermop::weight_from_json(hermop::load_json(path));
    if (w.dim() != dim)
        throw ValidationError("weight file dimension mismatch: " + path);
    return w;
}

Json decay_json_or_null(const hermop::CoeffTensor& a, double s) {
    if (a.empty())
        return nullptr;
    return hermop::to_json(hermop::estimate_decay(a, s));
}

// ------------------------------------------------------------ subcommands --

struct GenerateArgs {
    GlobalFlags g;
    std::string kind;
    double tau = 0.5;
    int n_trunc = -1;
    int d = 1;
    double s = 0.5;
    double r = 0.5;
    std::string alpha = "0", beta = "0";
};

void run_generate(const GenerateArgs& a) {
    if (a.kind == "mehler") {
        const int n = a.n_trunc < 0 ? 64 : a.n_trunc;
        emit(hermop::to_json(hermop::mehler_tensor(a.tau, n)), a.g);
    } else if (a.kind == "random-gs") {
        if (!a.g.seed_given)
            throw ValidationError("generate random-gs: --seed is required");
        const int n = a.n_trunc < 0 ? 32 : a.n_trunc;
        emit(hermop::to_json(hermop::random_gs_tensor(n, a.d, a.s, a.r, a.g.seed)), a.g);
    } else if (a.kind == "rank-one") {
        emit(hermop::to_json(hermop::rank_one_tensor(parse_multi_index(a.alpha),
                                                     parse_multi_index(a.beta))),
             a.g);
    } else if (a.kind == "projector-symbol") {
        emit(hermop::to_json(hermop::projector_symbol(parse_grid(a.g.grid_spec))), a.g);
    } else {
        throw ValidationError("--kind must be one of mehler|random-gs|rank-one|projector-symbol");
    }
}

struct FactorizeArgs {
    GlobalFlags g;
    std::string input;
    std::string space;
    double s = 0.5;
    double r = 0.0;
    bool r_given = false;
    int d0 = 0;
    bool d0_given = false;
    int chain = 0;
    bool chain_given = false;
};

void run_factorize(const FactorizeArgs& a) {
    const Branch branch = parse_space(a.space);
    if (a.r_given && branch != Branch::Roumieu)
        throw ValidationError("--r is only valid with --space Ss");

    const hermop::CoeffTensor tensor = load_tensor(a.input);
    if (tensor.empty())
        throw ValidationError("factorize: zero tensor");

    auto factor_once = [&](const hermop::CoeffTensor& t) {
        switch (branch) {
        case Branch::Roumieu:
            return a.r_given ? hermop::factorize_roumieu(t, a.s, a.r)
                             : hermop::factorize_roumieu(t, a.s);
        case Branch::Beurling:
            return hermop::factorize_beurling(t, a.s);
        default:
            return hermop::factorize_schwartz(t);
        }
    };

    if (a.chain_given) {
        if (a.chain < 2)
            throw ValidationError("--chain must be >= 2");
        if (a.d0_given)
            throw ValidationError("--d0 cannot be combined with --chain");
        if (a.r_given)
            throw ValidationError("--r cannot be combined with --chain (rates are "
                                  "refitted per level)");
        const auto chain = hermop::factor_chain(tensor, a.s, a.chain, branch);
        const double recon = hermop::max_rel_diff(hermop::chain_product(chain), tensor);

        bool all_diag = true;
        Json factors = Json::array();
        for (std::size_t i = 0; i < chain.size(); ++i) {
            if (i > 0)
                all_diag = all_diag && hermop::is_positive_hermite_diagonal(chain[i]).first;
            Json f = hermop::to_json(chain[i]);
            f["decay"] = decay_json_or_null(chain[i], a.s);
            factors.push_back(std::move(f));
        }
        emit(Json{{"branch", hermop::to_string(branch)},
                  {"factors", std::move(factors)},
                  {"verification",
                   Json{{"reconstruction_error", recon}, {"positive_diagonal", all_diag}}}},
             a.g);
        return;
    }

    hermop::FactorPair pair = factor_once(tensor);
    if (a.d0_given)
        pair = hermop::extend_inner_dim(pair, a.d0);

    const double recon = hermop::max_rel_diff(hermop::matmul(pair.B, pair.C), tensor);
    const bool diag = hermop::is_positive_hermite_diagonal(pair.C).first;

    Json j = hermop::to_json(pair);
    j["verification"] = Json{{"reconstruction_error", recon},
                             {"positive_diagonal", diag},
                             {"decay", Json{{"B", decay_json_or_null(pair.B, a.s)},
                                            {"C", decay_json_or_null(pair.C, a.s)}}}};
    emit(j, a.g);
}

struct ClassifyArgs {
    GlobalFlags g;
    std::string input;
    double s = 0.5;
    std::string mode = "roumieu";
};

void run_classify(const ClassifyArgs& a) {
    hermop::ClassifyMode mode;
    if (a.mode == "schwartz")
        mode = hermop::ClassifyMode::Schwartz;
    else if (a.mode == "roumieu")
        mode = hermop::ClassifyMode::Roumieu;
    else if (a.mode == "beurling")
        mode = hermop::ClassifyMode::Beurling;
    else if (a.mode == "dual")
        mode = hermop::ClassifyMode::Dual;
    else
        throw ValidationError("--mode must be one of schwartz|roumieu|beurling|dual");
    emit(hermop::to_json(hermop::classify(load_tensor(a.input), a.s, mode)), a.g);
}

struct DecayArgs {
    GlobalFlags g;
    std::string input;
    double s = 0.5;
};

void run_decay(const DecayArgs& a) {
    emit(hermop::to_json(hermop::estimate_decay(load_tensor(a.input), a.s)), a.g);
}

struct QuantizeArgs {
    GlobalFlags g;
    std::string input;
    double from = 0.5, to = 0.5;
};

void run_quantize(const QuantizeArgs& a) {
    const auto symbol = hermop::grid_symbol_from_json(hermop::load_json(a.input));
    emit(hermop::to_json(hermop::change_quantization(symbol, a.from, a.to)), a.g);
}

struct KernelArgs {
    GlobalFlags g;
    std::string input;
    double t = 0.5;
    std::string direction = "to-kernel";
};

void run_kernel(const KernelArgs& a) {
    const Json j = hermop::load_json(a.input);
    if (a.direction == "to-kernel") {
        emit(hermop::to_json(hermop::symbol_to_kernel(hermop::grid_symbol_from_json(j), a.t)),
             a.g);
    } else if (a.direction == "to-symbol") {
        emit(hermop::to_json(hermop::kernel_to_symbol(hermop::grid_kernel_from_json(j), a.t)),
             a.g);
    } else {
        throw ValidationError("--direction must be to-kernel or to-symbol");
    }
}

struct SharpArgs {
    GlobalFlags g;
    std::string input_a, input_b;
    double t = 0.5;
};

void run_sharp(const SharpArgs& a) {
    const auto sa = hermop::grid_symbol_from_json(hermop::load_json(a.input_a));
    const auto sb = hermop::grid_symbol_from_json(hermop::load_json(a.input_b));
    emit(hermop::to_json(hermop::sharp(sa, sb, a.t)), a.g);
}

struct FactorizeSymbolArgs {
    GlobalFlags g;
    std::string input;
    double t = 0.5;
    double s = 0.5;
    std::string space = "Ss";
    int bridge = 32;
};

void run_factorize_symbol(const FactorizeSymbolArgs& a) {
    const auto symbol = hermop::grid_symbol_from_json(hermop::load_json(a.input));
    const auto result =
        hermop::factorize_symbol(symbol, a.t, a.s, parse_space(a.space), a.bridge);

    const auto recombined = hermop::sharp(result.a1, result.a2, a.t);
    double err = 0.0;
    for (std::size_t i = 0; i < symbol.values.size(); ++i)
        err = std::max(err, std::abs(recombined.values[i] - symbol.values[i]));

    emit(Json{{"a1", hermop::to_json(result.a1)},
              {"a2", hermop::to_json(result.a2)},
              {"verification",
               Json{{"sharp_error", err},
                    {"positive_diagonal",
                     hermop::is_positive_hermite_diagonal(result.pair.C).first}}}},
         a.g);
}

struct SchattenArgs {
    GlobalFlags g;
    std::string input;
    std::vector<std::string> orders;
    std::string w1, w2;
};

void run_schatten(const SchattenArgs& a) {
    const auto tensor = load_tensor(a.input);
    const auto weight1 = load_weight_or_unit(a.w1, tensor.d_right());
    const auto weight2 = load_weight_or_unit(a.w2, tensor.d_left());
    const auto spectrum =
        hermop::singular_values(hermop::operator_matrix(tensor, weight1, weight2));

    Json norms = Json::object();
    const auto orders = a.orders.empty() ? std::vector<std::string>{"2"} : a.orders;
    for (const std::string& text : orders)
        norms[text] = hermop::schatten_norm(spectrum, parse_order(text));

    emit(Json{{"sigma", spectrum.sigma}, {"norms", std::move(norms)}}, a.g);
}

struct VerifyArgs {
    GlobalFlags g;
    std::string input, input2;
    std::string check;
    std::string w1, w2, w3, b1, b2, c1, c2;
    double s = 0.5;
    std::string p1 = "2", p2 = "2";
};

void run_verify(const VerifyArgs& a) {
    const auto tensor = load_tensor(a.input);
    std::string digest = hermop::file_digest(a.input);

    Json report{{"check", a.check}, {"constant", 1.0}};

    if (a.check == "hs") {
        const auto weight1 = load_weight_or_unit(a.w1, tensor.d_right());
        const auto weight2 = load_weight_or_unit(a.w2, tensor.d_left());
        const auto hs = hermop::hs_identity_check(tensor, weight1, weight2);
        report["lhs"] = hs.lhs;
        report["rhs"] = hs.rhs;
        report["pass"] = hs.gap <= 1e-12;
    } else if (a.check == "hoelder") {
        if (a.input2.empty())
            throw ValidationError("verify hoelder: --input2 (left factor) required");
        const auto tensor2 = load_tensor(a.input2);
        digest += "+" + hermop::file_digest(a.input2);
        const auto weight1 = load_weight_or_unit(a.w1, tensor.d_right());
        const auto weight2 = load_weight_or_unit(a.w2, tensor.d_left());
        const auto weight3 = load_weight_or_unit(a.w3, tensor2.d_left());
        const auto h = hermop::holder_check(tensor, tensor2, weight1, weight2, weight3,
                                            parse_order(a.p1), parse_order(a.p2));
        report["lhs"] = h.lhs;
        report["rhs"] = h.rhs;
        report["pass"] = h.pass;
    } else if (a.check == "embed") {
        const auto wb1 = load_weight_or_unit(a.b1, tensor.d_right());
        const auto wb2 = load_weight_or_unit(a.b2, tensor.d_left());
        const auto wc1 = load_weight_or_unit(a.c1, tensor.d_right());
        const auto wc2 = load_weight_or_unit(a.c2, tensor.d_left());
        const auto e = hermop::embedding_monotonicity_check(tensor, wb1, wb2, wc1, wc2);
        report["lhs"] = e.max_violation;
        report["rhs"] = 0.0;
        report["constant"] = e.c_a * e.c_b;
        report["pass"] = e.pass;
    } else if (a.check == "decay") {
        const auto weight1 = load_weight_or_unit("", tensor.d_right());
        const auto weight2 = load_weight_or_unit("", tensor.d_left());
        const auto spectrum =
            hermop::singular_values(hermop::operator_matrix(tensor, weight1, weight2));
        const auto fit = hermop::decay_fit(spectrum, a.s);
        report["lhs"] = fit.rho;
        report["rhs"] = fit.r_squared;
        report["constant"] = fit.c;
        report["pass"] = fit.r_squared >= 0.99;
    } else {
        throw ValidationError("--check must be one of hs|hoelder|embed|decay");
    }

    report["inputs_digest"] = digest;
    emit(report, a.g);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hermite-spectral operator calculus: kernel factorization, Op_t "
                 "quantization, Schatten numerics"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "write a generator tensor or symbol");
    add_global_flags(cmd_gen, gen.g);
    cmd_gen->add_option("--kind", gen.kind, "mehler|random-gs|rank-one|projector-symbol")
        ->required();
    cmd_gen->add_option("--tau", gen.tau, "Mehler time parameter (> 0)");
    cmd_gen->add_option("--N", gen.n_trunc, "per-axis truncation order");
    cmd_gen->add_option("--d", gen.d, "dimension (random-gs)");
    cmd_gen->add_option("--s", gen.s, "Gelfand-Shilov index (random-gs)");
    cmd_gen->add_option("--r", gen.r, "decay rate (random-gs)");
    cmd_gen->add_option("--alpha", gen.alpha, "row multi-index, comma list (rank-one)");
    cmd_gen->add_option("--beta", gen.beta, "column multi-index, comma list (rank-one)");

    FactorizeArgs fac;
    auto* cmd_fac = app.add_subcommand("factorize", "factor a tensor into B*C, C positive "
                                                    "Hermite diagonal");
    add_global_flags(cmd_fac, fac.g);
    cmd_fac->add_option("input", fac.input, "CoeffTensor JSON path")->required();
    cmd_fac->add_option("--space", fac.space, "schwartz|Ss|Sigmas")->required();
    cmd_fac->add_option("--s", fac.s, "Gelfand-Shilov index");
    cmd_fac->add_option("--r", fac.r, "Roumieu rate (Ss only)")->each([&fac](const std::string&) {
        fac.r_given = true;
    });
    cmd_fac->add_option("--d0", fac.d0, "extend the inner dimension")->each([&fac](const std::string&) {
        fac.d0_given = true;
    });
    cmd_fac->add_option("--chain", fac.chain, "factor into N >= 2 tensors")->each([&fac](const std::string&) {
        fac.chain_given = true;
    });

    ClassifyArgs cls;
    auto* cmd_cls = app.add_subcommand("classify", "coefficient-space classification");
    add_global_flags(cmd_cls, cls.g);
    cmd_cls->add_option("input", cls.input, "CoeffTensor JSON path")->required();
    cmd_cls->add_option("--s", cls.s, "Gelfand-Shilov index");
    cmd_cls->add_option("--mode", cls.mode, "schwartz|roumieu|beurling|dual");

    DecayArgs dec;
    auto* cmd_dec = app.add_subcommand("decay", "fit the coefficient decay rate");
    add_global_flags(cmd_dec, dec.g);
    cmd_dec->add_option("input", dec.input, "CoeffTensor JSON path")->required();
    cmd_dec->add_option("--s", dec.s, "Gelfand-Shilov index");

    QuantizeArgs qua;
    auto* cmd_qua = app.add_subcommand("quantize", "change the quantization parameter");
    add_global_flags(cmd_qua, qua.g);
    cmd_qua->add_option("input", qua.input, "GridSymbol JSON path")->required();
    cmd_qua->add_option("--from", qua.from, "source t")->required();
    cmd_qua->add_option("--to", qua.to, "target t")->required();

    KernelArgs ker;
    auto* cmd_ker = app.add_subcommand("kernel", "symbol <-> kernel transform");
    add_global_flags(cmd_ker, ker.g);
    cmd_ker->add_option("input", ker.input, "grid JSON path")->required();
    cmd_ker->add_option("--t", ker.t, "quantization parameter");
    cmd_ker->add_option("--direction", ker.direction, "to-kernel|to-symbol");

    SharpArgs shp;
    auto* cmd_shp = app.add_subcommand("sharp", "sharp product of two symbols");
    add_global_flags(cmd_shp, shp.g);
    cmd_shp->add_option("a", shp.input_a, "left symbol JSON path")->required();
    cmd_shp->add_option("b", shp.input_b, "right symbol JSON path")->required();
    cmd_shp->add_option("--t", shp.t, "quantization parameter");

    FactorizeSymbolArgs fs;
    auto* cmd_fs = app.add_subcommand("factorize-symbol", "symbol factorization a = a1 # a2");
    add_global_flags(cmd_fs, fs.g);
    cmd_fs->add_option("input", fs.input, "GridSymbol JSON path")->required();
    cmd_fs->add_option("--t", fs.t, "quantization parameter");
    cmd_fs->add_option("--s", fs.s, "Gelfand-Shilov index");
    cmd_fs->add_option("--space", fs.space, "schwartz|Ss|Sigmas");
    cmd_fs->add_option("--bridge-trunc", fs.bridge, "Hermite bridge truncation");

    SchattenArgs sch;
    auto* cmd_sch = app.add_subcommand("schatten", "singular values and Schatten norms");
    add_global_flags(cmd_sch, sch.g);
    cmd_sch->add_option("input", sch.input, "CoeffTensor JSON path")->required();
    cmd_sch->add_option("--p", sch.orders, "Schatten order (repeatable; number or inf)");
    cmd_sch->add_option("--w1", sch.w1, "source-space weight file");
    cmd_sch->add_option("--w2", sch.w2, "target-space weight file");

    VerifyArgs ver;
    auto* cmd_ver = app.add_subcommand("verify", "run one inequality/identity check");
    add_global_flags(cmd_ver, ver.g);
    cmd_ver->add_option("input", ver.input, "CoeffTensor JSON path")->required();
    cmd_ver->add_option("--check", ver.check, "hs|hoelder|embed|decay")->required();
    cmd_ver->add_option("--input2", ver.input2, "left factor tensor (hoelder)");
    cmd_ver->add_option("--w1", ver.w1, "weight file");
    cmd_ver->add_option("--w2", ver.w2, "weight file");
    cmd_ver->add_option("--w3", ver.w3, "weight file (hoelder)");
    cmd_ver->add_option("--b1", ver.b1, "inner pair weight file (embed)");
    cmd_ver->add_option("--b2", ver.b2, "inner pair weight file (embed)");
    cmd_ver->add_option("--c1", ver.c1, "outer pair weight file (embed)");
    cmd_ver->add_option("--c2", ver.c2, "outer pair weight file (embed)");
    cmd_ver->add_option("--s", ver.s, "Gelfand-Shilov index (decay)");
    cmd_ver->add_option("--p1", ver.p1, "Schatten order of T1 (hoelder)");
    cmd_ver->add_option("--p2", ver.p2, "Schatten order of T2 (hoelder)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (cmd_gen->parsed())
            run_generate(gen);
        else if (cmd_fac->parsed())
            run_factorize(fac);
        else if (cmd_cls->parsed())
            run_classify(cls);
        else if (cmd_dec->parsed())
            run_decay(dec);
        else if (cmd_qua->parsed())
            run_quantize(qua);
        else if (cmd_ker->parsed())
            run_kernel(ker);
        else if (cmd_shp->parsed())
            run_sharp(shp);
        else if (cmd_fs->parsed())
            run_factorize_symbol(fs);
        else if (cmd_sch->parsed())
            run_schatten(sch);
        else if (cmd_ver->parsed())
            run_verify(ver);
    } catch (const hermop::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const hermop::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
