// Command-line front end: numerical range sweeps, inclusion tests, dilation
// certificates, OMAX classification, counterexample emission, and standalone
// certificate re-verification. Exit codes are a stable contract:
// 0 positive verdict, 1 negative verdict, 2 unknown, 3 input error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "omax/omax.hpp"

namespace {

using namespace omax;

struct CommonOpts {
    std::string out;
    std::string format = "json";
    int samples = 720;
    std::uint64_t seed = 0;
    ToleranceConfig tol;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "output file path");
    cmd->add_option("--format", o.format, "output format (json, csv, svg)")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    cmd->add_option("--samples", o.samples, "direction samples for sweeps")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "seed for randomized probes");
    cmd->add_option("--tol-hermitian", o.tol.hermitian_tol, "self-adjointness tolerance");
    cmd->add_option("--tol-psd", o.tol.psd_tol, "PSD eigenvalue floor");
    cmd->add_option("--tol-eig", o.tol.eig_tol, "eigensolver off-diagonal target");
    cmd->add_option("--tol-degeneracy", o.tol.degeneracy_tol, "eigenvalue cluster width");
    cmd->add_option("--tol-gap", o.tol.support_gap_tol, "support comparison slack");
    cmd->add_option("--tol-sdp-conv", o.tol.sdp_conv_tol, "solver constraint residual target");
    cmd->add_option("--max-sdp-iters", o.tol.max_sdp_iters, "solver iteration cap");
}

void emit(const CommonOpts& o, const std::string& text, const std::string& what) {
    if (o.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_text_atomic(o.out, text);
        std::cerr << "wrote " << o.out << " (" << what << ")\n";
    }
}

int cmd_numrange(const std::string& input, const CommonOpts& o) {
    const MatrixFile f = load_matrix_file(input);
    const CMatrix a = f.as_matrix();
    const NRBoundary b = boundary2d(a, o.samples, o.tol);
    const std::vector<FlatPortion> flats = flat_portions(a, o.samples, o.tol);
    if (o.format == "csv") {
        emit(o, boundary_to_csv(b), "boundary csv");
    } else if (o.format == "svg") {
        emit(o, boundary_to_svg(b, flats), "boundary svg");
    } else {
        json j;
        j["kind"] = "numrange";
        j["samples"] = o.samples;
        json pts = json::array();
        for (size_t k = 0; k < b.samples.size(); ++k)
            pts.push_back(json{{"theta", b.thetas[k]},
                               {"support", b.samples[k].value},
                               {"point", point_to_json(cplx(b.samples[k].point[0],
                                                            b.samples[k].point[1]))},
                               {"multiplicity", b.samples[k].multiplicity}});
        j["boundary"] = std::move(pts);
        json fl = json::array();
        for (const auto& f2 : flats)
            fl.push_back(json{{"theta", f2.theta},
                              {"from", point_to_json(f2.a)},
                              {"to", point_to_json(f2.b)}});
        j["flat_portions"] = std::move(fl);
        emit(o, j.dump(2) + "\n", "boundary json");
    }
    return 0;
}

int cmd_include(const std::string& bpath, const std::string& apath, const CommonOpts& o) {
    const OperatorTuple b = load_matrix_file(bpath).as_tuple();
    const OperatorTuple a = load_matrix_file(apath).as_tuple();
    const InclusionReport rep = includes(b, a, o.samples, o.tol);
    json j;
    j["kind"] = "inclusion";
    j["verdict"] = rep.included;
    j["worst_gap"] = rep.worst_gap;
    j["worst_direction"] = rep.worst_direction;
    if (a.m() > 2)
        j["note"] = "m > 2: a true verdict is certified at sampled resolution only";
    emit(o, j.dump(2) + "\n", "inclusion report");
    return rep.included ? 0 : 1;
}

int cmd_dilate(const std::string& bpath, const std::string& apath, const CommonOpts& o) {
    const OperatorTuple b = load_matrix_file(bpath).as_tuple();
    const OperatorTuple a = load_matrix_file(apath).as_tuple();
    FeasibilityResult fr;
    bool used_simplex = false;
    if (simplex_vertices(a, o.tol) && includes(b, a, o.samples, o.tol).included) {
        try {
            fr = simplex_dilation(a, b, o.tol);
            used_simplex = true;
        } catch (const invalid_input&) {
            used_simplex = false;
        }
    }
    if (!used_simplex) fr = choi_feasibility(a, b, o.tol);
    json j = feasibility_to_json(a, b, fr);
    j["path"] = used_simplex ? "simplex" : "choi-sdp";
    emit(o, j.dump(2) + "\n", "dilation certificate");
    switch (fr.status) {
    case Feasibility::Feasible: return 0;
    case Feasibility::Infeasible: return 1;
    default: return 2;
    }
}

int cmd_classify(const std::string& input, const CommonOpts& o) {
    const MatrixFile f = load_matrix_file(input);
    if (!f.blocks) throw invalid_input("classify: input must be a blocks file");
    const OmaxVerdict v = classify_direct_sum(*f.blocks, o.tol);
    emit(o, verdict_to_json(*f.blocks, v).dump(2) + "\n", "classification verdict");
    switch (v.status) {
    case OmaxStatus::OMAX: return 0;
    case OmaxStatus::NotOMAX: return 1;
    default: return 2;
    }
}

int cmd_counterexample(const std::string& input, const CommonOpts& o) {
    const MatrixFile f = load_matrix_file(input);
    if (!f.blocks) throw invalid_input("counterexample: input must be a blocks file");
    const OmaxVerdict v = classify_direct_sum(*f.blocks, o.tol);
    if (v.status == OmaxStatus::OMAX) {
        std::cerr << "system is maximal (" << rule_name(v.rule) << "); no counterexample exists\n";
        return 1;
    }
    if (v.status != OmaxStatus::NotOMAX || !v.counterexample) {
        std::cerr << "no verified counterexample: " << (v.note.empty() ? "unknown" : v.note)
                  << "\n";
        return 2;
    }
    const std::string bpath = o.out.empty() ? "counterexample.json" : o.out;
    write_json_atomic(bpath, matrix_to_json(*v.counterexample));
    const OperatorTuple at = cartesian_pair(f.blocks->assemble());
    const OperatorTuple bt = cartesian_pair(*v.counterexample);
    const InclusionReport inc = includes(bt, at, 720, o.tol);
    json report;
    report["kind"] = "counterexample-report";
    report["rule"] = rule_name(v.rule);
    report["inclusion_margin"] = -inc.worst_gap;
    report["dilation"] = feasibility_to_json(at, bt, *v.feasibility);
    const std::string rpath = bpath + ".report.json";
    write_json_atomic(rpath, report);
    std::cerr << "wrote " << bpath << " and " << rpath << "\n";
    return 0;
}

int cmd_verify(const std::string& cert, const CommonOpts& o) {
    std::ifstream in(cert);
    if (!in) throw invalid_input("cannot open " + cert);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw invalid_input(std::string("parse failure: ") + e.what());
    }
    VerifyOutcome outcome;
    try {
        outcome = verify_certificate_json(j, o.tol);
    } catch (const json::exception& e) {
        throw invalid_input(std::string("schema failure: ") + e.what());
    }
    std::cout << (outcome.ok ? "PASS" : "FAIL") << ": " << outcome.detail << "\n";
    return outcome.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical ranges, joint dilations, and maximal operator systems"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string input, apath, bpath, cert;

    CLI::App* numrange = app.add_subcommand("numrange", "boundary sweep of W(A)");
    numrange->add_option("--input,-i", input, "matrix file")->required();
    add_common(numrange, opt);

    CLI::App* include_cmd = app.add_subcommand("include", "test W(B) within conv W(A)");
    include_cmd->add_option("-B", bpath, "inner matrix/tuple file")->required();
    include_cmd->add_option("-A", apath, "outer matrix/tuple file")->required();
    add_common(include_cmd, opt);

    CLI::App* dilate = app.add_subcommand("dilate", "decide a joint dilation of B into A (x) I");
    dilate->add_option("-B", bpath, "compressed matrix/tuple file")->required();
    dilate->add_option("-A", apath, "dilating matrix/tuple file")->required();
    add_common(dilate, opt);

    CLI::App* classify = app.add_subcommand("classify", "OMAX classification of a block direct sum");
    classify->add_option("--input,-i", input, "blocks file")->required();
    add_common(classify, opt);

    CLI::App* cx = app.add_subcommand("counterexample", "emit a non-dilatable B for a non-maximal A");
    cx->add_option("--input,-i", input, "blocks file")->required();
    add_common(cx, opt);

    CLI::App* verify = app.add_subcommand("verify", "re-verify an emitted certificate file");
    verify->add_option("--cert", cert, "certificate json")->required();
    add_common(verify, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        opt.tol.validate();
        if (numrange->parsed()) return cmd_numrange(input, opt);
        if (include_cmd->parsed()) return cmd_include(bpath, apath, opt);
        if (dilate->parsed()) return cmd_dilate(bpath, apath, opt);
        if (classify->parsed()) return cmd_classify(input, opt);
        if (cx->parsed()) return cmd_counterexample(input, opt);
        if (verify->parsed()) return cmd_verify(cert, opt);
    } catch (const omax::invalid_input& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const omax::construction_failure& e) {
        std::cerr << "construction failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
