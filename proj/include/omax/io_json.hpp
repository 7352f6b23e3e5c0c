#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "omax/classify.hpp"
#include "omax/simplex.hpp"

namespace omax {

using json = nlohmann::ordered_json;

// --- matrices ---

inline json matrix_to_json(const CMatrix& m) {
    json j;
    if (m.is_square())
        j["n"] = m.rows();
    else {
        j["rows"] = m.rows();
        j["cols"] = m.cols();
    }
    json re = json::array(), im = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json rrow = json::array(), irow = json::array();
        for (int k = 0; k < m.cols(); ++k) {
            rrow.push_back(m.at(i, k).real());
            irow.push_back(m.at(i, k).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

inline CMatrix matrix_from_json(const json& j) {
    int rows, cols;
    if (j.contains("n")) {
        rows = cols = j.at("n").get<int>();
    } else {
        rows = j.at("rows").get<int>();
        cols = j.at("cols").get<int>();
    }
    if (rows <= 0 || cols <= 0) throw invalid_input("matrix json: dimensions must be positive");
    const json& re = j.at("re");
    const json& im = j.at("im");
    if (re.size() != static_cast<size_t>(rows) || im.size() != static_cast<size_t>(rows))
        throw invalid_input("matrix json: re and im must have one row per matrix row");
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& rrow = re.at(i);
        const json& irow = im.at(i);
        if (rrow.size() != static_cast<size_t>(cols) || irow.size() != static_cast<size_t>(cols))
            throw invalid_input("matrix json: row length mismatch");
        for (int k = 0; k < cols; ++k)
            m.at(i, k) = cplx(rrow.at(k).get<double>(), irow.at(k).get<double>());
    }
    if (!m.all_finite()) throw invalid_input("matrix json: entries must be finite");
    return m;
}

/// A matrix file is one of: a plain square matrix, a 1x1/2x2 block list, or
/// an explicit Hermitian tuple.
struct MatrixFile {
    std::optional<CMatrix> matrix;
    std::optional<BlockList> blocks;
    std::optional<OperatorTuple> tuple;

    /// The operator tuple this input denotes: a tuple verbatim, otherwise the
    /// Cartesian pair of the (assembled) matrix.
    OperatorTuple as_tuple() const {
        if (tuple) return *tuple;
        if (blocks) return cartesian_pair(blocks->assemble());
        return cartesian_pair(*matrix);
    }

    CMatrix as_matrix() const {
        if (tuple) throw invalid_input("input: expected a matrix, found a tuple");
        return blocks ? blocks->assemble() : *matrix;
    }
};

inline MatrixFile matrix_file_from_json(const json& j) {
    MatrixFile f;
    if (j.contains("blocks")) {
        std::vector<CMatrix> bs;
        for (const auto& bj : j.at("blocks")) bs.push_back(matrix_from_json(bj));
        f.blocks = BlockList(std::move(bs));
    } else if (j.contains("tuple")) {
        std::vector<HermitianMatrix> ops;
        for (const auto& tj : j.at("tuple")) ops.emplace_back(matrix_from_json(tj), 1e-9);
        f.tuple = OperatorTuple(std::move(ops));
    } else {
        const CMatrix m = matrix_from_json(j);
        if (!m.is_square()) throw invalid_input("input: matrix must be square");
        f.matrix = m;
    }
    return f;
}

inline MatrixFile load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw invalid_input("parse failure in " + path + ": " + e.what());
    }
    try {
        return matrix_file_from_json(j);
    } catch (const json::exception& e) {
        throw invalid_input("schema failure in " + path + ": " + e.what());
    }
}

inline json tuple_to_json(const OperatorTuple& t) {
    json arr = json::array();
    for (const auto& h : t.ops) arr.push_back(matrix_to_json(h.mat()));
    return json{{"tuple", std::move(arr)}};
}

// --- geometry ---

inline json ellipse_to_json(const EllipseDisk& e) {
    return json{{"center", {e.center.real(), e.center.imag()}},
                {"p", e.p},
                {"q", e.q},
                {"phi", e.phi}};
}

inline json point_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

// --- certificates ---

inline json feasibility_to_json(const OperatorTuple& a, const OperatorTuple& b,
                                const FeasibilityResult& fr) {
    json j;
    j["kind"] = "dilation";
    j["status"] = fr.status == Feasibility::Feasible
                      ? "feasible"
                      : (fr.status == Feasibility::Infeasible ? "infeasible" : "unknown");
    j["m"] = a.m();
    j["n"] = a.dim;
    j["k"] = b.dim;
    j["A"] = tuple_to_json(a);
    j["B"] = tuple_to_json(b);
    j["iterations"] = fr.iterations;
    j["residual"] = fr.residual;
    if (fr.choi) j["choi"] = matrix_to_json(fr.choi->c.mat());
    if (fr.isometry) {
        j["r"] = fr.isometry->r;
        j["isometry"] = matrix_to_json(fr.isometry->v);
    }
    if (fr.witness) {
        json w = json::array();
        for (const auto& z : fr.witness->z) w.push_back(matrix_to_json(z.mat()));
        j["witness"] = std::move(w);
        j["violation"] = witness_pairing(*fr.witness, b);
    }
    return j;
}

inline json verdict_to_json(const BlockList& a, const OmaxVerdict& v) {
    json j;
    j["kind"] = "classify";
    j["status"] = status_name(v.status);
    j["rule"] = rule_name(v.rule);
    json shape;
    shape["tag"] = shape_name(v.shape.tag);
    if (v.shape.ellipse) shape["ellipse"] = ellipse_to_json(*v.shape.ellipse);
    if (!v.shape.points.empty()) {
        json pts = json::array();
        for (const cplx z : v.shape.points) pts.push_back(point_to_json(z));
        shape["points"] = std::move(pts);
    }
    if (v.shape.segment)
        shape["segment"] =
            json::array({point_to_json(v.shape.segment->first), point_to_json(v.shape.segment->second)});
    if (v.shape.tangency) shape["tangency"] = point_to_json(*v.shape.tangency);
    j["shape"] = std::move(shape);
    json blocks = json::array();
    for (const auto& b : a.blocks) blocks.push_back(matrix_to_json(b));
    j["blocks"] = std::move(blocks);
    // Blocks absorbed by the reduced pair: their joint range sits inside the
    // hull of the rest.
    j["redundant_blocks"] = v.shape.boundary.redundant_blocks;

    json cert;
    if (v.reduced) cert["reduced"] = matrix_to_json(*v.reduced);
    if (v.tangency) cert["tangency"] = point_to_json(*v.tangency);
    if (v.counterexample) {
        cert["counterexample"] = matrix_to_json(*v.counterexample);
        if (v.feasibility)
            cert["dilation"] = feasibility_to_json(cartesian_pair(a.assemble()),
                                                   cartesian_pair(*v.counterexample),
                                                   *v.feasibility);
    }
    j["certificate"] = std::move(cert);
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

// --- re-verification of serialized certificates (no solver involved) ---

struct VerifyOutcome {
    bool ok = false;
    std::string detail;
};

inline VerifyOutcome verify_certificate_json(const json& j, const ToleranceConfig& cfg = {}) {
    VerifyOutcome out;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dilation") {
        const OperatorTuple a = matrix_file_from_json(j.at("A")).as_tuple();
        const OperatorTuple b = matrix_file_from_json(j.at("B")).as_tuple();
        const std::string status = j.at("status").get<std::string>();
        if (status == "feasible") {
            const ChoiMatrix choi(a.dim, b.dim,
                                  HermitianMatrix(matrix_from_json(j.at("choi")), 1e-8));
            const ChoiCheck chk = check_choi(choi, a, b, cfg);
            if (chk.lambda_min < -cfg.psd_tol || chk.unitality > cfg.sdp_conv_tol ||
                chk.moments > cfg.sdp_conv_tol) {
                out.detail = "choi matrix fails its invariants";
                return out;
            }
            const DilationIsometry iso(a.dim, b.dim, j.at("r").get<int>(),
                                       matrix_from_json(j.at("isometry")));
            if (!verify_dilation(iso, a, b, 1e-6)) {
                out.detail = "isometry fails verification at 1e-6";
                return out;
            }
            out.ok = true;
            out.detail = "feasible certificate verified";
            return out;
        }
        if (status == "infeasible") {
            DualWitness w;
            w.k = b.dim;
            for (const auto& zj : j.at("witness")) w.z.emplace_back(matrix_from_json(zj), 1e-8);
            if (!verify_dual_witness(w, a, b, cfg)) {
                out.detail = "dual witness fails verification";
                return out;
            }
            out.ok = true;
            out.detail = "infeasibility witness verified";
            return out;
        }
        out.detail = "unknown status carries no certificate";
        return out;
    }
    if (kind == "classify") {
        std::vector<CMatrix> bs;
        for (const auto& bj : j.at("blocks")) bs.push_back(matrix_from_json(bj));
        const BlockList a{std::move(bs)};
        const std::string status = j.at("status").get<std::string>();
        if (status == "NotOMAX") {
            const json& cert = j.at("certificate");
            const CMatrix b = matrix_from_json(cert.at("counterexample"));
            const OperatorTuple at = cartesian_pair(a.assemble());
            const OperatorTuple bt = cartesian_pair(b);
            const InclusionReport inc = includes(bt, at, 720, cfg);
            if (inc.worst_gap > -10.0 * cfg.support_gap_tol) {
                out.detail = "counterexample lacks the inclusion margin";
                return out;
            }
            return verify_certificate_json(cert.at("dilation"), cfg);
        }
        if (status == "OMAX") {
            // Geometry-only recheck: the shape classifier must reproduce the
            // claimed rule (no dilation solver involved on this path).
            const ShapeClass s = shape_of(a, cfg);
            OmaxRule expect = OmaxRule::None;
            switch (s.tag) {
            case ShapeTag::Singleton:
            case ShapeTag::Segment:
            case ShapeTag::EllipticalDisk: expect = OmaxRule::D1; break;
            case ShapeTag::TriangularDisk:
            case ShapeTag::EllipsePlusPoint: expect = OmaxRule::D2; break;
            case ShapeTag::EllipsePlusTangentSegment: expect = OmaxRule::D3; break;
            default: expect = OmaxRule::None;
            }
            if (std::string(rule_name(expect)) != j.at("rule").get<std::string>()) {
                out.detail = "shape recheck disagrees with the claimed rule";
                return out;
            }
            if (s.tag == ShapeTag::EllipsePlusTangentSegment) {
                const json& tj = j.at("shape").at("tangency");
                const cplx claimed(tj.at(0).get<double>(), tj.at(1).get<double>());
                if (!s.tangency || std::abs(*s.tangency - claimed) > 1e-6) {
                    out.detail = "tangency point recheck failed";
                    return out;
                }
            }
            out.ok = true;
            out.detail = "maximal-shape verdict verified";
            return out;
        }
        out.detail = "Unknown verdicts carry no certificate";
        return out;
    }
    out.detail = "unrecognized certificate kind: " + kind;
    return out;
}

// --- atomic file output ---

inline void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream outf(tmp, std::ios::binary);
        if (!outf) throw invalid_input("cannot write " + tmp);
        outf << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw invalid_input("cannot rename " + tmp + " to " + path);
}

inline void write_json_atomic(const std::string& path, const json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

} // namespace omax
