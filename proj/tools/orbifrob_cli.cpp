/**
 * @file orbifrob_cli.cpp
 * @brief `olg` — command-line front end for the orbifold Landau-Ginzburg
 *        algebra library.
 *
 * Subcommands:
 *   classify   — exponent matrix, atomic decomposition, weights, Milnor data
 *   mirror     — the transposed polynomial with its own classification
 *   symmetry   — maximal diagonal symmetry group, character table, SL subgroup
 *   sectors    — twisted-sector inventory for a chosen subgroup
 *   product    — full structure-constant table (optionally the invariant
 *                subalgebra and an independent oracle cross-check appendix)
 *   frobenius  — run the complete G-Frobenius axiom suite
 *   oracle     — four-way cup-product cross-check for every twisted sector
 *   bracelab   — randomized brace/differential identity suite on a finite
 *                algebra fixture, with an optional cohomology comparison
 *
 * Exit codes: 0 success, 1 input/validation error, 2 mathematical check
 * failure.  Output is byte-deterministic given (inputs, seed, format).
 */
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "orbifrob/error.hpp"
#include "orbifrob/rational.hpp"
#include "orbifrob/cyclotomic.hpp"
#include "orbifrob/polynomial.hpp"
#include "orbifrob/group.hpp"
#include "orbifrob/invertible.hpp"
#include "orbifrob/milnor.hpp"
#include "orbifrob/exterior.hpp"
#include "orbifrob/koszul.hpp"
#include "orbifrob/orbifold.hpp"
#include "orbifrob/bracelab.hpp"

using namespace orbifrob;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

bool is_scalar(const ojson& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_str(const ojson& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

bool all_scalar(const ojson& arr) {
    for (const auto& el : arr)
        if (!is_scalar(el)) return false;
    return true;
}

std::string inline_array(const ojson& arr) {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& el : arr) {
        if (!first) os << ", ";
        first = false;
        os << scalar_str(el);
    }
    os << "]";
    return os.str();
}

void render_pretty(std::ostream& os, const ojson& j, int depth) {
    const std::string pad(2 * static_cast<size_t>(depth), ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const ojson& v = it.value();
            if (is_scalar(v)) {
                os << pad << it.key() << ": " << scalar_str(v) << "\n";
            } else if (v.empty()) {
                os << pad << it.key() << ": " << (v.is_array() ? "[]" : "{}") << "\n";
            } else if (v.is_array() && all_scalar(v)) {
                os << pad << it.key() << ": " << inline_array(v) << "\n";
            } else {
                os << pad << it.key() << ":\n";
                render_pretty(os, v, depth + 1);
            }
        }
    } else if (j.is_array()) {
        for (const auto& el : j) {
            if (is_scalar(el)) {
                os << pad << "- " << scalar_str(el) << "\n";
            } else if (el.is_array() && all_scalar(el)) {
                os << pad << "- " << inline_array(el) << "\n";
            } else {
                os << pad << "-\n";
                render_pretty(os, el, depth + 1);
            }
        }
    } else {
        os << pad << scalar_str(j) << "\n";
    }
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void csv_rows(const ojson& j, const std::string& path, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            csv_rows(it.value(), path.empty() ? it.key() : path + "." + it.key(), os);
    } else if (j.is_array()) {
        size_t i = 0;
        for (const auto& el : j) csv_rows(el, path + "[" + std::to_string(i++) + "]", os);
    } else {
        os << csv_escape(path) << "," << csv_escape(scalar_str(j)) << "\n";
    }
}

struct OutputOptions {
    std::string format = "pretty";
    std::string out;
};

void emit_report(const ojson& rep, const OutputOptions& opt) {
    std::ostringstream body;
    if (opt.format == "json") {
        body << rep.dump(2) << "\n";
    } else if (opt.format == "csv") {
        body << "key,value\n";
        csv_rows(rep, "", body);
    } else {
        render_pretty(body, rep, 0);
    }
    if (opt.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(opt.out);
        if (!f) throw ValidationError("cannot open output file: " + opt.out);
        f << body.str();
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

/// A polynomial source is either an inline expression or a path to a JSON
/// file {"E": [[...], ...]} holding the exponent matrix.
InvertiblePolynomial load_polynomial(const std::string& src) {
    std::ifstream in(src);
    if (!in.good()) return InvertiblePolynomial(Polynomial::parse(src));
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("polynomial file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("E") || !j.at("E").is_array())
        throw ParseError("exponent-matrix file must be a JSON object with an array key \"E\"");
    std::vector<std::vector<unsigned>> E;
    for (const auto& row : j.at("E")) {
        if (!row.is_array()) throw ParseError("exponent-matrix rows must be arrays");
        std::vector<unsigned> r;
        for (const auto& v : row) {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw ParseError("exponent-matrix entries must be non-negative integers");
            r.push_back(static_cast<unsigned>(v.get<long long>()));
        }
        E.push_back(std::move(r));
    }
    return InvertiblePolynomial::from_exponents(E);
}

/// Greedy minimal generating sequence over the sorted element list:
/// deterministic canonical generators for the meta block.
std::vector<GroupElement> canonical_generators(const std::vector<GroupElement>& group,
                                               unsigned nvars) {
    std::vector<GroupElement> sorted = group;
    std::sort(sorted.begin(), sorted.end());
    std::vector<GroupElement> gens;
    std::vector<GroupElement> span{GroupElement::identity(nvars)};
    for (const auto& g : sorted) {
        if (std::find(span.begin(), span.end(), g) != span.end()) continue;
        gens.push_back(g);
        span = group_closure(gens);
        if (span.size() == sorted.size()) break;
    }
    return gens;
}

ojson meta_block(const InvertiblePolynomial& ip, const std::string& command,
                 const std::string& group_spec, const std::vector<GroupElement>* group) {
    ojson m;
    m["version"] = kVersion;
    m["command"] = command;
    m["polynomial"] = ip.poly().str();
    ojson gj;
    if (group) {
        gj["spec"] = group_spec;
        gj["order"] = group->size();
        ojson gens = ojson::array();
        for (const auto& g : canonical_generators(*group, ip.nvars())) gens.push_back(g.str());
        gj["generators"] = std::move(gens);
    } else {
        // Commands that take no group operate relative to the maximal
        // diagonal symmetry group; embed its canonical generators.
        gj["spec"] = "full";
        gj["order"] = ip.det_magnitude().get_str();
        ojson gens = ojson::array();
        for (const auto& [g, ord] : ip.symmetry_generators()) {
            (void)ord;
            gens.push_back(g.str());
        }
        gj["generators"] = std::move(gens);
    }
    m["group"] = std::move(gj);
    return m;
}

// ---------------------------------------------------------------------------
// Shared report fragments
// ---------------------------------------------------------------------------

ojson exponent_matrix_json(const InvertiblePolynomial& ip) {
    ojson rows = ojson::array();
    for (const auto& m : ip.exponents()) {
        ojson r = ojson::array();
        for (unsigned e : m) r.push_back(e);
        rows.push_back(std::move(r));
    }
    return rows;
}

ojson atoms_json(const InvertiblePolynomial& ip) {
    ojson arr = ojson::array();
    for (const auto& a : ip.atoms()) {
        ojson aj;
        switch (a.type) {
            case Atom::Type::Fermat: aj["type"] = "fermat"; break;
            case Atom::Type::Loop: aj["type"] = "loop"; break;
            case Atom::Type::Chain: aj["type"] = "chain"; break;
        }
        ojson vars = ojson::array();
        for (unsigned v : a.vars) vars.push_back("x" + std::to_string(v + 1));
        aj["variables"] = std::move(vars);
        ojson exps = ojson::array();
        for (unsigned e : a.exps) exps.push_back(e);
        aj["exponents"] = std::move(exps);
        aj["summary"] = a.str();
        arr.push_back(std::move(aj));
    }
    return arr;
}

ojson weights_json(const InvertiblePolynomial& ip) {
    ojson ws = ojson::array();
    for (const auto& q : ip.weights()) ws.push_back(q.str());
    return ws;
}

ojson classification_json(const InvertiblePolynomial& ip) {
    ojson c;
    c["polynomial"] = ip.poly().str();
    c["nvars"] = ip.nvars();
    c["exponent_matrix"] = exponent_matrix_json(ip);
    c["atoms"] = atoms_json(ip);
    c["weights"] = weights_json(ip);
    JacobianRing ring(ip.poly(), ip.weights());
    c["milnor_number"] = ring.mu();
    c["socle_degree"] = ring.socle_degree().str();
    c["symmetry_order"] = ip.det_magnitude().get_str();
    return c;
}

std::string ambient_monomial(const Monomial& m, unsigned N,
                             const std::vector<unsigned>& fixed_vars) {
    Polynomial cm = Polynomial::monomial(static_cast<unsigned>(fixed_vars.size()), m);
    return Polynomial::embedded(cm, N, fixed_vars).str();
}

ojson sector_json(const OrbifoldAlgebra& O, const GroupElement& g, unsigned N) {
    const Sector& s = O.sector(g);
    ojson sj;
    sj["element"] = g.str();
    ojson fv = ojson::array();
    for (unsigned v : s.fixed_vars) fv.push_back("x" + std::to_string(v + 1));
    sj["fixed_variables"] = std::move(fv);
    sj["dim"] = s.dim();
    sj["parity"] = s.parity;
    ojson basis = ojson::array();
    for (const auto& m : s.ring->basis()) basis.push_back(ambient_monomial(m, N, s.fixed_vars));
    sj["basis"] = std::move(basis);
    return sj;
}

/// Four-way cross-check of 1_g cup 1_{g^{-1}} for every nontrivial sector:
/// closed twisted-Hessian formula, quantum-Hessian determinant, graph
/// summation, and the full homotopy-retraction pipeline.
ojson oracle_sweep(const InvertiblePolynomial& ip, const std::vector<GroupElement>& group,
                   bool& all_agree) {
    if (ip.atoms().size() != 1)
        throw ValidationError("the cup-product oracles require a single atomic polynomial");
    const Atom& atom = ip.atoms()[0];
    JacobianRing ring(ip.poly(), ip.weights());
    std::vector<GroupElement> sorted = group;
    std::sort(sorted.begin(), sorted.end());
    ojson rows = ojson::array();
    for (const auto& g : sorted) {
        if (g.is_identity()) continue;
        const unsigned l = ip.moving_length(g, atom);
        Polynomial closed = ring.normal_form(atom_twisted_hessian(ip, atom, g));
        if ((l * (l - 1) / 2) % 2) closed = -closed;
        Polynomial det_route = det_quantum_hess(ip, g, ring);
        KoszulElement ka = kappa_representative(ip, g);
        KoszulElement kb = kappa_representative(ip, g.inverse());
        Polynomial graph_route = graph_sum_cup(ka, kb, ip, ring);
        Polynomial retract_route = retract_cup_oracle(ka, kb, ip, ring);
        const bool kappa_closed = check_closed(ka, ip.poly()).closed &&
                                  check_closed(kb, ip.poly()).closed;
        const bool agree = closed == det_route && det_route == graph_route &&
                           graph_route == retract_route;
        all_agree = all_agree && agree && kappa_closed;
        ojson row;
        row["sector"] = g.str();
        row["moving_length"] = l;
        row["closed_formula"] = closed.str();
        row["quantum_hessian_det"] = det_route.str();
        row["graph_summation"] = graph_route.str();
        row["retraction"] = retract_route.str();
        row["kappa_closed"] = kappa_closed;
        row["agree"] = agree;
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_classify(const std::string& wsrc, const OutputOptions& opt) {
    InvertiblePolynomial ip = load_polynomial(wsrc);
    ojson rep;
    rep["meta"] = meta_block(ip, "classify", "", nullptr);
    ojson body = classification_json(ip);
    InvertiblePolynomial ipt = ip.transpose();
    ojson t;
    t["polynomial"] = ipt.poly().str();
    t["exponent_matrix"] = exponent_matrix_json(ipt);
    body["transpose"] = std::move(t);
    rep["classification"] = std::move(body);
    emit_report(rep, opt);
    return 0;
}

int cmd_mirror(const std::string& wsrc, const OutputOptions& opt) {
    InvertiblePolynomial ip = load_polynomial(wsrc);
    InvertiblePolynomial ipt = ip.transpose();
    ojson rep;
    rep["meta"] = meta_block(ip, "mirror", "", nullptr);
    rep["original"] = classification_json(ip);
    rep["mirror"] = classification_json(ipt);
    emit_report(rep, opt);
    return 0;
}

int cmd_symmetry(const std::string& wsrc, const OutputOptions& opt) {
    InvertiblePolynomial ip = load_polynomial(wsrc);
    std::vector<GroupElement> G = ip.symmetry_group();
    std::sort(G.begin(), G.end());
    ojson rep;
    rep["meta"] = meta_block(ip, "symmetry", "", nullptr);
    ojson body;
    ojson gens = ojson::array();
    for (const auto& [g, ord] : ip.symmetry_generators()) {
        ojson gj;
        gj["element"] = g.str();
        gj["order"] = ord;
        gens.push_back(std::move(gj));
    }
    body["generators"] = std::move(gens);
    body["order"] = G.size();
    unsigned sl_order = 0;
    ojson chi = ojson::array();
    for (const auto& g : G) {
        Rational sum(0);
        for (unsigned i = 0; i < ip.nvars(); ++i) sum = sum + g.phase(i);
        const bool in_sl = sum.mod1() == Rational(0);
        if (in_sl) ++sl_order;
        ojson row;
        row["element"] = g.str();
        row["chi"] = g.det().str();
        row["in_sl"] = in_sl;
        chi.push_back(std::move(row));
    }
    body["sl_order"] = sl_order;
    if (G.size() <= 512) {
        body["character_table"] = std::move(chi);
    } else {
        body["character_table"] = "omitted (group order exceeds 512)";
    }
    rep["symmetry"] = std::move(body);
    emit_report(rep, opt);
    return 0;
}

int cmd_sectors(const std::string& wsrc, const std::string& gspec, const OutputOptions& opt) {
    InvertiblePolynomial ip = load_polynomial(wsrc);
    std::vector<GroupElement> G = ip.subgroup_from_spec(gspec);
    OrbifoldAlgebra O(ip, G);
    ojson rep;
    rep["meta"] = meta_block(ip, "sectors", gspec, &O.group());
    ojson rows = ojson::array();
    for (const auto& g : O.group()) rows.push_back(sector_json(O, g, ip.nvars()));
    rep["sectors"] = std::move(rows);
    rep["total_dim"] = O.total_dim();
    emit_report(rep, opt);
    return 0;
}

struct BasisRef {
    std::string label;
    SectorClass cls;
};

std::vector<BasisRef> enumerate_basis(const OrbifoldAlgebra& O, unsigned N) {
    std::vector<BasisRef> out;
    for (const auto& g : O.group()) {
        const Sector& s = O.sector(g);
        const unsigned nc = static_cast<unsigned>(s.fixed_vars.size());
        for (const auto& m : s.ring->basis()) {
            Polynomial cm = Polynomial::monomial(nc, m);
            std::string lbl =
                "(" + ambient_monomial(m, N, s.fixed_vars) + ")*1_[" + g.str() + "]";
            out.push_back({std::move(lbl), O.make_class(g, cm)});
        }
    }
    return out;
}

int cmd_product(const std::string& wsrc, const std::string& gspec, bool with_invariant,
                bool with_oracle, const OutputOptions& opt) {
    InvertiblePolynomial ip = load_polynomial(wsrc);
    std::vector<GroupElement> G = ip.subgroup_from_spec(gspec);
    OrbifoldAlgebra O(ip, G);
    const unsigned N = ip.nvars();
    ojson rep;
    rep["meta"] = meta_block(ip, "product", gspec, &O.group());

    ojson inv = ojson::array();
    for (const auto& g : O.group()) inv.push_back(sector_json(O, g, N));
    rep["sectors"] = std::move(inv);
    rep["total_dim"] = O.total_dim();

    std::vector<BasisRef> basis = enumerate_basis(O, N);
    ojson table = ojson::array();
    for (const auto& a : basis) {
        for (const auto& b : basis) {
            SectorClass cup = O.cup_general(a.cls, b.cls);
            const Sector& target = O.sector(cup.sector());
            ojson row;
            row["left"] = a.label;
            row["right"] = b.label;
            row["target_sector"] = cup.sector().str();
            ojson coords = ojson::array();
            for (const auto& m : target.ring->basis()) {
                auto it = cup.coeff().terms().find(m);
                coords.push_back(it == cup.coeff().terms().end() ? Cyclotomic().str()
                                                                 : it->second.str());
            }
            row["coordinates"] = std::move(coords);
            row["value"] = cup.str();
            table.push_back(std::move(row));
        }
    }
    rep["products"] = std::move(table);

    if (with_invariant) {
        InvariantSubalgebra sub = O.invariant_subalgebra();
        ojson sj;
        ojson bl = ojson::array();
        for (const auto& c : sub.basis) bl.push_back(c.str());
        sj["basis"] = std::move(bl);
        ojson tj = ojson::array();
        for (size_t i = 0; i < sub.table.size(); ++i) {
            for (size_t j = 0; j < sub.table[i].size(); ++j) {
                ojson row;
                row["left"] = i;
                row["right"] = j;
                ojson coords = ojson::array();
                for (const auto& c : sub.table[i][j]) coords.push_back(c.str());
                row["coordinates"] = std::move(coords);
                tj.push_back(std::move(row));
            }
        }
        sj["table"] = std::move(tj);
        sj["closed"] = sub.closed;
        rep["invariant_subalgebra"] = std::move(sj);
    }

    int rc = 0;
    if (with_oracle) {
        bool all_agree = true;
        rep["oracle_cross_check"] = oracle_sweep(ip, O.group(), all_agree);
        rep["oracle_agree"] = all_agree;
        if (!all_agree) rc = 2;
    }
    emit_report(rep, opt);
    if (rc != 0)
        std::cerr << "oracle cross-check disagreement: see the oracle_cross_check rows\n";
    return rc;
}

int cmd_frobenius(const std::string& wsrc, const std::string& gspec,
                  const OutputOptions& opt) {
    InvertiblePolynomial ip = load_polynomial(wsrc);
    std::vector<GroupElement> G = ip.subgroup_from_spec(gspec);
    OrbifoldAlgebra O(ip, G);
    FrobeniusReport fr = O.check_g_frobenius();
    ojson rep;
    rep["meta"] = meta_block(ip, "frobenius", gspec, &O.group());
    ojson rows = ojson::array();
    for (const auto& a : fr.axioms) {
        ojson row;
        row["axiom"] = a.axiom;
        row["pass"] = a.pass;
        if (!a.pass) row["witness"] = a.witness;
        rows.push_back(std::move(row));
    }
    rep["axioms"] = std::move(rows);
    rep["all_pass"] = fr.all_pass();
    emit_report(rep, opt);
    if (!fr.all_pass()) {
        for (const auto& a : fr.axioms) {
            if (!a.pass) {
                std::cerr << "axiom failed: " << a.axiom << "\n  witness: " << a.witness
                          << "\n";
                break;
            }
        }
        return 2;
    }
    return 0;
}

int cmd_oracle(const std::string& wsrc, const std::string& gspec, const OutputOptions& opt) {
    InvertiblePolynomial ip = load_polynomial(wsrc);
    std::vector<GroupElement> G = ip.subgroup_from_spec(gspec);
    OrbifoldAlgebra O(ip, G); // validates admissibility and closure
    bool all_agree = true;
    ojson rep;
    rep["meta"] = meta_block(ip, "oracle", gspec, &O.group());
    rep["cross_check"] = oracle_sweep(ip, O.group(), all_agree);
    rep["agree"] = all_agree;
    emit_report(rep, opt);
    if (!all_agree) {
        std::cerr << "oracle cross-check disagreement: see the cross_check rows\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bracelab fixtures
// ---------------------------------------------------------------------------

Cyclotomic scalar_from_json(const nlohmann::json& v) {
    if (v.is_number_integer()) return Cyclotomic(static_cast<long>(v.get<long long>()));
    if (v.is_string()) return Cyclotomic(Rational::parse(v.get<std::string>()));
    if (v.is_object() && v.contains("m") && v.contains("coeffs")) {
        const unsigned m = v.at("m").get<unsigned>();
        std::vector<Rational> cs;
        for (const auto& c : v.at("coeffs")) {
            if (c.is_string()) cs.push_back(Rational::parse(c.get<std::string>()));
            else if (c.is_number_integer()) cs.push_back(Rational(static_cast<long>(c.get<long long>())));
            else throw ParseError("cyclotomic coefficients must be integers or \"p/q\" strings");
        }
        return Cyclotomic(m, std::move(cs));
    }
    throw ParseError(
        "scalar must be an integer, a \"p/q\" string, or {\"m\": modulus, \"coeffs\": [...]}");
}

AlgebraVec vec_from_json(const nlohmann::json& v, unsigned dim, const char* what) {
    if (!v.is_array() || v.size() != dim)
        throw ParseError(std::string(what) + " must be an array of length dim");
    AlgebraVec out;
    for (const auto& c : v) out.push_back(scalar_from_json(c));
    return out;
}

/// A fixture source is either the builtin shorthand "trunc:n:m[:w]"
/// (truncated polynomial algebra Q[x]/(x^n) with a cyclic group of order m
/// and optional curving x^w) or a path to a JSON file.
FiniteAlgebra load_algebra(const std::string& src, ojson& descriptor) {
    if (src.rfind("trunc:", 0) == 0) {
        std::vector<unsigned> parts;
        std::stringstream ss(src.substr(6));
        std::string tok;
        while (std::getline(ss, tok, ':')) {
            try {
                parts.push_back(static_cast<unsigned>(std::stoul(tok)));
            } catch (const std::exception&) {
                throw ParseError("trunc fixture expects trunc:<dim>:<group>[:<curving power>]");
            }
        }
        if (parts.size() < 2 || parts.size() > 3)
            throw ParseError("trunc fixture expects trunc:<dim>:<group>[:<curving power>]");
        std::optional<unsigned> w;
        if (parts.size() == 3) w = parts[2];
        descriptor["kind"] = "builtin";
        descriptor["source"] = src;
        descriptor["dim"] = parts[0];
        descriptor["group_order"] = parts[1];
        if (w) descriptor["curving_power"] = *w;
        return FiniteAlgebra::truncated_polynomial(parts[0], parts[1], w);
    }
    std::ifstream in(src);
    if (!in.good()) throw ValidationError("cannot open fixture file: " + src);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("fixture file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("products") || !j.contains("unit"))
        throw ParseError("fixture must be a JSON object with keys dim, products, unit");
    const unsigned dim = j.at("dim").get<unsigned>();
    if (dim == 0) throw ParseError("fixture dim must be positive");
    const auto& pj = j.at("products");
    if (!pj.is_array() || pj.size() != dim)
        throw ParseError("products must be a dim x dim array of coordinate vectors");
    std::vector<std::vector<AlgebraVec>> products;
    for (const auto& rowj : pj) {
        if (!rowj.is_array() || rowj.size() != dim)
            throw ParseError("products must be a dim x dim array of coordinate vectors");
        std::vector<AlgebraVec> row;
        for (const auto& cell : rowj) row.push_back(vec_from_json(cell, dim, "product cell"));
        products.push_back(std::move(row));
    }
    AlgebraVec unit = vec_from_json(j.at("unit"), dim, "unit");
    std::optional<AlgebraVec> curving;
    if (j.contains("curving") && !j.at("curving").is_null())
        curving = vec_from_json(j.at("curving"), dim, "curving");
    std::vector<AlgebraMat> group;
    if (j.contains("group") && !j.at("group").is_null()) {
        for (const auto& mj : j.at("group")) {
            if (!mj.is_array() || mj.size() != dim)
                throw ParseError("group matrices must be dim x dim");
            AlgebraMat M;
            for (const auto& rj : mj) M.push_back(vec_from_json(rj, dim, "group matrix row"));
            group.push_back(std::move(M));
        }
    }
    if (group.empty()) {
        AlgebraMat id(dim, AlgebraVec(dim, Cyclotomic()));
        for (unsigned i = 0; i < dim; ++i) id[i][i] = Cyclotomic(1);
        group.push_back(std::move(id));
    }
    descriptor["kind"] = "file";
    descriptor["source"] = src;
    descriptor["dim"] = dim;
    descriptor["group_order"] = group.size();
    descriptor["curved"] = curving.has_value();
    return FiniteAlgebra(dim, std::move(products), std::move(unit), std::move(curving),
                         std::move(group));
}

int cmd_bracelab(const std::string& src, std::uint64_t seed, unsigned samples, unsigned arity,
                 int compare_deg, const OutputOptions& opt) {
    ojson desc;
    FiniteAlgebra A = load_algebra(src, desc);
    SuiteBounds bounds;
    bounds.max_arity = arity;
    bounds.sample_count = samples;
    bounds.seed = seed;
    SuiteReport suite = identity_suite(A, bounds);

    ojson rep;
    ojson meta;
    meta["version"] = kVersion;
    meta["command"] = "bracelab";
    meta["fixture"] = std::move(desc);
    meta["seed"] = seed;
    meta["samples"] = samples;
    meta["max_arity"] = arity;
    rep["meta"] = std::move(meta);

    ojson rows = ojson::array();
    for (const auto& r : suite.results) {
        ojson row;
        row["identity"] = r.identity;
        row["instances"] = r.instances;
        row["failures"] = r.failures;
        if (!r.witnesses.empty()) {
            ojson ws = ojson::array();
            for (const auto& w : r.witnesses) {
                ojson wj;
                wj["instance"] = w.instance;
                wj["detail"] = w.detail;
                ws.push_back(std::move(wj));
            }
            row["witnesses"] = std::move(ws);
        }
        rows.push_back(std::move(row));
    }
    rep["identities"] = std::move(rows);
    bool ok = suite.all_passed();
    rep["all_passed"] = ok;

    if (compare_deg >= 0) {
        auto inv_dims = hochschild_cohomology_dims(A, static_cast<unsigned>(compare_deg));
        CrossedProduct cp = crossed_product(A);
        auto crossed_dims =
            hochschild_cohomology_dims(cp.algebra, static_cast<unsigned>(compare_deg));
        ojson cj;
        ojson a = ojson::array();
        for (auto d : inv_dims) a.push_back(d);
        ojson b = ojson::array();
        for (auto d : crossed_dims) b.push_back(d);
        cj["invariant_complex"] = std::move(a);
        cj["crossed_product"] = std::move(b);
        const bool agree = inv_dims == crossed_dims;
        cj["agree"] = agree;
        rep["cohomology_comparison"] = std::move(cj);
        ok = ok && agree;
    }

    emit_report(rep, opt);
    if (!ok) {
        std::cerr << "bracelab check failure: see the identities/comparison rows\n";
        return 2;
    }
    return 0;
}

} // namespace

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"olg - orbifold Landau-Ginzburg B-model algebra toolkit"};
    app.require_subcommand(1);

    std::string wsrc, gspec = "full";
    OutputOptions opt;
    std::uint64_t seed = 12345;
    unsigned samples = 100, arity = 2;
    int compare_deg = -1;
    bool with_invariant = false, with_oracle = false;
    std::string fixture;
    int rc = 0;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "Output format")
            ->check(CLI::IsMember({"json", "pretty", "csv"}))
            ->capture_default_str();
        sub->add_option("--out", opt.out, "Write the report to a file instead of stdout");
    };
    auto add_w = [&](CLI::App* sub) {
        sub->add_option("W", wsrc,
                        "Polynomial: an expression like \"x1^3 + x1*x2^2\" or a JSON file "
                        "{\"E\": [[...], ...]} with the exponent matrix")
            ->required();
    };
    auto add_group = [&](CLI::App* sub) {
        sub->add_option("--group", gspec,
                        "Subgroup spec: 'full', 'SL', or 'gens:1/3,2/3;0,1/2'")
            ->capture_default_str();
    };

    CLI::App* c_classify =
        app.add_subcommand("classify", "Classify an invertible polynomial");
    add_w(c_classify);
    add_output(c_classify);
    c_classify->callback([&] { rc = cmd_classify(wsrc, opt); });

    CLI::App* c_mirror =
        app.add_subcommand("mirror", "Classify the Berglund-Huebsch transpose");
    add_w(c_mirror);
    add_output(c_mirror);
    c_mirror->callback([&] { rc = cmd_mirror(wsrc, opt); });

    CLI::App* c_symmetry =
        app.add_subcommand("symmetry", "Maximal diagonal symmetry group and characters");
    add_w(c_symmetry);
    add_output(c_symmetry);
    c_symmetry->callback([&] { rc = cmd_symmetry(wsrc, opt); });

    CLI::App* c_sectors =
        app.add_subcommand("sectors", "Twisted-sector inventory for a subgroup");
    add_w(c_sectors);
    add_group(c_sectors);
    add_output(c_sectors);
    c_sectors->callback([&] { rc = cmd_sectors(wsrc, gspec, opt); });

    CLI::App* c_product =
        app.add_subcommand("product", "Full structure-constant table of the orbifold algebra");
    add_w(c_product);
    add_group(c_product);
    add_output(c_product);
    c_product->add_flag("--invariant", with_invariant,
                        "Also emit the invariant-subalgebra table");
    c_product->add_flag("--oracle", with_oracle,
                        "Append an independent four-way cup-product cross-check");
    c_product->callback(
        [&] { rc = cmd_product(wsrc, gspec, with_invariant, with_oracle, opt); });

    CLI::App* c_frobenius =
        app.add_subcommand("frobenius", "Run the full G-Frobenius axiom suite");
    add_w(c_frobenius);
    add_group(c_frobenius);
    add_output(c_frobenius);
    c_frobenius->callback([&] { rc = cmd_frobenius(wsrc, gspec, opt); });

    CLI::App* c_oracle = app.add_subcommand(
        "oracle", "Four-way cup-product cross-check for every twisted sector");
    add_w(c_oracle);
    add_group(c_oracle);
    add_output(c_oracle);
    c_oracle->callback([&] { rc = cmd_oracle(wsrc, gspec, opt); });

    CLI::App* c_bracelab = app.add_subcommand(
        "bracelab", "Randomized brace/differential identity suite on a finite algebra");
    c_bracelab
        ->add_option("fixture", fixture,
                     "Fixture: 'trunc:<dim>:<group>[:<curving power>]' or a JSON file")
        ->required();
    c_bracelab->add_option("--seed", seed, "Random seed")->capture_default_str();
    c_bracelab->add_option("--samples", samples, "Random cochains per identity")
        ->capture_default_str();
    c_bracelab->add_option("--arity", arity, "Maximum cochain arity")->capture_default_str();
    c_bracelab->add_option(
        "--compare", compare_deg,
        "Also compare invariant-complex vs crossed-product cohomology dims up to this degree");
    add_output(c_bracelab);
    c_bracelab->callback(
        [&] { rc = cmd_bracelab(fixture, seed, samples, arity, compare_deg, opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
