#include "heegner/serialize.hpp"

#include <sstream>

namespace heegner::io {

json gram_json(const ternary::Mat3& m) {
    json j = json::array();
    for (const auto& row : m) j.push_back(json::array({row[0], row[1], row[2]}));
    return j;
}

ternary::Mat3 gram_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("gram: expected a 3x3 array");
    ternary::Mat3 m{};
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_array() || j[i].size() != 3) throw std::invalid_argument("gram: expected a 3x3 array");
        for (int k = 0; k < 3; ++k) m[i][k] = j[i][k].get<ternary::i64>();
    }
    return m;
}

json to_json(const genus::GenusRecord& g) {
    json j;
    j["ell"] = g.ell;
    j["N"] = g.N;
    j["disc"] = g.disc;
    j["level"] = g.level;
    j["symbol"] = g.symbol.str();
    j["calibration"] = g.calibration;
    j["mass"] = g.mass().str();
    j["automorph_mass"] = g.automorph_mass().str();
    json classes = json::array();
    for (const auto& c : g.classes) {
        json e;
        e["gram"] = gram_json(c.form.gram());
        e["automorphs"] = c.automorphs;
        e["w"] = c.unit_weight;
        classes.push_back(e);
    }
    j["classes"] = classes;
    return j;
}

json to_json(const genus::GenusRecord& g, const measures::Measure& m, const measures::Measure& canonical,
             ternary::i64 D, ternary::i64 c) {
    json j;
    j["ell"] = g.ell;
    j["N"] = g.N;
    j["D"] = D;
    j["c"] = c;
    json classes = json::array();
    for (std::size_t s = 0; s < g.size(); ++s) {
        json e;
        e["gram"] = gram_json(g.classes[s].form.gram());
        e["w"] = g.classes[s].unit_weight;
        e["mu"] = m[s].str();
        classes.push_back(e);
    }
    j["classes"] = classes;
    j["tv_to_canonical"] = measures::tv_distance(m, canonical).str();
    return j;
}

namespace {

json node_json(const surjectivity::SearchNode& n) {
    json e;
    e["c"] = n.c;
    e["v"] = n.v;
    e["r"] = n.r.str();
    e["pattern"] = surjectivity::pattern_string(n.pattern);
    return e;
}

json candidates_json(const surjectivity::CandidateSets& s) {
    json j;
    j["a"] = s.a.str();
    j["largest_prime_checked"] = s.largest_prime_checked;
    json entries = json::array();
    for (const auto& e : s.entries) {
        json x;
        x["p"] = e.p;
        x["m"] = e.m;
        x["r"] = e.r.str();
        x["eps"] = e.eps;
        entries.push_back(x);
    }
    j["entries"] = entries;
    return j;
}

}  // namespace

json to_json(const surjectivity::SearchReport& r) {
    json j;
    j["ell"] = r.ell;
    j["N"] = r.N;
    j["count"] = r.count();
    j["max"] = r.max();
    j["r_min"] = r.r_min.str();
    json assumptions;
    assumptions["sign_patterns"] = r.assumptions.sign_patterns;
    assumptions["threshold"] = r.assumptions.threshold;
    assumptions["root"] = r.assumptions.root;
    assumptions["eigenvalues"] = r.assumptions.eigenvalues;
    assumptions["recursion"] = r.assumptions.recursion;
    assumptions["prime_cutoff"] = r.assumptions.prime_cutoff;
    j["assumptions"] = assumptions;
    j["C_1"] = candidates_json(r.c1);
    json classes = json::array();
    for (const auto& cs : r.classes) {
        json e;
        e["class"] = cs.cls;
        e["w"] = cs.weight;
        e["m_s"] = cs.m_s.str();
        e["C_a"] = candidates_json(cs.sets);
        e["count"] = cs.members.size();
        json members = json::array();
        for (const auto& n : cs.members) members.push_back(n.c);
        e["conductors"] = members;
        classes.push_back(e);
    }
    j["classes"] = classes;
    json by_v;
    for (const auto& [v, cs] : r.by_v) by_v[std::to_string(v)] = cs;
    j["by_v"] = by_v;
    json nodes = json::array();
    for (const auto& n : r.conductors) nodes.push_back(node_json(n));
    j["conductors"] = nodes;
    return j;
}

json to_json(const surjectivity::EigenvalueTable& t) {
    json j;
    j["ell"] = t.ell();
    j["prime_bound"] = t.prime_bound();
    json entries = json::array();
    const auto curve = surjectivity::oracle_curve(t.ell());
    for (const auto& [p, e] : t.entries()) {
        json x;
        x["p"] = p;
        x["a"] = e.value;
        x["provenance"] = surjectivity::to_string(e.provenance);
        x["D0"] = e.aux_discriminant;
        if (curve) x["oracle"] = surjectivity::elliptic_curve_ap(*curve, p);
        entries.push_back(x);
    }
    j["entries"] = entries;
    return j;
}

json to_json(const surjectivity::BoundReport& b) {
    json j;
    j["c"] = b.c;
    j["D"] = b.D;
    json lemma = json::array();
    for (const auto& l : b.lemma) {
        json x;
        x["class"] = l.cls;
        x["m_s"] = l.m_s.str();
        x["guaranteed"] = l.guaranteed;
        lemma.push_back(x);
    }
    j["lemma"] = lemma;
    j["theorem_applicable"] = b.applicable;
    if (!b.note.empty()) j["note"] = b.note;
    json th = json::array();
    for (const auto& t : b.theorem) {
        json x;
        x["class"] = t.cls;
        x["lhs"] = static_cast<double>(t.lhs);
        x["rhs_unit_weights"] = static_cast<double>(t.rhs_unit_weights);
        x["rhs_automorph_weights"] = static_cast<double>(t.rhs_automorph_weights);
        x["guaranteed_unit_weights"] = t.guaranteed_unit_weights;
        x["guaranteed_automorph_weights"] = t.guaranteed_automorph_weights;
        x["calibration_sensitive"] = t.calibration_sensitive;
        th.push_back(x);
    }
    j["theorem"] = th;
    return j;
}

std::string search_csv(const surjectivity::SearchReport& r) {
    std::ostringstream os;
    os << "c,v,r,pattern\n";
    for (const auto& n : r.conductors)
        os << n.c << "," << n.v << "," << n.r.str() << ",\"" << surjectivity::pattern_string(n.pattern) << "\"\n";
    return os.str();
}

}  // namespace heegner::io
