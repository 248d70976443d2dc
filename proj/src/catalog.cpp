#include <algorithm>
#include <map>
#include <set>

#include "fmrmr/error.hpp"
#include "fmrmr/simulate.hpp"

namespace fmrmr {

namespace {

using MF = MeanFunction;
using Tr = PsiFactor::Transform;

PathLaw law(ProcessKind p, MF mean = MF::zero()) { return {p, std::move(mean)}; }
PathLaw bm(MF mean = MF::zero()) { return law(ProcessKind::BrownianMotion, std::move(mean)); }
PathLaw bb() { return law(ProcessKind::BrownianBridge); }

PsiFactor x(std::size_t i, int power = 1) { return {i, Tr::Power, power}; }
PsiFactor absx(std::size_t i) { return {i, Tr::Abs, 1}; }
PsiFactor recip(std::size_t i) { return {i, Tr::Reciprocal, 1}; }
PsiFactor logx(std::size_t i) { return {i, Tr::Log, 1}; }

PsiTerm term(double coef, std::vector<PsiFactor> factors) { return {coef, std::move(factors)}; }
PsiTerm lin(double coef, std::size_t i) { return term(coef, {x(i)}); }

struct Psi {
    std::vector<PsiTerm> terms;
    std::string note = {};
};

// Response functions keyed by base model name.
std::map<std::string, Psi> psi_table() {
    std::map<std::string, Psi> t;
    t["L1"] = {{lin(10, 65)}};
    t["L2"] = {{lin(10, 30), lin(10, 70)}};
    t["L3"] = {{lin(10, 30), lin(-10, 70)}};
    t["L4"] = {{lin(20, 30), lin(50, 50), lin(20, 80)}, "missing '+' between 50X50 and 20X80 inserted"};
    t["L5"] = {{lin(20, 30), lin(-50, 50), lin(20, 80)}};
    t["L6"] = {{lin(10, 10), lin(30, 40), lin(10, 72), lin(10, 80), lin(20, 95)}};
    std::vector<PsiTerm> l7;
    for (std::size_t i = 1; i <= 10; ++i) l7.push_back(lin(10, 10 * i));
    t["L7"] = {l7};
    t["L8"] = {{term(20, {x(30, 2)}), term(10, {x(50, 4)}), term(50, {x(80, 3)})}};
    t["L9"] = {{lin(10, 10), term(10, {absx(50)}), term(10, {x(30, 2), x(85)})},
               "coefficient '0' of the X30^2 X85 term read as 10 with a product term"};
    t["L10"] = {{lin(20, 33), term(20, {absx(68)})}};
    t["L11"] = {{term(20, {recip(35)}), term(30, {recip(77)})},
                "singular at 0; infinite psi maps to eta in {0, 1}"};
    t["L12"] = {{term(1, {logx(35)}), term(1, {logx(77)})},
                "log of a non-positive value gives psi = -inf, i.e. eta = 0"};
    t["L13"] = {{lin(40, 20), lin(30, 28), lin(20, 62), lin(10, 67)}};
    t["L14"] = {{lin(40, 20), lin(30, 28), lin(-20, 62), lin(-10, 67)}};
    t["L15"] = {{lin(40, 20), lin(-30, 28), lin(20, 62), lin(-10, 67)}};
    t["L3b"] = {{lin(30, 30), lin(-20, 70)}};
    t["L4b"] = {{lin(30, 30), lin(20, 50), lin(10, 80)}};
    t["L5b"] = {{lin(10, 30), lin(-10, 50), lin(10, 80)}};
    t["L6b"] = {{lin(20, 10), lin(20, 40), lin(20, 72), lin(20, 80), lin(20, 95)}};
    std::vector<PsiTerm> l7b;
    for (std::size_t i = 1; i <= 10; ++i) l7b.push_back(lin(20, 10 * i));
    t["L7b"] = {l7b, "no published definition; uniform coefficient 20 by analogy with L6b"};
    t["L8b"] = {{term(10, {x(30, 2)}), term(10, {x(50, 4)}), term(10, {x(80, 3)})}};
    return t;
}

PathLaw logistic_process(const std::string& suffix) {
    if (suffix == "OU") return law(ProcessKind::OrnsteinUhlenbeck);
    if (suffix == "OUt") return law(ProcessKind::OrnsteinUhlenbeck, MF::linear(1.0));
    if (suffix == "B") return bm();
    if (suffix == "sB") return law(ProcessKind::SmoothedBrownian);
    if (suffix == "ssB") return law(ProcessKind::DoublySmoothedBrownian);
    throw CatalogError("unknown process suffix " + suffix);
}

ModelSpec logistic(const std::map<std::string, Psi>& table, const std::string& base, const std::string& suffix) {
    const Psi& psi = table.at(base);
    ModelSpec m;
    m.id = base + "_" + suffix;
    m.mechanism = LogisticMechanism{logistic_process(suffix), psi.terms};
    std::set<std::size_t> vars;
    for (const auto& t : psi.terms)
        for (const auto& f : t.factors) vars.insert(f.index);
    m.relevant_variables.assign(vars.begin(), vars.end());
    m.note = psi.note;
    if (suffix == "OUt") m.note += std::string(m.note.empty() ? "" : "; ") + "OU trend taken as m(t) = t";
    return m;
}

ModelSpec two_class(std::string id, PathLaw mu0, PathLaw mu1, std::vector<std::size_t> vars) {
    return {std::move(id), TwoClassMechanism{std::move(mu0), std::move(mu1)}, std::move(vars), {}};
}

ModelSpec mixture(std::string id, std::vector<MixtureComponent> mu0, std::vector<std::size_t> vars) {
    return {std::move(id), MixtureMechanism{std::move(mu0), {{bm(), 1.0}}}, std::move(vars), {}};
}

ModelCatalog build_catalog() {
    const auto table = psi_table();
    ModelCatalog cat;

    // Logistic models in the published order.
    const std::vector<std::pair<std::string, std::vector<std::string>>> logistic_list = {
        {"L1", {"OU", "OUt", "B", "sB", "ssB"}},
        {"L2", {"OU", "OUt", "B", "sB", "ssB"}},
        {"L3", {"OU"}}, {"L3b", {"OU"}}, {"L3", {"OUt"}}, {"L3b", {"OUt"}}, {"L3", {"B"}}, {"L3b", {"B"}},
        {"L3", {"sB", "ssB"}},
        {"L4", {"OU"}}, {"L4b", {"OU"}}, {"L4", {"OUt"}}, {"L4b", {"OUt"}}, {"L4", {"B", "sB", "ssB"}},
        {"L5", {"OU"}}, {"L5b", {"OU"}}, {"L5", {"OUt", "B", "sB", "ssB"}},
        {"L6", {"OU"}}, {"L6b", {"OU"}}, {"L6", {"OUt"}}, {"L6b", {"OUt"}}, {"L6", {"B", "sB", "ssB"}},
        {"L7", {"OU"}}, {"L7b", {"OU"}}, {"L7", {"OUt"}}, {"L7b", {"OUt"}}, {"L7", {"B", "sB", "ssB"}},
        {"L8", {"B", "sB", "ssB"}}, {"L8b", {"OU"}},
        {"L9", {"B", "sB", "ssB"}},
        {"L10", {"OU", "B", "sB", "ssB"}},
        {"L11", {"OU", "OUt", "B", "sB", "ssB"}},
        {"L12", {"OU", "OUt", "B", "sB", "ssB"}},
        {"L13", {"OU", "OUt", "B", "sB", "ssB"}},
        {"L14", {"OU", "OUt", "B", "sB"}},
        {"L15", {"OU", "OUt", "B", "sB"}},
    };
    for (const auto& [base, suffixes] : logistic_list)
        for (const auto& s : suffixes) cat.push_back(logistic(table, base, s));

    cat.push_back(two_class("G1", bm(), bm(MF::random_slope(3)), {100}));
    cat.push_back(two_class("G1b", bm(), bm(MF::random_slope(5)), {100}));
    cat.push_back(two_class("G2", bm(MF::linear(1)), bm(), {100}));
    cat.push_back(two_class("G2b", bm(MF::linear(3)), bm(), {100}));
    cat.push_back(two_class("G3", bb(), bm(), {100}));
    cat.push_back(two_class("G4", bm(MF::hillside(0.5, 4)), bm(), {47, 100}));
    cat.push_back(two_class("G5", bm(MF::peak(1, 1, 3)), bm(), {1, 48, 100}));
    cat.push_back(two_class("G6", bm(MF::peak(2, 2, 5)), bm(), {48, 75, 100}));
    cat.push_back(two_class("G7", bm(MF::peak(3, 2, 5) + MF::peak(3, 4, 5)), bm(), {22, 35, 49, 74, 88, 100}));
    cat.push_back(two_class("G8", bm(MF::peak(2, 1.25, 3) + MF::peak(2, 2, 3)), bm(), {9, 35, 48, 62, 75, 100}));

    const double third = 1.0 / 3.0;
    cat.push_back(mixture("M1", {{bm(MF::linear(3)), 0.5}, {bm(MF::linear(-2)), 0.5}}, {100}));
    cat.push_back(mixture("M2", {{bm(MF::peak(2, 2, 3)), 0.5}, {bm(MF::peak(3, 2, 5)), 0.5}}, {22, 35, 48, 75, 100}));
    cat.push_back(mixture("M3", {{bm(MF::peak(2, 2, 3)), 0.1}, {bm(MF::peak(3, 2, 5)), 0.9}}, {22, 35, 48, 75, 100}));
    cat.push_back(mixture("M4", {{bm(MF::peak(2, 2, 3)), 0.5}, {bm(MF::peak(3, 3, 5)), 0.5}}, {48, 62, 75, 100}));
    cat.push_back(mixture("M5",
                          {{bm(MF::peak(2, 1, 3)), third}, {bm(MF::peak(2, 2, 3)), third}, {bm(MF::peak(3, 2, 5)), third}},
                          {1, 22, 35, 48, 75, 100}));
    cat.push_back(mixture("M6", {{bm(MF::peak(2, 1, 3)), 0.5}, {bm(MF::linear(3)), 0.5}}, {1, 22, 49, 100}));
    cat.push_back(mixture("M7", {{bm(MF::peak(1, 1, 3)), 0.5}, {bb(), 0.5}}, {1, 48, 100}));
    cat.push_back(mixture("M8", {{bm(MF::random_slope(5)), 0.5}, {bm(MF::hillside(0.5, 5)), 0.5}}, {47, 100}));
    cat.push_back(mixture("M9", {{bm(MF::random_slope(5)), 0.5}, {bb(), 0.5}}, {100}));
    cat.push_back(mixture("M10", {{bm(MF::peak(1, 1, 3)), third}, {bm(MF::linear(-3)), third}, {bb(), third}},
                          {1, 48, 100}));
    cat.push_back(mixture("M11",
                          {{bm(MF::peak(1, 1, 3)), 0.25},
                           {bm(MF::linear(-3)), 0.25},
                           {bm(MF::hillside(0.5, 5)), 0.25},
                           {bb(), 0.25}},
                          {1, 48, 100}));
    return cat;
}

}  // namespace

const ModelCatalog& catalog() {
    static const ModelCatalog cat = build_catalog();
    return cat;
}

const ModelSpec& find_model(std::string_view id) {
    const auto& cat = catalog();
    auto it = std::find_if(cat.begin(), cat.end(), [&](const ModelSpec& m) { return m.id == id; });
    if (it == cat.end()) throw CatalogError("unknown model id '" + std::string(id) + "'");
    return *it;
}

}  // namespace fmrmr
