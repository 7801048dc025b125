#include "lolab/json_io.hpp"

#include "lolab/errors.hpp"

namespace lolab::jsonio {

namespace {

void require_keys(const json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": object expected");
    for (const char* k : required)
        if (!j.contains(k)) throw ParseError(where + ": missing key \"" + k + "\"");
    for (const auto& [key, val] : j.items()) {
        bool known = false;
        for (const char* k : required)
            if (key == k) known = true;
        for (const char* k : optional)
            if (key == k) known = true;
        if (!known) throw ParseError(where + ": unknown key \"" + key + "\"");
    }
}

} // namespace

mpq_class parse_rational(const json& j) {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_string()) {
        mpq_class q;
        if (q.set_str(j.get<std::string>(), 10) != 0 || q.get_den() == 0)
            throw ParseError("bad rational \"" + j.get<std::string>() + "\"");
        q.canonicalize();
        return q;
    }
    throw ParseError("rational expected (integer or \"p/q\" string)");
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

json mpz_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

mpz_class mpz_from_json(const json& j) {
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    if (j.is_string()) {
        mpz_class z;
        if (z.set_str(j.get<std::string>(), 10) != 0)
            throw ParseError("bad integer \"" + j.get<std::string>() + "\"");
        return z;
    }
    throw ParseError("integer expected (number or decimal string)");
}

Instance parse_instance(const json& j) {
    require_keys(j, {"values"}, {"eta"}, "instance");
    if (!j["values"].is_array()) throw ParseError("instance: \"values\" must be an array");
    std::vector<long> vals;
    for (const auto& v : j["values"]) {
        if (!v.is_number_integer()) throw ParseError("instance: values must be integers");
        vals.push_back(v.get<long>());
    }
    if (!j.contains("eta"))
        return {walks::StepMultiset(std::move(vals)), walks::EtaSpec::bernoulli()};
    const json& je = j["eta"];
    require_keys(je, {"label"}, {"mu", "atoms"}, "eta");
    std::string label = je["label"].get<std::string>();
    walks::EtaSpec eta;
    if (label == "bernoulli") {
        eta = walks::EtaSpec::bernoulli();
    } else if (label == "lazy") {
        if (!je.contains("mu")) throw ParseError("eta: lazy requires \"mu\"");
        eta = walks::EtaSpec::lazy(parse_rational(je["mu"]));
    } else if (label == "custom") {
        if (!je.contains("atoms")) throw ParseError("eta: custom requires \"atoms\"");
        std::vector<walks::EtaSpec::Atom> atoms;
        for (const auto& a : je["atoms"]) {
            if (!a.is_array() || a.size() != 2) throw ParseError("eta: atom must be [value, prob]");
            atoms.push_back({a[0].get<long>(), parse_rational(a[1])});
        }
        eta = walks::EtaSpec::custom(std::move(atoms));
    } else {
        throw ParseError("eta: unknown label \"" + label + "\"");
    }
    try {
        eta.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("eta: ") + e.what());
    }
    return {walks::StepMultiset(std::move(vals)), std::move(eta)};
}

json instance_to_json(const Instance& inst) {
    json je;
    je["label"] = inst.eta.label;
    if (inst.eta.label == "lazy") {
        mpq_class mu = 0;
        for (const auto& a : inst.eta.atoms)
            if (a.value != 0) mu += a.prob;
        je["mu"] = rational_str(mu);
    } else if (inst.eta.label == "custom") {
        json atoms = json::array();
        for (const auto& a : inst.eta.atoms) atoms.push_back({a.value, rational_str(a.prob)});
        je["atoms"] = atoms;
    }
    return {{"values", inst.V.values}, {"eta", je}};
}

json gap_to_json(const gap::Gap& Q) {
    json j;
    if (Q.amb.dim == 1) {
        j["offset"] = mpz_to_json(Q.offset.at(0));
        json gens = json::array();
        for (const auto& g : Q.gens) gens.push_back(mpz_to_json(g.at(0)));
        j["generators"] = gens;
    } else {
        json off = json::array();
        for (const auto& c : Q.offset) off.push_back(mpz_to_json(c));
        j["offset"] = off;
        json gens = json::array();
        for (const auto& g : Q.gens) {
            json gv = json::array();
            for (const auto& c : g) gv.push_back(mpz_to_json(c));
            gens.push_back(gv);
        }
        j["generators"] = gens;
    }
    j["lower"] = Q.lower;
    j["upper"] = Q.upper;
    j["modulus"] = Q.amb.modulus == 0 ? json(nullptr) : mpz_to_json(Q.amb.modulus);
    return j;
}

gap::Gap gap_from_json(const json& j) {
    require_keys(j, {"offset", "generators", "lower", "upper", "modulus"}, {}, "gap");
    gap::Gap Q;
    auto elem_from = [&](const json& e) {
        gap::Elem x;
        if (e.is_array())
            for (const auto& c : e) x.push_back(mpz_from_json(c));
        else
            x.push_back(mpz_from_json(e));
        return x;
    };
    Q.offset = elem_from(j["offset"]);
    Q.amb.dim = static_cast<int>(Q.offset.size());
    for (const auto& g : j["generators"]) Q.gens.push_back(elem_from(g));
    Q.lower = j["lower"].get<std::vector<long>>();
    Q.upper = j["upper"].get<std::vector<long>>();
    Q.amb.modulus = j["modulus"].is_null() ? mpz_class(0) : mpz_from_json(j["modulus"]);
    try {
        Q.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("gap: ") + e.what());
    }
    return Q;
}

json levelset_report_to_json(const charsum::LevelSetReport& rep) {
    json j;
    j["p"] = rep.p;
    j["values"] = rep.values;
    j["rho"] = rational_str(rep.rho);
    j["m"] = rep.m;
    j["S_m_size"] = rep.Sm.size();
    j["heavy_cert"] = rep.heavy_cert;
    j["epsilon"] = rational_str(rep.epsilon);
    j["budget_n_prime"] = rep.budget_n_prime;
    j["core_size"] = rep.core.size();
    j["exceptional_size"] = rep.exceptional.size();
    j["dual_computed"] = rep.dual_computed;
    if (rep.dual_computed) {
        j["dual_size"] = rep.dual.size();
        j["dual_card_cert"] = rep.dual_card_cert;
        j["dual_Ta_cert"] = rep.dual_Ta_cert;
    }
    j["k"] = rep.k;
    j["growth_size"] = rep.growth.size();
    j["growth_ratio"] = rep.growth_ratio;
    j["premise_holds"] = rep.premise_holds;
    j["inclusion_checked"] = rep.inclusion_checked;
    j["inclusion_holds"] = rep.inclusion_holds;
    j["constants"] = {{"A", rep.config.m_range_A},
                      {"c1", rep.config.c1},
                      {"dual_constant", rep.config.dual_constant},
                      {"p_cap", rep.config.p_cap}};
    return j;
}

json structure_report_to_json(const inverse::StructureReport& rep) {
    json j;
    j["values"] = rep.V.values;
    j["rho"] = rational_str(rep.rho);
    j["rho_supplied"] = rep.rho_supplied;
    j["epsilon"] = rational_str(rep.epsilon);
    j["n_prime"] = rep.n_prime;
    j["Q"] = gap_to_json(rep.Q);
    j["rank"] = rep.rank;
    j["Q_size"] = mpz_to_json(rep.Q_size);
    j["Q_enumerated"] = rep.Q_enumerated;
    j["covered_count"] = rep.covered.size();
    j["exceptional"] = rep.exceptional;
    j["target"] = rep.target;
    j["ratio"] = rep.ratio;
    j["trace"] = levelset_report_to_json(rep.trace);
    j["scan_prime"] = rep.scan_prime;
    j["freiman_prime"] = mpz_to_json(rep.freiman_prime);
    j["k"] = rep.k;
    j["gamma"] = rep.gamma;
    j["X_size"] = rep.X_size;
    j["kX_size"] = rep.kX_size;
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    return j;
}

json continuous_report_to_json(const continuous::ContinuousReport& rep) {
    json j;
    j["beta"] = rep.beta;
    j["rho_hat"] = {{"value", rep.rho_hat.value},
                    {"sigma", rep.rho_hat.sigma},
                    {"trials", rep.rho_hat.trials}};
    j["C_z"] = rep.C_z;
    j["m"] = rep.m;
    j["grid_prime"] = rep.grid_prime;
    j["grid_size"] = rep.grid_size;
    j["S_size"] = rep.S_size;
    j["y0"] = rep.y0;
    j["k"] = rep.k;
    j["D"] = rep.D;
    j["bad_count"] = rep.bad.size();
    j["magnitude_sum"] = rep.magnitude_sum;
    j["P"] = gap_to_json(rep.P);
    j["rank"] = rep.rank;
    j["P_size"] = mpz_to_json(rep.P_size);
    j["scale"] = rep.scale;
    j["gamma"] = rep.gamma;
    j["refined"] = rep.refined;
    if (rep.refined) j["P_prime_size"] = mpz_to_json(rep.P_prime_size);
    j["full_dimension"] = rep.full_dimension;
    j["approx_close"] = rep.approx_close;
    j["approx_tol"] = rep.approx_tol;
    j["card_target"] = rep.card_target;
    j["card_ratio"] = rep.card_ratio;
    j["gen_denominator"] = rep.gen_denominator;
    j["small_generators"] = rep.small_generators;
    j["k_window"] = {rep.k_window_lo, rep.k_window_hi};
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    return j;
}

VectorInstance parse_vector_instance(const json& j) {
    require_keys(j, {"d", "vectors", "beta", "z", "seed"}, {}, "vector instance");
    VectorInstance inst;
    int d = j["d"].get<int>();
    std::vector<std::vector<double>> vecs;
    for (const auto& v : j["vectors"]) vecs.push_back(v.get<std::vector<double>>());
    try {
        inst.V = continuous::VectorMultiset(d, std::move(vecs));
    } catch (const Error& e) {
        throw ParseError(std::string("vector instance: ") + e.what());
    }
    inst.beta = j["beta"].get<double>();
    const json& jz = j["z"];
    require_keys(jz, {"kind"}, {"sigma", "atoms"}, "z");
    std::string kind = jz["kind"].get<std::string>();
    if (kind == "bernoulli") {
        inst.z = continuous::RealEta::bernoulli();
    } else if (kind == "gaussian") {
        inst.z = continuous::RealEta::gaussian(jz.value("sigma", 1.0));
    } else if (kind == "atoms") {
        if (!jz.contains("atoms")) throw ParseError("z: atoms kind requires \"atoms\"");
        std::vector<continuous::RealEta::Atom> atoms;
        for (const auto& a : jz["atoms"]) {
            if (!a.is_array() || a.size() != 2) throw ParseError("z: atom must be [value, prob]");
            atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
        try {
            inst.z = continuous::RealEta::make_atoms(std::move(atoms));
        } catch (const Error& e) {
            throw ParseError(std::string("z: ") + e.what());
        }
    } else {
        throw ParseError("z: unknown kind \"" + kind + "\"");
    }
    inst.seed = j["seed"].get<std::uint64_t>();
    return inst;
}

json vector_instance_to_json(const VectorInstance& inst) {
    json j;
    j["d"] = inst.V.d;
    j["vectors"] = inst.V.vecs;
    j["beta"] = inst.beta;
    json jz;
    if (inst.z.kind == continuous::RealEta::Kind::gaussian) {
        jz["kind"] = "gaussian";
        jz["sigma"] = inst.z.sigma;
    } else if (inst.z.atoms.size() == 2 && inst.z.atoms[0].value == -1.0 &&
               inst.z.atoms[1].value == 1.0 && inst.z.atoms[0].prob == 0.5) {
        jz["kind"] = "bernoulli";
    } else {
        jz["kind"] = "atoms";
        json atoms = json::array();
        for (const auto& a : inst.z.atoms) atoms.push_back({a.value, a.prob});
        jz["atoms"] = atoms;
    }
    j["z"] = jz;
    j["seed"] = inst.seed;
    return j;
}

} // namespace lolab::jsonio
