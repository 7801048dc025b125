#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "lolab/char_bounds.hpp"
#include "lolab/continuous.hpp"
#include "lolab/gap.hpp"
#include "lolab/inverse.hpp"
#include "lolab/walks.hpp"

namespace lolab::jsonio {

using nlohmann::json;

// "p/q" string, plain integer, or integer string
mpq_class parse_rational(const json& j);
std::string rational_str(const mpq_class& q);

// big integers: number when they fit, decimal string otherwise
json mpz_to_json(const mpz_class& z);
mpz_class mpz_from_json(const json& j);

struct Instance {
    walks::StepMultiset V;
    walks::EtaSpec eta;
};

// {"values": [int...], "eta": {"label": ..., "mu": "p/q", "atoms": [[v, "p/q"]...]}}
Instance parse_instance(const json& j);
json instance_to_json(const Instance& inst);

// {"offset": ..., "generators": [...], "lower": [...], "upper": [...], "modulus": null|int}
json gap_to_json(const gap::Gap& Q);
gap::Gap gap_from_json(const json& j);

json levelset_report_to_json(const charsum::LevelSetReport& rep);
json structure_report_to_json(const inverse::StructureReport& rep);
json continuous_report_to_json(const continuous::ContinuousReport& rep);

struct VectorInstance {
    continuous::VectorMultiset V;
    double beta = 0;
    continuous::RealEta z;
    std::uint64_t seed = 0;
};

// {"d": int, "vectors": [[f64,...]...], "beta": f64, "z": {"kind": ...}, "seed": u64}
VectorInstance parse_vector_instance(const json& j);
json vector_instance_to_json(const VectorInstance& inst);

} // namespace lolab::jsonio
