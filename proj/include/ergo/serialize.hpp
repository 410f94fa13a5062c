#ifndef ERGO_SERIALIZE_HPP
#define ERGO_SERIALIZE_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ergo/conjugacy.hpp"
#include "ergo/cylinder.hpp"
#include "ergo/grid.hpp"
#include "ergo/independence.hpp"
#include "ergo/topology.hpp"
#include "ergo/towers.hpp"

namespace ergo {

using Json = nlohmann::json;  // std::map-backed: keys serialize sorted

// Rationals travel as exact "p/q" strings, never floats.

inline Json to_json(const CellSet& s) {
  return Json{{"n", s.n}, {"cells", s.cells}};
}

inline CellSet cellset_from_json(const Json& j) {
  return CellSet(j.at("n").get<std::uint32_t>(),
                 j.at("cells").get<std::vector<std::uint32_t>>());
}

inline Json to_json(const GridMap& m) {
  return Json{{"n", m.resolution()}, {"forward", m.forward()}};
}

inline GridMap gridmap_from_json(const Json& j) {
  auto fwd = j.at("forward").get<std::vector<std::uint32_t>>();
  if (j.contains("n") && j.at("n").get<std::size_t>() != fwd.size())
    throw std::invalid_argument("gridmap n/forward mismatch");
  return GridMap(std::move(fwd));
}

inline Json to_json(const Basis& b) {
  Json sets = Json::array();
  for (const auto& s : b.sets) sets.push_back(to_json(s));
  return Json{{"sets", sets}};
}

inline Basis basis_from_json(const Json& j) {
  Basis b;
  for (const auto& s : j.at("sets")) b.sets.push_back(cellset_from_json(s));
  return b;
}

inline Json to_json(const Cylinder& c) {
  Json constraints = Json::object();
  for (auto [coord, sym] : c.constraints()) constraints[std::to_string(coord)] = sym;
  return Json{{"empty", c.is_empty()}, {"constraints", constraints}};
}

inline Json to_json(const IndependenceReport& r) {
  std::vector<int> comp;
  for (bool b : r.witness_complement) comp.push_back(b ? 1 : 0);
  return Json{{"deviation", rational_str(r.deviation)},
              {"witness", r.witness},
              {"witness_complement", comp},
              {"cardinality_bound", r.cardinality_bound}};
}

inline Json to_json(const BudgetLedger& l) {
  return Json{{"epsilon", rational_str(l.epsilon)}, {"k", l.k},
              {"eps1", rational_str(l.eps1)},       {"eps2", rational_str(l.eps2)},
              {"gap_bound", rational_str(l.gap_bound)},
              {"delta", rational_str(l.delta)}};
}

inline Json to_json(const DeviationWitness& w) {
  return Json{{"member", w.member},      {"worst", rational_str(w.worst)},
              {"n", w.n},                {"a_index", w.a_index},
              {"b_index", w.b_index}};
}

inline Json to_json(const ConjugacyCertificate& c) {
  return Json{{"ledger", to_json(c.ledger)},
              {"window", c.window},
              {"achieved_delta", rational_str(c.achieved_delta)},
              {"achieved_gap", rational_str(c.achieved_gap)},
              {"bound", rational_str(c.bound)},
              {"entry_count", c.entries.size()},
              {"max_deviation", rational_str(c.max_deviation)},
              {"decomposition_ok", c.decomposition_ok},
              {"pass", c.pass}};
}

inline std::string deviation_table_csv(const ConjugacyCertificate& c) {
  std::ostringstream out;
  out << "u,v,m,t_side,v_side,deviation\n";
  for (const auto& e : c.entries)
    out << e.u << ',' << e.v << ',' << e.m << ',' << rational_str(e.t_side) << ','
        << rational_str(e.v_side) << ',' << rational_str(e.deviation) << '\n';
  return out.str();
}

inline Json to_json(const OpennessCertificate& c) {
  return Json{{"j", c.j},
              {"k", c.k},
              {"height", c.height},
              {"accuracy_a", rational_str(c.accuracy_a)},
              {"b", rational_str(c.b)},
              {"b_eff", rational_str(c.b_eff)},
              {"within_b", c.within_b},
              {"base_diff", rational_str(c.base_diff)},
              {"max_level_diff", rational_str(c.max_level_diff)},
              {"max_union_diff", rational_str(c.max_union_diff)},
              {"max_final_accuracy", rational_str(c.max_final_accuracy)},
              {"chain_base", c.chain_base},
              {"chain_levels", c.chain_levels},
              {"chain_unions", c.chain_unions},
              {"chain_final", c.chain_final},
              {"pass", c.pass}};
}

/// Canonical dump: sorted keys (map-backed json), two-space indent, LF, final
/// newline. Byte-stable across runs and platforms.
inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// FNV-1a 64-bit, hex-encoded; used as the content hash of run inputs.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace ergo

#endif  // ERGO_SERIALIZE_HPP
