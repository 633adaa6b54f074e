#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "padicrmt/fp_poly.hpp"
#include "padicrmt/matrix.hpp"
#include "padicrmt/poly.hpp"

namespace padicrmt {

class Rng;

FpPoly residue(const PadicPoly& f);

// One monic factor per distinct residue irreducible F_i, with residue F_i^{m_i},
// multiplying back to f exactly mod p^N.
std::vector<PadicPoly> hensel_split(const PadicPoly& f, Rng* rng = nullptr);

// A certified Z_p root: digits b_0..b_k with the root congruent to
// sum b_i p^i mod p^{k+1}, and exactly one root of f in that disc.
struct CertifiedRoot {
  std::vector<std::uint32_t> digits;
  std::uint64_t approximation(std::uint32_t p) const;
};

// val(x - y) for two distinct certified roots: length of the common digit prefix.
int root_distance(const CertifiedRoot& a, const CertifiedRoot& b);

std::vector<CertifiedRoot> certified_roots_in_zp(const PadicPoly& f);
// Throws PrecisionExhausted when a branch cannot be certified within N.
int count_roots_in_zp(const PadicPoly& f);

std::map<FpPoly, int> island_multiplicities(const PadicPoly& f);

enum class ExtLabel { QP, QUAD_UNRAMIFIED, QUAD_RAMIFIED, UNRAMIFIED, OTHER };
std::string to_string(ExtLabel label);
ExtLabel ext_label_from_string(const std::string& s);

struct ExtensionDescriptor {
  int degree = 1;
  int ram_index = 1;
  int residue_degree = 1;
  int disc_exponent = 0;  // disc_norm = p^{-disc_exponent}
  ExtLabel label = ExtLabel::QP;
  int m = 0;
  double disc_norm(std::uint32_t p) const;
};

ExtensionDescriptor classify_quadratic(const PadicPoly& g);

struct CensusOptions {
  bool quadratic = true;  // count quadratic orbits (odd p only)
};

struct Census {
  std::vector<CertifiedRoot> zp_roots;
  int zp_count = 0;
  std::vector<int> pairwise_valuations;  // one entry per unordered pair, sorted
  // (label, m) -> number of Galois orbits; ramified fields merged
  std::map<std::pair<ExtLabel, int>, int> quad_counts;
  std::map<FpPoly, int> island_map;
  int cubic_unramified_orbits = 0;  // residue-irreducible cubic islands with m_i = 1
  bool zp_partial = false;
  bool quad_partial = false;
  bool partial() const { return zp_partial || quad_partial; }
};

Census census_of_poly(const PadicPoly& f, const CensusOptions& opts = {});
Census eigenvalue_census(const PadicMatrix& a, const CensusOptions& opts = {});

// Multiplicity of the monic irreducible F in the characteristic polynomial
// of a matrix over F_p, computed as dim ker F(A)^n / deg F.
int island_multiplicity_fp(const std::vector<std::uint32_t>& a_mod_p, int n, const FpPoly& F);

}  // namespace padicrmt
