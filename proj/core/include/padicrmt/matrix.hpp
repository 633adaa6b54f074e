#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "padicrmt/modular.hpp"
#include "padicrmt/poly.hpp"
#include "padicrmt/rings.hpp"

namespace padicrmt {

class Rng;

// Weakly decreasing parts; for a cokernel Z_p^n / A Z_p^n = (+) Z/p^{parts_j}.
struct Partition {
  std::vector<int> parts;
  bool saturated = false;  // some part hit the precision cap

  Partition() = default;
  explicit Partition(std::vector<int> p, bool sat = false);

  int size() const;  // sum of parts
  int length() const { return static_cast<int>(parts.size()); }
  // conjugate rank #{j : parts_j >= i}, i >= 1
  int conj(int i) const;
  friend bool operator==(const Partition& a, const Partition& b) {
    return a.parts == b.parts && a.saturated == b.saturated;
  }
};

// Partition from diagonal Smith valuations, capped at cap (flagged).
Partition partition_from_diagonal(const std::vector<int>& diag, int cap);

enum class MatrixMode { MAT, GL };

// Square matrix over Z/p^N (BASE) or over Z/p^N[x]/(Z) (QUOTIENT).
class PadicMatrix {
 public:
  static PadicMatrix zeros(const Modulus& m, int n);
  static PadicMatrix identity(const Modulus& m, int n);
  static PadicMatrix from_ints(const Modulus& m, int n, const std::vector<std::int64_t>& row_major);
  static PadicMatrix diag(const Modulus& m, const std::vector<std::int64_t>& d);
  // entries: n*n ring elements, each deg Z residues lowest first
  static PadicMatrix quotient(const PadicPoly& modulus_poly, int n, std::vector<std::uint64_t> entries);

  const Modulus& modulus() const { return mod_; }
  int n() const { return n_; }
  bool is_quotient() const { return quotient_.has_value(); }
  const PadicPoly& modulus_poly() const;
  int width() const { return width_; }

  std::uint64_t at(int i, int j) const { return e_[(static_cast<std::size_t>(i) * n_ + j) * width_]; }
  void set(int i, int j, std::uint64_t v) {
    e_[(static_cast<std::size_t>(i) * n_ + j) * width_] = v % mod_.pN();
  }
  // coefficient k of a quotient-ring entry
  std::uint64_t coeff(int i, int j, int k) const {
    return e_[(static_cast<std::size_t>(i) * n_ + j) * width_ + k];
  }
  const std::vector<std::uint64_t>& raw() const { return e_; }

  PadicMatrix operator+(const PadicMatrix& o) const;
  PadicMatrix operator-(const PadicMatrix& o) const;
  PadicMatrix operator*(const PadicMatrix& o) const;
  PadicMatrix scaled(std::uint64_t s) const;

  QuotientRing quotient_ring() const;
  std::vector<QuotientRing::Elem> quotient_entries() const;

  friend bool operator==(const PadicMatrix& a, const PadicMatrix& b) {
    return a.mod_ == b.mod_ && a.n_ == b.n_ && a.width_ == b.width_ && a.e_ == b.e_;
  }

 private:
  PadicMatrix(const Modulus& m, int n, int width) : mod_(m), n_(n), width_(width), e_(static_cast<std::size_t>(n) * n * width, 0) {}
  Modulus mod_;
  int n_;
  int width_;
  std::optional<PadicPoly> quotient_;
  std::vector<std::uint64_t> e_;
};

// Level-N image of additive Haar measure (MAT) or of Haar measure on GL_n
// (rejection until invertible mod p).  attempts, if given, receives the
// number of draws used.
PadicMatrix sample_matrix(int n, std::uint32_t p, int N, MatrixMode mode, Rng& rng,
                          long* attempts = nullptr);
// Entries uniform in Z/p^N[x]/(Z): the image of A_0 + x A_1 + ... with Haar A_i.
PadicMatrix sample_quotient_matrix(int n, const PadicPoly& modulus_poly, Rng& rng);

bool invertible_mod_p(const PadicMatrix& a);
int rank_mod_p(const Modulus& m, int rows, int cols, const std::vector<std::uint64_t>& row_major);

PadicPoly charpoly(const PadicMatrix& a);
// For QUOTIENT matrices: coefficients of det(yI - A) over the quotient ring, highest first.
std::vector<QuotientRing::Elem> charpoly_quotient(const PadicMatrix& a);
QuotientRing::Elem det_quotient(const PadicMatrix& a);

Partition smith_partition(const PadicMatrix& a);
// BASE: |smith_partition|; QUOTIENT: val Res(Z, det_R(A)).  Throws
// SaturatedDeterminant when the value is not determined at precision N.
int det_valuation(const PadicMatrix& a);

}  // namespace padicrmt
