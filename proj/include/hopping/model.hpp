#pragma once

// Sign sequences, hopping-matrix assembly (finite and periodized) and
// enumeration of sign sequences.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hopping/linalg.hpp"

namespace hop {

/// Finite sequence of +1/-1 entries. Mask codec: bit (j-1) is set iff entry j
/// (1-based) is -1. Text form: a string over {'+', '-'}.
class SignSeq {
 public:
  SignSeq() = default;
  /// All +1.
  explicit SignSeq(std::size_t len) : s_(len, 1) {}
  explicit SignSeq(std::vector<int> values);

  static SignSeq from_mask(std::uint64_t mask, std::size_t len);
  /// Parses "+-+..." (empty string gives the empty sequence).
  static SignSeq parse(std::string_view text);

  std::size_t size() const { return s_.size(); }
  bool empty() const { return s_.empty(); }
  /// 0-based access; returns +1 or -1.
  int operator[](std::size_t i) const { return s_[i]; }
  void set(std::size_t i, int value);
  void flip(std::size_t i) { s_[i] = static_cast<std::int8_t>(-s_[i]); }

  /// Requires size() <= 64.
  std::uint64_t mask() const;
  std::string str() const;

  SignSeq reversed() const;
  SignSeq negated() const;
  /// Entry i of the result is entry (i + k) mod size() of this sequence.
  SignSeq rotated(std::size_t k) const;
  /// Entrywise product; sizes must agree.
  SignSeq operator*(const SignSeq& other) const;
  /// Product of all entries (+1 for the empty sequence).
  int product() const;

  bool operator==(const SignSeq& other) const = default;

 private:
  std::vector<std::int8_t> s_;
};

/// Bits [0, len) of `mask` in reverse order.
std::uint64_t reverse_mask(std::uint64_t mask, std::size_t len);

/// Finite hopping matrix of order n: sub-diagonal signs `sub` (the b_j) and
/// super-diagonal signs `super` (the c_j), both of length n-1, zero diagonal.
struct HoppingSpec {
  std::size_t n = 1;
  SignSeq sub;
  SignSeq super;

  HoppingSpec() = default;
  HoppingSpec(std::size_t n_, SignSeq sub_, SignSeq super_);
  /// Super-diagonal all +1, order b.size() + 1.
  static HoppingSpec single(SignSeq b);

  void validate() const;
  /// Single-diagonal form with the same spectrum and singular values: b*c on
  /// the sub-diagonal, +1 above.
  HoppingSpec normalized() const;
};

/// A_n - shift*I as a tridiagonal matrix.
TridiagC assemble(const HoppingSpec& spec, cplx shift = 0.0);

/// Order-n matrix with corner entries alpha*c_n at (n,1) and b_n/alpha at (1,n).
struct PeriodizedSpec {
  std::size_t n = 1;
  SignSeq b;
  SignSeq c;
  cplx alpha = 1.0;

  PeriodizedSpec() = default;
  PeriodizedSpec(SignSeq b_, SignSeq c_, cplx alpha_);
  /// c all +1.
  PeriodizedSpec(SignSeq b_, cplx alpha_);

  /// Throws InvalidArgument on length mismatch or ||alpha| - 1| > 1e-15.
  void validate() const;
};

inline constexpr double kAlphaModulusTol = 1e-15;

CMatrix assemble_periodized(const PeriodizedSpec& p);

/// Reflected-binary Gray code of i.
inline std::uint64_t gray(std::uint64_t i) { return i ^ (i >> 1); }

/// True iff mask is the smaller member of its reversal class.
inline bool is_reversal_canonical(std::uint64_t mask, std::size_t len) { return mask <= reverse_mask(mask, len); }

/// Number of reversal classes of sequences of length len: (2^len + 2^ceil(len/2)) / 2.
std::uint64_t reversal_class_count(std::size_t len);

/// Walks all 2^len sign sequences in Gray order. With the reversal quotient
/// only the canonical member of each class is produced. `flip` is the single
/// position that changed since the previously produced item, if there is
/// exactly one.
class EnumCursor {
 public:
  struct Item {
    std::uint64_t mask = 0;
    std::optional<std::size_t> flip;
  };

  EnumCursor(std::size_t len, bool quotient, std::uint64_t begin = 0, std::optional<std::uint64_t> end = std::nullopt);

  bool next(Item& item);
  std::size_t length() const { return len_; }
  std::uint64_t position() const { return pos_; }
  bool quotient() const { return quotient_; }

 private:
  std::size_t len_;
  bool quotient_;
  std::uint64_t pos_;
  std::uint64_t end_;
  std::optional<std::uint64_t> last_;
};

/// Convenience: all items of a full enumeration.
std::vector<EnumCursor::Item> enumerate(std::size_t len, bool quotient);

/// True iff every pattern in {+1,-1}^k occurs as a block of consecutive entries of b.
bool is_pseudo_ergodic_window(const SignSeq& b, std::size_t k);

/// Independent entries, +1 with probability p_plus (0 < p_plus < 1). Portable:
/// depends only on (len, p_plus, seed).
SignSeq sample_iid(std::size_t len, double p_plus, std::uint64_t seed);

}  // namespace hop
