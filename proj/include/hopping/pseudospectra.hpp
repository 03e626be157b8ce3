#pragma once

// Inclusion radius eps_n, the minimum smallest singular value
//   S_n(lambda) = min over c of s_min(A_n^c - lambda I),
// membership in {S_n < eta} and exclusion certificates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hopping/linalg.hpp"

namespace hop {

/// 4 sin(theta_n), theta_n the root of 2 cos((n+1) t) = cos((n-1) t) in
/// (pi / (2(n+3)), pi / (2(n+2))].
double eps_n(std::size_t n);
/// The angle theta_n itself.
double eps_theta(std::size_t n);

inline constexpr double kEpsThetaTol = 1e-15;
inline constexpr double kArgminTieTol = 1e-13;
/// Certificates shrink the margin by kCertificateSafety * (1 + |lambda|).
inline constexpr double kCertificateSafety = 1e-9;

struct SminConfig {
  /// Enumeration indices per chunk (each chunk covers a Gray-index range;
  /// about half of the indices are reversal-class representatives).
  /// 0 selects min(2^20, max(2^12, total / 64)), independent of the thread budget.
  std::uint64_t chunk_size = 0;
  unsigned threads = 0;  // 0: resolve_threads default
  std::optional<std::string> checkpoint;
  /// Membership mode: stop as soon as some value below this is found.
  std::optional<double> early_cutoff;
  /// Orders below this use the dense SVD; the tridiagonal kernel otherwise.
  std::size_t dense_below = 2;
  SminTridiagOptions kernel{};
  /// Stop (incomplete) after this many chunks have been processed in this call.
  std::optional<std::uint64_t> max_chunks;
};

struct SminResult {
  double value = 0.0;
  std::uint64_t argmin_bitmask = 0;
  std::size_t n = 0;
  cplx lambda{};
  std::uint64_t matrices_evaluated = 0;  // including those restored from a checkpoint
  std::uint64_t fallbacks = 0;           // tridiagonal kernel fell back to the dense route
  bool cutoff = false;                   // stopped early below config.early_cutoff
  bool complete = true;                  // false when max_chunks stopped the run
  std::uint64_t chunks_total = 0;
  std::uint64_t chunks_done = 0;
};

/// Candidate (value, mask) pairs kept by the argmin reduction: the pairs that
/// are not dominated in both value and mask and lie within kArgminTieTol of the
/// smallest value. The final argmin is the smallest mask whose value is within
/// kArgminTieTol of the overall minimum, which does not depend on how the
/// enumeration was split.
class ArgminFront {
 public:
  struct Entry {
    double value;
    std::uint64_t mask;
  };
  void offer(double value, std::uint64_t mask);
  void merge(const ArgminFront& other);
  bool empty() const { return entries_.empty(); }
  double min_value() const;
  std::uint64_t argmin() const;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;  // ascending value, descending mask
};

/// S_n(lambda) by exhaustive enumeration over reversal-class representatives.
/// Throws CheckpointError if the checkpoint belongs to a different run.
SminResult s_n(cplx lambda, std::size_t n, const SminConfig& config = {});

/// s_min(A_n^c - lambda I) for a single sequence c (length n-1) using the
/// kernel selected by config.dense_below.
double smin_hopping(cplx lambda, std::uint64_t mask, std::size_t n, const SminConfig& config = {});

struct MembershipResult {
  bool inside = false;  // S_n(lambda) < eta
  double margin = 0.0;  // |S_n(lambda) - eta|, a lower bound when cut off early
  SminResult smin;
};
MembershipResult membership(cplx lambda, std::size_t n, double eta, const SminConfig& config = {});

struct ExclusionCertificate {
  cplx lambda{};
  std::size_t n = 0;
  double s_value = 0.0;
  double eps_n = 0.0;
  double eta = 0.0;     // s_value - eps_n
  double radius = 0.0;  // eta reduced by the safety margin
  std::vector<cplx> centers;
};

struct CertifyResult {
  bool valid = false;
  ExclusionCertificate certificate;  // filled in either case; radius <= 0 when invalid
  double deficit = 0.0;              // eps_n - s_value when not valid
  SminResult smin;
};

/// Computes S_n(lambda) completely (early_cutoff is ignored) and compares with
/// eps_n. A certificate is valid when the reduced radius is positive; the
/// centers are the distinct images of lambda under conjugation, negation and
/// multiplication by i.
CertifyResult certify_exclusion(cplx lambda, std::size_t n, const SminConfig& config = {});

/// Distinct images of z under the symmetry group generated by z -> conj(z), z -> i z.
std::vector<cplx> symmetry_images(cplx z);

/// JSON text of a certificate (17 significant digits).
std::string certificate_json(const CertifyResult& r, const SminConfig& config);

}  // namespace hop
