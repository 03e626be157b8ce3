#include "hopping/pseudospectra.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "hopping/checkpoint.hpp"
#include "hopping/errors.hpp"
#include "hopping/io.hpp"
#include "hopping/model.hpp"
#include "hopping/parallel.hpp"

namespace hop {

namespace {

using real_ext = long double;

real_ext eps_equation(std::size_t n, real_ext t) {
  const real_ext m = static_cast<real_ext>(n);
  return 2.0L * std::cos((m + 1.0L) * t) - std::cos((m - 1.0L) * t);
}

// Root in extended precision, so that the rounded eps_n is exact where the
// true value is representable (n = 1 gives 2).
real_ext theta_ext(std::size_t n) {
  if (n < 1) throw InvalidArgument("eps_n needs n >= 1");
  const real_ext pi = std::numbers::pi_v<real_ext>;
  const real_ext m = static_cast<real_ext>(n);
  real_ext lo = pi / (2.0L * (m + 3.0L));
  real_ext hi = pi / (2.0L * (m + 2.0L));
  const real_ext flo = eps_equation(n, lo);
  const real_ext fhi = eps_equation(n, hi);
  // The root may sit on the closed right end (n = 1: pi/6), where rounding can
  // leave f(hi) a few ulps away from zero on either side.
  if (std::abs(fhi) <= 64.0L * std::numeric_limits<real_ext>::epsilon()) return hi;
  if (!(flo > 0.0L) || !(fhi < 0.0L))
    throw NumericFailure("eps_n(" + std::to_string(n) + "): root not bracketed, f(lo) = " +
                         fmt17(static_cast<double>(flo)) + ", f(hi) = " + fmt17(static_cast<double>(fhi)));
  for (int it = 0; it < 200; ++it) {
    const real_ext mid = 0.5L * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (eps_equation(n, mid) > 0.0L)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5L * (lo + hi);
}

}  // namespace

double eps_theta(std::size_t n) { return static_cast<double>(theta_ext(n)); }

double eps_n(std::size_t n) { return static_cast<double>(4.0L * std::sin(theta_ext(n))); }

void ArgminFront::offer(double value, std::uint64_t mask) {
  if (!entries_.empty() && value > entries_.front().value + kArgminTieTol) return;
  for (const Entry& e : entries_)
    if (e.value <= value && e.mask <= mask) return;
  std::erase_if(entries_, [&](const Entry& e) { return value <= e.value && mask <= e.mask; });
  const auto pos = std::lower_bound(entries_.begin(), entries_.end(), value,
                                    [](const Entry& e, double v) { return e.value < v; });
  entries_.insert(pos, Entry{value, mask});
  const double limit = entries_.front().value + kArgminTieTol;
  std::erase_if(entries_, [&](const Entry& e) { return e.value > limit; });
}

void ArgminFront::merge(const ArgminFront& other) {
  for (const Entry& e : other.entries_) offer(e.value, e.mask);
}

double ArgminFront::min_value() const {
  if (entries_.empty()) throw InvalidArgument("empty argmin reduction");
  return entries_.front().value;
}

std::uint64_t ArgminFront::argmin() const {
  if (entries_.empty()) throw InvalidArgument("empty argmin reduction");
  return entries_.back().mask;
}

namespace {

struct ChunkOutcome {
  ChunkRecord record;
  bool cut = false;
};

double evaluate(const TridiagC& t, const SminConfig& config, std::uint64_t& fallbacks) {
  if (t.order() < config.dense_below) return smin_dense(t.dense());
  const SminTridiagResult r = smin_tridiag_ex(t, config.kernel);
  if (r.fell_back) ++fallbacks;
  return r.value;
}

ChunkOutcome run_chunk(cplx lambda, std::size_t n, std::uint64_t index, std::uint64_t begin, std::uint64_t end,
                       const SminConfig& config, const std::atomic<bool>& stop) {
  const std::size_t len = n - 1;
  ChunkOutcome out;
  out.record.index = index;
  out.record.begin = begin;
  out.record.end = end;
  TridiagC t = assemble(HoppingSpec::single(SignSeq(len)), lambda);
  std::uint64_t current = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    const std::uint64_t m = gray(i);
    if (!is_reversal_canonical(m, len)) continue;
    for (std::uint64_t diff = m ^ current; diff; diff &= diff - 1) {
      const auto j = static_cast<std::size_t>(std::countr_zero(diff));
      t.sub[j] = -t.sub[j];
    }
    current = m;
    const double v = evaluate(t, config, out.record.fallbacks);
    ++out.record.evaluated;
    out.record.front.offer(v, m);
    if (config.early_cutoff && v < *config.early_cutoff) {
      out.cut = true;
      return out;
    }
    if (config.early_cutoff && stop.load(std::memory_order_relaxed)) {
      out.cut = true;
      return out;
    }
  }
  return out;
}

}  // namespace

double smin_hopping(cplx lambda, std::uint64_t mask, std::size_t n, const SminConfig& config) {
  if (n < 1) throw InvalidArgument("order must be at least 1");
  const TridiagC t = assemble(HoppingSpec::single(SignSeq::from_mask(mask, n - 1)), lambda);
  std::uint64_t fallbacks = 0;
  return evaluate(t, config, fallbacks);
}

SminResult s_n(cplx lambda, std::size_t n, const SminConfig& config) {
  if (n < 1) throw InvalidArgument("S_n needs n >= 1");
  if (n > 63) throw InvalidArgument("S_n supports orders up to 63");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw InvalidArgument("lambda must be finite");
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  std::uint64_t chunk = config.chunk_size;
  if (chunk == 0) chunk = std::min<std::uint64_t>(std::uint64_t{1} << 20, std::max<std::uint64_t>(std::uint64_t{1} << 12, total / 64));
  const std::uint64_t chunks = (total + chunk - 1) / chunk;

  CheckpointState state;
  state.header.n = n;
  state.header.lambda = lambda;
  state.header.chunk_size = chunk;
  state.header.chunks = chunks;
  state.header.rel_tol = config.kernel.rel_tol;
  state.header.dense_below = config.dense_below;
  if (config.checkpoint) {
    if (auto existing = read_checkpoint(*config.checkpoint)) {
      const std::string why = state.header.mismatch(existing->header);
      if (!why.empty()) throw CheckpointError("checkpoint " + *config.checkpoint + " belongs to another run: " + why);
      state.chunks = std::move(existing->chunks);
    }
  }

  std::vector<std::uint64_t> pending;
  for (std::uint64_t c = 0; c < chunks; ++c)
    if (!state.chunks.count(c)) pending.push_back(c);
  if (config.max_chunks && pending.size() > *config.max_chunks) pending.resize(*config.max_chunks);

  std::mutex mu;
  std::atomic<bool> stop{false};
  std::vector<ChunkRecord> partial;  // chunks abandoned by the early cutoff
  parallel_for(pending.size(), resolve_threads(config.threads), [&](std::size_t i, unsigned) {
    if (stop.load(std::memory_order_relaxed)) return;
    const std::uint64_t c = pending[i];
    ChunkOutcome o = run_chunk(lambda, n, c, c * chunk, std::min(total, (c + 1) * chunk), config, stop);
    std::lock_guard<std::mutex> lock(mu);
    if (o.cut) {
      stop = true;
      partial.push_back(std::move(o.record));
      return;
    }
    if (config.early_cutoff && !o.record.front.empty() && o.record.front.min_value() < *config.early_cutoff) stop = true;
    state.chunks[c] = std::move(o.record);
    if (config.checkpoint) write_checkpoint(*config.checkpoint, state);
  });

  SminResult r;
  r.n = n;
  r.lambda = lambda;
  r.chunks_total = chunks;
  r.chunks_done = state.chunks.size();
  ArgminFront front;
  for (const auto& [c, rec] : state.chunks) {
    front.merge(rec.front);
    r.matrices_evaluated += rec.evaluated;
    r.fallbacks += rec.fallbacks;
  }
  for (const auto& rec : partial) {
    front.merge(rec.front);
    r.matrices_evaluated += rec.evaluated;
    r.fallbacks += rec.fallbacks;
  }
  r.complete = state.chunks.size() == chunks;
  if (!front.empty()) {
    r.value = front.min_value();
    r.argmin_bitmask = front.argmin();
  } else {
    r.value = std::numeric_limits<double>::infinity();
  }
  r.cutoff = config.early_cutoff && r.value < *config.early_cutoff && !r.complete;
  return r;
}

MembershipResult membership(cplx lambda, std::size_t n, double eta, const SminConfig& config) {
  if (!(eta > 0.0)) throw InvalidArgument("membership threshold must be positive");
  SminConfig c = config;
  c.early_cutoff = eta;
  MembershipResult m;
  m.smin = s_n(lambda, n, c);
  m.inside = m.smin.value < eta;
  m.margin = std::abs(m.smin.value - eta);
  return m;
}

std::vector<cplx> symmetry_images(cplx z) {
  std::vector<cplx> out;
  const cplx i(0.0, 1.0);
  for (cplx w : {z, std::conj(z)})
    for (cplx r : {cplx(1.0), i, cplx(-1.0), -i}) {
      const cplx p = r * w;
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
  return out;
}

CertifyResult certify_exclusion(cplx lambda, std::size_t n, const SminConfig& config) {
  SminConfig c = config;
  c.early_cutoff.reset();
  CertifyResult res;
  res.smin = s_n(lambda, n, c);
  ExclusionCertificate& cert = res.certificate;
  cert.lambda = lambda;
  cert.n = n;
  cert.s_value = res.smin.value;
  cert.eps_n = eps_n(n);
  cert.eta = cert.s_value - cert.eps_n;
  cert.radius = cert.eta - kCertificateSafety * (1.0 + std::abs(lambda));
  cert.centers = symmetry_images(lambda);
  res.valid = res.smin.complete && cert.radius > 0.0;
  res.deficit = res.valid ? 0.0 : -cert.eta;
  return res;
}

std::string certificate_json(const CertifyResult& r, const SminConfig& config) {
  const ExclusionCertificate& c = r.certificate;
  std::string s = "{\n";
  s += "  \"version\": 1,\n";
  s += "  \"valid\": " + std::string(r.valid ? "true" : "false") + ",\n";
  s += "  \"lambda\": " + json_complex(c.lambda) + ",\n";
  s += "  \"n\": " + std::to_string(c.n) + ",\n";
  s += "  \"s_value\": " + fmt17(c.s_value) + ",\n";
  s += "  \"argmin_bitmask\": " + std::to_string(r.smin.argmin_bitmask) + ",\n";
  s += "  \"eps_n\": " + fmt17(c.eps_n) + ",\n";
  s += "  \"eta\": " + fmt17(c.eta) + ",\n";
  s += "  \"centers\": [";
  for (std::size_t i = 0; i < c.centers.size(); ++i) s += (i ? ", " : "") + json_complex(c.centers[i]);
  s += "],\n";
  s += "  \"radius\": " + fmt17(c.radius) + ",\n";
  s += "  \"matrices_evaluated\": " + std::to_string(r.smin.matrices_evaluated) + ",\n";
  s += "  \"kernel_tolerances\": {\"smin_rel_tol\": " + fmt17(config.kernel.rel_tol) +
       ", \"eps_theta_tol\": " + fmt17(kEpsThetaTol) + ", \"argmin_tie_tol\": " + fmt17(kArgminTieTol) +
       ", \"safety_margin\": " + fmt17(kCertificateSafety * (1.0 + std::abs(c.lambda))) +
       ", \"dense_fallbacks\": " + std::to_string(r.smin.fallbacks) + "}\n";
  s += "}\n";
  return s;
}

}  // namespace hop
