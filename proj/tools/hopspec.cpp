// hopspec: command-line front end for the hopping library.
//
// Exit codes: 0 success, 2 certificate not valid, 64 usage, 65 resource cap,
// 66 corrupt or mismatched checkpoint, 70 numerical failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>
#include <string>

#include <CLI11.hpp>

#include "hopping/contour.hpp"
#include "hopping/errors.hpp"
#include "hopping/grid_sweep.hpp"
#include "hopping/io.hpp"
#include "hopping/model.hpp"
#include "hopping/numrange.hpp"
#include "hopping/parallel.hpp"
#include "hopping/pseudospectra.hpp"
#include "hopping/spectra.hpp"

using namespace hop;

namespace {

constexpr int kExitCertificateFailed = 2;
constexpr int kExitUsage = 64;
constexpr int kExitResource = 65;
constexpr int kExitCorrupt = 66;
constexpr int kExitNumeric = 70;

/// Accepts "a", "a,b", "a+bi", "a-bi", "bi", "i", "-i".
cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  const std::string num = R"([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
  std::smatch m;
  if (std::regex_match(s, m, std::regex("(" + num + "),(" + num + ")"))) return {std::stod(m[1]), std::stod(m[2])};
  if (std::regex_match(s, m, std::regex("(" + num + ")"))) return {std::stod(m[1]), 0.0};
  const std::string mag = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
  if (std::regex_match(s, m, std::regex("(" + num + ")([+-])(" + mag + ")?i"))) {
    const double im = m[3].matched ? std::stod(m[3]) : 1.0;
    return {std::stod(m[1]), m[2] == "-" ? -im : im};
  }
  if (std::regex_match(s, m, std::regex("([+-]?)(" + mag + ")?i"))) {
    const double im = m[2].matched ? std::stod(m[2]) : 1.0;
    return {0.0, m[1] == "-" ? -im : im};
  }
  throw InvalidArgument("cannot parse complex number '" + text + "'");
}

Box parse_box(const std::string& text) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(',', pos);
    const std::string part = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw InvalidArgument("");
    } catch (const std::exception&) {
      throw InvalidArgument("box must be re0,re1,im0,im1");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (v.size() != 4) throw InvalidArgument("box must be re0,re1,im0,im1");
  Box b{v[0], v[1], v[2], v[3]};
  b.validate();
  return b;
}

/// Sign sequence from either a "+-" string or a decimal bitmask.
SignSeq sequence_from(const std::optional<std::string>& text, const std::optional<std::uint64_t>& mask, std::size_t len) {
  if (text && mask) throw InvalidArgument("give either a sign string or --mask, not both");
  if (text) {
    SignSeq s = SignSeq::parse(*text);
    if (s.size() != len) throw InvalidArgument("sign string has length " + std::to_string(s.size()) + ", expected " + std::to_string(len));
    return s;
  }
  if (mask) return SignSeq::from_mask(*mask, len);
  return SignSeq(len);
}

void write_with_manifest(const std::string& path, const std::string& content, Manifest& manifest,
                         std::chrono::steady_clock::time_point start) {
  write_file_atomic(path, content);
  manifest.output(path, content);
  manifest.set_wall_time(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  write_file_atomic(path + ".manifest.json", manifest.json());
}

std::string json_num(std::size_t v) { return std::to_string(v); }

struct Common {
  unsigned threads_flag = 0;
  unsigned threads() const { return resolve_threads(threads_flag); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, pseudospectra and numerical ranges of random hopping sign matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads_flag, "Thread budget (default: $HOPSPEC_THREADS, else all cores)");

  // eps
  std::size_t eps_order = 0;
  auto* eps_cmd = app.add_subcommand("eps", "Print the inclusion radius eps_n");
  eps_cmd->add_option("n", eps_order, "Order n >= 1")->required();

  // sigma
  std::size_t sigma_order = 0, sigma_cap = 16;
  std::string sigma_out;
  auto* sigma_cmd = app.add_subcommand("sigma", "Eigenvalues of all order-n finite sections");
  sigma_cmd->add_option("n", sigma_order, "Order n >= 1")->required();
  sigma_cmd->add_option("--out,-o", sigma_out, "Output CSV")->required();
  sigma_cmd->add_option("--max-n", sigma_cap, "Refuse orders above this")->capture_default_str();

  // pi
  std::size_t pi_order = 0, pi_alpha = 0;
  std::optional<std::string> pi_b;
  std::optional<std::uint64_t> pi_mask;
  std::string pi_out;
  auto* pi_cmd = app.add_subcommand("pi", "Spectra of n-periodic operators sampled over corner phases");
  pi_cmd->add_option("n", pi_order, "Period n >= 1")->required();
  pi_cmd->add_option("--alpha-count,-k", pi_alpha, "Number of phases (default max(256, 32n))");
  pi_cmd->add_option("--b", pi_b, "Restrict to one period (length-n sign string)");
  pi_cmd->add_option("--mask", pi_mask, "Restrict to one period (decimal bitmask)");
  pi_cmd->add_option("--out,-o", pi_out, "Output CSV")->required();

  // smin
  std::size_t smin_order = 0;
  std::string smin_lambda;
  std::optional<std::string> smin_b;
  std::optional<std::uint64_t> smin_mask;
  auto* smin_cmd = app.add_subcommand("smin", "S_n(lambda), or s_min for one sequence");
  smin_cmd->add_option("lambda", smin_lambda, "Point, e.g. 1.5+0.5i or 1.5,0.5")->required();
  smin_cmd->add_option("n", smin_order, "Order n >= 1")->required();
  smin_cmd->add_option("--b", smin_b, "Single sequence (length n-1 sign string)");
  smin_cmd->add_option("--mask", smin_mask, "Single sequence (decimal bitmask)");

  // certify
  std::size_t cert_order = 0;
  std::string cert_lambda, cert_out;
  std::optional<std::string> cert_checkpoint;
  std::uint64_t cert_chunk = 0;
  auto* cert_cmd = app.add_subcommand("certify", "Exclusion certificate for lambda and its symmetry images");
  cert_cmd->add_option("lambda", cert_lambda, "Point, e.g. 1.5+0.5i")->required();
  cert_cmd->add_option("n", cert_order, "Order n >= 1")->required();
  cert_cmd->add_option("--checkpoint", cert_checkpoint, "Resumable checkpoint file");
  cert_cmd->add_option("--chunk-size", cert_chunk, "Enumeration indices per checkpoint chunk (0: automatic)");
  cert_cmd->add_option("--out,-o", cert_out, "Certificate JSON");

  // sweep
  std::size_t sweep_order = 0, sweep_res = 64;
  int sweep_depth = 0;
  std::optional<double> sweep_eps;
  std::string sweep_box = "-2.2,2.2,-2.2,2.2", sweep_pgm, sweep_csv;
  std::uint64_t sweep_max_eval = 0;
  double sweep_cap = 1.0e8;
  bool sweep_force = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Classify a box against {S_n < eps}");
  sweep_cmd->add_option("n", sweep_order, "Order n >= 1")->required();
  sweep_cmd->add_option("--eps", sweep_eps, "Level (default eps_n)");
  sweep_cmd->add_option("--box", sweep_box, "re0,re1,im0,im1")->capture_default_str();
  sweep_cmd->add_option("--resolution,-r", sweep_res, "Cells per side at depth 0")->capture_default_str();
  sweep_cmd->add_option("--depth,-d", sweep_depth, "Refinement depth")->capture_default_str();
  sweep_cmd->add_option("--pgm", sweep_pgm, "Raster output (P5)")->required();
  sweep_cmd->add_option("--csv", sweep_csv, "Per-cell values")->required();
  sweep_cmd->add_option("--max-evaluations", sweep_max_eval, "Stop after this many S_n evaluations (result flagged incomplete)");
  sweep_cmd->add_option("--max-matrices", sweep_cap, "Refuse sweeps whose worst-case matrix count exceeds this")->capture_default_str();
  sweep_cmd->add_flag("--force", sweep_force, "Skip the resource estimate check");

  // numrange
  std::size_t nr_order = 0, nr_angles = kDefaultAngleCount;
  std::optional<std::string> nr_b;
  std::optional<std::uint64_t> nr_mask, nr_seed;
  double nr_p = 0.5;
  std::string nr_out;
  auto* nr_cmd = app.add_subcommand("numrange", "Numerical range boundary of one finite section");
  nr_cmd->add_option("n", nr_order, "Order n >= 1")->required();
  nr_cmd->add_option("--b", nr_b, "Sub-diagonal signs (length n-1)");
  nr_cmd->add_option("--mask", nr_mask, "Sub-diagonal signs as a decimal bitmask");
  nr_cmd->add_option("--seed", nr_seed, "Sample the signs iid with this seed");
  nr_cmd->add_option("--p-plus", nr_p, "Probability of +1 when sampling")->capture_default_str();
  nr_cmd->add_option("--angles", nr_angles, "Number of support directions")->capture_default_str();
  nr_cmd->add_option("--out,-o", nr_out, "Output CSV")->required();

  // contour
  std::size_t ct_order = 0, ct_res = 101;
  double ct_eps = 0.0;
  std::string ct_box = "-2.2,2.2,-2.2,2.2", ct_out;
  auto* ct_cmd = app.add_subcommand("contour", "Level curves {S_n = eps} for plotting");
  ct_cmd->add_option("n", ct_order, "Order n >= 1")->required();
  ct_cmd->add_option("eps", ct_eps, "Level")->required();
  ct_cmd->add_option("--box", ct_box, "re0,re1,im0,im1")->capture_default_str();
  ct_cmd->add_option("--resolution,-r", ct_res, "Samples per side")->capture_default_str();
  ct_cmd->add_option("--out,-o", ct_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (*eps_cmd) {
      std::printf("%s\n", fmt17(eps_n(eps_order)).c_str());
      return 0;
    }

    if (*sigma_cmd) {
      SpectraOptions o;
      o.sigma_max_n = sigma_cap;
      o.threads = common.threads();
      const PointCloud c = sigma_n(sigma_order, o);
      Manifest m("sigma");
      m.param("n", json_num(sigma_order));
      m.param("max_n", json_num(sigma_cap));
      m.note("points", json_num(c.points.size()));
      m.set_threads(o.threads);
      write_with_manifest(sigma_out, cloud_csv(c), m, start);
      std::printf("%zu points\n", c.points.size());
      return 0;
    }

    if (*pi_cmd) {
      const std::size_t K = pi_alpha ? pi_alpha : default_alpha_count(pi_order);
      Manifest m("pi");
      m.param("n", json_num(pi_order));
      m.param("alpha_count", json_num(K));
      PointCloud c;
      if (pi_b || pi_mask) {
        if (K < 4) throw InvalidArgument("alpha_count must be at least 4");
        const SignSeq b = sequence_from(pi_b, pi_mask, pi_order);
        m.param("b", json_quote(b.str()));
        c.source = CloudSource::pi;
        c.n = pi_order;
        c.alpha_count = K;
        for (std::size_t k = 0; k < K; ++k) {
          for (cplx z : eig_dense(assemble_periodized(PeriodizedSpec(b, unit_phase(k, K))))) c.points.push_back(z);
        }
      } else {
        SpectraOptions o;
        o.threads = common.threads();
        c = pi_n(pi_order, K, o);
      }
      m.note("points", json_num(c.points.size()));
      m.set_threads(common.threads());
      write_with_manifest(pi_out, cloud_csv(c), m, start);
      std::printf("%zu points\n", c.points.size());
      return 0;
    }

    if (*smin_cmd) {
      const cplx lam = parse_complex(smin_lambda);
      SminConfig cfg;
      cfg.threads = common.threads();
      if (smin_b || smin_mask) {
        if (smin_order < 1) throw InvalidArgument("n must be at least 1");
        const SignSeq c = sequence_from(smin_b, smin_mask, smin_order - 1);
        std::printf("%s\n", fmt17(smin_hopping(lam, c.mask(), smin_order, cfg)).c_str());
      } else {
        const SminResult r = s_n(lam, smin_order, cfg);
        std::printf("%s argmin=%llu matrices=%llu\n", fmt17(r.value).c_str(),
                    static_cast<unsigned long long>(r.argmin_bitmask),
                    static_cast<unsigned long long>(r.matrices_evaluated));
      }
      return 0;
    }

    if (*cert_cmd) {
      const cplx lam = parse_complex(cert_lambda);
      SminConfig cfg;
      cfg.threads = common.threads();
      cfg.checkpoint = cert_checkpoint;
      cfg.chunk_size = cert_chunk;
      const CertifyResult r = certify_exclusion(lam, cert_order, cfg);
      const std::string text = certificate_json(r, cfg);
      if (!cert_out.empty()) {
        Manifest m("certify");
        m.param("lambda", json_complex(lam));
        m.param("n", json_num(cert_order));
        m.param("chunk_size", std::to_string(cert_chunk));
        if (cert_checkpoint) m.param("checkpoint", json_quote(*cert_checkpoint));
        m.tolerance("smin_rel_tol", cfg.kernel.rel_tol);
        m.tolerance("certificate_safety", kCertificateSafety);
        m.note("valid", r.valid ? "true" : "false");
        m.set_threads(cfg.threads);
        write_with_manifest(cert_out, text, m, start);
      }
      std::printf("S_n = %s\neps_n = %s\n", fmt17(r.certificate.s_value).c_str(), fmt17(r.certificate.eps_n).c_str());
      if (r.valid) {
        std::printf("certified: eta = %s, radius = %s, %zu centers\n", fmt17(r.certificate.eta).c_str(),
                    fmt17(r.certificate.radius).c_str(), r.certificate.centers.size());
        return 0;
      }
      std::printf("not certified: deficit eps_n - S_n = %s\n", fmt17(r.deficit).c_str());
      return kExitCertificateFailed;
    }

    if (*sweep_cmd) {
      const Box box = parse_box(sweep_box);
      const double eps = sweep_eps ? *sweep_eps : eps_n(sweep_order);
      GridSweepConfig cfg;
      cfg.base_resolution = sweep_res;
      cfg.max_depth = sweep_depth;
      cfg.threads = common.threads();
      cfg.max_evaluations = sweep_max_eval;
      if (sweep_order < 1) throw InvalidArgument("n must be at least 1");
      if (sweep_depth < 0) throw InvalidArgument("depth must be non-negative");
      // Worst case: every cell refined at every level.
      const double levels = (std::pow(4.0, sweep_depth + 1) - 1.0) / 3.0;
      const double worst = static_cast<double>(sweep_base_cost(box, cfg)) * levels *
                           static_cast<double>(reversal_class_count(sweep_order - 1));
      if (!sweep_force && worst > sweep_cap)
        throw ResourceCapExceeded("sweep may evaluate up to " + fmt17(worst) + " matrices (cap " + fmt17(sweep_cap) +
                                      "); use --force or --max-evaluations",
                                  worst);
      const GridRegion g = grid_sweep(box, sweep_order, eps, cfg);
      Manifest m("sweep");
      m.param("n", json_num(sweep_order));
      m.param("eps", fmt17(eps));
      m.param("box", "[" + fmt17(box.re0) + ", " + fmt17(box.re1) + ", " + fmt17(box.im0) + ", " + fmt17(box.im1) + "]");
      m.param("resolution", json_num(sweep_res));
      m.param("depth", std::to_string(sweep_depth));
      m.param("max_evaluations", std::to_string(sweep_max_eval));
      m.tolerance("smin_rel_tol", cfg.smin.kernel.rel_tol);
      m.note("evaluations", std::to_string(g.evaluations));
      m.note("incomplete", g.incomplete ? "true" : "false");
      m.note("symmetry_completed", g.symmetry_completed ? "true" : "false");
      m.set_threads(cfg.threads);
      const std::string pgm = grid_pgm(g), csv = grid_csv(g);
      write_file_atomic(sweep_pgm, pgm);
      m.output(sweep_pgm, pgm);
      write_with_manifest(sweep_csv, csv, m, start);
      write_file_atomic(sweep_pgm + ".manifest.json", m.json());
      std::size_t counts[3] = {0, 0, 0};
      for (const auto& c : g.cells) ++counts[static_cast<int>(c.cls)];
      std::printf("excluded %zu, unknown %zu, included %zu, evaluations %llu%s\n", counts[0], counts[1], counts[2],
                  static_cast<unsigned long long>(g.evaluations), g.incomplete ? " (incomplete)" : "");
      return 0;
    }

    if (*nr_cmd) {
      if (nr_order < 1) throw InvalidArgument("n must be at least 1");
      if (nr_seed && (nr_b || nr_mask)) throw InvalidArgument("give either --seed or explicit signs");
      const SignSeq b = nr_seed ? sample_iid(nr_order - 1, nr_p, *nr_seed) : sequence_from(nr_b, nr_mask, nr_order - 1);
      const SupportCurve c = nr_boundary(assemble(HoppingSpec::single(b)), nr_angles);
      Manifest m("numrange");
      m.param("n", json_num(nr_order));
      m.param("angles", json_num(nr_angles));
      if (nr_seed) {
        m.seed("seed", *nr_seed);
        m.param("p_plus", fmt17(nr_p));
      } else if (nr_order <= 4096) {
        m.param("b", json_quote(b.str()));
      }
      const double gap = delta_gap(c);
      m.note("delta_gap", fmt17(gap));
      m.note("degenerate", c.degenerate ? "true" : "false");
      write_with_manifest(nr_out, support_curve_csv(c), m, start);
      std::printf("delta_gap %s%s\n", fmt17(gap).c_str(), c.degenerate ? " (degenerate)" : "");
      if (c.degenerate)
        std::printf("segment [%s, %s] to [%s, %s]\n", fmt17(c.segment_a.real()).c_str(), fmt17(c.segment_a.imag()).c_str(),
                    fmt17(c.segment_b.real()).c_str(), fmt17(c.segment_b.imag()).c_str());
      return 0;
    }

    if (*ct_cmd) {
      const Box box = parse_box(ct_box);
      SminConfig cfg;
      cfg.threads = common.threads();
      const ContourResult r = sigma_eps_boundary(ct_order, ct_eps, ct_res, box, cfg);
      Manifest m("contour");
      m.param("n", json_num(ct_order));
      m.param("eps", fmt17(ct_eps));
      m.param("resolution", json_num(ct_res));
      m.param("box", "[" + fmt17(box.re0) + ", " + fmt17(box.re1) + ", " + fmt17(box.im0) + ", " + fmt17(box.im1) + "]");
      m.note("curves", json_num(r.lines.size()));
      m.note("degenerate", r.degenerate ? "true" : "false");
      m.set_threads(cfg.threads);
      write_with_manifest(ct_out, contour_csv(r), m, start);
      std::printf("%zu curves%s\n", r.lines.size(), r.degenerate ? " (level outside sampled range)" : "");
      return 0;
    }
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ResourceCapExceeded& e) {
    std::fprintf(stderr, "resource cap: %s (required %s)\n", e.what(), fmt17(e.required()).c_str());
    return kExitResource;
  } catch (const CheckpointError& e) {
    std::fprintf(stderr, "checkpoint: %s\n", e.what());
    return kExitCorrupt;
  } catch (const NumericFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
